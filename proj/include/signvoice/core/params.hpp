// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "signvoice/core/error.hpp"
#include "signvoice/core/tensor.hpp"

namespace signvoice {

// Named trainable array. Models store their weights as an ordered list of
// these so optimizers, gradient checks and persistence can treat every model
// the same way.
template <typename Real>
struct Param {
  std::string name;
  Shape shape;
  std::vector<Real> value;
};

template <typename Real>
class ParamSet {
 public:
  using value_type = Real;

  std::size_t add(std::string name, Shape shape, Real fill = Real(0)) {
    const std::size_t n = shape_size(shape);
    params_.push_back({std::move(name), std::move(shape), std::vector<Real>(n, fill)});
    return params_.size() - 1;
  }

  std::size_t count() const noexcept { return params_.size(); }
  std::size_t scalar_count() const noexcept {
    std::size_t n = 0;
    for (const auto& p : params_) n += p.value.size();
    return n;
  }

  Param<Real>& operator[](std::size_t i) { return params_[i]; }
  const Param<Real>& operator[](std::size_t i) const { return params_[i]; }

  std::size_t index_of(const std::string& name) const {
    for (std::size_t i = 0; i < params_.size(); ++i)
      if (params_[i].name == name) return i;
    throw Error(Errc::invalid_argument, "no parameter named " + name);
  }

  auto begin() { return params_.begin(); }
  auto end() { return params_.end(); }
  auto begin() const { return params_.begin(); }
  auto end() const { return params_.end(); }

  ParamSet zeros_like() const {
    ParamSet out;
    for (const auto& p : params_) out.add(p.name, p.shape);
    return out;
  }

  template <typename Other>
  ParamSet<Other> cast() const {
    ParamSet<Other> out;
    for (const auto& p : params_) {
      const std::size_t i = out.add(p.name, p.shape);
      for (std::size_t j = 0; j < p.value.size(); ++j)
        out[i].value[j] = static_cast<Other>(p.value[j]);
    }
    return out;
  }

  // Throws Errc::shape_mismatch unless names and shapes agree pairwise.
  void require_same_layout(const ParamSet& other) const {
    if (other.count() != count())
      throw Error(Errc::shape_mismatch, "parameter count differs");
    for (std::size_t i = 0; i < params_.size(); ++i) {
      if (params_[i].shape != other.params_[i].shape ||
          params_[i].value.size() != other.params_[i].value.size())
        throw Error(Errc::shape_mismatch,
                    "parameter " + params_[i].name + " has shape " +
                        shape_string(params_[i].shape) + " vs " +
                        shape_string(other.params_[i].shape));
    }
  }

  void fill(Real v) {
    for (auto& p : params_) std::fill(p.value.begin(), p.value.end(), v);
  }

  // this += scale * other
  void add_scaled(const ParamSet& other, Real scale) {
    require_same_layout(other);
    for (std::size_t i = 0; i < params_.size(); ++i)
      for (std::size_t j = 0; j < params_[i].value.size(); ++j)
        params_[i].value[j] += scale * other.params_[i].value[j];
  }

  friend bool operator==(const ParamSet& a, const ParamSet& b) {
    if (a.count() != b.count()) return false;
    for (std::size_t i = 0; i < a.count(); ++i)
      if (a.params_[i].name != b.params_[i].name ||
          a.params_[i].shape != b.params_[i].shape ||
          a.params_[i].value != b.params_[i].value)
        return false;
    return true;
  }

 private:
  std::vector<Param<Real>> params_;
};

}  // namespace signvoice
