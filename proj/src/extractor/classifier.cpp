// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "signvoice/extractor/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "signvoice/core/error.hpp"

namespace signvoice {
namespace {

template <typename Real>
void check_label(std::span<const Real> logits, std::size_t label) {
  if (logits.empty()) throw Error(Errc::empty_input, "cross entropy over zero classes");
  if (label >= logits.size())
    throw Error(Errc::label_out_of_range, "label " + std::to_string(label) + " for " +
                                              std::to_string(logits.size()) + " classes");
}

enum : std::size_t { kFeatureWeight, kFeatureBias, kHeadWeight, kHeadBias };

}  // namespace

template <typename Real>
Real cross_entropy(std::span<const Real> logits, std::size_t label) {
  check_label(logits, label);
  const std::size_t top =
      static_cast<std::size_t>(std::max_element(logits.begin(), logits.end()) - logits.begin());
  const Real m = logits[top];
  Real rest = 0;
  for (std::size_t j = 0; j < logits.size(); ++j)
    if (j != top) rest += std::exp(logits[j] - m);
  return std::log1p(rest) + (m - logits[label]);
}

template <typename Real>
std::vector<Real> softmax(std::span<const Real> logits) {
  if (logits.empty()) return {};
  const Real m = *std::max_element(logits.begin(), logits.end());
  std::vector<Real> p(logits.size());
  Real sum = 0;
  for (std::size_t j = 0; j < logits.size(); ++j) sum += p[j] = std::exp(logits[j] - m);
  for (auto& v : p) v /= sum;
  return p;
}

template <typename Real>
std::vector<Real> cross_entropy_grad(std::span<const Real> logits, std::size_t label) {
  check_label(logits, label);
  auto g = softmax(logits);
  g[label] -= Real(1);
  return g;
}

template <typename Real>
ToyClassifierModel<Real>::ToyClassifierModel(ClassifierDims dims) : dims_(dims) {
  if (dims.input_dim == 0 || dims.feature_dim == 0 || dims.class_count == 0)
    throw Error(Errc::invalid_argument, "classifier dimensions must be >= 1");
  params_.add("feature.weight", {dims.feature_dim, dims.input_dim});
  params_.add("feature.bias", {dims.feature_dim});
  params_.add("head.weight", {dims.class_count, dims.feature_dim});
  params_.add("head.bias", {dims.class_count});
}

template <typename Real>
ToyClassifierModel<Real> ToyClassifierModel<Real>::random(ClassifierDims dims,
                                                          std::uint64_t seed) {
  ToyClassifierModel m(dims);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const double s1 = 1.0 / std::sqrt(static_cast<double>(dims.input_dim));
  const double s2 = 1.0 / std::sqrt(static_cast<double>(dims.feature_dim));
  for (auto& v : m.params_[kFeatureWeight].value) v = static_cast<Real>(normal(rng) * s1);
  for (auto& v : m.params_[kHeadWeight].value) v = static_cast<Real>(normal(rng) * s2);
  return m;
}

template <typename Real>
auto ToyClassifierModel<Real>::forward(std::span<const Real> x) const -> Output {
  if (x.size() != dims_.input_dim)
    throw Error(Errc::shape_mismatch, "descriptor length " + std::to_string(x.size()) +
                                          " != " + std::to_string(dims_.input_dim));
  const auto& w1 = params_[kFeatureWeight].value;
  const auto& b1 = params_[kFeatureBias].value;
  const auto& w2 = params_[kHeadWeight].value;
  const auto& b2 = params_[kHeadBias].value;
  Output out;
  out.feature.assign(b1.begin(), b1.end());
  for (std::size_t i = 0; i < dims_.feature_dim; ++i)
    for (std::size_t j = 0; j < dims_.input_dim; ++j)
      out.feature[i] += w1[i * dims_.input_dim + j] * x[j];
  out.logits.assign(b2.begin(), b2.end());
  for (std::size_t c = 0; c < dims_.class_count; ++c)
    for (std::size_t i = 0; i < dims_.feature_dim; ++i)
      out.logits[c] += w2[c * dims_.feature_dim + i] * out.feature[i];
  return out;
}

template <typename Real>
void ToyClassifierModel<Real>::backward(std::span<const Real> x, const Output& out,
                                        std::span<const Real> grad_logits,
                                        std::span<const Real> grad_feature_extra,
                                        ParamSet<Real>& grads) const {
  params_.require_same_layout(grads);
  if (grad_logits.size() != dims_.class_count ||
      (!grad_feature_extra.empty() && grad_feature_extra.size() != dims_.feature_dim))
    throw Error(Errc::shape_mismatch, "classifier upstream gradient has the wrong length");
  const auto& w2 = params_[kHeadWeight].value;
  auto& gw1 = grads[kFeatureWeight].value;
  auto& gb1 = grads[kFeatureBias].value;
  auto& gw2 = grads[kHeadWeight].value;
  auto& gb2 = grads[kHeadBias].value;

  std::vector<Real> grad_feature(dims_.feature_dim, Real(0));
  if (!grad_feature_extra.empty())
    std::copy(grad_feature_extra.begin(), grad_feature_extra.end(), grad_feature.begin());
  for (std::size_t c = 0; c < dims_.class_count; ++c) {
    gb2[c] += grad_logits[c];
    for (std::size_t i = 0; i < dims_.feature_dim; ++i) {
      gw2[c * dims_.feature_dim + i] += grad_logits[c] * out.feature[i];
      grad_feature[i] += grad_logits[c] * w2[c * dims_.feature_dim + i];
    }
  }
  for (std::size_t i = 0; i < dims_.feature_dim; ++i) {
    gb1[i] += grad_feature[i];
    for (std::size_t j = 0; j < dims_.input_dim; ++j)
      gw1[i * dims_.input_dim + j] += grad_feature[i] * x[j];
  }
}

std::vector<float> pooled_descriptor(const FrameWindow& window, std::size_t grid) {
  if (window.empty()) throw Error(Errc::empty_input, "cannot pool an empty window");
  if (grid == 0) throw Error(Errc::invalid_argument, "pooling grid must be >= 1");
  const Shape& shape = window.front().shape();
  if (shape.size() != 3)
    throw Error(Errc::shape_mismatch, "frames must be channels x width x height");
  const std::size_t channels = shape[0], width = shape[1], height = shape[2];
  if (width < grid || height < grid)
    throw Error(Errc::shape_mismatch, "frame smaller than the pooling grid");

  std::vector<double> acc(channels * grid * grid, 0.0);
  std::vector<double> count(grid * grid, 0.0);
  for (std::size_t x = 0; x < width; ++x)
    for (std::size_t y = 0; y < height; ++y) count[(x * grid / width) * grid + y * grid / height] += 1;
  for (const Frame& f : window) {
    if (f.shape() != shape) throw Error(Errc::shape_mismatch, "frames in a window differ in shape");
    for (std::size_t c = 0; c < channels; ++c)
      for (std::size_t x = 0; x < width; ++x)
        for (std::size_t y = 0; y < height; ++y)
          acc[c * grid * grid + (x * grid / width) * grid + y * grid / height] +=
              f[(c * width + x) * height + y];
  }
  std::vector<float> out(acc.size());
  for (std::size_t c = 0; c < channels; ++c)
    for (std::size_t cell = 0; cell < grid * grid; ++cell)
      out[c * grid * grid + cell] = static_cast<float>(
          acc[c * grid * grid + cell] / (count[cell] * static_cast<double>(window.size())));
  return out;
}

ToyClassifierExtractor::ToyClassifierExtractor(ToyClassifierModel<float> model, std::size_t grid,
                                               std::size_t expected_window)
    : FeatureExtractor(expected_window), model_(std::move(model)), grid_(grid) {}

Extraction ToyClassifierExtractor::do_extract(const FrameWindow& window, std::size_t) {
  const auto x = pooled_descriptor(window, grid_);
  const auto out = model_.forward(std::span<const float>(x));
  Extraction e;
  e.feature.values = out.feature;
  e.confidence.values = softmax(std::span<const float>(out.logits));
  return e;
}

template float cross_entropy<float>(std::span<const float>, std::size_t);
template double cross_entropy<double>(std::span<const double>, std::size_t);
template std::vector<float> softmax<float>(std::span<const float>);
template std::vector<double> softmax<double>(std::span<const double>);
template std::vector<float> cross_entropy_grad<float>(std::span<const float>, std::size_t);
template std::vector<double> cross_entropy_grad<double>(std::span<const double>, std::size_t);
template class ToyClassifierModel<float>;
template class ToyClassifierModel<double>;

}  // namespace signvoice
