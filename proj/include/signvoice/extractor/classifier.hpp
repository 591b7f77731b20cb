// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "signvoice/core/params.hpp"
#include "signvoice/extractor/extractor.hpp"

namespace signvoice {

// -log softmax(logits)[label], evaluated as log1p of the off-maximum terms
// so that confident predictions keep full relative precision.
template <typename Real>
Real cross_entropy(std::span<const Real> logits, std::size_t label);

// d cross_entropy / d logits = softmax(logits) - onehot(label).
template <typename Real>
std::vector<Real> cross_entropy_grad(std::span<const Real> logits, std::size_t label);

template <typename Real>
std::vector<Real> softmax(std::span<const Real> logits);

struct ClassifierDims {
  std::size_t input_dim = 12;     // pooled descriptor length
  std::size_t feature_dim = 32;   // n
  std::size_t class_count = 10;   // k
};

// Small trainable stand-in for the video backbone: a pooled descriptor x goes
// through a linear layer to the feature phi, and a linear head turns phi into
// logits. Confidences are softmax(logits).
template <typename Real>
class ToyClassifierModel {
 public:
  struct Output {
    std::vector<Real> feature;
    std::vector<Real> logits;
  };

  explicit ToyClassifierModel(ClassifierDims dims);

  // Gaussian init scaled by 1/sqrt(fan_in); biases zero.
  static ToyClassifierModel random(ClassifierDims dims, std::uint64_t seed);

  const ClassifierDims& dims() const noexcept { return dims_; }
  ParamSet<Real>& params() noexcept { return params_; }
  const ParamSet<Real>& params() const noexcept { return params_; }

  Output forward(std::span<const Real> descriptor) const;

  // Accumulates parameter gradients into grads given dL/dlogits and any
  // extra dL/dphi arriving from downstream consumers of the feature
  // (empty span means none).
  void backward(std::span<const Real> descriptor, const Output& out,
                std::span<const Real> grad_logits, std::span<const Real> grad_feature_extra,
                ParamSet<Real>& grads) const;

  template <typename Other>
  ToyClassifierModel<Other> cast() const {
    ToyClassifierModel<Other> m(dims_);
    m.params() = params_.template cast<Other>();
    return m;
  }

 private:
  ClassifierDims dims_;
  ParamSet<Real> params_;
};

// Mean over the window's frames, then average-pooled over a grid x grid
// spatial partition per channel. Frames must be channels x width x height.
std::vector<float> pooled_descriptor(const FrameWindow& window, std::size_t grid);

// Extractor backed by a ToyClassifierModel<float>.
class ToyClassifierExtractor final : public FeatureExtractor {
 public:
  ToyClassifierExtractor(ToyClassifierModel<float> model, std::size_t grid,
                         std::size_t expected_window = 0);

  const ToyClassifierModel<float>& model() const noexcept { return model_; }

 protected:
  Extraction do_extract(const FrameWindow& window, std::size_t window_index) override;

 private:
  ToyClassifierModel<float> model_;
  std::size_t grid_;
};

}  // namespace signvoice
