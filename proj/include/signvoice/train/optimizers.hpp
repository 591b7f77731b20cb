// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <span>

#include "signvoice/core/params.hpp"

namespace signvoice {

struct SgdConfig {
  double learning_rate = 1e-3;
  double momentum = 0.9;
  double weight_decay = 1e-8;
  std::size_t accumulation_steps = 8;

  void validate() const;
};

template <typename Real>
struct SgdState {
  ParamSet<Real> velocity;  // empty until the first step
};

// g = sum of grad_batches (in order) + 2 wd theta;  v = m v + g;  theta -= lr v.
// Requires exactly cfg.accumulation_steps gradient sets.
template <typename Real>
void sgd_accumulate_step(ParamSet<Real>& params, std::span<const ParamSet<Real>> grad_batches,
                         const SgdConfig& cfg, SgdState<Real>& state);

struct AdamConfig {
  double learning_rate = 1e-2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 1e-8;

  void validate() const;
};

template <typename Real>
struct AdamState {
  ParamSet<Real> m, v;
  std::size_t step = 0;  // last t passed to adam_step
};

// Bias-corrected Adam with L2 folded into the gradient (g + 2 wd theta).
// t counts from 1.
template <typename Real>
void adam_step(ParamSet<Real>& params, const ParamSet<Real>& grads, const AdamConfig& cfg,
               AdamState<Real>& state, std::size_t t);

}  // namespace signvoice
