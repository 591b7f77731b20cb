// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "signvoice/train/optimizers.hpp"

#include <cmath>
#include <string>

#include "signvoice/core/error.hpp"

namespace signvoice {

void SgdConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
    throw Error(Errc::invalid_argument, "SGD learning rate must be > 0");
  if (!(momentum >= 0.0 && momentum < 1.0))
    throw Error(Errc::invalid_argument, "SGD momentum must be in [0,1)");
  if (!(weight_decay >= 0.0)) throw Error(Errc::invalid_argument, "weight decay must be >= 0");
  if (accumulation_steps < 1)
    throw Error(Errc::invalid_argument, "accumulation steps must be >= 1");
}

void AdamConfig::validate() const {
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate))
    throw Error(Errc::invalid_argument, "Adam learning rate must be >= 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0))
    throw Error(Errc::invalid_argument, "Adam betas must be in [0,1)");
  if (!(epsilon > 0.0)) throw Error(Errc::invalid_argument, "Adam epsilon must be > 0");
  if (!(weight_decay >= 0.0)) throw Error(Errc::invalid_argument, "weight decay must be >= 0");
}

template <typename Real>
void sgd_accumulate_step(ParamSet<Real>& params, std::span<const ParamSet<Real>> grad_batches,
                         const SgdConfig& cfg, SgdState<Real>& state) {
  cfg.validate();
  if (grad_batches.size() != cfg.accumulation_steps)
    throw Error(Errc::invalid_argument,
                "expected " + std::to_string(cfg.accumulation_steps) + " gradient sets, got " +
                    std::to_string(grad_batches.size()));
  for (const auto& g : grad_batches) params.require_same_layout(g);
  if (state.velocity.count() == 0) state.velocity = params.zeros_like();
  params.require_same_layout(state.velocity);

  const Real lr = static_cast<Real>(cfg.learning_rate);
  const Real mom = static_cast<Real>(cfg.momentum);
  const Real decay = static_cast<Real>(2.0 * cfg.weight_decay);
  for (std::size_t p = 0; p < params.count(); ++p) {
    auto& theta = params[p].value;
    auto& vel = state.velocity[p].value;
    for (std::size_t i = 0; i < theta.size(); ++i) {
      Real g = grad_batches[0][p].value[i];
      for (std::size_t b = 1; b < grad_batches.size(); ++b) g += grad_batches[b][p].value[i];
      g += decay * theta[i];
      vel[i] = mom * vel[i] + g;
      theta[i] -= lr * vel[i];
    }
  }
}

template <typename Real>
void adam_step(ParamSet<Real>& params, const ParamSet<Real>& grads, const AdamConfig& cfg,
               AdamState<Real>& state, std::size_t t) {
  cfg.validate();
  if (t < 1) throw Error(Errc::invalid_argument, "Adam step counter starts at 1");
  params.require_same_layout(grads);
  if (state.m.count() == 0) {
    state.m = params.zeros_like();
    state.v = params.zeros_like();
  }
  params.require_same_layout(state.m);
  state.step = t;

  const Real lr = static_cast<Real>(cfg.learning_rate);
  const Real b1 = static_cast<Real>(cfg.beta1);
  const Real b2 = static_cast<Real>(cfg.beta2);
  const Real eps = static_cast<Real>(cfg.epsilon);
  const Real decay = static_cast<Real>(2.0 * cfg.weight_decay);
  const Real c1 = Real(1) - static_cast<Real>(std::pow(cfg.beta1, static_cast<double>(t)));
  const Real c2 = Real(1) - static_cast<Real>(std::pow(cfg.beta2, static_cast<double>(t)));
  for (std::size_t p = 0; p < params.count(); ++p) {
    auto& theta = params[p].value;
    auto& m = state.m[p].value;
    auto& v = state.v[p].value;
    const auto& gp = grads[p].value;
    for (std::size_t i = 0; i < theta.size(); ++i) {
      const Real g = gp[i] + decay * theta[i];
      m[i] = b1 * m[i] + (Real(1) - b1) * g;
      v[i] = b2 * v[i] + (Real(1) - b2) * g * g;
      const Real mhat = m[i] / c1;
      const Real vhat = v[i] / c2;
      theta[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
  }
}

template void sgd_accumulate_step<float>(ParamSet<float>&, std::span<const ParamSet<float>>,
                                         const SgdConfig&, SgdState<float>&);
template void sgd_accumulate_step<double>(ParamSet<double>&, std::span<const ParamSet<double>>,
                                          const SgdConfig&, SgdState<double>&);
template void adam_step<float>(ParamSet<float>&, const ParamSet<float>&, const AdamConfig&,
                               AdamState<float>&, std::size_t);
template void adam_step<double>(ParamSet<double>&, const ParamSet<double>&, const AdamConfig&,
                                AdamState<double>&, std::size_t);

}  // namespace signvoice
