// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "signvoice/core/audio.hpp"
#include "signvoice/core/tensor.hpp"

namespace signvoice {

struct LossWeights {
  double lambda_sc = 0.5;
  double lambda_mse = 0.0;
  double lambda_spec = 2.0;
  static constexpr double kL1Scale = 2.0;
  // Magnitudes are sqrt(r^2 + i^2 + kMagnitudeEps^2), so an all-zero bin has
  // magnitude 1e-9 and the square root stays differentiable.
  static constexpr double kMagnitudeEps = 1e-9;

  void validate() const;
};

template <typename Real>
struct LossTerms {
  Real l1_real = 0, l1_imag = 0, l1_mag = 0;
  Real sc_real = 0, sc_imag = 0;
  Real mse_real = 0, mse_imag = 0;
  Real total = 0;
};

// ||truth - pred||_F / ||truth||_F. Throws Errc::zero_norm_reference when
// truth is all zero and Errc::shape_mismatch on length mismatch.
template <typename Real>
Real spectral_convergence(std::span<const Real> truth, std::span<const Real> pred);
double spectral_convergence(const Tensor& truth, const Tensor& pred);

// 2 (L1_real + L1_imag + L1_mag) + lambda_sc (SC_real + SC_imag)
//   + lambda_mse (MSE_real + MSE_imag)
// L1 and MSE are means over bins; SC compares |real| and |imag| planes.
// An SC term whose reference plane is all zero counts as 0 when the
// prediction plane is zero too, and raises Errc::zero_norm_reference
// otherwise.
template <typename Real>
LossTerms<Real> complex_spectrogram_loss(std::span<const Real> true_real,
                                         std::span<const Real> true_imag,
                                         std::span<const Real> pred_real,
                                         std::span<const Real> pred_imag,
                                         const LossWeights& weights);

// Loss plus its gradient with respect to the prediction planes, written to
// grad_real / grad_imag (resized). Every |x| kink uses subgradient 0.
template <typename Real>
LossTerms<Real> complex_spectrogram_loss_grad(std::span<const Real> true_real,
                                              std::span<const Real> true_imag,
                                              std::span<const Real> pred_real,
                                              std::span<const Real> pred_imag,
                                              const LossWeights& weights,
                                              std::vector<Real>& grad_real,
                                              std::vector<Real>& grad_imag);

// Evaluated in double precision.
LossTerms<double> complex_spectrogram_loss(const ComplexSpectrogram& truth,
                                           const ComplexSpectrogram& pred,
                                           const LossWeights& weights);

// cross_entropy(logits, label) + lambda_spec * complex_spectrogram_loss.
double combined_loss(std::span<const double> logits, std::size_t label,
                     const ComplexSpectrogram& truth, const ComplexSpectrogram& pred,
                     const LossWeights& weights);

}  // namespace signvoice
