// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "signvoice/specgen/losses.hpp"

#include <cmath>
#include <string>

#include "signvoice/core/error.hpp"
#include "signvoice/extractor/classifier.hpp"

namespace signvoice {
namespace {

void check_weight(double v, const char* name) {
  if (!std::isfinite(v) || v < 0.0)
    throw Error(Errc::invalid_argument, std::string(name) + " must be finite and >= 0");
}

template <typename Real>
Real sign_of(Real v) {
  return v > 0 ? Real(1) : (v < 0 ? Real(-1) : Real(0));
}

// SC of |truth| against |pred|. With grad != nullptr, adds scale * dSC/dpred.
template <typename Real>
Real abs_plane_sc(std::span<const Real> truth, std::span<const Real> pred, Real scale,
                  Real* grad) {
  Real ref = 0, diff = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const Real a = std::abs(truth[i]);
    const Real d = a - std::abs(pred[i]);
    ref += a * a;
    diff += d * d;
  }
  if (ref == 0) {
    if (diff == 0) return 0;
    throw Error(Errc::zero_norm_reference, "spectral convergence reference plane is all zero");
  }
  const Real ref_norm = std::sqrt(ref);
  const Real diff_norm = std::sqrt(diff);
  if (grad && diff_norm > 0) {
    const Real k = scale / (diff_norm * ref_norm);
    for (std::size_t i = 0; i < truth.size(); ++i) {
      const Real d = std::abs(truth[i]) - std::abs(pred[i]);
      grad[i] -= k * d * sign_of(pred[i]);
    }
  }
  return diff_norm / ref_norm;
}

template <typename Real>
LossTerms<Real> evaluate(std::span<const Real> tr, std::span<const Real> ti,
                         std::span<const Real> pr, std::span<const Real> pi,
                         const LossWeights& w, Real* gr, Real* gi) {
  w.validate();
  const std::size_t n = tr.size();
  if (ti.size() != n || pr.size() != n || pi.size() != n)
    throw Error(Errc::shape_mismatch, "spectrogram planes differ in size");
  if (n == 0) throw Error(Errc::empty_input, "empty spectrogram");
  const Real inv_n = Real(1) / static_cast<Real>(n);
  const Real l1 = static_cast<Real>(LossWeights::kL1Scale);
  const Real lsc = static_cast<Real>(w.lambda_sc);
  const Real lmse = static_cast<Real>(w.lambda_mse);
  const Real eps2 = static_cast<Real>(LossWeights::kMagnitudeEps * LossWeights::kMagnitudeEps);

  LossTerms<Real> t;
  for (std::size_t i = 0; i < n; ++i) {
    const Real dr = pr[i] - tr[i];
    const Real di = pi[i] - ti[i];
    const Real mp = std::sqrt(pr[i] * pr[i] + pi[i] * pi[i] + eps2);
    const Real mt = std::sqrt(tr[i] * tr[i] + ti[i] * ti[i] + eps2);
    const Real dm = mp - mt;
    t.l1_real += std::abs(dr);
    t.l1_imag += std::abs(di);
    t.l1_mag += std::abs(dm);
    t.mse_real += dr * dr;
    t.mse_imag += di * di;
    if (gr) {
      const Real sm = sign_of(dm) / mp;
      gr[i] += l1 * inv_n * (sign_of(dr) + sm * pr[i]) + lmse * 2 * dr * inv_n;
      gi[i] += l1 * inv_n * (sign_of(di) + sm * pi[i]) + lmse * 2 * di * inv_n;
    }
  }
  t.l1_real *= inv_n;
  t.l1_imag *= inv_n;
  t.l1_mag *= inv_n;
  t.mse_real *= inv_n;
  t.mse_imag *= inv_n;
  t.sc_real = abs_plane_sc(tr, pr, lsc, gr);
  t.sc_imag = abs_plane_sc(ti, pi, lsc, gi);
  t.total = l1 * (t.l1_real + t.l1_imag + t.l1_mag) + lsc * (t.sc_real + t.sc_imag) +
            lmse * (t.mse_real + t.mse_imag);
  return t;
}

std::vector<double> widen(const Tensor& t) {
  return std::vector<double>(t.values().begin(), t.values().end());
}

}  // namespace

void LossWeights::validate() const {
  check_weight(lambda_sc, "lambda_sc");
  check_weight(lambda_mse, "lambda_mse");
  check_weight(lambda_spec, "lambda_spec");
}

template <typename Real>
Real spectral_convergence(std::span<const Real> truth, std::span<const Real> pred) {
  if (truth.size() != pred.size())
    throw Error(Errc::shape_mismatch, "spectral convergence inputs differ in size");
  Real ref = 0, diff = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ref += truth[i] * truth[i];
    diff += (truth[i] - pred[i]) * (truth[i] - pred[i]);
  }
  if (ref == 0)
    throw Error(Errc::zero_norm_reference, "spectral convergence reference is all zero");
  return std::sqrt(diff) / std::sqrt(ref);
}

double spectral_convergence(const Tensor& truth, const Tensor& pred) {
  if (truth.shape() != pred.shape())
    throw Error(Errc::shape_mismatch, "spectral convergence shapes " +
                                          shape_string(truth.shape()) + " vs " +
                                          shape_string(pred.shape()));
  const auto t = widen(truth);
  const auto p = widen(pred);
  return spectral_convergence<double>(t, p);
}

template <typename Real>
LossTerms<Real> complex_spectrogram_loss(std::span<const Real> true_real,
                                         std::span<const Real> true_imag,
                                         std::span<const Real> pred_real,
                                         std::span<const Real> pred_imag,
                                         const LossWeights& weights) {
  return evaluate<Real>(true_real, true_imag, pred_real, pred_imag, weights, nullptr, nullptr);
}

template <typename Real>
LossTerms<Real> complex_spectrogram_loss_grad(std::span<const Real> true_real,
                                              std::span<const Real> true_imag,
                                              std::span<const Real> pred_real,
                                              std::span<const Real> pred_imag,
                                              const LossWeights& weights,
                                              std::vector<Real>& grad_real,
                                              std::vector<Real>& grad_imag) {
  grad_real.assign(pred_real.size(), Real(0));
  grad_imag.assign(pred_imag.size(), Real(0));
  if (pred_real.size() != true_real.size() || pred_imag.size() != true_real.size())
    throw Error(Errc::shape_mismatch, "spectrogram planes differ in size");
  return evaluate<Real>(true_real, true_imag, pred_real, pred_imag, weights, grad_real.data(),
                        grad_imag.data());
}

LossTerms<double> complex_spectrogram_loss(const ComplexSpectrogram& truth,
                                           const ComplexSpectrogram& pred,
                                           const LossWeights& weights) {
  // Only the planes matter here; STFT metadata is not checked.
  if (truth.real.shape() != truth.imag.shape() || pred.real.shape() != pred.imag.shape() ||
      truth.real.shape() != pred.real.shape())
    throw Error(Errc::shape_mismatch, "spectrogram shapes " + shape_string(truth.real.shape()) +
                                          " vs " + shape_string(pred.real.shape()));
  const auto tr = widen(truth.real), ti = widen(truth.imag);
  const auto pr = widen(pred.real), pi = widen(pred.imag);
  return complex_spectrogram_loss<double>(tr, ti, pr, pi, weights);
}

double combined_loss(std::span<const double> logits, std::size_t label,
                     const ComplexSpectrogram& truth, const ComplexSpectrogram& pred,
                     const LossWeights& weights) {
  const double ce = cross_entropy<double>(logits, label);
  return ce + weights.lambda_spec * complex_spectrogram_loss(truth, pred, weights).total;
}

#define SIGNVOICE_INSTANTIATE(Real)                                                          \
  template Real spectral_convergence<Real>(std::span<const Real>, std::span<const Real>);   \
  template LossTerms<Real> complex_spectrogram_loss<Real>(                                   \
      std::span<const Real>, std::span<const Real>, std::span<const Real>,                   \
      std::span<const Real>, const LossWeights&);                                            \
  template LossTerms<Real> complex_spectrogram_loss_grad<Real>(                              \
      std::span<const Real>, std::span<const Real>, std::span<const Real>,                   \
      std::span<const Real>, const LossWeights&, std::vector<Real>&, std::vector<Real>&);

SIGNVOICE_INSTANTIATE(float)
SIGNVOICE_INSTANTIATE(double)
#undef SIGNVOICE_INSTANTIATE

}  // namespace signvoice
