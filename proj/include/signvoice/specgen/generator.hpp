// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <vector>

#include "signvoice/core/audio.hpp"
#include "signvoice/core/config.hpp"
#include "signvoice/core/params.hpp"
#include "signvoice/extractor/extractor.hpp"

namespace signvoice {

// Real and imaginary planes, each bins x frames row-major.
template <typename Real>
struct SpectrogramPlanes {
  std::size_t bins = 0;
  std::size_t frames = 0;
  std::vector<Real> real;
  std::vector<Real> imag;
};

// Feature vector -> complex spectrogram.
//
//   MLP stages:  linear -> layer norm -> LeakyReLU(0.01) -> dropout
//   reshape to C x H x W
//   two branches (real, imag), each:
//     blocks:    transposed conv -> instance norm -> ReLU -> dropout
//     final:     transposed conv 3x3, stride 1, pad 1, to one channel
//   center crop / zero pad to output_bins x output_frames
//
// Block convolutions carry no bias since the instance norm that follows
// removes any per-channel constant. Norm layers use eps 1e-5 and start with
// gain 1, offset 0. Dropout is inverted (kept units scaled by 1/(1-p)) and
// only active in train mode, with masks drawn from the supplied seed.
//
// forward() records the intermediates needed by backward(); infer() does not.
template <typename Real>
class SpectrogramGenerator {
 public:
  explicit SpectrogramGenerator(GeneratorParams params);

  // Gaussian weights scaled by fan-in; biases 0, norm gains 1, offsets 0.
  static SpectrogramGenerator random(const GeneratorParams& params, std::uint64_t seed);

  const GeneratorParams& params() const noexcept { return params_; }
  ParamSet<Real>& weights() noexcept { return weights_; }
  const ParamSet<Real>& weights() const noexcept { return weights_; }

  SpectrogramPlanes<Real> forward(std::span<const Real> feature, bool train_mode,
                                  std::uint64_t seed);
  SpectrogramPlanes<Real> infer(std::span<const Real> feature) const;

  // Accumulates dLoss/dweights into grads and, when grad_feature is given,
  // overwrites it with dLoss/dfeature. Uses the most recent forward() call;
  // throws Errc::no_forward_pass if there was none.
  void backward(std::span<const Real> grad_real, std::span<const Real> grad_imag,
                ParamSet<Real>& grads, std::vector<Real>* grad_feature = nullptr) const;

  bool has_recorded_pass() const noexcept { return tape_ != nullptr; }
  void clear_recorded_pass() noexcept { tape_.reset(); }

  template <typename Other>
  SpectrogramGenerator<Other> cast() const {
    SpectrogramGenerator<Other> g(params_);
    g.weights() = weights_.template cast<Other>();
    return g;
  }

  struct Tape;

 private:
  SpectrogramPlanes<Real> run(std::span<const Real> feature, bool train_mode, std::uint64_t seed,
                              Tape* tape) const;

  GeneratorParams params_;
  ParamSet<Real> weights_;
  // Replaced wholesale by every forward(); copies may share the last one.
  std::shared_ptr<const Tape> tape_;
};

// Float inference helper: runs the generator in eval mode and wraps the
// result as a ComplexSpectrogram with the given STFT metadata.
ComplexSpectrogram generate_spectrogram(const SpectrogramGenerator<float>& generator,
                                        const FeatureVector& feature, int sample_rate,
                                        int n_fft, int hop);
// Same, with train-mode dropout drawn from seed.
ComplexSpectrogram generate_spectrogram(SpectrogramGenerator<float>& generator,
                                        const FeatureVector& feature, bool train_mode,
                                        std::uint64_t seed, int sample_rate, int n_fft, int hop);

// Weights directory: manifest.json (GeneratorParams plus parameter names)
// and one <name>.isvt per parameter.
void save_generator(const SpectrogramGenerator<float>& generator,
                    const std::filesystem::path& dir);
SpectrogramGenerator<float> load_generator(const std::filesystem::path& dir);

}  // namespace signvoice
