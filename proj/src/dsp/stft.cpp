// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "signvoice/dsp/stft.hpp"

#include <cmath>
#include <numbers>

#include "signvoice/core/error.hpp"
#include "signvoice/dsp/fft.hpp"

namespace signvoice {

void StftConfig::validate() const {
  if (n_fft < 2 || !is_power_of_two(static_cast<std::size_t>(n_fft)))
    throw Error(Errc::invalid_argument, "n_fft must be a power of two >= 2");
  if (hop < 1 || hop > n_fft) throw Error(Errc::invalid_argument, "hop must lie in [1, n_fft]");
}

std::vector<double> hann_window(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i)
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                static_cast<double>(n));
  return w;
}

std::size_t stft_frame_count(std::size_t signal_length, const StftConfig& cfg) {
  const auto n = static_cast<std::size_t>(cfg.n_fft);
  if (signal_length < n) return 0;
  return 1 + (signal_length - n) / static_cast<std::size_t>(cfg.hop);
}

std::size_t istft_length(std::size_t frames, const StftConfig& cfg) {
  if (frames == 0) return 0;
  return (frames - 1) * static_cast<std::size_t>(cfg.hop) + static_cast<std::size_t>(cfg.n_fft);
}

ComplexSpectrogram stft(const AudioBuffer& signal, const StftConfig& cfg) {
  cfg.validate();
  const auto n = static_cast<std::size_t>(cfg.n_fft);
  const auto hop = static_cast<std::size_t>(cfg.hop);
  if (signal.size() < n)
    throw Error(Errc::too_short, "signal of " + std::to_string(signal.size()) +
                                     " samples is shorter than n_fft " + std::to_string(n));
  const std::size_t frames = stft_frame_count(signal.size(), cfg);
  const std::size_t bins = n / 2 + 1;
  const Fft fft(n);
  const auto window = hann_window(n);

  ComplexSpectrogram out;
  out.real = Tensor({bins, frames});
  out.imag = Tensor({bins, frames});
  out.sample_rate = signal.sample_rate;
  out.n_fft = cfg.n_fft;
  out.hop = cfg.hop;

  std::vector<double> frame(n);
  for (std::size_t f = 0; f < frames; ++f) {
    const float* src = signal.samples.data() + f * hop;
    for (std::size_t i = 0; i < n; ++i) frame[i] = src[i] * window[i];
    const auto spectrum = fft.rfft(frame);
    for (std::size_t k = 0; k < bins; ++k) {
      out.real[k * frames + f] = static_cast<float>(spectrum[k].real());
      out.imag[k * frames + f] = static_cast<float>(spectrum[k].imag());
    }
  }
  return out;
}

AudioBuffer istft(const ComplexSpectrogram& spec, const StftConfig& cfg) {
  cfg.validate();
  const auto n = static_cast<std::size_t>(cfg.n_fft);
  const auto hop = static_cast<std::size_t>(cfg.hop);
  if (spec.real.rank() != 2 || spec.real.shape() != spec.imag.shape())
    throw Error(Errc::shape_mismatch, "spectrogram planes must be equal 2-D shapes");
  const std::size_t bins = spec.real.dim(0);
  const std::size_t frames = spec.real.dim(1);
  if (bins != n / 2 + 1)
    throw Error(Errc::shape_mismatch, std::to_string(bins) + " bins inconsistent with n_fft " +
                                          std::to_string(n));

  const std::size_t length = istft_length(frames, cfg);
  const Fft fft(n);
  const auto window = hann_window(n);
  std::vector<double> acc(length, 0.0);
  std::vector<double> norm(length, 0.0);
  std::vector<std::complex<double>> column(bins);
  for (std::size_t f = 0; f < frames; ++f) {
    for (std::size_t k = 0; k < bins; ++k)
      column[k] = {spec.real[k * frames + f], spec.imag[k * frames + f]};
    const auto frame = fft.irfft(column);
    const std::size_t start = f * hop;
    for (std::size_t i = 0; i < n; ++i) {
      acc[start + i] += frame[i] * window[i];
      norm[start + i] += window[i] * window[i];
    }
  }

  AudioBuffer out;
  out.sample_rate = spec.sample_rate;
  out.samples.resize(length);
  // Samples covered only by near-zero window tails cannot be recovered.
  constexpr double kMinNorm = 1e-11;
  for (std::size_t i = 0; i < length; ++i)
    out.samples[i] = norm[i] > kMinNorm ? static_cast<float>(acc[i] / norm[i]) : 0.0f;
  return out;
}

AudioBuffer istft(const ComplexSpectrogram& spec) {
  return istft(spec, StftConfig{spec.n_fft, spec.hop});
}

}  // namespace signvoice
