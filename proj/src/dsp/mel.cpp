// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "signvoice/dsp/mel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "signvoice/core/error.hpp"
#include "signvoice/dsp/fft.hpp"

namespace signvoice {

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

std::vector<std::vector<double>> mel_filterbank(std::size_t n_mels, int n_fft, int sample_rate) {
  if (n_mels == 0 || n_fft < 2 || sample_rate <= 0)
    throw Error(Errc::invalid_argument, "bad mel filterbank dimensions");
  const std::size_t bins = static_cast<std::size_t>(n_fft) / 2 + 1;
  const double nyquist = sample_rate / 2.0;
  const double mel_max = hz_to_mel(nyquist);

  std::vector<double> edges(n_mels + 2);
  for (std::size_t m = 0; m < edges.size(); ++m)
    edges[m] = mel_to_hz(mel_max * static_cast<double>(m) / static_cast<double>(n_mels + 1));

  std::vector<std::vector<double>> bank(n_mels, std::vector<double>(bins, 0.0));
  for (std::size_t m = 0; m < n_mels; ++m) {
    const double lo = edges[m], mid = edges[m + 1], hi = edges[m + 2];
    for (std::size_t k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * sample_rate / n_fft;
      if (f > lo && f < mid)
        bank[m][k] = (f - lo) / (mid - lo);
      else if (f >= mid && f < hi)
        bank[m][k] = (hi - f) / (hi - mid);
    }
  }
  return bank;
}

std::vector<double> dct2_orthonormal(const std::vector<double>& input) {
  const std::size_t n = input.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      sum += input[i] * std::cos(std::numbers::pi * static_cast<double>(k) *
                                 (2.0 * static_cast<double>(i) + 1.0) / (2.0 * n));
    out[k] = sum * std::sqrt((k == 0 ? 1.0 : 2.0) / static_cast<double>(n));
  }
  return out;
}

std::vector<std::vector<double>> mel_cepstra_rows(const AudioBuffer& audio,
                                                  const MelCepstraConfig& cfg) {
  cfg.stft.validate();
  if (cfg.n_coeffs + 1 > cfg.n_mels)
    throw Error(Errc::invalid_argument, "need more mel bands than cepstral coefficients");
  const auto n = static_cast<std::size_t>(cfg.stft.n_fft);
  const auto hop = static_cast<std::size_t>(cfg.stft.hop);
  if (audio.size() < n)
    throw Error(Errc::too_short, "audio shorter than one analysis frame");

  const Fft fft(n);
  const auto window = hann_window(n);
  const auto bank = mel_filterbank(cfg.n_mels, cfg.stft.n_fft, audio.sample_rate);
  const std::size_t frames = stft_frame_count(audio.size(), cfg.stft);

  std::vector<std::vector<double>> rows;
  rows.reserve(frames);
  std::vector<double> frame(n);
  std::vector<double> log_mel(cfg.n_mels);
  for (std::size_t f = 0; f < frames; ++f) {
    for (std::size_t i = 0; i < n; ++i) frame[i] = audio.samples[f * hop + i] * window[i];
    const auto spectrum = fft.rfft(frame);
    for (std::size_t m = 0; m < cfg.n_mels; ++m) {
      double energy = 0.0;
      for (std::size_t k = 0; k < spectrum.size(); ++k)
        energy += bank[m][k] * std::norm(spectrum[k]);
      log_mel[m] = std::log(std::max(energy, cfg.log_floor));
    }
    const auto cep = dct2_orthonormal(log_mel);
    rows.emplace_back(cep.begin() + 1, cep.begin() + 1 + static_cast<std::ptrdiff_t>(cfg.n_coeffs));
  }
  return rows;
}

Tensor mel_cepstra(const AudioBuffer& audio, const MelCepstraConfig& cfg) {
  const auto rows = mel_cepstra_rows(audio, cfg);
  Tensor out({rows.size(), cfg.n_coeffs});
  for (std::size_t f = 0; f < rows.size(); ++f)
    for (std::size_t c = 0; c < cfg.n_coeffs; ++c)
      out[f * cfg.n_coeffs + c] = static_cast<float>(rows[f][c]);
  return out;
}

}  // namespace signvoice
