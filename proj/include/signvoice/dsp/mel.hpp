// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <vector>

#include "signvoice/core/audio.hpp"
#include "signvoice/core/tensor.hpp"
#include "signvoice/dsp/stft.hpp"

namespace signvoice {

double hz_to_mel(double hz);  // HTK: 2595 log10(1 + f/700)
double mel_to_hz(double mel);

// Triangular filters equally spaced on the mel scale between 0 Hz and
// Nyquist. Returns n_mels rows of n_fft/2+1 weights.
std::vector<std::vector<double>> mel_filterbank(std::size_t n_mels, int n_fft, int sample_rate);

// Orthonormal DCT-II of the input.
std::vector<double> dct2_orthonormal(const std::vector<double>& input);

struct MelCepstraConfig {
  StftConfig stft{};
  std::size_t n_mels = 40;
  std::size_t n_coeffs = 13;
  // Mel energies are floored here before the log.
  double log_floor = 1e-10;
};

// Power spectrogram -> mel filterbank -> natural log -> orthonormal DCT-II,
// keeping coefficients 1..n_coeffs (the 0th, energy-like term is dropped).
// Result has shape frames x n_coeffs.
Tensor mel_cepstra(const AudioBuffer& audio, const MelCepstraConfig& cfg = {});
// Same computation kept in double precision, one row per frame.
std::vector<std::vector<double>> mel_cepstra_rows(const AudioBuffer& audio,
                                                  const MelCepstraConfig& cfg = {});

}  // namespace signvoice
