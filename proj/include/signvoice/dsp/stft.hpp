// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <vector>

#include "signvoice/core/audio.hpp"

namespace signvoice {

struct StftConfig {
  int n_fft = 2048;
  int hop = 512;
  // No center padding: frame f covers samples [f*hop, f*hop + n_fft).

  void validate() const;
};

// Periodic Hann window, w[n] = 0.5 - 0.5 cos(2 pi n / N).
std::vector<double> hann_window(std::size_t n);

std::size_t stft_frame_count(std::size_t signal_length, const StftConfig& cfg);
std::size_t istft_length(std::size_t frames, const StftConfig& cfg);

ComplexSpectrogram stft(const AudioBuffer& signal, const StftConfig& cfg);

// Weighted overlap-add inverse: each frame is inverse-transformed, multiplied
// by the Hann synthesis window, summed, and divided by the summed squared
// window wherever that sum is non-negligible. Output length is
// (frames - 1) * hop + n_fft.
AudioBuffer istft(const ComplexSpectrogram& spec, const StftConfig& cfg);
AudioBuffer istft(const ComplexSpectrogram& spec);

}  // namespace signvoice
