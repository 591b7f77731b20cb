// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "signvoice/core/tensor.hpp"

namespace signvoice {

// Mono float audio. Samples are nominally in [-1, 1]; values outside are
// kept and only clipped on WAV export.
struct AudioBuffer {
  std::vector<float> samples;
  int sample_rate = 22050;

  std::size_t size() const noexcept { return samples.size(); }
  double duration_seconds() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

// One-sided complex spectrogram: two planes of shape bins x frames.
struct ComplexSpectrogram {
  Tensor real;
  Tensor imag;
  int sample_rate = 22050;
  int n_fft = 2048;
  int hop = 512;

  std::size_t bins() const { return real.dim(0); }
  std::size_t frames() const { return real.dim(1); }

  // Throws Errc::shape_mismatch / invalid_argument when the invariants
  // real.shape == imag.shape, bins == n_fft/2+1 and hop >= 1 do not hold.
  void validate() const;

  // Packs to the 2 x bins x frames interchange layout (plane 0 real).
  Tensor stacked() const;
  static ComplexSpectrogram from_stacked(const Tensor& planes, int sample_rate,
                                         int n_fft, int hop);
};

// Canonical 44-byte-header RIFF/WAVE, PCM 16-bit mono. Samples are clamped
// to [-1, 1], scaled by 32767 and rounded to nearest.
std::int16_t pcm16_from_float(float sample);
std::vector<std::uint8_t> wav_bytes(const AudioBuffer& audio);
void wav_write(const AudioBuffer& audio, const std::filesystem::path& path);

// Reads PCM16 mono files of the form produced by wav_write (extra chunks are
// skipped). Samples are scaled back by 1/32767.
AudioBuffer wav_read(const std::filesystem::path& path);

// Spectrogram sidecar: <stem>.isvt with the stacked planes and <stem>.json
// with n_fft / hop / sample_rate.
void spectrogram_write(const ComplexSpectrogram& spec,
                       const std::filesystem::path& isvt_path);
ComplexSpectrogram spectrogram_read(const std::filesystem::path& isvt_path);

}  // namespace signvoice
