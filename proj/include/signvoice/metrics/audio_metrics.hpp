// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include "signvoice/core/audio.hpp"
#include "signvoice/core/tensor.hpp"
#include "signvoice/dsp/mel.hpp"

namespace signvoice {

inline constexpr double kSnrCapDb = 120.0;

// 10 log10(sum ref^2 / sum (ref - test)^2), at most kSnrCapDb.
double snr(const AudioBuffer& reference, const AudioBuffer& test);

// Mean squared difference of two equally shaped tensors.
double mse_metric(const Tensor& a, const Tensor& b);

// Short-time objective intelligibility.
//   linear resampling to 10 kHz
//   silent frames (256-sample Hann, hop 128, 40 dB below the loudest) dropped
//   512-point spectra -> 15 third-octave bands from 150 Hz
//   30-frame segments, test envelope scaled to the reference and clipped at
//   -15 dB SDR, band-wise correlation averaged over bands and segments
// Inputs must share length and sample rate. Fewer than 30 frames after
// silence removal raises Errc::too_short.
double stoi_raw(const AudioBuffer& reference, const AudioBuffer& test);
// stoi_raw clamped to [0, 1].
double stoi(const AudioBuffer& reference, const AudioBuffer& test);

// Mel cepstral distortion in dB: per frame (10/ln 10) sqrt(2 sum_i (c_i - c'_i)^2)
// over coefficients 1..13, averaged over frames after truncating to the
// shorter input.
double mcd(const AudioBuffer& reference, const AudioBuffer& test,
           const MelCepstraConfig& cfg = {});

}  // namespace signvoice
