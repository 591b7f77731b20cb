// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "signvoice/metrics/audio_metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "signvoice/core/error.hpp"
#include "signvoice/dsp/fft.hpp"

namespace signvoice {
namespace {

void require_compatible(const AudioBuffer& a, const AudioBuffer& b, bool equal_length) {
  if (a.sample_rate != b.sample_rate)
    throw Error(Errc::invalid_argument, "sample rates differ: " + std::to_string(a.sample_rate) +
                                            " vs " + std::to_string(b.sample_rate));
  if (a.sample_rate <= 0) throw Error(Errc::invalid_argument, "sample rate must be positive");
  if (equal_length && a.size() != b.size())
    throw Error(Errc::shape_mismatch, "signal lengths differ: " + std::to_string(a.size()) +
                                          " vs " + std::to_string(b.size()));
}

// ---- STOI ----

constexpr int kStoiRate = 10000;
constexpr std::size_t kStoiFrame = 256;
constexpr std::size_t kStoiHop = 128;
constexpr std::size_t kStoiFft = 512;
constexpr std::size_t kStoiBands = 15;
constexpr double kStoiMinFreq = 150.0;
constexpr std::size_t kStoiSegment = 30;
constexpr double kStoiBeta = -15.0;
constexpr double kStoiDynRange = 40.0;
constexpr double kEps = std::numeric_limits<double>::epsilon();

std::vector<double> resample_linear(const std::vector<float>& x, int from_rate) {
  if (from_rate == kStoiRate) return {x.begin(), x.end()};
  if (x.empty()) return {};
  const double step = static_cast<double>(from_rate) / kStoiRate;
  const auto n_out = static_cast<std::size_t>(std::floor(static_cast<double>(x.size() - 1) / step)) + 1;
  std::vector<double> y(n_out);
  for (std::size_t j = 0; j < n_out; ++j) {
    const double t = static_cast<double>(j) * step;
    const auto i = static_cast<std::size_t>(t);
    const double frac = t - static_cast<double>(i);
    const double a = x[i];
    const double b = i + 1 < x.size() ? x[i + 1] : a;
    y[j] = a + frac * (b - a);
  }
  return y;
}

// Hann of length n+2 without its zero endpoints.
std::vector<double> stoi_window(std::size_t n) {
  std::vector<double> w(n);
  const double m = static_cast<double>(n + 1);
  for (std::size_t i = 0; i < n; ++i)
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i + 1) / m);
  return w;
}

void remove_silent_frames(std::vector<double>& x, std::vector<double>& y) {
  const auto w = stoi_window(kStoiFrame);
  if (x.size() < kStoiFrame) {
    x.clear();
    y.clear();
    return;
  }
  const std::size_t frames = (x.size() - kStoiFrame) / kStoiHop + 1;
  std::vector<double> energy(frames);
  for (std::size_t f = 0; f < frames; ++f) {
    double s = 0;
    for (std::size_t i = 0; i < kStoiFrame; ++i) {
      const double v = w[i] * x[f * kStoiHop + i];
      s += v * v;
    }
    energy[f] = 20.0 * std::log10(std::sqrt(s) + kEps);
  }
  const double loudest = *std::max_element(energy.begin(), energy.end());
  std::vector<std::size_t> keep;
  for (std::size_t f = 0; f < frames; ++f)
    if (loudest - kStoiDynRange - energy[f] < 0) keep.push_back(f);

  const std::size_t out_len = keep.empty() ? 0 : (keep.size() - 1) * kStoiHop + kStoiFrame;
  std::vector<double> xs(out_len, 0.0), ys(out_len, 0.0);
  for (std::size_t k = 0; k < keep.size(); ++k) {
    const std::size_t src = keep[k] * kStoiHop, dst = k * kStoiHop;
    for (std::size_t i = 0; i < kStoiFrame; ++i) {
      xs[dst + i] += w[i] * x[src + i];
      ys[dst + i] += w[i] * y[src + i];
    }
  }
  x = std::move(xs);
  y = std::move(ys);
}

// Third-octave band index ranges [lo, hi) over the one-sided FFT bins.
std::vector<std::array<std::size_t, 2>> third_octave_bands() {
  const std::size_t bins = kStoiFft / 2 + 1;
  auto nearest = [&](double hz) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * kStoiRate / static_cast<double>(kStoiFft);
      const double d = (f - hz) * (f - hz);
      if (d < best_d) {
        best_d = d;
        best = k;
      }
    }
    return best;
  };
  std::vector<std::array<std::size_t, 2>> bands;
  for (std::size_t b = 0; b < kStoiBands; ++b) {
    const double k = static_cast<double>(b);
    const double lo = kStoiMinFreq * std::pow(2.0, (2.0 * k - 1.0) / 6.0);
    const double hi = kStoiMinFreq * std::pow(2.0, (2.0 * k + 1.0) / 6.0);
    bands.push_back({nearest(lo), nearest(hi)});
  }
  return bands;
}

// bands x frames envelope.
std::vector<std::vector<double>> band_envelopes(const std::vector<double>& x) {
  const auto w = stoi_window(kStoiFrame);
  const auto bands = third_octave_bands();
  const Fft fft(kStoiFft);
  std::vector<std::vector<double>> env(kStoiBands);
  std::vector<double> buf(kStoiFft);
  // frame starts 0, hop, ... strictly below len - frame
  for (std::size_t start = 0; start + kStoiFrame < x.size(); start += kStoiHop) {
    std::fill(buf.begin(), buf.end(), 0.0);
    for (std::size_t i = 0; i < kStoiFrame; ++i) buf[i] = w[i] * x[start + i];
    const auto spec = fft.rfft(buf);
    for (std::size_t b = 0; b < kStoiBands; ++b) {
      double s = 0;
      for (std::size_t k = bands[b][0]; k < bands[b][1]; ++k) s += std::norm(spec[k]);
      env[b].push_back(std::sqrt(s));
    }
  }
  return env;
}

}  // namespace

double snr(const AudioBuffer& reference, const AudioBuffer& test) {
  require_compatible(reference, test, true);
  double signal = 0, noise = 0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double r = reference.samples[i];
    const double d = r - static_cast<double>(test.samples[i]);
    signal += r * r;
    noise += d * d;
  }
  if (signal == 0) throw Error(Errc::zero_norm_reference, "SNR reference is silent");
  if (noise == 0) return kSnrCapDb;
  return std::min(kSnrCapDb, 10.0 * std::log10(signal / noise));
}

double mse_metric(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape())
    throw Error(Errc::shape_mismatch,
                "mse shapes " + shape_string(a.shape()) + " vs " + shape_string(b.shape()));
  if (a.size() == 0) throw Error(Errc::empty_input, "mse of empty tensors");
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = static_cast<double>(a.values()[i]) - b.values()[i];
    s += d * d;
  }
  return s / static_cast<double>(a.size());
}

double stoi_raw(const AudioBuffer& reference, const AudioBuffer& test) {
  require_compatible(reference, test, true);
  auto x = resample_linear(reference.samples, reference.sample_rate);
  auto y = resample_linear(test.samples, test.sample_rate);
  remove_silent_frames(x, y);
  const auto ex = band_envelopes(x);
  const auto ey = band_envelopes(y);
  const std::size_t frames = ex[0].size();
  if (frames < kStoiSegment)
    throw Error(Errc::too_short, "STOI needs " + std::to_string(kStoiSegment) +
                                     " non-silent frames, got " + std::to_string(frames));

  const double clip = std::pow(10.0, -kStoiBeta / 20.0);
  double total = 0;
  std::size_t count = 0;
  std::array<double, kStoiSegment> xs{}, ys{};
  for (std::size_t m = kStoiSegment; m <= frames; ++m) {
    for (std::size_t b = 0; b < kStoiBands; ++b) {
      double nx = 0, ny = 0;
      for (std::size_t j = 0; j < kStoiSegment; ++j) {
        xs[j] = ex[b][m - kStoiSegment + j];
        ys[j] = ey[b][m - kStoiSegment + j];
        nx += xs[j] * xs[j];
        ny += ys[j] * ys[j];
      }
      const double scale = std::sqrt(nx) / (std::sqrt(ny) + kEps);
      double mx = 0, my = 0;
      for (std::size_t j = 0; j < kStoiSegment; ++j) {
        ys[j] = std::min(ys[j] * scale, xs[j] * (1.0 + clip));
        mx += xs[j];
        my += ys[j];
      }
      mx /= kStoiSegment;
      my /= kStoiSegment;
      double sxx = 0, syy = 0, sxy = 0;
      for (std::size_t j = 0; j < kStoiSegment; ++j) {
        const double a = xs[j] - mx, c = ys[j] - my;
        sxx += a * a;
        syy += c * c;
        sxy += a * c;
      }
      total += sxy / ((std::sqrt(sxx) + kEps) * (std::sqrt(syy) + kEps));
      ++count;
    }
  }
  return total / static_cast<double>(count);
}

double stoi(const AudioBuffer& reference, const AudioBuffer& test) {
  return std::clamp(stoi_raw(reference, test), 0.0, 1.0);
}

double mcd(const AudioBuffer& reference, const AudioBuffer& test, const MelCepstraConfig& cfg) {
  require_compatible(reference, test, false);
  const auto a = mel_cepstra_rows(reference, cfg);
  const auto b = mel_cepstra_rows(test, cfg);
  const std::size_t frames = std::min(a.size(), b.size());
  if (frames == 0) throw Error(Errc::too_short, "no cepstral frames to compare");
  const double k = 10.0 / std::numbers::ln10;
  double total = 0;
  for (std::size_t f = 0; f < frames; ++f) {
    double s = 0;
    for (std::size_t i = 0; i < a[f].size(); ++i) {
      const double d = a[f][i] - b[f][i];
      s += d * d;
    }
    total += k * std::sqrt(2.0 * s);
  }
  return total / static_cast<double>(frames);
}

}  // namespace signvoice
