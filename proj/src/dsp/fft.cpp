// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "signvoice/dsp/fft.hpp"

#include <cmath>
#include <numbers>

#include "signvoice/core/error.hpp"

namespace signvoice {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

Fft::Fft(std::size_t n) : n_(n), bit_reverse_(n), twiddles_(n / 2) {
  if (!is_power_of_two(n))
    throw Error(Errc::invalid_argument, "FFT size must be a power of two, got " +
                                            std::to_string(n));
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < bits; ++b)
      if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
    bit_reverse_[i] = r;
  }
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    twiddles_[k] = {std::cos(angle), std::sin(angle)};
  }
}

void Fft::transform(std::span<std::complex<double>> data, bool inverse) const {
  if (data.size() != n_) throw Error(Errc::shape_mismatch, "FFT input length differs from plan");
  for (std::size_t i = 0; i < n_; ++i)
    if (i < bit_reverse_[i]) std::swap(data[i], data[bit_reverse_[i]]);
  for (std::size_t len = 2; len <= n_; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t step = n_ / len;
    for (std::size_t start = 0; start < n_; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        std::complex<double> w = twiddles_[k * step];
        if (inverse) w = std::conj(w);
        const std::complex<double> a = data[start + k];
        const std::complex<double> b = data[start + k + half] * w;
        data[start + k] = a + b;
        data[start + k + half] = a - b;
      }
    }
  }
}

void Fft::forward(std::span<std::complex<double>> data) const { transform(data, false); }

void Fft::inverse(std::span<std::complex<double>> data) const {
  transform(data, true);
  const double scale = 1.0 / static_cast<double>(n_);
  for (auto& v : data) v *= scale;
}

std::vector<std::complex<double>> Fft::rfft(std::span<const double> input) const {
  if (input.size() != n_) throw Error(Errc::shape_mismatch, "rfft input length differs from plan");
  std::vector<std::complex<double>> buf(input.begin(), input.end());
  forward(buf);
  buf.resize(n_ / 2 + 1);
  return buf;
}

std::vector<double> Fft::irfft(std::span<const std::complex<double>> bins) const {
  if (bins.size() != n_ / 2 + 1)
    throw Error(Errc::shape_mismatch, "irfft expects N/2+1 bins");
  std::vector<std::complex<double>> buf(n_);
  buf[0] = {bins[0].real(), 0.0};
  if (n_ > 1) buf[n_ / 2] = {bins[n_ / 2].real(), 0.0};
  for (std::size_t k = 1; k < n_ / 2; ++k) {
    buf[k] = bins[k];
    buf[n_ - k] = std::conj(bins[k]);
  }
  inverse(buf);
  std::vector<double> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = buf[i].real();
  return out;
}

}  // namespace signvoice
