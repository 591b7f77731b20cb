// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace signvoice {

// Iterative radix-2 FFT with precomputed twiddles and bit-reversal table.
// Computation is done in double precision.
class Fft {
 public:
  explicit Fft(std::size_t n);

  std::size_t size() const noexcept { return n_; }

  // In-place forward transform, X[k] = sum x[n] e^{-2 pi i k n / N}.
  void forward(std::span<std::complex<double>> data) const;
  // In-place inverse transform including the 1/N factor.
  void inverse(std::span<std::complex<double>> data) const;

  // Real input of length N -> N/2+1 one-sided bins.
  std::vector<std::complex<double>> rfft(std::span<const double> input) const;
  // N/2+1 one-sided bins -> N real samples. The imaginary parts of the DC
  // and Nyquist bins are ignored.
  std::vector<double> irfft(std::span<const std::complex<double>> bins) const;

 private:
  void transform(std::span<std::complex<double>> data, bool inverse) const;

  std::size_t n_;
  std::vector<std::size_t> bit_reverse_;
  std::vector<std::complex<double>> twiddles_;
};

bool is_power_of_two(std::size_t n);

}  // namespace signvoice
