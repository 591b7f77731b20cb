// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "signvoice/core/error.hpp"
#include "signvoice/dsp/fft.hpp"
#include "signvoice/dsp/mel.hpp"
#include "signvoice/dsp/stft.hpp"

using namespace signvoice;

namespace {

std::vector<std::complex<double>> naive_dft(const std::vector<std::complex<double>>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      out[k] += x[i] * std::polar(1.0, -2.0 * std::numbers::pi * double(k * i % n) / double(n));
  return out;
}

AudioBuffer random_signal(std::size_t n, std::uint32_t seed, int rate = 22050) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<float> dist(-1.0f, 1.0f);
  AudioBuffer a;
  a.sample_rate = rate;
  a.samples.resize(n);
  for (auto& s : a.samples) s = dist(rng);
  return a;
}

double interior_snr_db(const AudioBuffer& ref, const AudioBuffer& test, std::size_t edge) {
  double sig = 0, err = 0;
  for (std::size_t i = edge; i + edge < ref.size(); ++i) {
    sig += double(ref.samples[i]) * ref.samples[i];
    const double d = double(ref.samples[i]) - test.samples[i];
    err += d * d;
  }
  return 10 * std::log10(sig / err);
}

}  // namespace

TEST_CASE("fft agrees with a direct DFT for sizes up to 64") {
  std::mt19937 rng(5);
  std::normal_distribution<double> dist;
  for (std::size_t n = 1; n <= 64; n *= 2) {
    std::vector<std::complex<double>> x(n);
    for (auto& v : x) v = {dist(rng), dist(rng)};
    auto fast = x;
    Fft(n).forward(fast);
    const auto slow = naive_dft(x);
    for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(fast[k] - slow[k]) < 1e-5);
    Fft(n).inverse(fast);
    for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(fast[k] - x[k]) < 1e-9);
  }
}

TEST_CASE("fft rejects sizes that are not powers of two") {
  CHECK_THROWS_AS(Fft(12), Error);
  CHECK_THROWS_AS(Fft(0), Error);
}

TEST_CASE("rfft/irfft round trip") {
  std::mt19937 rng(8);
  std::normal_distribution<double> dist;
  std::vector<double> x(32);
  for (auto& v : x) v = dist(rng);
  Fft fft(32);
  const auto back = fft.irfft(fft.rfft(x));
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(back[i] == doctest::Approx(x[i]).epsilon(1e-12));
}

TEST_CASE("stft of a 440 Hz sine peaks at bin 41") {
  AudioBuffer a;
  a.sample_rate = 22050;
  a.samples.resize(22050);
  for (std::size_t i = 0; i < a.size(); ++i)
    a.samples[i] = static_cast<float>(std::sin(2 * std::numbers::pi * 440.0 * i / 22050.0));
  const auto spec = stft(a, {});
  REQUIRE(spec.bins() == 1025);
  const std::size_t mid = spec.frames() / 2;
  std::size_t best = 0;
  double best_mag = -1;
  for (std::size_t k = 0; k < spec.bins(); ++k) {
    const double m = std::hypot(spec.real.at({k, mid}), spec.imag.at({k, mid}));
    if (m > best_mag) best_mag = m, best = k;
  }
  CHECK(best == 41);
}

TEST_CASE("stft framing arithmetic and degenerate inputs") {
  for (std::size_t d : {2048u, 2049u, 2560u, 5000u, 22050u}) {
    const auto spec = stft(AudioBuffer{std::vector<float>(d, 0.0f), 22050}, {});
    CHECK(spec.frames() == 1 + (d - 2048) / 512);
    for (float v : spec.real.values()) CHECK(v == 0.0f);
    for (float v : spec.imag.values()) CHECK(v == 0.0f);
  }
  try {
    stft(AudioBuffer{std::vector<float>(100), 22050}, {});
    FAIL("expected too_short");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::too_short);
  }
}

TEST_CASE("istft output length, zeros and linearity") {
  ComplexSpectrogram s;
  s.real = Tensor({33, 7});
  s.imag = Tensor({33, 7});
  s.n_fft = 64;
  s.hop = 16;
  const auto zero = istft(s);
  CHECK(zero.size() == 6 * 16 + 64);
  for (float v : zero.samples) CHECK(v == 0.0f);

  std::mt19937 rng(3);
  std::normal_distribution<float> dist;
  for (auto& v : s.real.values()) v = dist(rng);
  for (auto& v : s.imag.values()) v = dist(rng);
  ComplexSpectrogram scaled = s;
  for (auto& v : scaled.real.values()) v *= 2.5f;
  for (auto& v : scaled.imag.values()) v *= 2.5f;
  const auto a = istft(s);
  const auto b = istft(scaled);
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(std::abs(b.samples[i] - 2.5 * a.samples[i]) <= 1e-5 * (1.0 + std::abs(a.samples[i])));

  s.n_fft = 128;
  CHECK_THROWS_AS(istft(s), Error);
}

TEST_CASE("istft inverts stft on the interior") {
  for (std::uint32_t seed = 0; seed < 5; ++seed) {
    const auto x = random_signal(22050 + 777 * seed, seed);
    const auto y = istft(stft(x, {}), {});
    REQUIRE(y.size() <= x.size());
    AudioBuffer ref = x;
    ref.samples.resize(y.size());
    CHECK(interior_snr_db(ref, y, 2048) >= 60.0);
  }
}

TEST_CASE("parseval per frame") {
  const auto x = random_signal(4096, 11);
  const StftConfig cfg{};
  const auto spec = stft(x, cfg);
  const auto w = hann_window(2048);
  for (std::size_t f = 0; f < spec.frames(); ++f) {
    double time_energy = 0;
    for (std::size_t i = 0; i < 2048; ++i) {
      const double v = x.samples[f * 512 + i] * w[i];
      time_energy += v * v;
    }
    double spec_energy = 0;
    for (std::size_t k = 0; k < spec.bins(); ++k) {
      const double p = std::norm(std::complex<double>(spec.real.at({k, f}), spec.imag.at({k, f})));
      spec_energy += (k == 0 || k == 1024) ? p : 2 * p;
    }
    spec_energy /= 2048.0;
    CHECK(std::abs(spec_energy - time_energy) / time_energy < 1e-3);
  }
}

TEST_CASE("mel scale and filterbank shape") {
  CHECK(hz_to_mel(0) == 0.0);
  CHECK(mel_to_hz(hz_to_mel(1234.5)) == doctest::Approx(1234.5));
  const auto bank = mel_filterbank(40, 2048, 22050);
  REQUIRE(bank.size() == 40);
  for (const auto& row : bank) {
    CHECK(row.size() == 1025);
    double peak = 0;
    for (double v : row) peak = std::max(peak, v);
    CHECK(peak > 0.0);
    CHECK(peak <= 1.0);
  }
}

TEST_CASE("orthonormal dct of a constant has only a 0th coefficient") {
  const auto c = dct2_orthonormal(std::vector<double>(40, -3.0));
  CHECK(c[0] == doctest::Approx(-3.0 * std::sqrt(40.0)));
  for (std::size_t k = 1; k < c.size(); ++k) CHECK(std::abs(c[k]) < 1e-12);
}

TEST_CASE("mel cepstra identities") {
  const auto x = random_signal(8192, 21);
  const auto a = mel_cepstra(x);
  CHECK(a.shape() == Shape{stft_frame_count(8192, {}), 13});
  CHECK(a == mel_cepstra(x));

  const auto silence = mel_cepstra(AudioBuffer{std::vector<float>(4096, 0.0f), 22050});
  for (float v : silence.values()) CHECK(std::abs(v) < 1e-5);

  CHECK_THROWS_AS(mel_cepstra(AudioBuffer{std::vector<float>(100), 22050}), Error);
}

TEST_CASE("mel cepstra of white noise shifted by one hop") {
  const auto x = random_signal(10240, 33);
  AudioBuffer shifted = x;
  shifted.samples.insert(shifted.samples.begin(), 512, 0.0f);
  shifted.samples.resize(x.size());
  const auto a = mel_cepstra_rows(x);
  const auto b = mel_cepstra_rows(shifted);
  REQUIRE(a.size() == b.size());
  double first = 0;
  for (std::size_t c = 0; c < 13; ++c) first += std::abs(a[0][c] - b[0][c]);
  CHECK(first > 1e-2);
  for (std::size_t f = 1; f < b.size(); ++f)
    for (std::size_t c = 0; c < 13; ++c) CHECK(std::abs(b[f][c] - a[f - 1][c]) < 1e-9);
}
