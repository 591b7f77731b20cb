// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <doctest.h>

#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

#include "signvoice/core/audio.hpp"
#include "signvoice/core/config.hpp"
#include "signvoice/core/error.hpp"
#include "signvoice/core/tensor.hpp"
#include "signvoice/core/tensor_io.hpp"
#include "signvoice/core/vocab.hpp"
#include "test_util.hpp"

using namespace signvoice;
using signvoice::testing::TempDir;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return Errc::io;
}

std::int16_t sample_at(const std::vector<std::uint8_t>& bytes, std::size_t i) {
  return static_cast<std::int16_t>(bytes[44 + 2 * i] | bytes[45 + 2 * i] << 8);
}

}  // namespace

TEST_CASE("tensor shape invariant") {
  CHECK_THROWS_AS(Tensor({2, 3}, std::vector<float>(5)), Error);
  Tensor t({2, 3});
  t.at({1, 2}) = 4.0f;
  CHECK(t[5] == 4.0f);
  CHECK(shape_string(t.shape()) == "[2,3]");
}

TEST_CASE("isvt round trip of a small tensor") {
  TempDir dir;
  Tensor t({2, 3}, {0, 1, 2, 3, 4, 5});
  tensor_write(t, dir / "t.isvt");
  const Tensor back = tensor_read(dir / "t.isvt");
  CHECK(bit_equal(back, t));
}

TEST_CASE("isvt file size follows the header layout") {
  TempDir dir;
  std::mt19937 rng(1);
  std::normal_distribution<float> dist;
  Tensor t({1025, 100});
  for (auto& v : t.values()) v = dist(rng);
  tensor_write(t, dir / "big.isvt");
  CHECK(std::filesystem::file_size(dir / "big.isvt") == 410024u);
  CHECK(isvt_file_size(t.shape()) == 410024u);
  CHECK(bit_equal(tensor_read(dir / "big.isvt"), t));
}

TEST_CASE("isvt header bytes") {
  std::ostringstream os;
  write_tensor(os, Tensor({3}, {1, 2, 3}));
  const std::string s = os.str();
  REQUIRE(s.size() == 16 + 4 + 12);
  CHECK(s.substr(0, 4) == "ISVT");
  CHECK(s[4] == 1);
  CHECK(static_cast<unsigned char>(s[8]) == 1);
  CHECK(static_cast<unsigned char>(s[16]) == 3);
}

TEST_CASE("isvt errors are distinct") {
  std::ostringstream os;
  write_tensor(os, Tensor({2, 2}, {1, 2, 3, 4}));
  const std::string good = os.str();

  std::string bad = good;
  bad.replace(0, 4, "XXXX");
  std::istringstream bad_magic(bad);
  CHECK(code_of([&] { read_tensor(bad_magic); }) == Errc::bad_magic);

  std::istringstream truncated(good.substr(0, good.size() - 3));
  CHECK(code_of([&] { read_tensor(truncated); }) == Errc::truncated);

  std::string deep = good;
  deep[8] = 9;
  std::istringstream too_deep(deep);
  CHECK(code_of([&] { read_tensor(too_deep); }) == Errc::rank_too_large);

  std::ostringstream sink;
  CHECK(code_of([&] { write_tensor(sink, Tensor(Shape(9, 1))); }) == Errc::rank_too_large);
}

TEST_CASE("isvt round trip is bit exact for random tensors up to rank 8") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t rank = 1 + rng() % 8;
    Shape shape(rank);
    for (auto& d : shape) d = 1 + rng() % 3;
    Tensor t(shape);
    for (auto& v : t.values()) {
      // Arbitrary finite bit patterns, including subnormals and -0.
      std::uint32_t bits;
      do {
        bits = static_cast<std::uint32_t>(rng());
      } while (((bits >> 23) & 0xff) == 0xff);
      std::memcpy(&v, &bits, 4);
    }
    std::stringstream io;
    write_tensor(io, t);
    CHECK(bit_equal(read_tensor(io), t));
  }
}

TEST_CASE("wav header and silence payload") {
  AudioBuffer a{std::vector<float>(22050, 0.0f), 22050};
  const auto b = wav_bytes(a);
  REQUIRE(b.size() == 44 + 44100);
  CHECK(std::memcmp(b.data(), "RIFF", 4) == 0);
  CHECK(std::memcmp(b.data() + 8, "WAVEfmt ", 8) == 0);
  auto u32 = [&](std::size_t p) {
    return std::uint32_t(b[p]) | b[p + 1] << 8 | b[p + 2] << 16 | std::uint32_t(b[p + 3]) << 24;
  };
  auto u16 = [&](std::size_t p) { return b[p] | b[p + 1] << 8; };
  CHECK(u32(4) == 36 + 44100);
  CHECK(u16(20) == 1);
  CHECK(u16(22) == 1);
  CHECK(u32(24) == 22050);
  CHECK(u32(28) == 44100);
  CHECK(u16(34) == 16);
  CHECK(std::memcmp(b.data() + 36, "data", 4) == 0);
  CHECK(u32(40) == 44100);
}

TEST_CASE("wav sample scaling and clamping") {
  AudioBuffer a{{1.0f, -1.0f, 2.0f, -3.0f, 0.5f, 0.0f}, 16000};
  const auto b = wav_bytes(a);
  CHECK(sample_at(b, 0) == 32767);
  CHECK(sample_at(b, 1) == -32767);
  CHECK(sample_at(b, 2) == 32767);
  CHECK(sample_at(b, 3) == -32767);
  CHECK(sample_at(b, 4) == 16384);  // 16383.5 rounds away from zero
  CHECK(sample_at(b, 5) == 0);
}

TEST_CASE("wav output is deterministic and readable") {
  TempDir dir;
  AudioBuffer a{{0.1f, -0.2f, 0.3f}, 8000};
  wav_write(a, dir / "a.wav");
  wav_write(a, dir / "b.wav");
  std::ifstream fa(dir / "a.wav", std::ios::binary), fb(dir / "b.wav", std::ios::binary);
  std::string sa((std::istreambuf_iterator<char>(fa)), {});
  std::string sb((std::istreambuf_iterator<char>(fb)), {});
  CHECK(sa == sb);
  const AudioBuffer back = wav_read(dir / "a.wav");
  CHECK(back.sample_rate == 8000);
  REQUIRE(back.size() == 3);
  CHECK(back.samples[1] == doctest::Approx(-0.2).epsilon(1e-4));
}

TEST_CASE("wav write to an unwritable path fails") {
  AudioBuffer a{{0.0f}, 8000};
  CHECK(code_of([&] { wav_write(a, "/nonexistent_dir/x.wav"); }) == Errc::io);
  a.sample_rate = 0;
  CHECK(code_of([&] { wav_bytes(a); }) == Errc::invalid_argument);
}

TEST_CASE("spectrogram sidecar round trip") {
  TempDir dir;
  ComplexSpectrogram s;
  s.real = Tensor({5, 3}, 1.5f);
  s.imag = Tensor({5, 3}, -0.5f);
  s.n_fft = 8;
  s.hop = 2;
  s.sample_rate = 16000;
  spectrogram_write(s, dir / "s.isvt");
  const auto back = spectrogram_read(dir / "s.isvt");
  CHECK(back.real == s.real);
  CHECK(back.imag == s.imag);
  CHECK(back.n_fft == 8);
  CHECK(back.hop == 2);
  CHECK(back.sample_rate == 16000);

  s.n_fft = 16;
  CHECK(code_of([&] { s.validate(); }) == Errc::shape_mismatch);
}

TEST_CASE("gloss vocabulary") {
  GlossVocab v({"HELLO", "HELP", "THANKS"});
  CHECK(v.size() == 3);
  CHECK(v.index_of("HELP") == 1u);
  CHECK_FALSE(v.index_of("NOPE").has_value());
  CHECK_THROWS_AS(GlossVocab({"A", "A"}), Error);
  CHECK_THROWS_AS(GlossVocab(std::vector<std::string>{}), Error);
}

TEST_CASE("pipeline config defaults and partial json") {
  PipelineConfig c;
  CHECK(c.window_size == 50);
  CHECK(c.hop_length == 3);
  CHECK(c.confidence_threshold == doctest::Approx(0.7));
  CHECK_NOTHROW(c.validate());

  const auto j = nlohmann::json::parse(R"({"window_size": 20, "overlap": 5})");
  const auto parsed = j.get<PipelineConfig>();
  CHECK(parsed.window_size == 20);
  CHECK(parsed.overlap == 5);
  CHECK(parsed.hop_length == 3);

  nlohmann::json round = PipelineConfig::toy();
  const auto back = round.get<PipelineConfig>();
  CHECK(back.generator.blocks.size() == PipelineConfig::toy().generator.blocks.size());
  CHECK_NOTHROW(back.validate());

  c.overlap = c.window_size;
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("generator schedules reach their output sizes") {
  const auto full = GeneratorParams::full_scale();
  CHECK(full.natural_output() == std::array<std::size_t, 2>{1125, 108});
  CHECK(GeneratorParams::toy().natural_output() == std::array<std::size_t, 2>{36, 12});
  CHECK(GeneratorParams::tiny().natural_output() == std::array<std::size_t, 2>{10, 4});
  CHECK_NOTHROW(full.validate());
  auto bad = full;
  bad.reshape_channels = 128;  // 128x9x9 != 5184
  CHECK_THROWS_AS(bad.validate(), Error);
}
