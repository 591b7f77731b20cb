// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include "signvoice/core/error.hpp"
#include "signvoice/ingest/clip.hpp"
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

Clip random_clip(std::size_t t, std::size_t w, std::size_t h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> px(0, 255);
  Clip clip;
  clip.frames = Tensor({3, t, w, h});
  for (auto& v : clip.frames.storage()) v = static_cast<float>(px(rng));
  return clip;
}

Clip constant_clip(std::size_t t, std::size_t w, std::size_t h, float r, float g, float b) {
  Clip clip;
  clip.frames = Tensor({3, t, w, h});
  const std::size_t plane = t * w * h;
  std::fill_n(clip.frames.data(), plane, r);
  std::fill_n(clip.frames.data() + plane, plane, g);
  std::fill_n(clip.frames.data() + 2 * plane, plane, b);
  return clip;
}

AugmentParams only(double AugmentParams::*field, double value) {
  AugmentParams p{0, 0, 0, 0, 0, 0, 5, 11};
  p.*field = value;
  return p;
}

}  // namespace

TEST_CASE("preprocess maps a 128-frame 320x240 clip to 3x64x256x256 in [-1,1]") {
  const Clip raw = random_clip(128, 320, 240, 1);
  const Clip out = preprocess_clip(raw);
  CHECK(out.frames.shape() == Shape{3, 64, 256, 256});
  CHECK(out.normalized);
  const auto [lo, hi] = std::minmax_element(out.frames.values().begin(), out.frames.values().end());
  CHECK(*lo >= -1.0f);
  CHECK(*hi <= 1.0f);
  CHECK(out.frames.all_finite());
}

TEST_CASE("normalization sends 255 to 1 and 0 to -1") {
  const Clip white = preprocess_clip(constant_clip(4, 10, 12, 255, 255, 255), {2, 8});
  const Clip black = preprocess_clip(constant_clip(4, 10, 12, 0, 0, 0), {2, 8});
  for (float v : white.frames.values()) REQUIRE(v == 1.0f);
  for (float v : black.frames.values()) REQUIRE(v == -1.0f);
}

TEST_CASE("a single-frame clip is repeated to fill the output") {
  const Clip raw = random_clip(1, 16, 16, 2);
  const Clip out = preprocess_clip(raw, {5, 16});
  CHECK(out.frame_count() == 5);
  for (std::size_t f = 1; f < 5; ++f) CHECK(out.frame(f) == out.frame(0));
}

TEST_CASE("subsample indices are evenly spaced and include both ends") {
  CHECK(subsample_indices(128, 64).front() == 0);
  CHECK(subsample_indices(128, 64).back() == 127);
  CHECK(subsample_indices(5, 3) == std::vector<std::size_t>{0, 2, 4});
  CHECK(subsample_indices(4, 3) == std::vector<std::size_t>{0, 2, 3});
  CHECK(subsample_indices(1, 1) == std::vector<std::size_t>{0});
  CHECK(code_of([] { subsample_indices(0, 4); }) == Errc::empty_input);
}

TEST_CASE("bilinear upscale of a 2x2 image matches hand values") {
  // Column x=0 is 0, column x=1 is 255; rows are identical.
  Clip raw;
  raw.frames = Tensor({3, 1, 2, 2}, 0.0f);
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t y = 0; y < 2; ++y) raw.frames.at({c, 0, 1, y}) = 255.0f;
  const Clip out = preprocess_clip(raw, {1, 4});
  const float expected[4] = {-1.0f, -0.5f, 0.5f, 1.0f};
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t x = 0; x < 4; ++x)
      for (std::size_t y = 0; y < 4; ++y) CHECK(out.frames.at({c, 0, x, y}) == doctest::Approx(expected[x]));
}

TEST_CASE("center crop keeps the middle of the long side") {
  // 6x2 image whose value is the column index, cropped to 2x2 at scale 1.
  Clip raw;
  raw.frames = Tensor({3, 1, 6, 2});
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t x = 0; x < 6; ++x)
      for (std::size_t y = 0; y < 2; ++y) raw.frames.at({c, 0, x, y}) = static_cast<float>(x) * 51.0f;
  const Clip out = preprocess_clip(raw, {1, 2});
  CHECK(out.frames.at({0, 0, 0, 0}) == doctest::Approx(2 * 51.0 / 127.5 - 1.0));
  CHECK(out.frames.at({0, 0, 1, 1}) == doctest::Approx(3 * 51.0 / 127.5 - 1.0));
}

TEST_CASE("preprocess rejects malformed clips") {
  Clip bad;
  bad.frames = Tensor({2, 3, 4, 4});
  CHECK(code_of([&] { preprocess_clip(bad); }) == Errc::shape_mismatch);
  CHECK(code_of([&] { preprocess_clip(random_clip(2, 4, 4, 0), {0, 4}); }) == Errc::invalid_argument);
}

TEST_CASE("PPM round trip preserves pixels") {
  TempDir dir;
  const Clip raw = random_clip(3, 7, 5, 9);
  save_clip_dir(raw, dir.path());
  const Clip back = load_clip_dir(dir.path());
  CHECK(back.frames == raw.frames);
  CHECK(code_of([&] { read_ppm(dir / "missing.ppm"); }) == Errc::io);
}

TEST_CASE("PPM reader rejects bad magic and short data") {
  TempDir dir;
  {
    std::ofstream f(dir / "a.ppm", std::ios::binary);
    f << "P3\n1 1\n255\n0 0 0\n";
  }
  {
    std::ofstream f(dir / "b.ppm", std::ios::binary);
    f << "P6\n# comment\n4 4\n255\n" << std::string(10, 'x');
  }
  CHECK(code_of([&] { read_ppm(dir / "a.ppm"); }) == Errc::bad_magic);
  CHECK(code_of([&] { read_ppm(dir / "b.ppm"); }) == Errc::truncated);
}

TEST_CASE("augmentation is deterministic per seed and version") {
  const Clip raw = random_clip(16, 12, 10, 3);
  AugmentParams p;
  p.seed = 42;
  CHECK(augment_clip(raw, p, 2).frames == augment_clip(raw, p, 2).frames);
  CHECK(!(augment_clip(raw, p, 1).frames == augment_clip(raw, p, 2).frames));
  p.seed = 43;
  const auto a = draw_augmentation(p, 0, 16);
  p.seed = 42;
  const auto b = draw_augmentation(p, 0, 16);
  CHECK(a.brightness != b.brightness);
}

TEST_CASE("identity parameters return the input unchanged") {
  const Clip raw = random_clip(8, 9, 7, 4);
  const AugmentParams id{0, 0, 0, 0, 0, 0, 5, 7};
  for (std::size_t v = 0; v < 5; ++v) CHECK(augment_clip(raw, id, v).frames == raw.frames);
}

TEST_CASE("draws stay inside their ranges") {
  AugmentParams p;
  for (std::uint64_t s = 0; s < 50; ++s) {
    p.seed = s;
    for (std::size_t v = 0; v < p.versions; ++v) {
      const auto d = draw_augmentation(p, v, 64);
      CHECK(d.brightness >= 0.4);
      CHECK(d.brightness <= 1.6);
      CHECK(d.contrast >= 0.4);
      CHECK(d.saturation <= 1.6);
      CHECK(std::abs(d.hue) <= 0.2);
      CHECK(std::abs(d.angle_degrees) <= 15.0);
      CHECK(d.dropped.size() <= 8);
      CHECK(std::is_sorted(d.dropped.begin(), d.dropped.end()));
      CHECK(std::adjacent_find(d.dropped.begin(), d.dropped.end()) == d.dropped.end());
    }
  }
}

TEST_CASE("frame dropping keeps at least 56 of 64 frames") {
  const Clip pre = preprocess_clip(random_clip(64, 8, 8, 5), {64, 8});
  AugmentParams p;
  std::size_t min_kept = 64;
  bool any_drop = false;
  for (std::uint64_t s = 0; s < 20; ++s) {
    p.seed = s;
    for (std::size_t v = 0; v < p.versions; ++v) {
      const Clip out = augment_clip(pre, p, v);
      min_kept = std::min(min_kept, out.frame_count());
      any_drop = any_drop || out.frame_count() < 64;
    }
  }
  CHECK(min_kept >= 56);
  CHECK(any_drop);
}

TEST_CASE("dropped frames are exactly the drawn ones") {
  Clip raw;
  raw.frames = Tensor({3, 16, 2, 2});
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t f = 0; f < 16; ++f)
      for (std::size_t i = 0; i < 4; ++i) raw.frames[(c * 16 + f) * 4 + i] = static_cast<float>(f);
  const AugmentParams p = only(&AugmentParams::max_drop_fraction, 1.0 / 8.0);
  for (std::size_t v = 0; v < 5; ++v) {
    const auto d = draw_augmentation(p, v, 16);
    const Clip out = augment_clip(raw, p, v);
    REQUIRE(out.frame_count() == 16 - d.dropped.size());
    std::vector<float> kept;
    for (std::size_t f = 0; f < out.frame_count(); ++f) kept.push_back(out.frames.at({0, f, 0, 0}));
    for (std::size_t dropped : d.dropped)
      CHECK(std::find(kept.begin(), kept.end(), static_cast<float>(dropped)) == kept.end());
  }
}

TEST_CASE("brightness scales and clamps in the unit range") {
  const Clip raw = constant_clip(2, 3, 3, 100, 200, 250);
  const AugmentParams p = only(&AugmentParams::brightness, 0.6);
  const auto d = draw_augmentation(p, 0, 2);
  const Clip out = augment_clip(raw, p, 0);
  auto expect = [&](float v) {
    return static_cast<float>(std::clamp(v / 255.0 * d.brightness, 0.0, 1.0)) * 255.0f;
  };
  CHECK(out.frames.at({0, 1, 2, 2}) == doctest::Approx(expect(100)).epsilon(1e-6));
  CHECK(out.frames.at({1, 0, 0, 1}) == doctest::Approx(expect(200)).epsilon(1e-6));
  CHECK(out.frames.at({2, 0, 1, 0}) == doctest::Approx(expect(250)).epsilon(1e-6));
}

TEST_CASE("saturation and hue leave gray pixels gray") {
  const Clip gray = constant_clip(2, 4, 4, 128, 128, 128);
  for (auto field : {&AugmentParams::saturation, &AugmentParams::hue}) {
    const AugmentParams p = only(field, field == &AugmentParams::hue ? 0.2 : 0.6);
    const Clip out = augment_clip(gray, p, 3);
    for (float v : out.frames.values()) CHECK(v == doctest::Approx(128.0f).epsilon(1e-5));
  }
}

TEST_CASE("saturation of zero would give luma; factor draws move toward it") {
  const Clip raw = constant_clip(1, 2, 2, 255, 0, 0);
  const AugmentParams p = only(&AugmentParams::saturation, 0.6);
  const auto d = draw_augmentation(p, 1, 1);
  const Clip out = augment_clip(raw, p, 1);
  const double luma = 0.299;
  const double r = std::clamp((1.0 - luma) * d.saturation + luma, 0.0, 1.0) * 255.0;
  const double g = std::clamp((0.0 - luma) * d.saturation + luma, 0.0, 1.0) * 255.0;
  CHECK(out.frames.at({0, 0, 0, 0}) == doctest::Approx(r).epsilon(1e-5));
  CHECK(out.frames.at({1, 0, 0, 0}) == doctest::Approx(g).epsilon(1e-5));
}

TEST_CASE("rotation keeps the centre pixel and blackens corners") {
  const Clip raw = constant_clip(3, 9, 9, 200, 100, 50);
  const AugmentParams p = only(&AugmentParams::rotation_degrees, 15.0);
  const auto d = draw_augmentation(p, 0, 3);
  REQUIRE(d.angle_degrees != 0.0);
  const Clip out = augment_clip(raw, p, 0);
  CHECK(out.frames.at({0, 1, 4, 4}) == doctest::Approx(200.0f));
  CHECK(out.frames.at({2, 2, 4, 4}) == doctest::Approx(50.0f));
  for (std::size_t c = 0; c < 3; ++c) {
    CHECK(out.frames.at({c, 0, 0, 0}) == 0.0f);
    CHECK(out.frames.at({c, 0, 8, 8}) == 0.0f);
  }
  Clip norm = preprocess_clip(raw, {3, 9});
  const Clip rotated = augment_clip(norm, p, 0);
  CHECK(rotated.frames.at({0, 0, 0, 8}) == -1.0f);
}

TEST_CASE("training clip preparation supports both orders") {
  const Clip raw = random_clip(20, 24, 18, 6);
  AugmentParams p;
  p.seed = 5;
  const PreprocessConfig cfg{16, 16};
  const Clip before = prepare_training_clip(raw, p, 0, AugmentOrder::before_preprocess, cfg);
  const Clip after = prepare_training_clip(raw, p, 0, AugmentOrder::after_preprocess, cfg);
  CHECK(before.frames.shape() == Shape{3, 16, 16, 16});
  CHECK(after.channels() == 3);
  CHECK(after.frame_count() >= 14);
  CHECK(after.width() == 16);
  CHECK(before.normalized);
  CHECK(after.normalized);
}

TEST_CASE("augmentation parameter validation") {
  AugmentParams p;
  CHECK(code_of([&] { draw_augmentation(p, 5, 10); }) == Errc::invalid_argument);
  p.max_drop_fraction = 0.2;
  CHECK(code_of([&] { draw_augmentation(p, 0, 10); }) == Errc::invalid_argument);
  p = AugmentParams{};
  p.hue = -0.1;
  CHECK(code_of([&] { p.validate(); }) == Errc::invalid_argument);
}
