// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "signvoice/core/error.hpp"
#include "signvoice/extractor/classifier.hpp"
#include "signvoice/extractor/extractor.hpp"
#include "test_util.hpp"

using namespace signvoice;

namespace {

FrameWindow constant_window(std::size_t frames, float value, Shape shape = {3, 4, 4}) {
  return FrameWindow(frames, Tensor(shape, value));
}

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return Errc::io;
}

}  // namespace

TEST_CASE("mock extractor is deterministic per index") {
  MockExtractor mock(7, 16, 5);
  const auto w = constant_window(4, 0.0f);
  const auto a = mock.extract(w, 3);
  const auto b = mock.extract(w, 3);
  CHECK(a == b);
  CHECK(a.feature.size() == 16);
  CHECK(a.confidence.size() == 5);
  CHECK_FALSE(a == mock.extract(w, 4));
  for (float v : a.confidence.values) CHECK((v >= 0.0f && v < 1.0f));
  for (float v : a.feature.values) CHECK((v >= -1.0f && v < 1.0f));
  CHECK_FALSE(a == MockExtractor(8, 16, 5).extract(w, 3));
}

TEST_CASE("scripted extractor replays in order and then fails") {
  Extraction e0{{{1.0f}}, {{0.2f}}};
  Extraction e1{{{2.0f}}, {{0.9f}}};
  ScriptedExtractor s({e0, e1});
  const auto w = constant_window(2, 0.0f);
  CHECK(s.extract(w, 10) == e0);
  CHECK(s.extract(w, 99) == e1);
  CHECK(code_of([&] { s.extract(w, 1); }) == Errc::missing_index);
}

TEST_CASE("window length is enforced") {
  MockExtractor mock(1, 4, 2, 8);
  CHECK(code_of([&] { mock.extract(constant_window(7, 0.0f), 1); }) == Errc::wrong_window_length);
  CHECK_NOTHROW(mock.extract(constant_window(8, 0.0f), 1));
}

TEST_CASE("indexed and file-backed extractors look up by position") {
  std::map<std::size_t, Extraction> table;
  table[1] = {{{0.5f, 0.25f}}, {{0.1f, 0.8f}}};
  table[2] = {{{-1.0f, 3.0f}}, {{0.6f, 0.3f}}};
  IndexedExtractor indexed(table);
  const auto w = constant_window(1, 0.0f);
  CHECK(indexed.extract(w, 2) == table[2]);
  CHECK(code_of([&] { indexed.extract(w, 3); }) == Errc::missing_index);

  signvoice::testing::TempDir dir;
  for (const auto& [i, e] : table) FileBackedExtractor::write(dir.path(), i, e);
  FileBackedExtractor files(dir.path());
  CHECK(files.available_windows() == 2);
  CHECK(files.extract(w, 1) == table[1]);
  CHECK(files.extract(w, 1) == files.extract(w, 1));
  CHECK(code_of([&] { files.extract(w, 5); }) == Errc::missing_index);
  CHECK(FileBackedExtractor::feature_path(dir.path(), 12).filename() == "win_000012.phi.isvt");
}

TEST_CASE("cross entropy reference values") {
  const std::vector<double> equal{0.3, 0.3, 0.3, 0.3};
  CHECK(cross_entropy<double>(equal, 2) == doctest::Approx(std::log(4.0)).epsilon(1e-12));
  CHECK(cross_entropy<double>(equal, 2) == doctest::Approx(1.3863).epsilon(1e-4));

  // -log(sigmoid(20)) = log1p(exp(-20))
  const std::vector<double> sharp{10.0, -10.0};
  CHECK(cross_entropy<double>(sharp, 0) == doctest::Approx(2.0611536181902037e-9).epsilon(1e-9));
  const std::vector<float> sharp_f{10.0f, -10.0f};
  CHECK(cross_entropy<float>(sharp_f, 0) == doctest::Approx(2.0611536e-9).epsilon(1e-6));

  const std::vector<double> huge{1000.0, 0.0, -5.0};
  CHECK(cross_entropy<double>(huge, 0) < 1e-300);
  CHECK(cross_entropy<double>(huge, 0) >= 0.0);

  CHECK(code_of([&] { cross_entropy<double>(equal, 4); }) == Errc::label_out_of_range);
}

TEST_CASE("cross entropy gradient matches central differences") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> logits(6);
    for (auto& v : logits) v = 2.0 * normal(rng);
    const std::size_t label = rng() % logits.size();
    const auto g = cross_entropy_grad<double>(logits, label);
    for (std::size_t j = 0; j < logits.size(); ++j) {
      auto up = logits, down = logits;
      up[j] += 1e-5;
      down[j] -= 1e-5;
      const double numeric =
          (cross_entropy<double>(up, label) - cross_entropy<double>(down, label)) / 2e-5;
      const double rel = std::abs(g[j] - numeric) / std::max({std::abs(g[j]), std::abs(numeric), 1e-12});
      CHECK(rel < 1e-6);
    }
  }
}

TEST_CASE("toy classifier with zero weights is uniform") {
  ToyClassifierModel<float> zero({12, 8, 5});
  ToyClassifierExtractor ex(zero, 2);
  const auto e = ex.extract(constant_window(4, 0.3f), 1);
  for (float c : e.confidence.values) CHECK(c == doctest::Approx(0.2f));
  for (float v : e.feature.values) CHECK(v == 0.0f);
}

TEST_CASE("toy classifier confidences form a distribution") {
  auto model = ToyClassifierModel<float>::random({12, 16, 7}, 42);
  ToyClassifierExtractor ex(model, 2);
  std::mt19937 rng(1);
  std::uniform_real_distribution<float> u(-1, 1);
  for (int trial = 0; trial < 10; ++trial) {
    FrameWindow w;
    for (int f = 0; f < 3; ++f) {
      Tensor frame({3, 6, 5});
      for (auto& v : frame.values()) v = u(rng);
      w.push_back(frame);
    }
    const auto e = ex.extract(w, 1);
    const double sum = std::accumulate(e.confidence.values.begin(), e.confidence.values.end(), 0.0);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
    for (float c : e.confidence.values) CHECK((c > 0.0f && c < 1.0f));
    CHECK(e == ex.extract(w, 1));
  }
}

TEST_CASE("pooled descriptor averages frames and grid cells") {
  FrameWindow w;
  Tensor a({1, 2, 2}, {1, 2, 3, 4});
  Tensor b({1, 2, 2}, {3, 4, 5, 6});
  w.push_back(a);
  w.push_back(b);
  const auto d1 = pooled_descriptor(w, 1);
  REQUIRE(d1.size() == 1);
  CHECK(d1[0] == doctest::Approx(3.5));
  const auto d2 = pooled_descriptor(w, 2);
  REQUIRE(d2.size() == 4);
  CHECK(d2[0] == doctest::Approx(2.0));
  CHECK(d2[3] == doctest::Approx(5.0));
}
