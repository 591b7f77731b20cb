// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <doctest.h>

#include <random>

#include "nms_reference.hpp"
#include "signvoice/core/error.hpp"
#include "signvoice/nms/temporal_nms.hpp"

using namespace signvoice;
using signvoice::testing::random_stream;
using signvoice::testing::reference_nms;

namespace {

Frame dummy_frame(std::size_t i) { return Tensor({1}, {static_cast<float>(i)}); }

// Table with a single class whose score at position t is scores[t-1].
std::map<std::size_t, Extraction> score_table(const std::vector<float>& scores) {
  std::map<std::size_t, Extraction> table;
  for (std::size_t t = 1; t <= scores.size(); ++t)
    table[t] = {{{static_cast<float>(t)}}, {{scores[t - 1]}}};
  return table;
}

struct Run {
  std::vector<Detection> emitted;
  std::optional<Detection> flushed;
  std::size_t calls = 0;
};

Run run_nms(const NmsParams& p, std::size_t frames, const std::map<std::size_t, Extraction>& table) {
  IndexedExtractor ex(table, p.window_size);
  TemporalNms nms(p);
  Run r;
  for (std::size_t i = 0; i < frames; ++i)
    if (auto d = nms.push(dummy_frame(i), ex)) r.emitted.push_back(*d);
  r.flushed = nms.flush();
  r.calls = ex.calls();
  return r;
}

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(TemporalNms({4, 1, 4, 0.5f}), Error);
  CHECK_THROWS_AS(TemporalNms({4, 0, 1, 0.5f}), Error);
  CHECK_THROWS_AS(TemporalNms({4, 1, 1, 1.5f}), Error);
  CHECK_NOTHROW(TemporalNms({4, 1, 0, 0.5f}));
}

TEST_CASE("short streams never extract") {
  const NmsParams p{8, 1, 2, 0.5f};
  const auto r = run_nms(p, 7, score_table({}));
  CHECK(r.calls == 0);
  CHECK(r.emitted.empty());
  CHECK_FALSE(r.flushed.has_value());
}

TEST_CASE("scores below threshold never emit") {
  const NmsParams p{4, 1, 2, 0.5f};
  const auto r = run_nms(p, 30, score_table(std::vector<float>(27, 0.49f)));
  CHECK(r.emitted.empty());
  CHECK_FALSE(r.flushed.has_value());
  CHECK(r.calls == 27);
}

TEST_CASE("worked example: release at t=4 and adopt the current window") {
  // w=4, h=1, o=2, theta=0.5; max confidences 0.9, 0.3, 0.4, 0.6 at t=1..4.
  const NmsParams p{4, 1, 2, 0.5f};
  IndexedExtractor ex(score_table({0.9f, 0.3f, 0.4f, 0.6f}), 4);
  TemporalNms nms(p);
  for (std::size_t i = 0; i < 3; ++i) CHECK_FALSE(nms.push(dummy_frame(i), ex));
  CHECK(nms.position() == 0);
  CHECK_FALSE(nms.push(dummy_frame(3), ex));  // t=1
  CHECK(nms.best_position() == 1u);
  CHECK_FALSE(nms.push(dummy_frame(4), ex));  // t=2
  CHECK_FALSE(nms.push(dummy_frame(5), ex));  // t=3
  CHECK(nms.best_position() == 1u);
  const auto d = nms.push(dummy_frame(6), ex);  // t=4: 4-1 = 3 > 2
  REQUIRE(d.has_value());
  CHECK(d->emitted_at == 1);
  CHECK(d->decided_at == 4);
  CHECK(d->feature.values == std::vector<float>{1.0f});
  CHECK(d->max_confidence() == doctest::Approx(0.9f));
  CHECK(nms.best_position() == 4u);

  const auto tail = nms.flush();
  REQUIRE(tail.has_value());
  CHECK(tail->emitted_at == 4);
  CHECK_FALSE(nms.flush().has_value());
}

TEST_CASE("threshold comparison is >= at t=1 and > afterwards") {
  const NmsParams p{2, 1, 1, 0.5f};
  SUBCASE("equal at the first position is kept") {
    const auto r = run_nms(p, 2, score_table({0.5f}));
    REQUIRE(r.flushed.has_value());
    CHECK(r.flushed->emitted_at == 1);
  }
  SUBCASE("equal later is ignored") {
    const auto r = run_nms(p, 3, score_table({0.1f, 0.5f}));
    CHECK_FALSE(r.flushed.has_value());
  }
}

TEST_CASE("ties keep the earlier window") {
  const NmsParams p{10, 1, 2, 0.5f};
  const auto r = run_nms(p, 12, score_table({0.7f, 0.8f, 0.8f}));
  REQUIRE(r.flushed.has_value());
  CHECK(r.flushed->emitted_at == 2);
}

TEST_CASE("flush semantics") {
  const NmsParams p{3, 1, 1, 0.5f};
  IndexedExtractor ex(score_table({0.95f}), 3);
  TemporalNms nms(p);
  for (std::size_t i = 0; i < 3; ++i) nms.push(dummy_frame(i), ex);
  auto d = nms.flush();
  REQUIRE(d.has_value());
  CHECK(d->emitted_at == 1);
  CHECK(d->decided_at == 0);
  CHECK_FALSE(nms.flush().has_value());
  CHECK(nms.position() == 0);
  CHECK(nms.buffered_frames() == 0);
}

TEST_CASE("hop skips positions but the separation test uses raw positions") {
  // w=6, o=3 -> release when t - t_best > 3. With h=2 evaluated positions are 1,3,5,7...
  const NmsParams p{6, 2, 3, 0.5f};
  std::vector<float> scores(12, 0.0f);
  scores[0] = 0.9f;   // t=1 best
  scores[1] = 0.99f;  // t=2 never evaluated
  scores[4] = 0.6f;   // t=5: 5-1 = 4 > 3 -> release t=1, adopt t=5
  const auto r = run_nms(p, 5 + 12, score_table(scores));
  // t=9: 9-5 = 4 > 3 -> release t=5; the 0.0 window at t=9 clears the best.
  REQUIRE(r.emitted.size() == 2);
  CHECK(r.emitted[0].emitted_at == 1);
  CHECK(r.emitted[0].decided_at == 5);
  CHECK(r.emitted[1].emitted_at == 5);
  CHECK(r.emitted[1].decided_at == 9);
  CHECK_FALSE(r.flushed.has_value());
}

TEST_CASE("extraction count is 1 + floor((F - w) / h)") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 300; ++trial) {
    auto s = random_stream(rng);
    const NmsParams p{s.w, s.h, s.o, s.theta};
    const auto r = run_nms(p, s.frames, s.table);
    const std::size_t expected = s.frames >= s.w ? 1 + (s.frames - s.w) / s.h : 0;
    CHECK(r.calls == expected);
  }
}

TEST_CASE("state machine matches the batch reference on random streams") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 2000; ++trial) {
    auto s = random_stream(rng);
    const NmsParams p{s.w, s.h, s.o, s.theta};
    const auto r = run_nms(p, s.frames, s.table);
    const auto ref = reference_nms(s.frames, long(s.w), long(s.h), long(s.o), s.theta, s.table);

    std::vector<Detection> all = r.emitted;
    if (r.flushed) all.push_back(*r.flushed);
    REQUIRE(all.size() == ref.emissions.size());
    for (std::size_t i = 0; i < all.size(); ++i) {
      CHECK(long(all[i].emitted_at) == ref.emissions[i].position);
      CHECK(all[i].feature.values == ref.emissions[i].phi);
      CHECK((i + 1 == all.size() && r.flushed.has_value()) == ref.emissions[i].from_flush);
    }
    CHECK(r.calls == ref.extracted_positions.size());
  }
}

TEST_CASE("separation, threshold and dominance invariants") {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 1000; ++trial) {
    auto s = random_stream(rng);
    const NmsParams p{s.w, s.h, s.o, s.theta};
    const auto r = run_nms(p, s.frames, s.table);
    for (std::size_t i = 0; i < r.emitted.size(); ++i) {
      CHECK(r.emitted[i].max_confidence() >= s.theta);
      if (i > 0) CHECK(r.emitted[i].emitted_at - r.emitted[i - 1].emitted_at > s.w - s.o);
    }
    // Dominance: a window evaluated after an emitted best but before its
    // release never scores strictly higher.
    for (const auto& d : r.emitted) {
      for (std::size_t t = d.emitted_at + 1; t < d.decided_at; ++t) {
        if ((t - 1) % s.h != 0) continue;
        CHECK(s.table.at(t).confidence.max() <= d.max_confidence());
      }
    }
  }
}
