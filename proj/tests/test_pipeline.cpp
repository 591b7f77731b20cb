// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <doctest.h>

#include <random>

#include "signvoice/core/error.hpp"
#include "signvoice/dsp/stft.hpp"
#include "signvoice/pipeline/pipeline.hpp"

using namespace signvoice;

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

std::vector<Frame> blank_frames(std::size_t n) {
  std::vector<Frame> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(Tensor({1}, static_cast<float>(i)));
  return out;
}

// Every window position 1..positions gets a low-confidence entry except the
// listed peaks, which score 0.95 on class peak_index % classes.
std::map<std::size_t, Extraction> peak_table(std::size_t positions,
                                             const std::vector<std::size_t>& peaks,
                                             const PipelineConfig& cfg, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> feat(-1.0f, 1.0f), low(0.0f, 0.3f);
  std::map<std::size_t, Extraction> table;
  for (std::size_t t = 1; t <= positions; ++t) {
    Extraction e;
    e.feature.values.resize(cfg.feature_dim);
    for (auto& v : e.feature.values) v = feat(rng);
    e.confidence.values.resize(cfg.class_count);
    for (auto& v : e.confidence.values) v = low(rng);
    table[t] = std::move(e);
  }
  for (std::size_t i = 0; i < peaks.size(); ++i)
    table[peaks[i]].confidence.values[(i + 3) % cfg.class_count] = 0.95f;
  return table;
}

struct Fixture {
  PipelineConfig cfg = PipelineConfig::toy();
  SpectrogramGenerator<float> generator = SpectrogramGenerator<float>::random(cfg.generator, 17);
  std::size_t positions = 260;
  std::vector<std::size_t> peaks{10, 100, 190};
  std::vector<Frame> frames = blank_frames(positions + cfg.window_size - 1);
  std::map<std::size_t, Extraction> table = peak_table(positions, peaks, cfg, 5);
};

}  // namespace

TEST_CASE("default pipeline config uses w=50, hop 3, threshold 0.7") {
  const PipelineConfig def;
  CHECK(def.window_size == 50);
  CHECK(def.hop_length == 3);
  CHECK(def.confidence_threshold == doctest::Approx(0.7f));
  PipelineConfig parsed;
  from_json(nlohmann::json::object(), parsed);
  CHECK(parsed.window_size == 50);
  CHECK(parsed.hop_length == 3);
  CHECK(parsed.confidence_threshold == 0.7f);
  const NmsParams p = nms_params(parsed);
  CHECK(p.window_size == 50);
  CHECK(p.threshold == 0.7f);
}

TEST_CASE("three well-separated signs give three detections and matching audio") {
  Fixture fx;
  IndexedExtractor extractor(fx.table, fx.cfg.window_size);
  const PipelineRun run = run_stream(fx.frames, extractor, fx.generator, fx.cfg);
  REQUIRE(run.detections.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(run.detections[i].emitted_at == fx.peaks[i]);
    CHECK(run.detections[i].predicted_class == (i + 3) % fx.cfg.class_count);
  }
  const std::size_t per_sign = (fx.cfg.generator.output_frames - 1) * fx.cfg.hop + fx.cfg.n_fft;
  CHECK(per_sign_samples(fx.cfg) == per_sign);
  CHECK(run.audio.size() == 3 * per_sign);
  CHECK(run.audio.sample_rate == fx.cfg.sample_rate);
  CHECK(run.timing.frames == fx.frames.size());
  CHECK(run.timing.windows == fx.positions);
}

TEST_CASE("per-sign audio is the ISTFT of the generated spectrogram") {
  Fixture fx;
  IndexedExtractor extractor(fx.table, fx.cfg.window_size);
  const PipelineRun run = run_stream(fx.frames, extractor, fx.generator, fx.cfg);
  REQUIRE(run.detections.size() == 3);
  const std::size_t per_sign = per_sign_samples(fx.cfg);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto spec = generate_spectrogram(fx.generator, run.detections[i].feature,
                                           fx.cfg.sample_rate, fx.cfg.n_fft, fx.cfg.hop);
    const auto audio = istft(spec, StftConfig{fx.cfg.n_fft, fx.cfg.hop});
    REQUIRE(audio.size() == per_sign);
    for (std::size_t s = 0; s < per_sign; ++s)
      REQUIRE(run.audio.samples[i * per_sign + s] == audio.samples[s]);
  }
}

TEST_CASE("streaming and batch feeding give bit-identical runs") {
  Fixture fx;
  IndexedExtractor batch_ex(fx.table, fx.cfg.window_size);
  const PipelineRun batch = run_stream(fx.frames, batch_ex, fx.generator, fx.cfg);

  IndexedExtractor stream_ex(fx.table, fx.cfg.window_size);
  StreamingPipeline pipeline(fx.cfg, stream_ex, fx.generator);
  std::size_t emitted_mid_stream = 0;
  for (const Frame& f : fx.frames) {
    pipeline.push(f);
    emitted_mid_stream = pipeline.detections().size();
  }
  const PipelineRun streamed = pipeline.finish();
  CHECK(emitted_mid_stream >= 2);
  CHECK(same_output(batch, streamed));
  CHECK(batch.timing.extractions == streamed.timing.extractions);
}

TEST_CASE("the same run repeated after finish is identical") {
  Fixture fx;
  IndexedExtractor extractor(fx.table, fx.cfg.window_size);
  StreamingPipeline pipeline(fx.cfg, extractor, fx.generator);
  pipeline.push(fx.frames);
  const PipelineRun a = pipeline.finish();
  pipeline.push(fx.frames);
  const PipelineRun b = pipeline.finish();
  CHECK(same_output(a, b));
  CHECK(a.timing.extractions == b.timing.extractions);
}

TEST_CASE("a pending best is released at end of stream") {
  Fixture fx;
  fx.peaks = {10, 100, fx.positions - 4};
  fx.table = peak_table(fx.positions, fx.peaks, fx.cfg, 5);
  IndexedExtractor extractor(fx.table, fx.cfg.window_size);
  const PipelineRun run = run_stream(fx.frames, extractor, fx.generator, fx.cfg);
  REQUIRE(run.detections.size() == 3);
  CHECK(run.detections[2].emitted_at == fx.positions - 4);
  CHECK(run.detections[2].decided_at == 0);
}

TEST_CASE("no confident window gives no detections and empty audio") {
  Fixture fx;
  fx.table = peak_table(fx.positions, {}, fx.cfg, 6);
  IndexedExtractor extractor(fx.table, fx.cfg.window_size);
  const PipelineRun run = run_stream(fx.frames, extractor, fx.generator, fx.cfg);
  CHECK(run.detections.empty());
  CHECK(run.audio.samples.empty());
  CHECK(run.detections_json(GlossVocab::placeholder(10)).empty());
}

TEST_CASE("silence gap is inserted between signs only") {
  Fixture fx;
  fx.cfg.silence_gap_ms = 10.0;
  IndexedExtractor extractor(fx.table, fx.cfg.window_size);
  const PipelineRun run = run_stream(fx.frames, extractor, fx.generator, fx.cfg);
  const std::size_t gap = gap_samples(fx.cfg);
  CHECK(gap == 221);
  CHECK(run.audio.size() == 3 * per_sign_samples(fx.cfg) + 2 * gap);
  const std::size_t first_end = per_sign_samples(fx.cfg);
  for (std::size_t i = 0; i < gap; ++i) REQUIRE(run.audio.samples[first_end + i] == 0.0f);
}

TEST_CASE("detections JSON carries the documented fields") {
  Fixture fx;
  IndexedExtractor extractor(fx.table, fx.cfg.window_size);
  const PipelineRun run = run_stream(fx.frames, extractor, fx.generator, fx.cfg);
  const auto j = run.detections_json(GlossVocab::placeholder(fx.cfg.class_count));
  REQUIRE(j.size() == 3);
  CHECK(j[0]["emitted_at"] == 10);
  CHECK(j[0]["predicted_class"] == 3);
  CHECK(j[0]["gloss"] == "CLASS_3");
  CHECK(j[0]["max_confidence"].get<double>() == doctest::Approx(0.95));
  CHECK(run.timing_json()["detections"] == 3);
}

TEST_CASE("extractor misses abort the run") {
  Fixture fx;
  auto table = fx.table;
  table.erase(121);
  IndexedExtractor extractor(table, fx.cfg.window_size);
  CHECK(code_of([&] { run_stream(fx.frames, extractor, fx.generator, fx.cfg); }) ==
        Errc::missing_index);
}

TEST_CASE("mismatched feature sizes and weights are rejected") {
  Fixture fx;
  fx.table[10].feature.values.pop_back();
  IndexedExtractor extractor(fx.table, fx.cfg.window_size);
  CHECK(code_of([&] { run_stream(fx.frames, extractor, fx.generator, fx.cfg); }) ==
        Errc::shape_mismatch);
  const auto tiny = SpectrogramGenerator<float>::random(GeneratorParams::tiny(), 1);
  CHECK(code_of([&] { StreamingPipeline(fx.cfg, extractor, tiny); }) == Errc::shape_mismatch);
}

TEST_CASE("benchmark report schema and window count") {
  const PipelineConfig cfg = PipelineConfig::toy();
  const BenchReport r = benchmark_throughput(300, cfg, 3);
  CHECK(r.run_fps.size() == 3);
  CHECK(r.windows == 300 - cfg.window_size + 1);
  CHECK(r.min_fps <= r.median_fps);
  CHECK(r.median_fps <= r.max_fps);
  CHECK(r.median_windows_per_second > 0.0);
  const auto j = r.to_json();
  for (const char* key : {"median_fps", "min_fps", "max_fps", "windows", "reference_fps"})
    CHECK(j.contains(key));
  CHECK(j["reference_fps"] == 22.0);
  CHECK(code_of([&] { benchmark_throughput(10, cfg); }) == Errc::too_short);
}

TEST_CASE("benchmark throughput is steady as the stream doubles") {
  const PipelineConfig cfg = PipelineConfig::toy();
  benchmark_throughput(1000, cfg, 3);
  const BenchReport a = benchmark_throughput(2000, cfg, 5);
  const BenchReport b = benchmark_throughput(4000, cfg, 5);
  CHECK(std::abs(b.median_fps - a.median_fps) / a.median_fps < 0.2);
}
