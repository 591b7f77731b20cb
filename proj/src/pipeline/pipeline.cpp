// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "signvoice/pipeline/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>

#include "signvoice/core/error.hpp"
#include "signvoice/dsp/stft.hpp"

namespace signvoice {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::size_t per_sign_samples(const PipelineConfig& config) {
  return istft_length(config.generator.output_frames, StftConfig{config.n_fft, config.hop});
}

std::size_t gap_samples(const PipelineConfig& config) {
  if (!(config.silence_gap_ms >= 0.0))
    throw Error(Errc::invalid_argument, "silence gap must be >= 0 ms");
  return static_cast<std::size_t>(std::llround(config.silence_gap_ms * config.sample_rate / 1000.0));
}

NmsParams nms_params(const PipelineConfig& config) {
  return {config.window_size, config.hop_length, config.overlap, config.confidence_threshold};
}

nlohmann::json PipelineRun::detections_json(const GlossVocab& vocab) const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& d : detections) {
    const std::string gloss =
        d.predicted_class < vocab.size() ? vocab.label(d.predicted_class) : std::string();
    out.push_back({{"emitted_at", d.emitted_at},
                   {"predicted_class", d.predicted_class},
                   {"gloss", gloss},
                   {"max_confidence", d.max_confidence()}});
  }
  return out;
}

nlohmann::json PipelineRun::timing_json() const {
  return {{"frames", timing.frames},
          {"windows", timing.windows},
          {"extractions", timing.extractions},
          {"wall_seconds", timing.wall_seconds},
          {"fps", timing.fps},
          {"windows_per_second", timing.windows_per_second},
          {"detections", detections.size()},
          {"audio_samples", audio.size()}};
}

StreamingPipeline::StreamingPipeline(PipelineConfig config, FeatureExtractor& extractor,
                                     const SpectrogramGenerator<float>& generator)
    : config_(std::move(config)),
      extractor_(extractor),
      generator_(generator),
      nms_((config_.validate(), nms_params(config_))) {
  if (generator_.params().input_dim != config_.feature_dim ||
      generator_.params().output_bins != config_.generator.output_bins ||
      generator_.params().output_frames != config_.generator.output_frames)
    throw Error(Errc::shape_mismatch, "generator weights do not match the pipeline config");
  gap_samples(config_);
  run_.config = config_;
  run_.audio.sample_rate = config_.sample_rate;
  extraction_base_ = extractor_.calls();
}

void StreamingPipeline::emit(Detection d) {
  if (d.feature.size() != config_.feature_dim)
    throw Error(Errc::shape_mismatch, "detection feature has " + std::to_string(d.feature.size()) +
                                          " values, generator expects " +
                                          std::to_string(config_.feature_dim));
  const ComplexSpectrogram spec =
      generate_spectrogram(generator_, d.feature, config_.sample_rate, config_.n_fft, config_.hop);
  const AudioBuffer clip = istft(spec, StftConfig{config_.n_fft, config_.hop});
  auto& out = run_.audio.samples;
  if (!run_.detections.empty()) out.insert(out.end(), gap_samples(config_), 0.0f);
  out.insert(out.end(), clip.samples.begin(), clip.samples.end());
  run_.detections.push_back(std::move(d));
}

void StreamingPipeline::push(Frame frame) {
  const auto start = Clock::now();
  ++frames_;
  if (auto d = nms_.push(std::move(frame), extractor_)) emit(std::move(*d));
  busy_seconds_ += seconds_since(start);
}

void StreamingPipeline::push(std::span<const Frame> frames) {
  const auto start = Clock::now();
  for (const Frame& f : frames) {
    ++frames_;
    if (auto d = nms_.push(f, extractor_)) emit(std::move(*d));
  }
  busy_seconds_ += seconds_since(start);
}

PipelineRun StreamingPipeline::finish() {
  const auto start = Clock::now();
  const std::size_t windows = nms_.position();
  if (auto d = nms_.flush()) emit(std::move(*d));
  busy_seconds_ += seconds_since(start);

  PipelineRun out = std::move(run_);
  out.timing.frames = frames_;
  out.timing.windows = windows;
  out.timing.extractions = extractor_.calls() - extraction_base_;
  out.timing.wall_seconds = busy_seconds_;
  if (busy_seconds_ > 0.0) {
    out.timing.fps = static_cast<double>(frames_) / busy_seconds_;
    out.timing.windows_per_second = static_cast<double>(windows) / busy_seconds_;
  }

  run_ = PipelineRun{};
  run_.config = config_;
  run_.audio.sample_rate = config_.sample_rate;
  frames_ = 0;
  busy_seconds_ = 0.0;
  extraction_base_ = extractor_.calls();
  return out;
}

PipelineRun run_stream(std::span<const Frame> frames, FeatureExtractor& extractor,
                       const SpectrogramGenerator<float>& generator,
                       const PipelineConfig& config) {
  StreamingPipeline pipeline(config, extractor, generator);
  pipeline.push(frames);
  return pipeline.finish();
}

bool same_output(const PipelineRun& a, const PipelineRun& b) {
  if (a.detections.size() != b.detections.size()) return false;
  for (std::size_t i = 0; i < a.detections.size(); ++i) {
    const Detection &x = a.detections[i], &y = b.detections[i];
    if (x.emitted_at != y.emitted_at || x.decided_at != y.decided_at ||
        x.predicted_class != y.predicted_class || !(x.feature == y.feature) ||
        !(x.confidence == y.confidence))
      return false;
  }
  return a.audio.sample_rate == b.audio.sample_rate && a.audio.size() == b.audio.size() &&
         std::memcmp(a.audio.samples.data(), b.audio.samples.data(),
                     a.audio.size() * sizeof(float)) == 0;
}

nlohmann::json BenchReport::to_json() const {
  return {{"stream_length", stream_length},
          {"windows", windows},
          {"detections", detections},
          {"runs", run_fps.size()},
          {"run_fps", run_fps},
          {"median_fps", median_fps},
          {"min_fps", min_fps},
          {"max_fps", max_fps},
          {"median_windows_per_second", median_windows_per_second},
          {"reference_fps", kReferenceFps},
          {"reference_note", "reference figure measured with a real 3D-CNN extractor; annotation only"}};
}

BenchReport benchmark_throughput(std::size_t stream_length, const PipelineConfig& config,
                                 std::size_t runs) {
  config.validate();
  if (stream_length < config.window_size)
    throw Error(Errc::too_short, "benchmark stream must hold at least one window");
  runs = std::max<std::size_t>(runs, 3);
  const auto generator = SpectrogramGenerator<float>::random(config.generator, config.seed);
  const std::vector<Frame> frames(stream_length, Tensor({1}, 0.0f));

  BenchReport report;
  report.stream_length = stream_length;
  std::vector<double> wps;
  for (std::size_t r = 0; r < runs; ++r) {
    MockExtractor extractor(config.seed, config.feature_dim, config.class_count,
                            config.window_size);
    const auto start = Clock::now();
    const PipelineRun run = run_stream(frames, extractor, generator, config);
    const double wall = std::max(seconds_since(start), 1e-9);
    report.windows = run.timing.windows;
    report.detections = run.detections.size();
    report.run_fps.push_back(static_cast<double>(stream_length) / wall);
    wps.push_back(static_cast<double>(run.timing.windows) / wall);
  }
  report.median_fps = median(report.run_fps);
  report.min_fps = *std::min_element(report.run_fps.begin(), report.run_fps.end());
  report.max_fps = *std::max_element(report.run_fps.begin(), report.run_fps.end());
  report.median_windows_per_second = median(wps);
  return report;
}

}  // namespace signvoice
