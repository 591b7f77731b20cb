// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "signvoice/core/audio.hpp"
#include "signvoice/core/config.hpp"
#include "signvoice/core/vocab.hpp"
#include "signvoice/nms/temporal_nms.hpp"
#include "signvoice/specgen/generator.hpp"

namespace signvoice {

struct PipelineTiming {
  std::size_t frames = 0;
  std::size_t windows = 0;      // window positions reached (t at end of stream)
  std::size_t extractions = 0;  // extractor calls
  double wall_seconds = 0.0;
  double fps = 0.0;
  double windows_per_second = 0.0;
};

struct PipelineRun {
  PipelineConfig config;
  std::vector<Detection> detections;  // emission order
  AudioBuffer audio;
  PipelineTiming timing;

  // [{emitted_at, predicted_class, gloss, max_confidence}, ...]
  nlohmann::json detections_json(const GlossVocab& vocab) const;
  nlohmann::json timing_json() const;
};

// Samples of audio per detection: (frames - 1) * hop + n_fft.
std::size_t per_sign_samples(const PipelineConfig& config);
// round(silence_gap_ms * sample_rate / 1000).
std::size_t gap_samples(const PipelineConfig& config);

NmsParams nms_params(const PipelineConfig& config);

// Frame source -> temporal NMS -> generator (eval mode) -> ISTFT. Audio for
// each detection is appended in emission order, separated by the configured
// silence gap. Extractor errors propagate and abort the run.
class StreamingPipeline {
 public:
  StreamingPipeline(PipelineConfig config, FeatureExtractor& extractor,
                    const SpectrogramGenerator<float>& generator);

  void push(Frame frame);
  void push(std::span<const Frame> frames);

  // Flushes the detector and returns the run. The pipeline is reset and can
  // take a new stream afterwards.
  PipelineRun finish();

  const std::vector<Detection>& detections() const noexcept { return run_.detections; }

 private:
  void emit(Detection d);

  PipelineConfig config_;
  FeatureExtractor& extractor_;
  const SpectrogramGenerator<float>& generator_;
  TemporalNms nms_;
  PipelineRun run_;
  std::size_t frames_ = 0;
  std::size_t extraction_base_ = 0;
  double busy_seconds_ = 0.0;
};

PipelineRun run_stream(std::span<const Frame> frames, FeatureExtractor& extractor,
                       const SpectrogramGenerator<float>& generator,
                       const PipelineConfig& config);

// Detections and audio samples bit-equal; timing ignored.
bool same_output(const PipelineRun& a, const PipelineRun& b);

struct BenchReport {
  std::size_t stream_length = 0;
  std::size_t windows = 0;
  std::size_t detections = 0;
  std::vector<double> run_fps;
  double median_fps = 0.0;
  double min_fps = 0.0;
  double max_fps = 0.0;
  double median_windows_per_second = 0.0;
  static constexpr double kReferenceFps = 22.0;  // reported figure with the real extractor

  nlohmann::json to_json() const;
};

// Whole pipeline on a synthetic stream with a MockExtractor and a random
// generator from config.generator. runs is clamped to at least 3.
BenchReport benchmark_throughput(std::size_t stream_length, const PipelineConfig& config,
                                 std::size_t runs = 3);

}  // namespace signvoice
