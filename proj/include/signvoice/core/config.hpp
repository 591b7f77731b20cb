// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace signvoice {

// One transposed-convolution block of a generator branch:
// deconv -> instance norm -> ReLU -> dropout.
struct DeconvBlockSpec {
  std::size_t out_channels = 1;
  std::array<std::size_t, 2> kernel{1, 1};  // (freq, time)
  std::array<std::size_t, 2> stride{1, 1};
  std::array<std::size_t, 2> padding{0, 0};
};

// Architecture of the feature-to-spectrogram generator. The MLP output is
// reshaped to reshape_channels x reshape_height x reshape_width, passed
// through two identical deconvolution branches (real and imaginary), each
// ending in a 3x3 stride-1 pad-1 deconvolution down to one channel, and the
// result is center-cropped or zero-padded to output_bins x output_frames.
struct GeneratorParams {
  std::size_t input_dim = 2048;
  std::vector<std::size_t> mlp_dims{648, 1296, 2592, 5184};
  std::size_t reshape_channels = 64;
  std::size_t reshape_height = 9;
  std::size_t reshape_width = 9;
  std::vector<DeconvBlockSpec> blocks;
  float dropout = 0.1f;
  std::size_t output_bins = 1025;
  std::size_t output_frames = 100;

  // 2048 -> [648,1296,2592,5184] -> 64x9x9 -> 32 -> 16 -> 8 -> 1, natural
  // output 1125x108 cropped to 1025x100.
  static GeneratorParams full_scale();
  // n=32, output 33x10 (n_fft 64).
  static GeneratorParams toy();
  // n=8, output 9x4 (n_fft 16); used for gradient checks.
  static GeneratorParams tiny();

  // Throws Errc::invalid_argument when the invariants are violated.
  void validate() const;

  // Spatial size (height, width) produced by the deconvolution schedule
  // before the crop/pad step.
  std::array<std::size_t, 2> natural_output() const;
};

// Run configuration shared by the whole engine.
struct PipelineConfig {
  // temporal NMS
  std::size_t window_size = 50;
  std::size_t hop_length = 3;
  std::size_t overlap = 25;
  float confidence_threshold = 0.7f;
  // audio synthesis
  int n_fft = 2048;
  int hop = 512;
  int sample_rate = 22050;
  double silence_gap_ms = 0.0;
  // model dimensions
  std::size_t feature_dim = 2048;
  std::size_t class_count = 1500;
  GeneratorParams generator = GeneratorParams::full_scale();
  std::uint64_t seed = 0;

  // A configuration whose generator and STFT sizes are small enough for
  // tests and benchmarks: toy generator, n_fft 64, hop 16.
  static PipelineConfig toy();

  void validate() const;
};

void to_json(nlohmann::json& j, const DeconvBlockSpec& b);
void from_json(const nlohmann::json& j, DeconvBlockSpec& b);
void to_json(nlohmann::json& j, const GeneratorParams& p);
void from_json(const nlohmann::json& j, GeneratorParams& p);
void to_json(nlohmann::json& j, const PipelineConfig& c);
// Missing keys keep their defaults.
void from_json(const nlohmann::json& j, PipelineConfig& c);

PipelineConfig load_pipeline_config(const std::filesystem::path& path);

}  // namespace signvoice
