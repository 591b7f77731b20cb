// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "signvoice/core/config.hpp"

#include <fstream>

#include "signvoice/core/error.hpp"

namespace signvoice {
namespace {

DeconvBlockSpec block(std::size_t out, std::size_t kh, std::size_t kw) {
  DeconvBlockSpec b;
  b.out_channels = out;
  b.kernel = {kh, kw};
  b.stride = {kh, kw};
  b.padding = {0, 0};
  return b;
}

std::size_t deconv_extent(std::size_t in, std::size_t kernel, std::size_t stride,
                          std::size_t padding) {
  const std::size_t full = (in - 1) * stride + kernel;
  if (full <= 2 * padding)
    throw Error(Errc::invalid_argument, "deconvolution padding consumes the whole output");
  return full - 2 * padding;
}

template <typename T>
void read_opt(const nlohmann::json& j, const char* key, T& dst) {
  if (j.contains(key)) j.at(key).get_to(dst);
}

}  // namespace

GeneratorParams GeneratorParams::full_scale() {
  GeneratorParams p;
  p.blocks = {block(32, 5, 2), block(16, 5, 2), block(8, 5, 3)};
  return p;
}

GeneratorParams GeneratorParams::toy() {
  GeneratorParams p;
  p.input_dim = 32;
  p.mlp_dims = {48, 36};
  p.reshape_channels = 4;
  p.reshape_height = 3;
  p.reshape_width = 3;
  p.blocks = {block(4, 4, 2), block(2, 3, 2)};
  p.output_bins = 33;
  p.output_frames = 10;
  return p;
}

GeneratorParams GeneratorParams::tiny() {
  GeneratorParams p;
  p.input_dim = 8;
  p.mlp_dims = {8, 8};
  p.reshape_channels = 2;
  p.reshape_height = 2;
  p.reshape_width = 2;
  p.blocks = {block(2, 5, 2)};
  p.output_bins = 9;
  p.output_frames = 4;
  return p;
}

void GeneratorParams::validate() const {
  if (input_dim == 0) throw Error(Errc::invalid_argument, "generator input_dim must be >= 1");
  if (mlp_dims.empty()) throw Error(Errc::invalid_argument, "generator needs an MLP stage");
  for (std::size_t d : mlp_dims)
    if (d == 0) throw Error(Errc::invalid_argument, "MLP widths must be >= 1");
  if (reshape_channels * reshape_height * reshape_width != mlp_dims.back())
    throw Error(Errc::invalid_argument,
                "reshape " + std::to_string(reshape_channels) + "x" +
                    std::to_string(reshape_height) + "x" + std::to_string(reshape_width) +
                    " does not hold the last MLP width " + std::to_string(mlp_dims.back()));
  for (const auto& b : blocks)
    if (b.out_channels == 0 || b.kernel[0] == 0 || b.kernel[1] == 0 || b.stride[0] == 0 ||
        b.stride[1] == 0)
      throw Error(Errc::invalid_argument, "deconvolution block sizes must be >= 1");
  if (output_bins == 0 || output_frames == 0)
    throw Error(Errc::invalid_argument, "output dims must be >= 1");
  if (!(dropout >= 0.0f && dropout < 1.0f))
    throw Error(Errc::invalid_argument, "dropout must lie in [0, 1)");
  natural_output();
}

std::array<std::size_t, 2> GeneratorParams::natural_output() const {
  std::size_t h = reshape_height;
  std::size_t w = reshape_width;
  for (const auto& b : blocks) {
    h = deconv_extent(h, b.kernel[0], b.stride[0], b.padding[0]);
    w = deconv_extent(w, b.kernel[1], b.stride[1], b.padding[1]);
  }
  // The closing 3x3 stride-1 pad-1 layer preserves size.
  return {h, w};
}

PipelineConfig PipelineConfig::toy() {
  PipelineConfig c;
  c.n_fft = 64;
  c.hop = 16;
  c.feature_dim = 32;
  c.class_count = 10;
  c.generator = GeneratorParams::toy();
  return c;
}

void PipelineConfig::validate() const {
  if (window_size < 1) throw Error(Errc::invalid_argument, "window size must be >= 1");
  if (hop_length < 1) throw Error(Errc::invalid_argument, "hop length must be >= 1");
  if (overlap >= window_size)
    throw Error(Errc::invalid_argument, "overlap must be smaller than the window size");
  if (!(confidence_threshold >= 0.0f && confidence_threshold <= 1.0f))
    throw Error(Errc::invalid_argument, "confidence threshold must lie in [0, 1]");
  if (n_fft < 2 || (n_fft & (n_fft - 1)) != 0)
    throw Error(Errc::invalid_argument, "n_fft must be a power of two");
  if (hop < 1 || hop > n_fft) throw Error(Errc::invalid_argument, "hop must lie in [1, n_fft]");
  if (sample_rate <= 0) throw Error(Errc::invalid_argument, "sample rate must be positive");
  if (silence_gap_ms < 0) throw Error(Errc::invalid_argument, "silence gap must be >= 0");
  if (feature_dim < 1 || class_count < 1)
    throw Error(Errc::invalid_argument, "feature_dim and class_count must be >= 1");
  generator.validate();
  if (generator.input_dim != feature_dim)
    throw Error(Errc::invalid_argument, "generator input_dim differs from feature_dim");
  if (generator.output_bins != static_cast<std::size_t>(n_fft / 2 + 1))
    throw Error(Errc::invalid_argument, "generator output bins must equal n_fft/2 + 1");
}

void to_json(nlohmann::json& j, const DeconvBlockSpec& b) {
  j = {{"out_channels", b.out_channels},
       {"kernel", b.kernel},
       {"stride", b.stride},
       {"padding", b.padding}};
}

void from_json(const nlohmann::json& j, DeconvBlockSpec& b) {
  j.at("out_channels").get_to(b.out_channels);
  j.at("kernel").get_to(b.kernel);
  j.at("stride").get_to(b.stride);
  read_opt(j, "padding", b.padding);
}

void to_json(nlohmann::json& j, const GeneratorParams& p) {
  j = {{"input_dim", p.input_dim},
       {"mlp_dims", p.mlp_dims},
       {"reshape", {p.reshape_channels, p.reshape_height, p.reshape_width}},
       {"blocks", p.blocks},
       {"dropout", p.dropout},
       {"output_bins", p.output_bins},
       {"output_frames", p.output_frames}};
}

void from_json(const nlohmann::json& j, GeneratorParams& p) {
  read_opt(j, "input_dim", p.input_dim);
  read_opt(j, "mlp_dims", p.mlp_dims);
  if (j.contains("reshape")) {
    const auto r = j.at("reshape").get<std::array<std::size_t, 3>>();
    p.reshape_channels = r[0];
    p.reshape_height = r[1];
    p.reshape_width = r[2];
  }
  read_opt(j, "blocks", p.blocks);
  read_opt(j, "dropout", p.dropout);
  read_opt(j, "output_bins", p.output_bins);
  read_opt(j, "output_frames", p.output_frames);
}

void to_json(nlohmann::json& j, const PipelineConfig& c) {
  j = {{"window_size", c.window_size},
       {"hop_length", c.hop_length},
       {"overlap", c.overlap},
       {"confidence_threshold", c.confidence_threshold},
       {"n_fft", c.n_fft},
       {"hop", c.hop},
       {"sample_rate", c.sample_rate},
       {"silence_gap_ms", c.silence_gap_ms},
       {"feature_dim", c.feature_dim},
       {"class_count", c.class_count},
       {"generator", c.generator},
       {"seed", c.seed}};
}

void from_json(const nlohmann::json& j, PipelineConfig& c) {
  read_opt(j, "window_size", c.window_size);
  read_opt(j, "hop_length", c.hop_length);
  read_opt(j, "overlap", c.overlap);
  read_opt(j, "confidence_threshold", c.confidence_threshold);
  read_opt(j, "n_fft", c.n_fft);
  read_opt(j, "hop", c.hop);
  read_opt(j, "sample_rate", c.sample_rate);
  read_opt(j, "silence_gap_ms", c.silence_gap_ms);
  read_opt(j, "feature_dim", c.feature_dim);
  read_opt(j, "class_count", c.class_count);
  read_opt(j, "generator", c.generator);
  read_opt(j, "seed", c.seed);
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot open " + path.string());
  try {
    const auto j = nlohmann::json::parse(in);
    return j.get<PipelineConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::bad_format, path.string() + ": " + e.what());
  }
}

}  // namespace signvoice
