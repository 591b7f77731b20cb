// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "signvoice/core/tensor.hpp"

namespace signvoice {

// Video clip stored channels x frames x width x height. Raw clips hold
// pixels in [0,255]; normalized clips hold x/127.5 - 1 in [-1,1].
struct Clip {
  Tensor frames;
  double fps = 25.0;
  bool normalized = false;

  std::size_t channels() const { return frames.dim(0); }
  std::size_t frame_count() const { return frames.dim(1); }
  std::size_t width() const { return frames.dim(2); }
  std::size_t height() const { return frames.dim(3); }

  // Throws Errc::shape_mismatch unless rank 4 with 3 channels, and
  // Errc::empty_input when any dimension is 0.
  void validate() const;

  // Frame f as a 3 x width x height tensor.
  Tensor frame(std::size_t f) const;
  std::vector<Tensor> frame_list() const;
  static Clip from_frames(const std::vector<Tensor>& frames, double fps, bool normalized);
};

// Binary PPM (P6, maxval 255) <-> 3 x width x height tensor of [0,255] values.
Tensor read_ppm(const std::filesystem::path& path);
// Values are rounded and clamped to [0,255].
void write_ppm(const std::filesystem::path& path, const Tensor& frame);

// Every *.ppm in dir, in lexicographic file-name order.
Clip load_clip_dir(const std::filesystem::path& dir, double fps = 25.0);
// frame_%06d.ppm per frame; normalized clips are mapped back to [0,255].
void save_clip_dir(const Clip& clip, const std::filesystem::path& dir);

struct PreprocessConfig {
  std::size_t frames = 64;
  std::size_t size = 256;
};

// Raw clip -> `frames` frames at indices round(j (t-1) / (frames-1)),
// bilinear resize (half-pixel centres) so the short side equals `size`,
// center crop to size x size, then x/127.5 - 1.
Clip preprocess_clip(const Clip& raw, const PreprocessConfig& cfg = {});

// Indices used by preprocess_clip; ties round away from zero.
std::vector<std::size_t> subsample_indices(std::size_t t, std::size_t count);

struct AugmentParams {
  double brightness = 0.6;
  double contrast = 0.6;
  double saturation = 0.6;
  double hue = 0.2;
  double rotation_degrees = 15.0;
  double max_drop_fraction = 1.0 / 8.0;
  std::size_t versions = 5;
  std::uint64_t seed = 0;

  void validate() const;
};

// Draws for one (seed, version), in this order: brightness, contrast,
// saturation in [max(0, 1-f), 1+f]; hue shift in [-hue, hue] turns; one
// angle in [-rotation, rotation] degrees; a drop count in
// [0, floor(t * max_drop_fraction)] and the frames to drop.
struct AugmentDraw {
  double brightness = 1.0;
  double contrast = 1.0;
  double saturation = 1.0;
  double hue = 0.0;
  double angle_degrees = 0.0;
  std::vector<std::size_t> dropped;  // ascending
};
AugmentDraw draw_augmentation(const AugmentParams& params, std::size_t version,
                              std::size_t frame_count);

// Color jitter in the unit range, clamped to [0,1] after each step:
//   brightness  u * b
//   contrast    (u - mean luma of the frame) * c + mean luma
//   saturation  (u - luma) * s + luma
//   hue         YIQ rotation: I' = I cos(2 pi h) - Q sin(2 pi h),
//               Q' = I sin(2 pi h) + Q cos(2 pi h), Y unchanged
// with luma 0.299 R + 0.587 G + 0.114 B. Then every frame is rotated by the
// same angle about its centre (bilinear, black fill) and the drawn frames
// are removed. Steps whose draw is the identity are skipped.
Clip augment_clip(const Clip& clip, const AugmentParams& params, std::size_t version);

enum class AugmentOrder { before_preprocess, after_preprocess };

Clip prepare_training_clip(const Clip& raw, const AugmentParams& params, std::size_t version,
                           AugmentOrder order = AugmentOrder::before_preprocess,
                           const PreprocessConfig& cfg = {});

}  // namespace signvoice
