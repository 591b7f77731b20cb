// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <optional>

#include "signvoice/extractor/extractor.hpp"

namespace signvoice {

struct NmsParams {
  std::size_t window_size = 50;  // w, frames per window
  std::size_t hop_length = 3;    // evaluate every hop_length-th window position
  std::size_t overlap = 25;      // o; a best is released once t - t_best > w - o
  float threshold = 0.7f;        // theta

  void validate() const;
};

struct Detection {
  std::size_t emitted_at = 0;  // window position of the recorded best
  std::size_t decided_at = 0;  // window position whose arrival released it (0 on flush)
  FeatureVector feature;
  ConfidenceVector confidence;
  std::size_t predicted_class = 0;

  float max_confidence() const { return confidence.max(); }
};

// Incremental temporal non-maximal suppression over a frame stream.
//
// The buffer fills to w frames before anything is evaluated; from then on
// every pushed frame advances the window position t by one. Position 1 is
// always extracted and kept as best when max(C) >= theta. Later positions
// are extracted only when (t - 1) mod hop_length == 0, and compare with a
// strict max(C) > theta. Once t - t_best > w - o the stored best is released
// and the current window either becomes the new best (max(C) > theta) or the
// best is cleared. Otherwise a strictly larger max(C) replaces the best, so
// ties keep the earlier window.
class TemporalNms {
 public:
  explicit TemporalNms(NmsParams params);

  const NmsParams& params() const noexcept { return params_; }

  std::optional<Detection> push(Frame frame, FeatureExtractor& extractor);

  // End of stream: releases a pending best (not part of the streaming rule
  // above) and resets the detector to its initial state.
  std::optional<Detection> flush();

  std::size_t position() const noexcept { return t_; }
  std::size_t buffered_frames() const noexcept { return window_.size(); }
  std::optional<std::size_t> best_position() const;
  std::size_t extractions() const noexcept { return extractions_; }

 private:
  struct Best {
    std::size_t position;
    Extraction extraction;
  };

  Detection release(std::size_t decided_at);

  NmsParams params_;
  FrameWindow window_;
  std::size_t t_ = 0;
  std::optional<Best> best_;
  std::size_t extractions_ = 0;
};

}  // namespace signvoice
