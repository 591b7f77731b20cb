// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "signvoice/nms/temporal_nms.hpp"

#include "signvoice/core/error.hpp"

namespace signvoice {

void NmsParams::validate() const {
  if (window_size < 1) throw Error(Errc::invalid_argument, "window size must be >= 1");
  if (hop_length < 1) throw Error(Errc::invalid_argument, "hop length must be >= 1");
  if (overlap >= window_size)
    throw Error(Errc::invalid_argument, "overlap must be smaller than the window size");
  if (!(threshold >= 0.0f && threshold <= 1.0f))
    throw Error(Errc::invalid_argument, "threshold must lie in [0, 1]");
}

TemporalNms::TemporalNms(NmsParams params) : params_(params) { params_.validate(); }

std::optional<std::size_t> TemporalNms::best_position() const {
  if (!best_) return std::nullopt;
  return best_->position;
}

Detection TemporalNms::release(std::size_t decided_at) {
  Detection d;
  d.emitted_at = best_->position;
  d.decided_at = decided_at;
  d.feature = std::move(best_->extraction.feature);
  d.confidence = std::move(best_->extraction.confidence);
  d.predicted_class = d.confidence.argmax();
  best_.reset();
  return d;
}

std::optional<Detection> TemporalNms::push(Frame frame, FeatureExtractor& extractor) {
  window_.push_back(std::move(frame));
  if (window_.size() > params_.window_size) window_.pop_front();
  if (window_.size() < params_.window_size) return std::nullopt;

  ++t_;

  if (t_ == 1) {
    Extraction e = extractor.extract(window_, t_);
    ++extractions_;
    if (e.confidence.max() >= params_.threshold) best_ = Best{t_, std::move(e)};
    return std::nullopt;
  }

  if ((t_ - 1) % params_.hop_length != 0) return std::nullopt;

  Extraction e = extractor.extract(window_, t_);
  ++extractions_;
  const float score = e.confidence.max();

  if (!best_) {
    if (score > params_.threshold) best_ = Best{t_, std::move(e)};
    return std::nullopt;
  }

  if (t_ - best_->position > params_.window_size - params_.overlap) {
    Detection out = release(t_);
    if (score > params_.threshold) best_ = Best{t_, std::move(e)};
    return out;
  }

  if (score > best_->extraction.confidence.max()) best_ = Best{t_, std::move(e)};
  return std::nullopt;
}

std::optional<Detection> TemporalNms::flush() {
  std::optional<Detection> out;
  if (best_) out = release(0);
  window_.clear();
  t_ = 0;
  best_.reset();
  return out;
}

}  // namespace signvoice
