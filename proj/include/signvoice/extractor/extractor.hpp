// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <map>
#include <vector>

#include "signvoice/core/tensor.hpp"

namespace signvoice {

// A single video frame, typically channels x width x height.
using Frame = Tensor;
// The frames of one sliding window, oldest first.
using FrameWindow = std::deque<Frame>;

struct FeatureVector {
  std::vector<float> values;

  std::size_t size() const noexcept { return values.size(); }
  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

// Per-class scores in [0, 1]. Not required to sum to one.
struct ConfidenceVector {
  std::vector<float> values;

  std::size_t size() const noexcept { return values.size(); }
  // 0 for an empty vector, which is how "no best yet" compares.
  float max() const;
  // Lowest index among equal maxima.
  std::size_t argmax() const;
  friend bool operator==(const ConfidenceVector&, const ConfidenceVector&) = default;
};

struct Extraction {
  FeatureVector feature;
  ConfidenceVector confidence;
  friend bool operator==(const Extraction&, const Extraction&) = default;
};

// phi, C = E(X). Window indices are the 1-based window positions assigned by
// the temporal detector.
class FeatureExtractor {
 public:
  // expected_window == 0 accepts windows of any length.
  explicit FeatureExtractor(std::size_t expected_window = 0)
      : expected_window_(expected_window) {}
  virtual ~FeatureExtractor() = default;

  // Throws Errc::wrong_window_length when the window does not hold the
  // configured frame count; implementations add their own errors.
  Extraction extract(const FrameWindow& window, std::size_t window_index);

  std::size_t expected_window() const noexcept { return expected_window_; }
  std::size_t calls() const noexcept { return calls_; }

 protected:
  virtual Extraction do_extract(const FrameWindow& window, std::size_t window_index) = 0;

 private:
  std::size_t expected_window_;
  std::size_t calls_ = 0;
};

// Reproducible pseudo-features from a 64-bit mixing hash of
// (seed, window_index, element). Features are uniform in [-1, 1),
// confidences uniform in [0, 1). Frame content is ignored.
class MockExtractor final : public FeatureExtractor {
 public:
  MockExtractor(std::uint64_t seed, std::size_t feature_dim, std::size_t class_count,
                std::size_t expected_window = 0);

 protected:
  Extraction do_extract(const FrameWindow& window, std::size_t window_index) override;

 private:
  std::uint64_t seed_;
  std::size_t feature_dim_;
  std::size_t class_count_;
};

// Replays a fixed list of extractions in call order, ignoring the window
// index. Querying past the end raises Errc::missing_index.
class ScriptedExtractor final : public FeatureExtractor {
 public:
  explicit ScriptedExtractor(std::vector<Extraction> script, std::size_t expected_window = 0);

  std::size_t cursor() const noexcept { return cursor_; }

 protected:
  Extraction do_extract(const FrameWindow& window, std::size_t window_index) override;

 private:
  std::vector<Extraction> script_;
  std::size_t cursor_ = 0;
};

// In-memory table keyed by window position.
class IndexedExtractor final : public FeatureExtractor {
 public:
  explicit IndexedExtractor(std::map<std::size_t, Extraction> table,
                            std::size_t expected_window = 0);

 protected:
  Extraction do_extract(const FrameWindow& window, std::size_t window_index) override;

 private:
  std::map<std::size_t, Extraction> table_;
};

// Reads {dir}/win_%06d.phi.isvt and {dir}/win_%06d.conf.isvt for each
// queried window position.
class FileBackedExtractor final : public FeatureExtractor {
 public:
  explicit FileBackedExtractor(std::filesystem::path dir, std::size_t expected_window = 0);

  // Highest contiguous window position available starting from 1.
  std::size_t available_windows() const;

  static std::filesystem::path feature_path(const std::filesystem::path& dir, std::size_t index);
  static std::filesystem::path confidence_path(const std::filesystem::path& dir,
                                               std::size_t index);
  static void write(const std::filesystem::path& dir, std::size_t index, const Extraction& e);

 protected:
  Extraction do_extract(const FrameWindow& window, std::size_t window_index) override;

 private:
  std::filesystem::path dir_;
};

// splitmix64 finalizer over a combined key; exposed for tests and fixtures.
std::uint64_t mix64(std::uint64_t x);
// Uniform double in [0, 1) from a hash value.
double unit_from_hash(std::uint64_t h);

}  // namespace signvoice
