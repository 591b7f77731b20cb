// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "signvoice/extractor/extractor.hpp"

#include <algorithm>
#include <cstdio>

#include "signvoice/core/error.hpp"
#include "signvoice/core/tensor_io.hpp"

namespace signvoice {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

double unit_from_hash(std::uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

float ConfidenceVector::max() const {
  if (values.empty()) return 0.0f;
  return *std::max_element(values.begin(), values.end());
}

std::size_t ConfidenceVector::argmax() const {
  return static_cast<std::size_t>(std::max_element(values.begin(), values.end()) -
                                  values.begin());
}

Extraction FeatureExtractor::extract(const FrameWindow& window, std::size_t window_index) {
  if (expected_window_ != 0 && window.size() != expected_window_)
    throw Error(Errc::wrong_window_length, "window holds " + std::to_string(window.size()) +
                                               " frames, expected " +
                                               std::to_string(expected_window_));
  ++calls_;
  return do_extract(window, window_index);
}

MockExtractor::MockExtractor(std::uint64_t seed, std::size_t feature_dim,
                             std::size_t class_count, std::size_t expected_window)
    : FeatureExtractor(expected_window),
      seed_(seed),
      feature_dim_(feature_dim),
      class_count_(class_count) {
  if (feature_dim == 0 || class_count == 0)
    throw Error(Errc::invalid_argument, "mock extractor needs n >= 1 and k >= 1");
}

Extraction MockExtractor::do_extract(const FrameWindow&, std::size_t window_index) {
  const std::uint64_t base = mix64(seed_ ^ mix64(window_index));
  Extraction e;
  e.feature.values.resize(feature_dim_);
  for (std::size_t i = 0; i < feature_dim_; ++i)
    e.feature.values[i] = static_cast<float>(2.0 * unit_from_hash(mix64(base + 2 * i)) - 1.0);
  e.confidence.values.resize(class_count_);
  for (std::size_t j = 0; j < class_count_; ++j)
    e.confidence.values[j] = static_cast<float>(unit_from_hash(mix64(base + 2 * j + 1)));
  return e;
}

ScriptedExtractor::ScriptedExtractor(std::vector<Extraction> script, std::size_t expected_window)
    : FeatureExtractor(expected_window), script_(std::move(script)) {}

Extraction ScriptedExtractor::do_extract(const FrameWindow&, std::size_t window_index) {
  if (cursor_ >= script_.size())
    throw Error(Errc::missing_index, "script exhausted after " + std::to_string(script_.size()) +
                                         " entries (window " + std::to_string(window_index) + ")");
  return script_[cursor_++];
}

IndexedExtractor::IndexedExtractor(std::map<std::size_t, Extraction> table,
                                   std::size_t expected_window)
    : FeatureExtractor(expected_window), table_(std::move(table)) {}

Extraction IndexedExtractor::do_extract(const FrameWindow&, std::size_t window_index) {
  auto it = table_.find(window_index);
  if (it == table_.end())
    throw Error(Errc::missing_index, "no entry for window " + std::to_string(window_index));
  return it->second;
}

FileBackedExtractor::FileBackedExtractor(std::filesystem::path dir, std::size_t expected_window)
    : FeatureExtractor(expected_window), dir_(std::move(dir)) {
  if (!std::filesystem::is_directory(dir_))
    throw Error(Errc::io, dir_.string() + " is not a directory");
}

namespace {
std::string window_stem(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "win_%06zu", index);
  return buf;
}
}  // namespace

std::filesystem::path FileBackedExtractor::feature_path(const std::filesystem::path& dir,
                                                        std::size_t index) {
  return dir / (window_stem(index) + ".phi.isvt");
}

std::filesystem::path FileBackedExtractor::confidence_path(const std::filesystem::path& dir,
                                                           std::size_t index) {
  return dir / (window_stem(index) + ".conf.isvt");
}

void FileBackedExtractor::write(const std::filesystem::path& dir, std::size_t index,
                                const Extraction& e) {
  tensor_write(Tensor::vector(e.feature.values), feature_path(dir, index));
  tensor_write(Tensor::vector(e.confidence.values), confidence_path(dir, index));
}

std::size_t FileBackedExtractor::available_windows() const {
  std::size_t n = 0;
  while (std::filesystem::exists(feature_path(dir_, n + 1)) &&
         std::filesystem::exists(confidence_path(dir_, n + 1)))
    ++n;
  return n;
}

Extraction FileBackedExtractor::do_extract(const FrameWindow&, std::size_t window_index) {
  const auto phi = feature_path(dir_, window_index);
  const auto conf = confidence_path(dir_, window_index);
  if (!std::filesystem::exists(phi) || !std::filesystem::exists(conf))
    throw Error(Errc::missing_index, "no feature files for window " + std::to_string(window_index) +
                                         " in " + dir_.string());
  Extraction e;
  e.feature.values = tensor_read(phi).storage();
  e.confidence.values = tensor_read(conf).storage();
  return e;
}

}  // namespace signvoice
