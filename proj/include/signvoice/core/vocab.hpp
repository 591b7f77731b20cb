// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace signvoice {

class GlossVocab {
 public:
  GlossVocab() = default;
  explicit GlossVocab(std::vector<std::string> labels);

  // "CLASS_0" ... "CLASS_{k-1}".
  static GlossVocab placeholder(std::size_t k);
  // One gloss per non-empty line.
  static GlossVocab load(const std::filesystem::path& path);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::string& label(std::size_t index) const { return labels_.at(index); }
  std::optional<std::size_t> index_of(const std::string& gloss) const;
  const std::vector<std::string>& labels() const noexcept { return labels_; }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace signvoice
