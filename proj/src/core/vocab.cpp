// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "signvoice/core/vocab.hpp"

#include <fstream>

#include "signvoice/core/error.hpp"

namespace signvoice {

GlossVocab::GlossVocab(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw Error(Errc::empty_input, "vocabulary needs at least one gloss");
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!index_.emplace(labels_[i], i).second)
      throw Error(Errc::invalid_argument, "duplicate gloss " + labels_[i]);
  }
}

GlossVocab GlossVocab::placeholder(std::size_t k) {
  std::vector<std::string> labels;
  labels.reserve(k);
  for (std::size_t i = 0; i < k; ++i) labels.push_back("CLASS_" + std::to_string(i));
  return GlossVocab(std::move(labels));
}

GlossVocab GlossVocab::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot open " + path.string());
  std::vector<std::string> labels;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (!line.empty()) labels.push_back(line);
  }
  return GlossVocab(std::move(labels));
}

std::optional<std::size_t> GlossVocab::index_of(const std::string& gloss) const {
  auto it = index_.find(gloss);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

}  // namespace signvoice
