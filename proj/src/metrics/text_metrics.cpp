// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "signvoice/metrics/text_metrics.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "signvoice/core/error.hpp"

namespace signvoice {
namespace {

void require_reference(const TranscriptPair& pair) {
  if (pair.reference.empty()) throw Error(Errc::empty_input, "empty reference transcript");
}

using Ngram = std::vector<std::string>;

std::map<Ngram, std::size_t> ngram_counts(const std::vector<std::string>& tokens, std::size_t n) {
  std::map<Ngram, std::size_t> counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i)
    ++counts[Ngram(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                   tokens.begin() + static_cast<std::ptrdiff_t>(i + n))];
  return counts;
}

}  // namespace

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

std::vector<std::string> split_tokens(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

double wer(const TranscriptPair& pair) {
  require_reference(pair);
  return static_cast<double>(levenshtein(pair.reference, pair.hypothesis)) /
         static_cast<double>(pair.reference.size());
}

double cer(const TranscriptPair& pair) {
  require_reference(pair);
  const std::string ref = join_tokens(pair.reference);
  const std::string hyp = join_tokens(pair.hypothesis);
  return static_cast<double>(levenshtein(ref, hyp)) / static_cast<double>(ref.size());
}

double bleu(const TranscriptPair& pair) {
  require_reference(pair);
  const std::size_t h = pair.hypothesis.size();
  const std::size_t r = pair.reference.size();
  if (h == 0) return 0.0;
  const std::size_t max_n = std::min<std::size_t>(4, h);
  double log_sum = 0.0;
  for (std::size_t n = 1; n <= max_n; ++n) {
    const auto hyp = ngram_counts(pair.hypothesis, n);
    const auto ref = ngram_counts(pair.reference, n);
    std::size_t matched = 0;
    for (const auto& [gram, count] : hyp) {
      const auto it = ref.find(gram);
      if (it != ref.end()) matched += std::min(count, it->second);
    }
    if (matched == 0) return 0.0;
    log_sum += std::log(static_cast<double>(matched) / static_cast<double>(h - n + 1));
  }
  const double bp = h < r ? std::exp(1.0 - static_cast<double>(r) / static_cast<double>(h)) : 1.0;
  return bp * std::exp(log_sum / static_cast<double>(max_n));
}

}  // namespace signvoice
