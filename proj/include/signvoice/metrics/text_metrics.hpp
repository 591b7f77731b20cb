// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

namespace signvoice {

struct TranscriptPair {
  std::vector<std::string> reference;
  std::vector<std::string> hypothesis;
};

// Unit-cost edit distance, two-row dynamic programme.
template <typename Seq>
std::size_t levenshtein(const Seq& a, const Seq& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

// Tokens joined by single spaces.
std::string join_tokens(const std::vector<std::string>& tokens);
// Whitespace-separated tokens.
std::vector<std::string> split_tokens(const std::string& text);

// Edit distance over tokens / reference token count. Empty reference raises
// Errc::empty_input.
double wer(const TranscriptPair& pair);
// Edit distance over characters of the space-joined strings / reference
// character count.
double cer(const TranscriptPair& pair);

// Uniform-weight BLEU up to 4-grams with clipped counts and brevity penalty
// exp(1 - r/h) when h < r. The n-gram order is capped at the hypothesis
// length; an empty hypothesis scores 0.
double bleu(const TranscriptPair& pair);

}  // namespace signvoice
