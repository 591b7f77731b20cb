// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "signvoice/metrics/classification.hpp"

#include <string>

#include "signvoice/core/error.hpp"

namespace signvoice {

double topk_accuracy(const std::vector<ConfidenceVector>& confidences,
                     const std::vector<std::size_t>& labels, std::size_t k) {
  if (confidences.empty()) throw Error(Errc::empty_input, "no predictions");
  if (confidences.size() != labels.size())
    throw Error(Errc::shape_mismatch, std::to_string(confidences.size()) +
                                          " confidence vectors for " +
                                          std::to_string(labels.size()) + " labels");
  if (k == 0) throw Error(Errc::invalid_argument, "k must be >= 1");
  std::size_t hits = 0;
  for (std::size_t s = 0; s < labels.size(); ++s) {
    const auto& c = confidences[s].values;
    const std::size_t y = labels[s];
    if (y >= c.size())
      throw Error(Errc::label_out_of_range,
                  "label " + std::to_string(y) + " outside " + std::to_string(c.size()) +
                      " classes");
    std::size_t rank = 0;
    for (std::size_t j = 0; j < c.size(); ++j)
      if (c[j] > c[y] || (c[j] == c[y] && j < y)) ++rank;
    if (rank < k) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(labels.size());
}

double f1_macro(const std::vector<std::size_t>& predictions,
                const std::vector<std::size_t>& labels, std::size_t class_count) {
  if (labels.empty()) throw Error(Errc::empty_input, "no predictions");
  if (predictions.size() != labels.size())
    throw Error(Errc::shape_mismatch, "predictions and labels differ in length");
  std::vector<std::size_t> tp(class_count, 0), fp(class_count, 0), fn(class_count, 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::size_t p = predictions[i], y = labels[i];
    if (p >= class_count || y >= class_count)
      throw Error(Errc::label_out_of_range, "class index outside " + std::to_string(class_count));
    if (p == y) {
      ++tp[y];
    } else {
      ++fp[p];
      ++fn[y];
    }
  }
  double sum = 0.0;
  std::size_t classes = 0;
  for (std::size_t c = 0; c < class_count; ++c) {
    if (tp[c] + fp[c] + fn[c] == 0) continue;
    ++classes;
    if (tp[c] == 0) continue;
    const double precision = static_cast<double>(tp[c]) / static_cast<double>(tp[c] + fp[c]);
    const double recall = static_cast<double>(tp[c]) / static_cast<double>(tp[c] + fn[c]);
    sum += 2.0 * precision * recall / (precision + recall);
  }
  return sum / static_cast<double>(classes);
}

}  // namespace signvoice
