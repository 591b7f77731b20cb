// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <vector>

#include "signvoice/extractor/extractor.hpp"

namespace signvoice {

// Fraction of samples whose label ranks among the k highest confidences.
// Equal confidences rank the lower class index first.
double topk_accuracy(const std::vector<ConfidenceVector>& confidences,
                     const std::vector<std::size_t>& labels, std::size_t k);

// Per-class F1 averaged over classes that occur in labels or predictions.
// A class with no true positives scores 0.
double f1_macro(const std::vector<std::size_t>& predictions,
                const std::vector<std::size_t>& labels, std::size_t class_count);

}  // namespace signvoice
