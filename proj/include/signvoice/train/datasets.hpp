// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "signvoice/extractor/classifier.hpp"
#include "signvoice/specgen/generator.hpp"
#include "signvoice/train/trainers.hpp"

namespace signvoice {

// Gaussian features; targets from a fixed random teacher generator (seed +
// 1000), so the mapping is learnable.
std::vector<SpecgenSample> teacher_specgen_dataset(const GeneratorParams& params,
                                                   std::uint64_t seed, std::size_t count);

// Gaussian descriptors labelled by the argmax of a teacher classifier (seed +
// 2000); targets from a teacher generator (seed + 3000) fed the teacher's
// feature.
std::vector<CombinedSample> teacher_combined_dataset(const ClassifierDims& dims,
                                                     const GeneratorParams& params,
                                                     std::uint64_t seed, std::size_t count);

// Directory layout:
//   features.isvt  N x n
//   real.isvt      N x bins x frames
//   imag.isvt      N x bins x frames
// plus descriptors.isvt (N x d) and labels.isvt (N) for combined data.
void save_specgen_dataset(const std::vector<SpecgenSample>& samples, std::size_t bins,
                          std::size_t frames, const std::filesystem::path& dir);
std::vector<SpecgenSample> load_specgen_dataset(const std::filesystem::path& dir);
void save_combined_dataset(const std::vector<CombinedSample>& samples, std::size_t bins,
                           std::size_t frames, const std::filesystem::path& dir);
std::vector<CombinedSample> load_combined_dataset(const std::filesystem::path& dir);

// manifest.json with the dims plus one <name>.isvt per parameter.
void save_classifier(const ToyClassifierModel<float>& model, const std::filesystem::path& dir);
ToyClassifierModel<float> load_classifier(const std::filesystem::path& dir);

}  // namespace signvoice
