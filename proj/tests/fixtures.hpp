// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "signvoice/train/datasets.hpp"

namespace signvoice::testing {

inline std::vector<float> gaussian_floats(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<float> normal;
  std::vector<float> v(n);
  for (auto& x : v) x = normal(rng);
  return v;
}

// 64 random features with targets from a fixed teacher generator.
inline std::vector<SpecgenSample> specgen_fixture(std::uint64_t seed, std::size_t count = 64) {
  return teacher_specgen_dataset(GeneratorParams::toy(), seed, count);
}

inline std::vector<CombinedSample> combined_fixture(std::uint64_t seed, std::size_t count = 32) {
  return teacher_combined_dataset(ClassifierDims{}, GeneratorParams::toy(), seed, count);
}

}  // namespace signvoice::testing
