// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include <json.hpp>

#include "signvoice/extractor/classifier.hpp"
#include "signvoice/specgen/generator.hpp"
#include "signvoice/specgen/losses.hpp"
#include "signvoice/train/optimizers.hpp"
#include "signvoice/train/schedulers.hpp"

namespace signvoice {

// One (phi, S_true) pair; planes are bins x frames row-major.
struct SpecgenSample {
  std::vector<float> feature;
  std::vector<float> true_real;
  std::vector<float> true_imag;
};

// Descriptor x feeds the classifier; its phi feeds the generator.
struct CombinedSample {
  std::vector<float> descriptor;
  std::size_t label = 0;
  std::vector<float> true_real;
  std::vector<float> true_imag;
};

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;  // mean step loss over the epoch (train mode)
  double val_loss = 0.0;    // eval mode
  double lr_generator = 0.0;
  double lr_classifier = 0.0;  // combined training only
};

struct TrainHistory {
  double initial_train_loss = 0.0;  // eval mode, before any update
  std::vector<double> step_losses;  // batch mean, before each update
  std::vector<EpochRecord> epochs;
  bool stopped_early = false;
  std::size_t best_epoch = 0;
  double best_val_loss = 0.0;

  nlohmann::json to_json() const;
  void write(const std::filesystem::path& path) const;
};

struct SpecgenTrainConfig {
  AdamConfig adam;
  LossWeights loss;
  std::size_t batch_size = 64;
  std::size_t max_epochs = 100;
  std::size_t max_steps = 0;  // 0: no limit
  // Empty: constant adam.learning_rate. Otherwise the scheduler's rate is used.
  std::optional<SchedulerState> scheduler = SchedulerState{CosineScheduler{50, 1e-2, 0.0}};
  std::optional<EarlyStopState> early_stop = EarlyStopState{};
  bool dropout = true;
  std::uint64_t seed = 0;

  void validate() const;
};

// A scheduler, when present, owns the learning rate: its own starting rate
// replaces the optimizer's learning_rate.
struct CombinedTrainConfig {
  SgdConfig sgd;
  AdamConfig adam;
  LossWeights loss;
  std::size_t batch_size = 4;
  std::size_t max_epochs = 100;
  std::size_t max_steps = 0;
  std::optional<SchedulerState> classifier_scheduler =
      SchedulerState{PlateauScheduler{0.3, 2, 1e-3}};
  std::optional<SchedulerState> generator_scheduler =
      SchedulerState{CosineScheduler{50, 1e-2, 0.0}};
  std::optional<EarlyStopState> early_stop = EarlyStopState{};
  bool dropout = true;
  std::uint64_t seed = 0;

  void validate() const;
};

// Mean complex_spectrogram_loss over samples, eval mode.
double evaluate_specgen(const SpectrogramGenerator<float>& generator,
                        const std::vector<SpecgenSample>& samples, const LossWeights& loss);

// Mean cross_entropy + lambda_spec * spectrogram loss over samples, eval mode.
double evaluate_combined(const ToyClassifierModel<float>& classifier,
                         const SpectrogramGenerator<float>& generator,
                         const std::vector<CombinedSample>& samples, const LossWeights& loss);

// Adam over seeded shuffled mini-batches. The validation set defaults to the
// training set when empty. Leaves the best-validation weights in generator.
TrainHistory train_specgen(SpectrogramGenerator<float>& generator,
                           const std::vector<SpecgenSample>& train,
                           const std::vector<SpecgenSample>& validation,
                           const SpecgenTrainConfig& cfg);

// Joint training. Every batch yields one combined loss and one Adam step on
// the generator; the classifier takes an SGD step after each
// cfg.sgd.accumulation_steps batches (carried across epoch boundaries).
TrainHistory train_combined(ToyClassifierModel<float>& classifier,
                            SpectrogramGenerator<float>& generator,
                            const std::vector<CombinedSample>& train,
                            const std::vector<CombinedSample>& validation,
                            const CombinedTrainConfig& cfg);

}  // namespace signvoice
