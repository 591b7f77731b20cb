// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <limits>
#include <variant>

namespace signvoice {

// Multiplies the rate by factor once `patience` consecutive epochs fail to
// improve strictly on the best loss, then resets the count.
struct PlateauScheduler {
  double factor = 0.3;
  std::size_t patience = 2;
  double rate = 1e-3;
  double best = std::numeric_limits<double>::infinity();
  std::size_t bad_epochs = 0;

  void validate() const;
  double step(double validation_loss);
};

// min + (base - min)(1 + cos(pi epoch / T)) / 2; epoch T gives min.
struct CosineScheduler {
  std::size_t cycle = 50;
  double base_rate = 1e-2;
  double min_rate = 0.0;

  void validate() const;
  double rate_at(std::size_t epoch) const;
};

using SchedulerState = std::variant<PlateauScheduler, CosineScheduler>;

// Rate to use after `epoch` finished with the given validation loss.
// Cosine ignores the loss and returns rate_at(epoch + 1).
double scheduler_step(SchedulerState& state, std::size_t epoch, double validation_loss);
// Rate in effect before any scheduler_step call.
double initial_rate(const SchedulerState& state);

struct EarlyStopState {
  std::size_t patience = 5;
  double best = std::numeric_limits<double>::infinity();
  std::size_t bad_epochs = 0;
  bool stopped = false;

  void validate() const;
  // Returns true to keep training. Ties with the best count as no improvement.
  bool update(double validation_loss);
};

}  // namespace signvoice
