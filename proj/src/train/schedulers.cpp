// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "signvoice/train/schedulers.hpp"

#include <cmath>
#include <numbers>

#include "signvoice/core/error.hpp"

namespace signvoice {

void PlateauScheduler::validate() const {
  if (!(factor > 0.0 && factor < 1.0))
    throw Error(Errc::invalid_argument, "plateau factor must be in (0,1)");
  if (!(rate >= 0.0)) throw Error(Errc::invalid_argument, "plateau rate must be >= 0");
}

double PlateauScheduler::step(double validation_loss) {
  if (validation_loss < best) {
    best = validation_loss;
    bad_epochs = 0;
  } else if (++bad_epochs >= patience) {
    rate *= factor;
    bad_epochs = 0;
  }
  return rate;
}

void CosineScheduler::validate() const {
  if (cycle < 1) throw Error(Errc::invalid_argument, "cosine cycle length must be >= 1");
  if (!(base_rate >= min_rate && min_rate >= 0.0))
    throw Error(Errc::invalid_argument, "cosine rates need base >= min >= 0");
}

double CosineScheduler::rate_at(std::size_t epoch) const {
  const double phase =
      std::numbers::pi * static_cast<double>(epoch) / static_cast<double>(cycle);
  const double w = (1.0 + std::cos(phase)) / 2.0;
  return w * base_rate + (1.0 - w) * min_rate;
}

double scheduler_step(SchedulerState& state, std::size_t epoch, double validation_loss) {
  if (auto* p = std::get_if<PlateauScheduler>(&state)) return p->step(validation_loss);
  return std::get<CosineScheduler>(state).rate_at(epoch + 1);
}

double initial_rate(const SchedulerState& state) {
  if (const auto* p = std::get_if<PlateauScheduler>(&state)) return p->rate;
  return std::get<CosineScheduler>(state).rate_at(0);
}

void EarlyStopState::validate() const {
  if (patience < 1) throw Error(Errc::invalid_argument, "early stopping patience must be >= 1");
}

bool EarlyStopState::update(double validation_loss) {
  if (stopped) return false;
  if (validation_loss < best) {
    best = validation_loss;
    bad_epochs = 0;
  } else if (++bad_epochs >= patience) {
    stopped = true;
  }
  return !stopped;
}

}  // namespace signvoice
