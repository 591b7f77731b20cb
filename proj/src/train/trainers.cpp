// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "signvoice/train/trainers.hpp"

#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "signvoice/core/error.hpp"

namespace signvoice {
namespace {

std::vector<std::size_t> shuffled_order(std::size_t n, std::uint64_t seed, std::size_t epoch) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(mix64(seed ^ mix64(epoch + 0x5eed)));
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
  return order;
}

std::uint64_t dropout_seed(std::uint64_t seed, std::size_t step, std::size_t sample) {
  return mix64(seed ^ mix64(step * 0x9e3779b97f4a7c15ULL + sample));
}

void check_planes(const GeneratorParams& p, const std::vector<float>& real,
                  const std::vector<float>& imag) {
  const std::size_t n = p.output_bins * p.output_frames;
  if (real.size() != n || imag.size() != n)
    throw Error(Errc::shape_mismatch, "target spectrogram has " + std::to_string(real.size()) +
                                          " bins*frames, generator produces " +
                                          std::to_string(n));
}

void check_dataset(const GeneratorParams& p, const std::vector<SpecgenSample>& data) {
  for (const auto& s : data) {
    if (s.feature.size() != p.input_dim)
      throw Error(Errc::shape_mismatch, "sample feature length " +
                                            std::to_string(s.feature.size()) + " != " +
                                            std::to_string(p.input_dim));
    check_planes(p, s.true_real, s.true_imag);
  }
}

void check_dataset(const ToyClassifierModel<float>& c, const GeneratorParams& p,
                   const std::vector<CombinedSample>& data) {
  if (c.dims().feature_dim != p.input_dim)
    throw Error(Errc::shape_mismatch, "classifier feature_dim does not match generator input");
  for (const auto& s : data) {
    if (s.descriptor.size() != c.dims().input_dim)
      throw Error(Errc::shape_mismatch, "descriptor length " +
                                            std::to_string(s.descriptor.size()) + " != " +
                                            std::to_string(c.dims().input_dim));
    if (s.label >= c.dims().class_count)
      throw Error(Errc::label_out_of_range, "label " + std::to_string(s.label) +
                                                " outside " + std::to_string(c.dims().class_count) +
                                                " classes");
    check_planes(p, s.true_real, s.true_imag);
  }
}

void scale(std::vector<float>& v, float k) {
  for (auto& x : v) x *= k;
}

double lr_or(const std::optional<SchedulerState>& s, double fallback) {
  return s ? initial_rate(*s) : fallback;
}

}  // namespace

nlohmann::json TrainHistory::to_json() const {
  nlohmann::json j;
  j["initial_train_loss"] = initial_train_loss;
  j["step_losses"] = step_losses;
  j["epochs"] = nlohmann::json::array();
  for (const auto& e : epochs)
    j["epochs"].push_back({{"epoch", e.epoch},
                           {"train_loss", e.train_loss},
                           {"val_loss", e.val_loss},
                           {"lr_generator", e.lr_generator},
                           {"lr_classifier", e.lr_classifier}});
  j["stopped_early"] = stopped_early;
  j["best_epoch"] = best_epoch;
  j["best_val_loss"] = best_val_loss;
  return j;
}

void TrainHistory::write(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io, "cannot write " + path.string());
  out << to_json().dump(2) << '\n';
}

void SpecgenTrainConfig::validate() const {
  adam.validate();
  loss.validate();
  if (batch_size < 1) throw Error(Errc::invalid_argument, "batch size must be >= 1");
  if (scheduler) std::visit([](const auto& s) { s.validate(); }, *scheduler);
  if (early_stop) early_stop->validate();
}

void CombinedTrainConfig::validate() const {
  sgd.validate();
  adam.validate();
  loss.validate();
  if (batch_size < 1) throw Error(Errc::invalid_argument, "batch size must be >= 1");
  if (classifier_scheduler)
    std::visit([](const auto& s) { s.validate(); }, *classifier_scheduler);
  if (generator_scheduler) std::visit([](const auto& s) { s.validate(); }, *generator_scheduler);
  if (early_stop) early_stop->validate();
}

double evaluate_specgen(const SpectrogramGenerator<float>& generator,
                        const std::vector<SpecgenSample>& samples, const LossWeights& loss) {
  if (samples.empty()) throw Error(Errc::empty_input, "no samples to evaluate");
  double sum = 0.0;
  for (const auto& s : samples) {
    const auto out = generator.infer(s.feature);
    sum += complex_spectrogram_loss<float>(s.true_real, s.true_imag, out.real, out.imag, loss)
               .total;
  }
  return sum / static_cast<double>(samples.size());
}

double evaluate_combined(const ToyClassifierModel<float>& classifier,
                         const SpectrogramGenerator<float>& generator,
                         const std::vector<CombinedSample>& samples, const LossWeights& loss) {
  if (samples.empty()) throw Error(Errc::empty_input, "no samples to evaluate");
  double sum = 0.0;
  for (const auto& s : samples) {
    const auto c = classifier.forward(s.descriptor);
    const auto out = generator.infer(c.feature);
    const double spec =
        complex_spectrogram_loss<float>(s.true_real, s.true_imag, out.real, out.imag, loss).total;
    sum += cross_entropy<float>(c.logits, s.label) + loss.lambda_spec * spec;
  }
  return sum / static_cast<double>(samples.size());
}

TrainHistory train_specgen(SpectrogramGenerator<float>& generator,
                           const std::vector<SpecgenSample>& train,
                           const std::vector<SpecgenSample>& validation,
                           const SpecgenTrainConfig& cfg) {
  cfg.validate();
  if (train.empty()) throw Error(Errc::empty_input, "empty training set");
  const auto& val = validation.empty() ? train : validation;
  check_dataset(generator.params(), train);
  check_dataset(generator.params(), val);

  TrainHistory history;
  history.initial_train_loss = evaluate_specgen(generator, train, cfg.loss);
  history.best_val_loss = std::numeric_limits<double>::infinity();
  auto scheduler = cfg.scheduler;
  auto early = cfg.early_stop;
  double lr = lr_or(scheduler, cfg.adam.learning_rate);
  AdamState<float> adam;
  ParamSet<float> best = generator.weights();
  std::size_t step = 0;
  std::vector<float> gr, gi;

  for (std::size_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    const auto order = shuffled_order(train.size(), cfg.seed, epoch);
    double epoch_sum = 0.0;
    std::size_t epoch_steps = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      if (cfg.max_steps && step == cfg.max_steps) break;
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      const float inv = 1.0f / static_cast<float>(end - start);
      auto grads = generator.weights().zeros_like();
      double batch_loss = 0.0;
      for (std::size_t k = start; k < end; ++k) {
        const auto& s = train[order[k]];
        const auto out =
            generator.forward(s.feature, cfg.dropout, dropout_seed(cfg.seed, step, order[k]));
        batch_loss += complex_spectrogram_loss_grad<float>(s.true_real, s.true_imag, out.real,
                                                           out.imag, cfg.loss, gr, gi)
                          .total;
        scale(gr, inv);
        scale(gi, inv);
        generator.backward(gr, gi, grads);
      }
      batch_loss /= static_cast<double>(end - start);
      history.step_losses.push_back(batch_loss);
      epoch_sum += batch_loss;
      ++epoch_steps;
      AdamConfig a = cfg.adam;
      a.learning_rate = lr;
      adam_step(generator.weights(), grads, a, adam, ++step);
    }
    if (epoch_steps == 0) break;
    generator.clear_recorded_pass();

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = epoch_sum / static_cast<double>(epoch_steps);
    rec.val_loss = evaluate_specgen(generator, val, cfg.loss);
    rec.lr_generator = lr;
    history.epochs.push_back(rec);
    if (rec.val_loss < history.best_val_loss) {
      history.best_val_loss = rec.val_loss;
      history.best_epoch = epoch;
      best = generator.weights();
    }
    if (scheduler) lr = scheduler_step(*scheduler, epoch, rec.val_loss);
    if (early && !early->update(rec.val_loss)) {
      history.stopped_early = true;
      break;
    }
    if (cfg.max_steps && step == cfg.max_steps) break;
  }
  generator.weights() = std::move(best);
  return history;
}

TrainHistory train_combined(ToyClassifierModel<float>& classifier,
                            SpectrogramGenerator<float>& generator,
                            const std::vector<CombinedSample>& train,
                            const std::vector<CombinedSample>& validation,
                            const CombinedTrainConfig& cfg) {
  cfg.validate();
  if (train.empty()) throw Error(Errc::empty_input, "empty training set");
  const auto& val = validation.empty() ? train : validation;
  check_dataset(classifier, generator.params(), train);
  check_dataset(classifier, generator.params(), val);

  TrainHistory history;
  history.initial_train_loss = evaluate_combined(classifier, generator, train, cfg.loss);
  history.best_val_loss = std::numeric_limits<double>::infinity();
  auto c_sched = cfg.classifier_scheduler;
  auto g_sched = cfg.generator_scheduler;
  auto early = cfg.early_stop;
  double lr_c = lr_or(c_sched, cfg.sgd.learning_rate);
  double lr_g = lr_or(g_sched, cfg.adam.learning_rate);
  const float lambda = static_cast<float>(cfg.loss.lambda_spec);

  SgdState<float> sgd;
  AdamState<float> adam;
  std::vector<ParamSet<float>> pending;
  auto best_c = classifier.params();
  auto best_g = generator.weights();
  std::size_t step = 0;
  std::vector<float> gr, gi, gphi;

  for (std::size_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    const auto order = shuffled_order(train.size(), cfg.seed, epoch);
    double epoch_sum = 0.0;
    std::size_t epoch_steps = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      if (cfg.max_steps && step == cfg.max_steps) break;
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      const float inv = 1.0f / static_cast<float>(end - start);
      auto c_grads = classifier.params().zeros_like();
      auto g_grads = generator.weights().zeros_like();
      double batch_loss = 0.0;
      for (std::size_t k = start; k < end; ++k) {
        const auto& s = train[order[k]];
        const auto c = classifier.forward(s.descriptor);
        auto grad_logits = cross_entropy_grad<float>(c.logits, s.label);
        scale(grad_logits, inv);
        const auto out =
            generator.forward(c.feature, cfg.dropout, dropout_seed(cfg.seed, step, order[k]));
        const double spec = complex_spectrogram_loss_grad<float>(
                                s.true_real, s.true_imag, out.real, out.imag, cfg.loss, gr, gi)
                                .total;
        scale(gr, lambda * inv);
        scale(gi, lambda * inv);
        generator.backward(gr, gi, g_grads, &gphi);
        classifier.backward(s.descriptor, c, grad_logits, gphi, c_grads);
        batch_loss += cross_entropy<float>(c.logits, s.label) + cfg.loss.lambda_spec * spec;
      }
      batch_loss /= static_cast<double>(end - start);
      history.step_losses.push_back(batch_loss);
      epoch_sum += batch_loss;
      ++epoch_steps;

      pending.push_back(std::move(c_grads));
      if (pending.size() == cfg.sgd.accumulation_steps) {
        SgdConfig s = cfg.sgd;
        s.learning_rate = lr_c;
        sgd_accumulate_step<float>(classifier.params(), pending, s, sgd);
        pending.clear();
      }
      AdamConfig a = cfg.adam;
      a.learning_rate = lr_g;
      adam_step(generator.weights(), g_grads, a, adam, ++step);
    }
    if (epoch_steps == 0) break;
    generator.clear_recorded_pass();

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = epoch_sum / static_cast<double>(epoch_steps);
    rec.val_loss = evaluate_combined(classifier, generator, val, cfg.loss);
    rec.lr_generator = lr_g;
    rec.lr_classifier = lr_c;
    history.epochs.push_back(rec);
    if (rec.val_loss < history.best_val_loss) {
      history.best_val_loss = rec.val_loss;
      history.best_epoch = epoch;
      best_c = classifier.params();
      best_g = generator.weights();
    }
    if (c_sched) lr_c = scheduler_step(*c_sched, epoch, rec.val_loss);
    if (g_sched) lr_g = scheduler_step(*g_sched, epoch, rec.val_loss);
    if (early && !early->update(rec.val_loss)) {
      history.stopped_early = true;
      break;
    }
    if (cfg.max_steps && step == cfg.max_steps) break;
  }
  classifier.params() = std::move(best_c);
  generator.weights() = std::move(best_g);
  return history;
}

}  // namespace signvoice
