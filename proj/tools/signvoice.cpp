// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// signvoice: command-line front end for the sign-to-speech engine.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "signvoice/core/audio.hpp"
#include "signvoice/core/config.hpp"
#include "signvoice/core/error.hpp"
#include "signvoice/core/tensor_io.hpp"
#include "signvoice/core/vocab.hpp"
#include "signvoice/dsp/stft.hpp"
#include "signvoice/extractor/classifier.hpp"
#include "signvoice/ingest/clip.hpp"
#include "signvoice/metrics/audio_metrics.hpp"
#include "signvoice/metrics/text_metrics.hpp"
#include "signvoice/pipeline/pipeline.hpp"
#include "signvoice/train/datasets.hpp"
#include "signvoice/train/trainers.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace signvoice;

namespace {

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
};

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(Errc::bad_format, path.string() + ": " + e.what());
  }
}

void write_json(const json& j, const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(Errc::io, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

json config_json(const Globals& g) {
  return g.config_path.empty() ? json::object() : read_json(g.config_path);
}

// "preset": "toy" starts from PipelineConfig::toy(); other keys override.
PipelineConfig pipeline_config(const Globals& g, bool toy_default = false) {
  const json j = config_json(g);
  const std::string preset = j.value("preset", toy_default ? "toy" : "full");
  PipelineConfig cfg;
  if (preset == "toy") {
    cfg = PipelineConfig::toy();
  } else if (preset != "full") {
    throw Error(Errc::invalid_argument, "unknown preset '" + preset + "'");
  }
  try {
    from_json(j, cfg);
  } catch (const json::exception& e) {
    throw Error(Errc::bad_format, std::string("config: ") + e.what());
  }
  if (g.seed) cfg.seed = *g.seed;
  cfg.validate();
  return cfg;
}

json train_section(const Globals& g) { return config_json(g).value("train", json::object()); }

void apply_common(const json& t, LossWeights& loss, std::size_t& batch, std::size_t& epochs,
                  std::size_t& steps, bool& dropout, std::optional<EarlyStopState>& early) {
  loss.lambda_sc = t.value("lambda_sc", loss.lambda_sc);
  loss.lambda_mse = t.value("lambda_mse", loss.lambda_mse);
  loss.lambda_spec = t.value("lambda_spec", loss.lambda_spec);
  batch = t.value("batch_size", batch);
  epochs = t.value("max_epochs", epochs);
  steps = t.value("max_steps", steps);
  dropout = t.value("dropout", dropout);
  if (t.contains("early_stop_patience")) {
    const auto p = t["early_stop_patience"].get<std::size_t>();
    if (p == 0) {
      early.reset();
    } else {
      early = EarlyStopState{};
      early->patience = p;
    }
  }
}

// Cosine base rate follows learning_rate; "scheduler": "none" keeps Adam's rate constant.
void apply_generator_schedule(const json& t, AdamConfig& adam,
                              std::optional<SchedulerState>& sched) {
  adam.learning_rate = t.value("learning_rate", adam.learning_rate);
  const std::string kind = t.value("scheduler", "cosine");
  if (kind == "none") {
    sched.reset();
  } else if (kind == "cosine") {
    CosineScheduler c{t.value("cosine_cycle", std::size_t{50}), adam.learning_rate,
                      t.value("min_learning_rate", 0.0)};
    sched = SchedulerState{c};
  } else {
    throw Error(Errc::invalid_argument, "generator scheduler must be cosine or none");
  }
}

std::vector<Frame> dummy_frames(std::size_t n) { return std::vector<Frame>(n, Tensor({1}, 0.0f)); }

SpectrogramGenerator<float> generator_for(const PipelineConfig& cfg, const std::string& dir) {
  if (!dir.empty()) return load_generator(dir);
  std::cerr << "no --weights given; using a random generator (seed " << cfg.seed << ")\n";
  return SpectrogramGenerator<float>::random(cfg.generator, cfg.seed);
}

// ---- subcommands ----

struct RunArgs {
  std::string frames, features, weights, classifier, vocab;
  std::size_t grid = 2;
  double fps = 25.0;
};

int cmd_run(const Globals& g, const RunArgs& a) {
  if (a.frames.empty() == a.features.empty())
    throw Error(Errc::invalid_argument, "give exactly one of --frames or --features");
  const PipelineConfig cfg = pipeline_config(g);
  const auto generator = generator_for(cfg, a.weights);
  const GlossVocab vocab =
      a.vocab.empty() ? GlossVocab::placeholder(cfg.class_count) : GlossVocab::load(a.vocab);

  PipelineRun run;
  if (!a.features.empty()) {
    FileBackedExtractor extractor(a.features, cfg.window_size);
    const std::size_t windows = extractor.available_windows();
    if (windows == 0) throw Error(Errc::empty_input, "no window files in " + a.features);
    run = run_stream(dummy_frames(windows + cfg.window_size - 1), extractor, generator, cfg);
  } else {
    const Clip clip = load_clip_dir(a.frames, a.fps);
    ToyClassifierModel<float> model =
        a.classifier.empty()
            ? ToyClassifierModel<float>::random({3 * a.grid * a.grid, cfg.feature_dim, cfg.class_count},
                                                cfg.seed)
            : load_classifier(a.classifier);
    ToyClassifierExtractor extractor(std::move(model), a.grid, cfg.window_size);
    run = run_stream(clip.frame_list(), extractor, generator, cfg);
  }

  const fs::path out(g.out_dir);
  fs::create_directories(out);
  wav_write(run.audio, out / "audio.wav");
  write_json(run.detections_json(vocab), out / "detections.json");
  write_json(run.timing_json(), out / "timing.json");
  std::cout << run.timing_json().dump(2) << '\n';
  return 0;
}

int cmd_synth(const Globals& g, const std::string& input, const std::string& output) {
  const fs::path in(input);
  ComplexSpectrogram spec;
  if (fs::exists(fs::path(in).replace_extension(".json"))) {
    spec = spectrogram_read(in);
  } else {
    const PipelineConfig cfg = pipeline_config(g);
    spec = ComplexSpectrogram::from_stacked(tensor_read(in), cfg.sample_rate, cfg.n_fft, cfg.hop);
  }
  const AudioBuffer audio = istft(spec, StftConfig{spec.n_fft, spec.hop});
  const fs::path out = output.empty() ? fs::path(g.out_dir) / in.stem().concat(".wav") : fs::path(output);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  wav_write(audio, out);
  std::cout << json{{"output", out.string()}, {"samples", audio.size()},
                    {"sample_rate", audio.sample_rate}}.dump(2)
            << '\n';
  return 0;
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot open " + path.string());
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

json audio_report(const fs::path& ref_path, const fs::path& test_path) {
  AudioBuffer ref = wav_read(ref_path), test = wav_read(test_path);
  json r{{"kind", "audio"}};
  try {
    r["mcd"] = mcd(ref, test);
  } catch (const Error& e) {
    r["mcd"] = nullptr;
    r["mcd_error"] = e.what();
  }
  const std::size_t n = std::min(ref.size(), test.size());
  ref.samples.resize(n);
  test.samples.resize(n);
  r["compared_samples"] = n;
  try {
    r["snr_db"] = snr(ref, test);
  } catch (const Error& e) {
    r["snr_db"] = nullptr;
    r["snr_error"] = e.what();
  }
  try {
    r["stoi"] = stoi(ref, test);
  } catch (const Error& e) {
    r["stoi"] = nullptr;
    r["stoi_error"] = e.what();
  }
  return r;
}

json text_report(const fs::path& ref_path, const fs::path& hyp_path) {
  const auto refs = read_lines(ref_path), hyps = read_lines(hyp_path);
  if (refs.size() != hyps.size())
    throw Error(Errc::shape_mismatch, "transcript files have " + std::to_string(refs.size()) +
                                          " and " + std::to_string(hyps.size()) + " lines");
  if (refs.empty()) throw Error(Errc::empty_input, "transcript files are empty");
  double w = 0, c = 0, b = 0;
  json lines = json::array();
  for (std::size_t i = 0; i < refs.size(); ++i) {
    const TranscriptPair pair{split_tokens(refs[i]), split_tokens(hyps[i])};
    const double lw = wer(pair), lc = cer(pair), lb = bleu(pair);
    w += lw;
    c += lc;
    b += lb;
    lines.push_back({{"wer", lw}, {"cer", lc}, {"bleu", lb}});
  }
  const double n = static_cast<double>(refs.size());
  return {{"kind", "text"}, {"pairs", refs.size()}, {"wer", w / n},
          {"cer", c / n},   {"bleu", b / n},        {"per_line", lines}};
}

int cmd_metrics(const Globals& g, const std::string& reference, const std::string& test) {
  const std::string ext = fs::path(reference).extension().string();
  if (fs::path(test).extension().string() != ext)
    throw Error(Errc::invalid_argument, "both inputs must have the same file type");
  json report;
  if (ext == ".wav") {
    report = audio_report(reference, test);
  } else if (ext == ".isvt") {
    report = {{"kind", "tensor"}, {"mse", mse_metric(tensor_read(reference), tensor_read(test))}};
  } else {
    report = text_report(reference, test);
  }
  report["reference"] = reference;
  report["test"] = test;
  write_json(report, fs::path(g.out_dir) / "metrics.json");
  std::cout << report.dump(2) << '\n';
  return 0;
}

struct TrainArgs {
  std::string data, validation;
  std::size_t synthetic = 0;
};

int cmd_train_specgen(const Globals& g, const TrainArgs& a) {
  const PipelineConfig cfg = pipeline_config(g);
  SpecgenTrainConfig tc;
  tc.seed = cfg.seed;
  const json t = train_section(g);
  apply_common(t, tc.loss, tc.batch_size, tc.max_epochs, tc.max_steps, tc.dropout, tc.early_stop);
  apply_generator_schedule(t, tc.adam, tc.scheduler);

  std::vector<SpecgenSample> train, val;
  if (a.synthetic > 0) {
    train = teacher_specgen_dataset(cfg.generator, cfg.seed, a.synthetic);
  } else if (!a.data.empty()) {
    train = load_specgen_dataset(a.data);
  } else {
    throw Error(Errc::invalid_argument, "give --data or --synthetic");
  }
  if (!a.validation.empty()) val = load_specgen_dataset(a.validation);

  auto generator = SpectrogramGenerator<float>::random(cfg.generator, cfg.seed);
  const TrainHistory h = train_specgen(generator, train, val, tc);
  const fs::path out(g.out_dir);
  save_generator(generator, out / "generator");
  h.write(out / "history.json");
  std::cout << json{{"initial_train_loss", h.initial_train_loss},
                    {"best_val_loss", h.best_val_loss},
                    {"best_epoch", h.best_epoch},
                    {"epochs", h.epochs.size()},
                    {"stopped_early", h.stopped_early}}.dump(2)
            << '\n';
  return 0;
}

int cmd_train_combined(const Globals& g, const TrainArgs& a) {
  const PipelineConfig cfg = pipeline_config(g);
  CombinedTrainConfig tc;
  tc.seed = cfg.seed;
  const json t = train_section(g);
  apply_common(t, tc.loss, tc.batch_size, tc.max_epochs, tc.max_steps, tc.dropout, tc.early_stop);
  apply_generator_schedule(t, tc.adam, tc.generator_scheduler);
  tc.sgd.learning_rate = t.value("sgd_learning_rate", tc.sgd.learning_rate);
  tc.sgd.accumulation_steps = t.value("accumulation_steps", tc.sgd.accumulation_steps);
  if (t.value("classifier_scheduler", std::string("plateau")) == "none") {
    tc.classifier_scheduler.reset();
  } else {
    tc.classifier_scheduler = SchedulerState{PlateauScheduler{0.3, 2, tc.sgd.learning_rate}};
  }

  const ClassifierDims dims{t.value("descriptor_dim", std::size_t{12}), cfg.feature_dim,
                            cfg.class_count};
  std::vector<CombinedSample> train, val;
  if (a.synthetic > 0) {
    train = teacher_combined_dataset(dims, cfg.generator, cfg.seed, a.synthetic);
  } else if (!a.data.empty()) {
    train = load_combined_dataset(a.data);
  } else {
    throw Error(Errc::invalid_argument, "give --data or --synthetic");
  }
  if (!a.validation.empty()) val = load_combined_dataset(a.validation);

  auto classifier = ToyClassifierModel<float>::random(
      {train.front().descriptor.size(), cfg.feature_dim, cfg.class_count}, cfg.seed);
  auto generator = SpectrogramGenerator<float>::random(cfg.generator, cfg.seed + 1);
  const TrainHistory h = train_combined(classifier, generator, train, val, tc);
  const fs::path out(g.out_dir);
  save_classifier(classifier, out / "classifier");
  save_generator(generator, out / "generator");
  h.write(out / "history.json");
  std::cout << json{{"initial_train_loss", h.initial_train_loss},
                    {"best_val_loss", h.best_val_loss},
                    {"best_epoch", h.best_epoch},
                    {"epochs", h.epochs.size()},
                    {"stopped_early", h.stopped_early}}.dump(2)
            << '\n';
  return 0;
}

int cmd_nms_sim(const Globals& g, const std::string& input) {
  const PipelineConfig cfg = pipeline_config(g, true);
  std::vector<float> scores;
  std::size_t line_no = 0;
  for (const auto& line : read_lines(input)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      scores.push_back(std::stof(line));
    } catch (const std::exception&) {
      throw Error(Errc::bad_format, input + ":" + std::to_string(line_no) + ": not a number");
    }
  }
  std::map<std::size_t, Extraction> table;
  for (std::size_t t = 1; t <= scores.size(); ++t)
    table[t] = {{{static_cast<float>(t)}}, {{scores[t - 1]}}};
  IndexedExtractor extractor(std::move(table), cfg.window_size);
  TemporalNms nms(nms_params(cfg));

  json emitted = json::array();
  auto record = [&](const Detection& d) {
    emitted.push_back({{"emitted_at", d.emitted_at},
                       {"decided_at", d.decided_at},
                       {"max_confidence", d.max_confidence()}});
  };
  const std::size_t frames = scores.empty() ? 0 : scores.size() + cfg.window_size - 1;
  for (std::size_t i = 0; i < frames; ++i)
    if (auto d = nms.push(Tensor({1}, 0.0f), extractor)) record(*d);
  if (auto d = nms.flush()) record(*d);

  const json report{{"positions", scores.size()},
                    {"window_size", cfg.window_size},
                    {"hop_length", cfg.hop_length},
                    {"overlap", cfg.overlap},
                    {"threshold", cfg.confidence_threshold},
                    {"emissions", emitted}};
  write_json(report, fs::path(g.out_dir) / "emissions.json");
  std::cout << report.dump(2) << '\n';
  return 0;
}

int cmd_bench(const Globals& g, std::size_t length, std::size_t runs) {
  const PipelineConfig cfg = pipeline_config(g, true);
  const BenchReport r = benchmark_throughput(length, cfg, runs);
  const json j = r.to_json();
  write_json(j, fs::path(g.out_dir) / "bench.json");
  std::cout << j.dump(2) << '\n';
  return 0;
}

struct AugmentArgs {
  std::string input;
  bool preprocess = false;
  std::string order = "before";
  double fps = 25.0;
};

int cmd_augment(const Globals& g, const AugmentArgs& a) {
  const json j = config_json(g).value("augment", json::object());
  AugmentParams p;
  p.brightness = j.value("brightness", p.brightness);
  p.contrast = j.value("contrast", p.contrast);
  p.saturation = j.value("saturation", p.saturation);
  p.hue = j.value("hue", p.hue);
  p.rotation_degrees = j.value("rotation_degrees", p.rotation_degrees);
  p.max_drop_fraction = j.value("max_drop_fraction", p.max_drop_fraction);
  p.versions = j.value("versions", p.versions);
  p.seed = g.seed.value_or(j.value("seed", std::uint64_t{0}));
  p.validate();
  PreprocessConfig pc;
  pc.frames = j.value("frames", pc.frames);
  pc.size = j.value("size", pc.size);
  if (a.order != "before" && a.order != "after")
    throw Error(Errc::invalid_argument, "--order must be before or after");

  const Clip raw = load_clip_dir(a.input, a.fps);
  json made = json::array();
  for (std::size_t v = 0; v < p.versions; ++v) {
    const Clip out = a.preprocess
                         ? prepare_training_clip(raw, p, v,
                                                 a.order == "before" ? AugmentOrder::before_preprocess
                                                                     : AugmentOrder::after_preprocess,
                                                 pc)
                         : augment_clip(raw, p, v);
    const fs::path dir = fs::path(g.out_dir) / ("version_" + std::to_string(v));
    save_clip_dir(out, dir);
    const auto d = draw_augmentation(p, v, raw.frame_count());
    made.push_back({{"dir", dir.string()},
                    {"frames", out.frame_count()},
                    {"brightness", d.brightness},
                    {"contrast", d.contrast},
                    {"saturation", d.saturation},
                    {"hue", d.hue},
                    {"angle_degrees", d.angle_degrees},
                    {"dropped", d.dropped}});
  }
  std::cout << json{{"versions", made}}.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"signvoice: isolated sign video to speech"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "JSON configuration file")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Seed overriding the configuration");
  app.add_option("--out-dir", g.out_dir, "Directory for outputs");

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Frames or per-window features to WAV and detections");
  run_cmd->add_option("--frames", run.frames, "Directory of PPM frames");
  run_cmd->add_option("--features", run.features, "Directory of win_%06d.{phi,conf}.isvt files");
  run_cmd->add_option("--weights", run.weights, "Generator weights directory");
  run_cmd->add_option("--classifier", run.classifier, "Classifier weights directory (with --frames)");
  run_cmd->add_option("--vocab", run.vocab, "Gloss list, one per line");
  run_cmd->add_option("--grid", run.grid, "Pooling grid for the frame classifier");
  run_cmd->add_option("--fps", run.fps, "Frame rate of the frame directory");

  std::string synth_in, synth_out;
  auto* synth_cmd = app.add_subcommand("synth", "ISVT spectrogram to WAV");
  synth_cmd->add_option("input", synth_in, "Stacked 2 x bins x frames .isvt")->required();
  synth_cmd->add_option("-o,--output", synth_out, "WAV path (default <out-dir>/<stem>.wav)");

  std::string m_ref, m_test;
  auto* metrics_cmd = app.add_subcommand("metrics", "Compare two WAVs, tensors or transcripts");
  metrics_cmd->add_option("reference", m_ref)->required()->check(CLI::ExistingFile);
  metrics_cmd->add_option("test", m_test)->required()->check(CLI::ExistingFile);

  TrainArgs ts, tcmb;
  auto* ts_cmd = app.add_subcommand("train-specgen", "Train the spectrogram generator");
  ts_cmd->add_option("--data", ts.data, "Dataset directory");
  ts_cmd->add_option("--validation", ts.validation, "Validation dataset directory");
  ts_cmd->add_option("--synthetic", ts.synthetic, "Use N teacher-generated samples");
  auto* tc_cmd = app.add_subcommand("train-combined", "Train classifier and generator jointly");
  tc_cmd->add_option("--data", tcmb.data, "Dataset directory");
  tc_cmd->add_option("--validation", tcmb.validation, "Validation dataset directory");
  tc_cmd->add_option("--synthetic", tcmb.synthetic, "Use N teacher-generated samples");

  std::string nms_in;
  auto* nms_cmd = app.add_subcommand("nms-sim", "Run temporal NMS over per-position confidences");
  nms_cmd->add_option("input", nms_in, "One max-confidence per line")->required()->check(CLI::ExistingFile);

  std::size_t bench_len = 2000, bench_runs = 3;
  auto* bench_cmd = app.add_subcommand("bench", "Pipeline throughput with a mock extractor");
  bench_cmd->add_option("--length", bench_len, "Frames per synthetic stream");
  bench_cmd->add_option("--runs", bench_runs, "Repetitions (at least 3)");

  AugmentArgs aug;
  auto* aug_cmd = app.add_subcommand("augment", "Write augmented versions of a clip directory");
  aug_cmd->add_option("input", aug.input, "Directory of PPM frames")->required()->check(CLI::ExistingDirectory);
  aug_cmd->add_flag("--preprocess", aug.preprocess, "Also subsample, resize and normalize");
  aug_cmd->add_option("--order", aug.order, "before|after preprocessing");
  aug_cmd->add_option("--fps", aug.fps, "Frame rate of the clip");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return cmd_run(g, run);
    if (*synth_cmd) return cmd_synth(g, synth_in, synth_out);
    if (*metrics_cmd) return cmd_metrics(g, m_ref, m_test);
    if (*ts_cmd) return cmd_train_specgen(g, ts);
    if (*tc_cmd) return cmd_train_combined(g, tcmb);
    if (*nms_cmd) return cmd_nms_sim(g, nms_in);
    if (*bench_cmd) return cmd_bench(g, bench_len, bench_runs);
    if (*aug_cmd) return cmd_augment(g, aug);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
