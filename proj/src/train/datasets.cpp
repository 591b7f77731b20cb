// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "signvoice/train/datasets.hpp"

#include <cmath>
#include <fstream>
#include <random>

#include "signvoice/core/error.hpp"
#include "signvoice/core/tensor_io.hpp"

namespace signvoice {
namespace {

std::vector<float> gaussian_floats(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<float> normal;
  std::vector<float> v(n);
  for (auto& x : v) x = normal(rng);
  return v;
}

Tensor stack_rows(const std::vector<const std::vector<float>*>& rows, Shape row_shape) {
  std::size_t row = 1;
  for (auto d : row_shape) row *= d;
  Shape shape{rows.size()};
  shape.insert(shape.end(), row_shape.begin(), row_shape.end());
  Tensor out(shape);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i]->size() != row)
      throw Error(Errc::shape_mismatch, "dataset row " + std::to_string(i) + " has " +
                                            std::to_string(rows[i]->size()) + " values, expected " +
                                            std::to_string(row));
    std::copy(rows[i]->begin(), rows[i]->end(), out.data() + i * row);
  }
  return out;
}

std::vector<float> row_of(const Tensor& t, std::size_t i) {
  const std::size_t row = t.size() / t.dim(0);
  return {t.data() + i * row, t.data() + (i + 1) * row};
}

void write_planes(const std::vector<const std::vector<float>*>& real,
                  const std::vector<const std::vector<float>*>& imag, std::size_t bins,
                  std::size_t frames, const std::filesystem::path& dir) {
  tensor_write(stack_rows(real, {bins, frames}), dir / "real.isvt");
  tensor_write(stack_rows(imag, {bins, frames}), dir / "imag.isvt");
}

std::size_t checked_count(const Tensor& a, const Tensor& b, const Tensor& c) {
  if (a.rank() < 1 || b.rank() != 3 || b.shape() != c.shape() || a.dim(0) != b.dim(0))
    throw Error(Errc::shape_mismatch, "dataset tensors disagree on sample count or plane shape");
  if (a.dim(0) == 0) throw Error(Errc::empty_input, "dataset has no samples");
  return a.dim(0);
}

}  // namespace

std::vector<SpecgenSample> teacher_specgen_dataset(const GeneratorParams& params,
                                                   std::uint64_t seed, std::size_t count) {
  const auto teacher = SpectrogramGenerator<float>::random(params, seed + 1000);
  std::mt19937_64 rng(seed);
  std::vector<SpecgenSample> out;
  for (std::size_t i = 0; i < count; ++i) {
    SpecgenSample s;
    s.feature = gaussian_floats(params.input_dim, rng);
    auto planes = teacher.infer(s.feature);
    s.true_real = std::move(planes.real);
    s.true_imag = std::move(planes.imag);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<CombinedSample> teacher_combined_dataset(const ClassifierDims& dims,
                                                     const GeneratorParams& params,
                                                     std::uint64_t seed, std::size_t count) {
  if (params.input_dim != dims.feature_dim)
    throw Error(Errc::shape_mismatch, "generator input_dim differs from classifier feature_dim");
  const auto teacher_c = ToyClassifierModel<float>::random(dims, seed + 2000);
  const auto teacher_g = SpectrogramGenerator<float>::random(params, seed + 3000);
  std::mt19937_64 rng(seed);
  std::vector<CombinedSample> out;
  for (std::size_t i = 0; i < count; ++i) {
    CombinedSample s;
    s.descriptor = gaussian_floats(dims.input_dim, rng);
    const auto c = teacher_c.forward(s.descriptor);
    std::size_t best = 0;
    for (std::size_t k = 1; k < c.logits.size(); ++k)
      if (c.logits[k] > c.logits[best]) best = k;
    s.label = best;
    auto planes = teacher_g.infer(c.feature);
    s.true_real = std::move(planes.real);
    s.true_imag = std::move(planes.imag);
    out.push_back(std::move(s));
  }
  return out;
}

void save_specgen_dataset(const std::vector<SpecgenSample>& samples, std::size_t bins,
                          std::size_t frames, const std::filesystem::path& dir) {
  if (samples.empty()) throw Error(Errc::empty_input, "dataset has no samples");
  std::filesystem::create_directories(dir);
  std::vector<const std::vector<float>*> f, r, i;
  for (const auto& s : samples) {
    f.push_back(&s.feature);
    r.push_back(&s.true_real);
    i.push_back(&s.true_imag);
  }
  tensor_write(stack_rows(f, {samples.front().feature.size()}), dir / "features.isvt");
  write_planes(r, i, bins, frames, dir);
}

std::vector<SpecgenSample> load_specgen_dataset(const std::filesystem::path& dir) {
  const Tensor f = tensor_read(dir / "features.isvt");
  const Tensor r = tensor_read(dir / "real.isvt");
  const Tensor i = tensor_read(dir / "imag.isvt");
  const std::size_t n = checked_count(f, r, i);
  std::vector<SpecgenSample> out(n);
  for (std::size_t k = 0; k < n; ++k)
    out[k] = {row_of(f, k), row_of(r, k), row_of(i, k)};
  return out;
}

void save_combined_dataset(const std::vector<CombinedSample>& samples, std::size_t bins,
                           std::size_t frames, const std::filesystem::path& dir) {
  if (samples.empty()) throw Error(Errc::empty_input, "dataset has no samples");
  std::filesystem::create_directories(dir);
  std::vector<const std::vector<float>*> d, r, i;
  Tensor labels({samples.size()});
  for (std::size_t k = 0; k < samples.size(); ++k) {
    d.push_back(&samples[k].descriptor);
    r.push_back(&samples[k].true_real);
    i.push_back(&samples[k].true_imag);
    labels[k] = static_cast<float>(samples[k].label);
  }
  tensor_write(stack_rows(d, {samples.front().descriptor.size()}), dir / "descriptors.isvt");
  tensor_write(labels, dir / "labels.isvt");
  write_planes(r, i, bins, frames, dir);
}

std::vector<CombinedSample> load_combined_dataset(const std::filesystem::path& dir) {
  const Tensor d = tensor_read(dir / "descriptors.isvt");
  const Tensor l = tensor_read(dir / "labels.isvt");
  const Tensor r = tensor_read(dir / "real.isvt");
  const Tensor i = tensor_read(dir / "imag.isvt");
  const std::size_t n = checked_count(d, r, i);
  if (l.rank() != 1 || l.dim(0) != n)
    throw Error(Errc::shape_mismatch, "labels.isvt must hold one value per sample");
  std::vector<CombinedSample> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const float label = l[k];
    if (!(label >= 0.0f) || label != std::floor(label))
      throw Error(Errc::label_out_of_range, "label " + std::to_string(label) + " is not an index");
    out[k] = {row_of(d, k), static_cast<std::size_t>(label), row_of(r, k), row_of(i, k)};
  }
  return out;
}

void save_classifier(const ToyClassifierModel<float>& model, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  nlohmann::json manifest;
  manifest["dims"] = {{"input_dim", model.dims().input_dim},
                      {"feature_dim", model.dims().feature_dim},
                      {"class_count", model.dims().class_count}};
  for (const auto& p : model.params())
    tensor_write(Tensor(p.shape, p.value), dir / (p.name + ".isvt"));
  std::ofstream out(dir / "manifest.json");
  if (!out) throw Error(Errc::io, "cannot write manifest in " + dir.string());
  out << manifest.dump(2) << '\n';
}

ToyClassifierModel<float> load_classifier(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw Error(Errc::io, "missing manifest.json in " + dir.string());
  ClassifierDims dims;
  try {
    nlohmann::json manifest;
    in >> manifest;
    const auto& j = manifest.at("dims");
    dims = {j.at("input_dim").get<std::size_t>(), j.at("feature_dim").get<std::size_t>(),
            j.at("class_count").get<std::size_t>()};
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::bad_format, std::string("classifier manifest: ") + e.what());
  }
  ToyClassifierModel<float> model(dims);
  for (auto& p : model.params()) {
    Tensor t = tensor_read(dir / (p.name + ".isvt"));
    if (t.shape() != p.shape)
      throw Error(Errc::shape_mismatch, "parameter " + p.name + " stored as " +
                                            shape_string(t.shape()) + ", expected " +
                                            shape_string(p.shape));
    p.value = std::move(t.storage());
  }
  return model;
}

}  // namespace signvoice
