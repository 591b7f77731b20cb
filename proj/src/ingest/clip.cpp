// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "signvoice/ingest/clip.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <string>

#include "signvoice/core/error.hpp"
#include "signvoice/extractor/extractor.hpp"

namespace signvoice {
namespace {

constexpr double kLumaR = 0.299, kLumaG = 0.587, kLumaB = 0.114;

// Bilinear sample of a width x height plane (index x * height + y) at a
// point already known to lie inside [0, w-1] x [0, h-1].
float bilinear(const float* plane, std::size_t w, std::size_t h, double sx, double sy) {
  const auto x0 = static_cast<std::size_t>(std::floor(sx));
  const auto y0 = static_cast<std::size_t>(std::floor(sy));
  const std::size_t x1 = std::min(x0 + 1, w - 1), y1 = std::min(y0 + 1, h - 1);
  const double fx = sx - static_cast<double>(x0), fy = sy - static_cast<double>(y0);
  const double a = plane[x0 * h + y0], b = plane[x1 * h + y0];
  const double c = plane[x0 * h + y1], d = plane[x1 * h + y1];
  const double top = a + fx * (b - a);
  const double bottom = c + fx * (d - c);
  return static_cast<float>(top + fy * (bottom - top));
}

int read_header_int(std::istream& in) {
  int ch = in.peek();
  while (in && (std::isspace(ch) || ch == '#')) {
    if (ch == '#') {
      std::string comment;
      std::getline(in, comment);
    } else {
      in.get();
    }
    ch = in.peek();
  }
  int v = -1;
  if (!(in >> v)) throw Error(Errc::truncated, "PPM header ended early");
  return v;
}

// Unit-range view [0,1] of a pixel value and back.
float to_unit(float v, bool normalized) { return normalized ? (v + 1.0f) * 0.5f : v / 255.0f; }
float from_unit(float u, bool normalized) { return normalized ? u * 2.0f - 1.0f : u * 255.0f; }

float clamp01(double v) { return static_cast<float>(std::clamp(v, 0.0, 1.0)); }

}  // namespace

void Clip::validate() const {
  if (frames.rank() != 4 || frames.dim(0) != 3)
    throw Error(Errc::shape_mismatch,
                "clip must be 3 x t x width x height, got " + shape_string(frames.shape()));
  if (frames.size() == 0) throw Error(Errc::empty_input, "clip has no pixels");
  if (!(fps > 0.0)) throw Error(Errc::invalid_argument, "clip fps must be positive");
}

Tensor Clip::frame(std::size_t f) const {
  const std::size_t t = frame_count(), plane = width() * height();
  if (f >= t) throw Error(Errc::invalid_argument, "frame index out of range");
  Tensor out({3, width(), height()});
  for (std::size_t c = 0; c < 3; ++c)
    std::copy_n(frames.data() + (c * t + f) * plane, plane, out.data() + c * plane);
  return out;
}

std::vector<Tensor> Clip::frame_list() const {
  std::vector<Tensor> out;
  out.reserve(frame_count());
  for (std::size_t f = 0; f < frame_count(); ++f) out.push_back(frame(f));
  return out;
}

Clip Clip::from_frames(const std::vector<Tensor>& list, double fps, bool normalized) {
  if (list.empty()) throw Error(Errc::empty_input, "no frames");
  const Shape shape = list.front().shape();
  if (shape.size() != 3 || shape[0] != 3)
    throw Error(Errc::shape_mismatch, "frames must be 3 x width x height");
  const std::size_t t = list.size(), plane = shape[1] * shape[2];
  Clip clip;
  clip.fps = fps;
  clip.normalized = normalized;
  clip.frames = Tensor({3, t, shape[1], shape[2]});
  for (std::size_t f = 0; f < t; ++f) {
    if (list[f].shape() != shape)
      throw Error(Errc::shape_mismatch, "frame " + std::to_string(f) + " has shape " +
                                            shape_string(list[f].shape()));
    for (std::size_t c = 0; c < 3; ++c)
      std::copy_n(list[f].data() + c * plane, plane, clip.frames.data() + (c * t + f) * plane);
  }
  return clip;
}

Tensor read_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open " + path.string());
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (magic[0] != 'P' || magic[1] != '6') throw Error(Errc::bad_magic, path.string() + " is not P6");
  const int w = read_header_int(in), h = read_header_int(in), maxval = read_header_int(in);
  if (w <= 0 || h <= 0) throw Error(Errc::bad_format, "bad PPM dimensions in " + path.string());
  if (maxval != 255) throw Error(Errc::bad_format, "only 8-bit PPM is supported");
  in.get();
  const auto W = static_cast<std::size_t>(w), H = static_cast<std::size_t>(h);
  std::vector<unsigned char> bytes(W * H * 3);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (static_cast<std::size_t>(in.gcount()) != bytes.size())
    throw Error(Errc::truncated, path.string() + " pixel data is short");
  Tensor out({3, W, H});
  for (std::size_t y = 0; y < H; ++y)
    for (std::size_t x = 0; x < W; ++x)
      for (std::size_t c = 0; c < 3; ++c)
        out[(c * W + x) * H + y] = static_cast<float>(bytes[(y * W + x) * 3 + c]);
  return out;
}

void write_ppm(const std::filesystem::path& path, const Tensor& frame) {
  if (frame.rank() != 3 || frame.dim(0) != 3)
    throw Error(Errc::shape_mismatch, "PPM frame must be 3 x width x height");
  const std::size_t W = frame.dim(1), H = frame.dim(2);
  std::vector<unsigned char> bytes(W * H * 3);
  for (std::size_t y = 0; y < H; ++y)
    for (std::size_t x = 0; x < W; ++x)
      for (std::size_t c = 0; c < 3; ++c) {
        const float v = frame[(c * W + x) * H + y];
        const float clamped = std::isnan(v) ? 0.0f : std::clamp(v, 0.0f, 255.0f);
        bytes[(y * W + x) * 3 + c] = static_cast<unsigned char>(std::lround(clamped));
      }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io, "cannot write " + path.string());
  out << "P6\n" << W << ' ' << H << "\n255\n";
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::io, "short write to " + path.string());
}

Clip load_clip_dir(const std::filesystem::path& dir, double fps) {
  if (!std::filesystem::is_directory(dir)) throw Error(Errc::io, dir.string() + " is not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".ppm") files.push_back(entry.path());
  if (files.empty()) throw Error(Errc::empty_input, "no .ppm frames in " + dir.string());
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) { return a.filename().string() < b.filename().string(); });
  std::vector<Tensor> frames;
  for (const auto& f : files) frames.push_back(read_ppm(f));
  return Clip::from_frames(frames, fps, false);
}

void save_clip_dir(const Clip& clip, const std::filesystem::path& dir) {
  clip.validate();
  std::filesystem::create_directories(dir);
  char name[32];
  for (std::size_t f = 0; f < clip.frame_count(); ++f) {
    Tensor frame = clip.frame(f);
    if (clip.normalized)
      for (auto& v : frame.storage()) v = (v + 1.0f) * 127.5f;
    std::snprintf(name, sizeof name, "frame_%06zu.ppm", f);
    write_ppm(dir / name, frame);
  }
}

std::vector<std::size_t> subsample_indices(std::size_t t, std::size_t count) {
  if (t == 0 || count == 0) throw Error(Errc::empty_input, "cannot subsample an empty clip");
  std::vector<std::size_t> out(count);
  for (std::size_t j = 0; j < count; ++j) {
    const double pos = count == 1 ? 0.0
                                  : static_cast<double>(j) * static_cast<double>(t - 1) /
                                        static_cast<double>(count - 1);
    out[j] = static_cast<std::size_t>(std::lround(pos));
  }
  return out;
}

Clip preprocess_clip(const Clip& raw, const PreprocessConfig& cfg) {
  raw.validate();
  if (cfg.frames == 0 || cfg.size == 0)
    throw Error(Errc::invalid_argument, "preprocess needs frames >= 1 and size >= 1");
  const std::size_t t = raw.frame_count(), W = raw.width(), H = raw.height();
  const std::size_t S = cfg.size;
  const double scale = static_cast<double>(S) / static_cast<double>(std::min(W, H));
  const std::size_t newW = W <= H ? S : static_cast<std::size_t>(std::lround(W * scale));
  const std::size_t newH = H < W ? S : static_cast<std::size_t>(std::lround(H * scale));
  const std::size_t offx = (std::max(newW, S) - S) / 2, offy = (std::max(newH, S) - S) / 2;
  const double rx = static_cast<double>(W) / static_cast<double>(newW);
  const double ry = static_cast<double>(H) / static_cast<double>(newH);

  std::vector<double> sx(S), sy(S);
  for (std::size_t i = 0; i < S; ++i) {
    sx[i] = std::clamp((static_cast<double>(i + offx) + 0.5) * rx - 0.5, 0.0,
                       static_cast<double>(W - 1));
    sy[i] = std::clamp((static_cast<double>(i + offy) + 0.5) * ry - 0.5, 0.0,
                       static_cast<double>(H - 1));
  }

  const auto idx = subsample_indices(t, cfg.frames);
  Clip out;
  out.fps = raw.fps;
  out.normalized = true;
  out.frames = Tensor({3, cfg.frames, S, S});
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t j = 0; j < cfg.frames; ++j) {
      const float* src = raw.frames.data() + (c * t + idx[j]) * W * H;
      float* dst = out.frames.data() + (c * cfg.frames + j) * S * S;
      for (std::size_t x = 0; x < S; ++x)
        for (std::size_t y = 0; y < S; ++y)
          dst[x * S + y] = bilinear(src, W, H, sx[x], sy[y]) / 127.5f - 1.0f;
    }
  return out;
}

void AugmentParams::validate() const {
  for (double f : {brightness, contrast, saturation, hue, rotation_degrees})
    if (!(f >= 0.0) || !std::isfinite(f))
      throw Error(Errc::invalid_argument, "augmentation factors must be finite and >= 0");
  if (!(max_drop_fraction >= 0.0 && max_drop_fraction <= 1.0 / 8.0))
    throw Error(Errc::invalid_argument, "frame-drop fraction must be in [0, 1/8]");
  if (versions < 1) throw Error(Errc::invalid_argument, "need at least one version per clip");
}

AugmentDraw draw_augmentation(const AugmentParams& params, std::size_t version,
                              std::size_t frame_count) {
  params.validate();
  if (version >= params.versions)
    throw Error(Errc::invalid_argument, "version " + std::to_string(version) + " >= " +
                                            std::to_string(params.versions));
  std::mt19937_64 rng(mix64(params.seed ^ mix64(version + 1)));
  auto uniform = [&](double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  };
  auto factor = [&](double f) { return f == 0.0 ? 1.0 : uniform(std::max(0.0, 1.0 - f), 1.0 + f); };
  AugmentDraw d;
  d.brightness = factor(params.brightness);
  d.contrast = factor(params.contrast);
  d.saturation = factor(params.saturation);
  d.hue = params.hue == 0.0 ? 0.0 : uniform(-params.hue, params.hue);
  d.angle_degrees =
      params.rotation_degrees == 0.0 ? 0.0 : uniform(-params.rotation_degrees, params.rotation_degrees);
  const auto max_drop = static_cast<std::size_t>(
      std::floor(static_cast<double>(frame_count) * params.max_drop_fraction));
  if (max_drop > 0) {
    const std::size_t k = rng() % (max_drop + 1);
    std::vector<std::size_t> pool(frame_count);
    for (std::size_t i = 0; i < frame_count; ++i) pool[i] = i;
    for (std::size_t i = 0; i < k; ++i) std::swap(pool[i], pool[i + rng() % (frame_count - i)]);
    d.dropped.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(d.dropped.begin(), d.dropped.end());
  }
  return d;
}

Clip augment_clip(const Clip& clip, const AugmentParams& params, std::size_t version) {
  clip.validate();
  const AugmentDraw d = draw_augmentation(params, version, clip.frame_count());
  const std::size_t t = clip.frame_count(), W = clip.width(), H = clip.height(), plane = W * H;
  const bool norm = clip.normalized;
  Clip out = clip;
  float* px = out.frames.data();
  auto at = [&](std::size_t c, std::size_t f) { return px + (c * t + f) * plane; };

  const bool jitter = d.brightness != 1.0 || d.contrast != 1.0 || d.saturation != 1.0 || d.hue != 0.0;
  if (jitter) {
    std::vector<float> r(plane), g(plane), b(plane);
    const double theta = 2.0 * std::numbers::pi * d.hue;
    const double ch = std::cos(theta), sh = std::sin(theta);
    for (std::size_t f = 0; f < t; ++f) {
      float *R = at(0, f), *G = at(1, f), *B = at(2, f);
      for (std::size_t i = 0; i < plane; ++i) {
        r[i] = to_unit(R[i], norm);
        g[i] = to_unit(G[i], norm);
        b[i] = to_unit(B[i], norm);
      }
      if (d.brightness != 1.0)
        for (std::size_t i = 0; i < plane; ++i) {
          r[i] = clamp01(r[i] * d.brightness);
          g[i] = clamp01(g[i] * d.brightness);
          b[i] = clamp01(b[i] * d.brightness);
        }
      if (d.contrast != 1.0) {
        double mean = 0;
        for (std::size_t i = 0; i < plane; ++i) mean += kLumaR * r[i] + kLumaG * g[i] + kLumaB * b[i];
        mean /= static_cast<double>(plane);
        for (std::size_t i = 0; i < plane; ++i) {
          r[i] = clamp01((r[i] - mean) * d.contrast + mean);
          g[i] = clamp01((g[i] - mean) * d.contrast + mean);
          b[i] = clamp01((b[i] - mean) * d.contrast + mean);
        }
      }
      if (d.saturation != 1.0)
        for (std::size_t i = 0; i < plane; ++i) {
          const double y = kLumaR * r[i] + kLumaG * g[i] + kLumaB * b[i];
          r[i] = clamp01((r[i] - y) * d.saturation + y);
          g[i] = clamp01((g[i] - y) * d.saturation + y);
          b[i] = clamp01((b[i] - y) * d.saturation + y);
        }
      if (d.hue != 0.0)
        for (std::size_t i = 0; i < plane; ++i) {
          const double y = 0.299 * r[i] + 0.587 * g[i] + 0.114 * b[i];
          const double iq_i = 0.596 * r[i] - 0.274 * g[i] - 0.322 * b[i];
          const double iq_q = 0.211 * r[i] - 0.523 * g[i] + 0.312 * b[i];
          const double i2 = iq_i * ch - iq_q * sh, q2 = iq_i * sh + iq_q * ch;
          r[i] = clamp01(y + 0.956 * i2 + 0.621 * q2);
          g[i] = clamp01(y - 0.272 * i2 - 0.647 * q2);
          b[i] = clamp01(y - 1.106 * i2 + 1.703 * q2);
        }
      for (std::size_t i = 0; i < plane; ++i) {
        R[i] = from_unit(r[i], norm);
        G[i] = from_unit(g[i], norm);
        B[i] = from_unit(b[i], norm);
      }
    }
  }

  if (d.angle_degrees != 0.0) {
    const double a = d.angle_degrees * std::numbers::pi / 180.0;
    const double ca = std::cos(a), sa = std::sin(a);
    const double cx = (static_cast<double>(W) - 1.0) / 2.0, cy = (static_cast<double>(H) - 1.0) / 2.0;
    const float black = norm ? -1.0f : 0.0f;
    std::vector<float> src(plane);
    for (std::size_t c = 0; c < 3; ++c)
      for (std::size_t f = 0; f < t; ++f) {
        float* p = at(c, f);
        std::copy_n(p, plane, src.data());
        for (std::size_t x = 0; x < W; ++x)
          for (std::size_t y = 0; y < H; ++y) {
            const double dx = static_cast<double>(x) - cx, dy = static_cast<double>(y) - cy;
            const double sx = ca * dx + sa * dy + cx, sy = -sa * dx + ca * dy + cy;
            const bool inside = sx >= 0.0 && sy >= 0.0 && sx <= static_cast<double>(W - 1) &&
                                sy <= static_cast<double>(H - 1);
            p[x * H + y] = inside ? bilinear(src.data(), W, H, sx, sy) : black;
          }
      }
  }

  if (!d.dropped.empty()) {
    std::vector<Tensor> kept;
    std::size_t next = 0;
    for (std::size_t f = 0; f < t; ++f) {
      if (next < d.dropped.size() && d.dropped[next] == f) {
        ++next;
        continue;
      }
      kept.push_back(out.frame(f));
    }
    out = Clip::from_frames(kept, clip.fps, norm);
  }
  return out;
}

Clip prepare_training_clip(const Clip& raw, const AugmentParams& params, std::size_t version,
                           AugmentOrder order, const PreprocessConfig& cfg) {
  if (order == AugmentOrder::before_preprocess)
    return preprocess_clip(augment_clip(raw, params, version), cfg);
  return augment_clip(preprocess_clip(raw, cfg), params, version);
}

}  // namespace signvoice
