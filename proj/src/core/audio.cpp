// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "signvoice/core/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include <json.hpp>

#include "signvoice/core/error.hpp"
#include "signvoice/core/tensor_io.hpp"

namespace signvoice {
namespace {

void put_u16(std::vector<std::uint8_t>& b, std::uint16_t v) {
  b.push_back(static_cast<std::uint8_t>(v));
  b.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& b, std::uint32_t v) {
  for (int s = 0; s < 32; s += 8) b.push_back(static_cast<std::uint8_t>(v >> s));
}

void put_tag(std::vector<std::uint8_t>& b, const char* tag) {
  b.insert(b.end(), tag, tag + 4);
}

std::uint32_t le32(const std::uint8_t* p) {
  return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 |
         std::uint32_t(p[3]) << 24;
}

std::uint16_t le16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | p[1] << 8);
}

std::filesystem::path sidecar_path(const std::filesystem::path& isvt_path) {
  auto p = isvt_path;
  p.replace_extension(".json");
  return p;
}

}  // namespace

void ComplexSpectrogram::validate() const {
  if (real.rank() != 2 || real.shape() != imag.shape())
    throw Error(Errc::shape_mismatch, "spectrogram planes must be equal 2-D shapes, got " +
                                          shape_string(real.shape()) + " and " +
                                          shape_string(imag.shape()));
  if (n_fft < 2 || real.dim(0) != static_cast<std::size_t>(n_fft / 2 + 1))
    throw Error(Errc::shape_mismatch, std::to_string(real.dim(0)) +
                                          " bins do not match n_fft " + std::to_string(n_fft));
  if (hop < 1) throw Error(Errc::invalid_argument, "hop must be >= 1");
  if (sample_rate <= 0) throw Error(Errc::invalid_argument, "sample rate must be positive");
}

Tensor ComplexSpectrogram::stacked() const {
  Tensor out({2, real.dim(0), real.dim(1)});
  std::copy(real.values().begin(), real.values().end(), out.data());
  std::copy(imag.values().begin(), imag.values().end(), out.data() + real.size());
  return out;
}

ComplexSpectrogram ComplexSpectrogram::from_stacked(const Tensor& planes, int sample_rate,
                                                    int n_fft, int hop) {
  if (planes.rank() != 3 || planes.dim(0) != 2)
    throw Error(Errc::shape_mismatch,
                "expected 2 x bins x frames, got " + shape_string(planes.shape()));
  const std::size_t plane = planes.dim(1) * planes.dim(2);
  ComplexSpectrogram s;
  s.real = Tensor({planes.dim(1), planes.dim(2)},
                  std::vector<float>(planes.data(), planes.data() + plane));
  s.imag = Tensor({planes.dim(1), planes.dim(2)},
                  std::vector<float>(planes.data() + plane, planes.data() + 2 * plane));
  s.sample_rate = sample_rate;
  s.n_fft = n_fft;
  s.hop = hop;
  s.validate();
  return s;
}

std::int16_t pcm16_from_float(float sample) {
  // NaN maps to silence; clamp handles the rest.
  if (std::isnan(sample)) return 0;
  const float clamped = std::clamp(sample, -1.0f, 1.0f);
  return static_cast<std::int16_t>(std::lround(clamped * 32767.0f));
}

std::vector<std::uint8_t> wav_bytes(const AudioBuffer& audio) {
  if (audio.sample_rate <= 0) throw Error(Errc::invalid_argument, "sample rate must be positive");
  const auto data_bytes = static_cast<std::uint32_t>(audio.samples.size() * 2);
  const auto rate = static_cast<std::uint32_t>(audio.sample_rate);
  std::vector<std::uint8_t> b;
  b.reserve(44 + data_bytes);
  put_tag(b, "RIFF");
  put_u32(b, 36 + data_bytes);
  put_tag(b, "WAVE");
  put_tag(b, "fmt ");
  put_u32(b, 16);
  put_u16(b, 1);  // PCM
  put_u16(b, 1);  // mono
  put_u32(b, rate);
  put_u32(b, rate * 2);  // byte rate
  put_u16(b, 2);         // block align
  put_u16(b, 16);
  put_tag(b, "data");
  put_u32(b, data_bytes);
  for (float s : audio.samples)
    put_u16(b, static_cast<std::uint16_t>(pcm16_from_float(s)));
  return b;
}

void wav_write(const AudioBuffer& audio, const std::filesystem::path& path) {
  const auto bytes = wav_bytes(audio);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::io, "write failed for " + path.string());
}

AudioBuffer wav_read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open " + path.string());
  const std::vector<std::uint8_t> b((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
  if (b.size() < 12 || std::memcmp(b.data(), "RIFF", 4) != 0 ||
      std::memcmp(b.data() + 8, "WAVE", 4) != 0)
    throw Error(Errc::bad_format, path.string() + " is not a RIFF/WAVE file");
  AudioBuffer audio;
  bool have_fmt = false;
  std::size_t pos = 12;
  while (pos + 8 <= b.size()) {
    const std::uint32_t len = le32(b.data() + pos + 4);
    const std::uint8_t* body = b.data() + pos + 8;
    if (pos + 8 + len > b.size()) throw Error(Errc::truncated, "WAV chunk exceeds file");
    if (std::memcmp(b.data() + pos, "fmt ", 4) == 0) {
      if (len < 16 || le16(body) != 1 || le16(body + 2) != 1 || le16(body + 14) != 16)
        throw Error(Errc::bad_format, "only PCM16 mono WAV is supported");
      audio.sample_rate = static_cast<int>(le32(body + 4));
      have_fmt = true;
    } else if (std::memcmp(b.data() + pos, "data", 4) == 0) {
      if (!have_fmt) throw Error(Errc::bad_format, "data chunk before fmt chunk");
      audio.samples.resize(len / 2);
      for (std::size_t i = 0; i < audio.samples.size(); ++i)
        audio.samples[i] = static_cast<std::int16_t>(le16(body + 2 * i)) / 32767.0f;
      return audio;
    }
    pos += 8 + len + (len & 1);
  }
  throw Error(Errc::bad_format, path.string() + " has no data chunk");
}

void spectrogram_write(const ComplexSpectrogram& spec, const std::filesystem::path& isvt_path) {
  spec.validate();
  tensor_write(spec.stacked(), isvt_path);
  const nlohmann::json side = {
      {"n_fft", spec.n_fft}, {"hop", spec.hop}, {"sample_rate", spec.sample_rate}};
  std::ofstream out(sidecar_path(isvt_path));
  if (!out) throw Error(Errc::io, "cannot write spectrogram sidecar");
  out << side.dump(2) << '\n';
}

ComplexSpectrogram spectrogram_read(const std::filesystem::path& isvt_path) {
  const Tensor planes = tensor_read(isvt_path);
  std::ifstream in(sidecar_path(isvt_path));
  if (!in) throw Error(Errc::io, "missing sidecar " + sidecar_path(isvt_path).string());
  nlohmann::json side;
  try {
    in >> side;
    return ComplexSpectrogram::from_stacked(planes, side.at("sample_rate").get<int>(),
                                            side.at("n_fft").get<int>(),
                                            side.at("hop").get<int>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::bad_format, std::string("spectrogram sidecar: ") + e.what());
  }
}

}  // namespace signvoice
