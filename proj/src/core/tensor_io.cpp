// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "signvoice/core/tensor_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "signvoice/core/error.hpp"

namespace signvoice {
namespace {

static_assert(std::endian::native == std::endian::little,
              "ISVT I/O assumes a little-endian host");

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16),
                        static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

bool get_bytes(std::istream& in, void* dst, std::size_t n) {
  in.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
  return static_cast<std::size_t>(in.gcount()) == n;
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  if (!get_bytes(in, b, 4)) throw Error(Errc::truncated, "ISVT header ends early");
  return std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 | std::uint32_t(b[2]) << 16 |
         std::uint32_t(b[3]) << 24;
}

}  // namespace

std::size_t isvt_file_size(const Shape& shape) {
  return kIsvtHeaderBytes + 4 * shape.size() + 4 * shape_size(shape);
}

void write_tensor(std::ostream& out, const Tensor& t) {
  if (t.rank() == 0) throw Error(Errc::invalid_argument, "cannot store a rank-0 tensor");
  if (t.rank() > kIsvtMaxRank)
    throw Error(Errc::rank_too_large, "ISVT supports ranks 1..8, got " +
                                          std::to_string(t.rank()));
  const char header[8] = {kIsvtMagic[0], kIsvtMagic[1], kIsvtMagic[2], kIsvtMagic[3],
                          static_cast<char>(kIsvtVersion), 0, 0, 0};
  out.write(header, sizeof header);
  put_u32(out, static_cast<std::uint32_t>(t.rank()));
  put_u32(out, 0);
  for (std::size_t d : t.shape()) put_u32(out, static_cast<std::uint32_t>(d));
  out.write(reinterpret_cast<const char*>(t.data()),
            static_cast<std::streamsize>(t.size() * sizeof(float)));
  if (!out) throw Error(Errc::io, "ISVT write failed");
}

Tensor read_tensor(std::istream& in) {
  char header[8];
  if (!get_bytes(in, header, sizeof header))
    throw Error(Errc::truncated, "ISVT header ends early");
  if (std::memcmp(header, kIsvtMagic, 4) != 0)
    throw Error(Errc::bad_magic, "not an ISVT file");
  if (static_cast<std::uint8_t>(header[4]) != kIsvtVersion)
    throw Error(Errc::unsupported_version,
                "ISVT version " + std::to_string(static_cast<unsigned char>(header[4])));
  const std::uint32_t rank = get_u32(in);
  get_u32(in);
  if (rank == 0) throw Error(Errc::bad_format, "ISVT rank 0");
  if (rank > kIsvtMaxRank)
    throw Error(Errc::rank_too_large, "ISVT rank " + std::to_string(rank));
  Shape shape(rank);
  for (auto& d : shape) d = get_u32(in);
  std::vector<float> data(shape_size(shape));
  if (!get_bytes(in, data.data(), data.size() * sizeof(float)))
    throw Error(Errc::truncated, "ISVT payload shorter than " + shape_string(shape));
  return Tensor(std::move(shape), std::move(data));
}

void tensor_write(const Tensor& t, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io, "cannot open " + path.string() + " for writing");
  write_tensor(out, t);
}

Tensor tensor_read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open " + path.string());
  return read_tensor(in);
}

}  // namespace signvoice
