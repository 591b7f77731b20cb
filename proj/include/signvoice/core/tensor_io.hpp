// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "signvoice/core/tensor.hpp"

namespace signvoice {

// ISVT layout, all integers little-endian:
//   [0..4)   magic "ISVT"
//   [4]      version (1)
//   [5..8)   zero padding
//   [8..12)  u32 rank (1..8)
//   [12..16) u32 reserved, zero
//   rank x u32 dims
//   product(dims) x f32 payload
inline constexpr char kIsvtMagic[4] = {'I', 'S', 'V', 'T'};
inline constexpr std::uint8_t kIsvtVersion = 1;
inline constexpr std::size_t kIsvtHeaderBytes = 16;
inline constexpr std::size_t kIsvtMaxRank = 8;

std::size_t isvt_file_size(const Shape& shape);

void write_tensor(std::ostream& out, const Tensor& t);
Tensor read_tensor(std::istream& in);

void tensor_write(const Tensor& t, const std::filesystem::path& path);
Tensor tensor_read(const std::filesystem::path& path);

}  // namespace signvoice
