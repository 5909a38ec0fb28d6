#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "trc/tensor.hpp"

namespace trc {

// Binary tensor file:
//   "TRT1" | u8 order N | N x u64 dims (LE) | prod(dims) x f64 (LE), first index fastest.

std::vector<std::uint8_t> encode_trt(const DenseTensor& t);
/// Throws FormatError naming the failing byte offset.
DenseTensor decode_trt(std::span<const std::uint8_t> bytes);

void write_trt(const std::filesystem::path& path, const DenseTensor& t);
DenseTensor read_trt(const std::filesystem::path& path);

/// Whole-file helpers shared by the readers; throw IoError.
std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace trc
