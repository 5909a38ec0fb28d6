#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "trc/tensor.hpp"

namespace trc {

/// Binary P5 (gray) or P6 (RGB) with maxval 255, loaded as rows x cols x n in [0, 1].
DenseTensor decode_netpbm(std::span<const std::uint8_t> bytes);
/// rows x cols x {1, 3} (or rows x cols) to P5/P6; values clamped to [0, 1]
/// and rounded half up to bytes.
std::vector<std::uint8_t> encode_netpbm(const DenseTensor& image);

/// Byte value for an intensity: floor(clamp(v, 0, 1) * 255 + 0.5).
std::uint8_t quantize(double v);

DenseTensor read_netpbm(const std::filesystem::path& path);
void write_netpbm(const std::filesystem::path& path, const DenseTensor& image);

}  // namespace trc
