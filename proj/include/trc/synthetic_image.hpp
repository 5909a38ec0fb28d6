#pragma once

#include <cstddef>

#include "trc/tensor.hpp"

namespace trc {

/// Deterministic piecewise-smooth RGB test image in [0, 1]: smooth shaded
/// background with a disc, a rectangle and a diagonal band, each carrying its
/// own smooth colour ramp. Shape rows x cols x 3.
DenseTensor piecewise_smooth_image(std::size_t rows = 64, std::size_t cols = 96);

}  // namespace trc
