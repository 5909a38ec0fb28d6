#pragma once

#include "trc/tensor.hpp"

namespace trc {

/// Mean squared error over all entries.
double mse(const DenseTensor& reference, const DenseTensor& estimate);

/// 10 log10(peak^2 / MSE) over all entries; +infinity when the MSE is zero.
double psnr(const DenseTensor& reference, const DenseTensor& estimate, double peak = 1.0);

/// ||estimate - reference||_F / ||reference||_F.
double relative_error(const DenseTensor& reference, const DenseTensor& estimate);

}  // namespace trc
