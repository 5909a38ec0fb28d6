#include "trc/metrics.hpp"

#include <cmath>
#include <limits>

#include "trc/error.hpp"
#include "trc/kernels.hpp"

namespace trc {

double mse(const DenseTensor& reference, const DenseTensor& estimate) {
  if (!reference.same_shape(estimate)) throw DimensionError("mse: shape mismatch");
  return kernels::parallel::diff_sum_squares(reference.values(), estimate.values()) /
         static_cast<double>(reference.size());
}

double psnr(const DenseTensor& reference, const DenseTensor& estimate, double peak) {
  const double err = mse(reference, estimate);
  if (err == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / err);
}

double relative_error(const DenseTensor& reference, const DenseTensor& estimate) {
  if (!reference.same_shape(estimate)) throw DimensionError("relative_error: shape mismatch");
  return std::sqrt(kernels::parallel::diff_sum_squares(reference.values(), estimate.values())) /
         frob_norm(reference);
}

}  // namespace trc
