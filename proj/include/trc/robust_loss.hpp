#pragma once

#include <span>
#include <string_view>

namespace trc {

class DenseTensor;

enum class LossFamily { huber, welsch, cauchy };

std::string_view to_string(LossFamily family);
/// Parses "huber", "welsch" or "cauchy"; throws ConfigError otherwise.
LossFamily parse_loss_family(std::string_view name);

/**
 * M-estimator loss f with shape parameter c.
 *
 *   Huber:  x^2/2 for |x| <= c, c|x| - c^2/2 beyond
 *   Welsch: c^2 (1 - exp(-x^2 / (2 c^2)))
 *   Cauchy: (c^2/2) ln(1 + x^2/c^2)
 *
 * The half-quadratic weight is f'(x)/x, which lies in (0, 1] and equals 1 at
 * x = 0 by continuity.
 */
struct Estimator {
  LossFamily family = LossFamily::cauchy;
  double c = 1.0;

  double loss(double x) const;
  double derivative(double x) const;
  double weight(double x) const;
};

enum class QuantileMode {
  magnitude,  // max(|Q25|, |Q75|)
  signed_max  // max(Q25, Q75) exactly as printed
};

/// Adaptive shape-parameter rule c = max(eta * spread(e), c_min).
struct AdaptiveC {
  double eta = 4.0;
  double c_min = 0.15;
  QuantileMode mode = QuantileMode::magnitude;
};

/// Quantile by linear interpolation at position q*(n-1) of the sorted data.
double quantile(std::span<const double> values, double q);

/// Shape parameter from the residuals on the observation support.
/// Throws ArgumentError for an empty residual vector.
double adapt_c(const AdaptiveC& cfg, std::span<const double> residuals);

/// Q with weight(residual) where support is nonzero and 0 elsewhere.
DenseTensor weight_tensor(const Estimator& est, const DenseTensor& residual,
                          const DenseTensor& support);

}  // namespace trc
