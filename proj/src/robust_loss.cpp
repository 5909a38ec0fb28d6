#include "trc/robust_loss.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "trc/error.hpp"
#include "trc/kernels.hpp"
#include "trc/tensor.hpp"

namespace trc {

std::string_view to_string(LossFamily family) {
  switch (family) {
    case LossFamily::huber:
      return "huber";
    case LossFamily::welsch:
      return "welsch";
    case LossFamily::cauchy:
      return "cauchy";
  }
  return "unknown";
}

LossFamily parse_loss_family(std::string_view name) {
  if (name == "huber") return LossFamily::huber;
  if (name == "welsch") return LossFamily::welsch;
  if (name == "cauchy") return LossFamily::cauchy;
  throw ConfigError("unknown estimator '" + std::string(name) + "'");
}

double Estimator::loss(double x) const {
  const double c2 = c * c;
  switch (family) {
    case LossFamily::huber: {
      const double ax = std::abs(x);
      return ax <= c ? 0.5 * x * x : c * ax - 0.5 * c2;
    }
    case LossFamily::welsch:
      return -c2 * std::expm1(-x * x / (2.0 * c2));
    case LossFamily::cauchy:
      return 0.5 * c2 * std::log1p(x * x / c2);
  }
  return 0.0;
}

double Estimator::derivative(double x) const {
  switch (family) {
    case LossFamily::huber:
      return std::abs(x) <= c ? x : c * (x > 0 ? 1.0 : -1.0);
    case LossFamily::welsch:
    case LossFamily::cauchy:
      return x * weight(x);
  }
  return 0.0;
}

double Estimator::weight(double x) const {
  switch (family) {
    case LossFamily::huber: {
      const double ax = std::abs(x);
      return ax <= c ? 1.0 : c / ax;
    }
    case LossFamily::welsch:
      return std::exp(-x * x / (2.0 * c * c));
    case LossFamily::cauchy: {
      const double r = x / c;
      return 1.0 / (1.0 + r * r);
    }
  }
  return 1.0;
}

double quantile(std::span<const double> values, double q) {
  if (values.empty()) throw ArgumentError("quantile of an empty vector");
  std::vector<double> v(values.begin(), values.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(lo), v.end());
  const double a = v[lo];
  if (hi == lo) return a;
  // Smallest element above the lo-th order statistic is the (lo+1)-th.
  const double b = *std::min_element(v.begin() + static_cast<std::ptrdiff_t>(hi), v.end());
  return a + (pos - static_cast<double>(lo)) * (b - a);
}

double adapt_c(const AdaptiveC& cfg, std::span<const double> residuals) {
  if (residuals.empty()) throw ArgumentError("adapt_c: empty residual vector");
  const double q25 = quantile(residuals, 0.25);
  const double q75 = quantile(residuals, 0.75);
  const double spread = cfg.mode == QuantileMode::magnitude ? std::max(std::abs(q25), std::abs(q75))
                                                            : std::max(q25, q75);
  return std::max(cfg.eta * spread, cfg.c_min);
}

DenseTensor weight_tensor(const Estimator& est, const DenseTensor& residual,
                          const DenseTensor& support) {
  if (!residual.same_shape(support)) throw DimensionError("weight_tensor: shape mismatch");
  DenseTensor q(residual.dims());
  kernels::parallel::weights(q.values(), residual.values(), support.values(), est);
  return q;
}

}  // namespace trc
