#include "trc/kernels.hpp"

#include <algorithm>
#include <vector>

#include <omp.h>

namespace trc::kernels {

namespace {

// Source strides read in output-mode order.
std::vector<std::size_t> permuted_strides(std::span<const std::size_t> src_dims,
                                          std::span<const std::size_t> order) {
  std::vector<std::size_t> src_stride(src_dims.size());
  std::size_t s = 1;
  for (std::size_t c = 0; c < src_dims.size(); ++c) {
    src_stride[c] = s;
    s *= src_dims[c];
  }
  std::vector<std::size_t> out(order.size());
  for (std::size_t j = 0; j < order.size(); ++j) out[j] = src_stride[order[j]];
  return out;
}

// Copies output positions [begin, end) with an odometer over the output index.
void permute_range(const double* src, std::span<const std::size_t> out_dims,
                   std::span<const std::size_t> stride, double* dst, std::size_t begin,
                   std::size_t end) {
  const std::size_t n = out_dims.size();
  std::vector<std::size_t> idx(n);
  std::size_t rem = begin;
  std::size_t offset = 0;
  for (std::size_t j = 0; j < n; ++j) {
    idx[j] = rem % out_dims[j];
    rem /= out_dims[j];
    offset += idx[j] * stride[j];
  }
  const std::size_t inner = out_dims[0];
  const std::size_t inner_stride = stride[0];
  std::size_t pos = begin;
  while (pos < end) {
    // Run along mode 0 until the end of this fibre or of the range.
    const std::size_t run = std::min(inner - idx[0], end - pos);
    for (std::size_t r = 0; r < run; ++r) dst[pos + r] = src[offset + r * inner_stride];
    pos += run;
    offset += run * inner_stride;
    idx[0] += run;
    for (std::size_t j = 0; j + 1 < n && idx[j] == out_dims[j]; ++j) {
      offset -= idx[j] * stride[j];
      idx[j] = 0;
      ++idx[j + 1];
      offset += stride[j + 1];
    }
  }
}

// Fixed partition used by the parallel reductions.
constexpr std::size_t kReductionBlocks = 64;

template <class Term>
double blocked_sum(std::size_t n, Term term) {
  std::vector<double> partial(kReductionBlocks, 0.0);
  const std::size_t block = (n + kReductionBlocks - 1) / kReductionBlocks;
#pragma omp parallel for schedule(static) if (n > kParallelThreshold)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(kReductionBlocks); ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * block;
    const std::size_t hi = std::min(n, lo + block);
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) acc += term(i);
    partial[static_cast<std::size_t>(b)] = acc;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

inline double blend_one(double l, double m, double w, double q, double lambda, double mu_n) {
  const double a = lambda * w * q;
  if (a == 0.0) return l;
  return l + a / (a + mu_n) * (m - l);
}

inline double masked_weight(double residual, double support, const Estimator& est) {
  return support != 0.0 ? est.weight(residual) : 0.0;
}

}  // namespace

namespace serial {

void permute_copy(std::span<const double> src, std::span<const std::size_t> src_dims,
                  std::span<const std::size_t> order, std::span<double> dst) {
  std::vector<std::size_t> out_dims(order.size());
  for (std::size_t j = 0; j < order.size(); ++j) out_dims[j] = src_dims[order[j]];
  const auto stride = permuted_strides(src_dims, order);
  permute_range(src.data(), out_dims, stride, dst.data(), 0, dst.size());
}

void blend(std::span<double> x, std::span<const double> l, std::span<const double> m,
           std::span<const double> w, std::span<const double> q, double lambda, double mu_n) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = blend_one(l[i], m[i], w[i], q[i], lambda, mu_n);
}

void dual_update(std::span<double> g, std::span<const double> z, std::span<const double> x,
                 double mu) {
  for (std::size_t i = 0; i < g.size(); ++i) g[i] += mu * (z[i] - x[i]);
}

void consensus_accumulate(std::span<double> l, std::span<const double> z,
                          std::span<const double> g, double mu, double inv_n) {
  for (std::size_t i = 0; i < l.size(); ++i) l[i] += (z[i] + g[i] / mu) * inv_n;
}

void weights(std::span<double> q, std::span<const double> residual,
             std::span<const double> support, const Estimator& est) {
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = masked_weight(residual[i], support[i], est);
}

double sum_squares(std::span<const double> a) {
  double acc = 0.0;
  for (double v : a) acc += v * v;
  return acc;
}

double diff_sum_squares(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

}  // namespace serial

namespace parallel {

void permute_copy(std::span<const double> src, std::span<const std::size_t> src_dims,
                  std::span<const std::size_t> order, std::span<double> dst) {
  std::vector<std::size_t> out_dims(order.size());
  for (std::size_t j = 0; j < order.size(); ++j) out_dims[j] = src_dims[order[j]];
  const auto stride = permuted_strides(src_dims, order);
  const std::size_t n = dst.size();
  if (n <= kParallelThreshold) {
    permute_range(src.data(), out_dims, stride, dst.data(), 0, n);
    return;
  }
#pragma omp parallel
  {
    const auto threads = static_cast<std::size_t>(omp_get_num_threads());
    const auto id = static_cast<std::size_t>(omp_get_thread_num());
    const std::size_t chunk = (n + threads - 1) / threads;
    const std::size_t lo = std::min(n, id * chunk);
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo < hi) permute_range(src.data(), out_dims, stride, dst.data(), lo, hi);
  }
}

void blend(std::span<double> x, std::span<const double> l, std::span<const double> m,
           std::span<const double> w, std::span<const double> q, double lambda, double mu_n) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static) if (x.size() > kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) x[i] = blend_one(l[i], m[i], w[i], q[i], lambda, mu_n);
}

void dual_update(std::span<double> g, std::span<const double> z, std::span<const double> x,
                 double mu) {
  const auto n = static_cast<std::ptrdiff_t>(g.size());
#pragma omp parallel for schedule(static) if (g.size() > kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) g[i] += mu * (z[i] - x[i]);
}

void consensus_accumulate(std::span<double> l, std::span<const double> z,
                          std::span<const double> g, double mu, double inv_n) {
  const auto n = static_cast<std::ptrdiff_t>(l.size());
#pragma omp parallel for schedule(static) if (l.size() > kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) l[i] += (z[i] + g[i] / mu) * inv_n;
}

void weights(std::span<double> q, std::span<const double> residual,
             std::span<const double> support, const Estimator& est) {
  const auto n = static_cast<std::ptrdiff_t>(q.size());
#pragma omp parallel for schedule(static) if (q.size() > kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) q[i] = masked_weight(residual[i], support[i], est);
}

double sum_squares(std::span<const double> a) {
  return blocked_sum(a.size(), [&](std::size_t i) { return a[i] * a[i]; });
}

double diff_sum_squares(std::span<const double> a, std::span<const double> b) {
  return blocked_sum(a.size(), [&](std::size_t i) {
    const double d = a[i] - b[i];
    return d * d;
  });
}

}  // namespace parallel

}  // namespace trc::kernels
