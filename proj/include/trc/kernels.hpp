#pragma once

// Data-parallel inner loops of the solver and pipeline.
//
// Every kernel exists twice: `serial::` is the plain reference loop kept for
// testing, `parallel::` is the OpenMP version the library calls. Elementwise
// kernels produce bitwise-identical output in both variants. Reductions in
// `parallel::` use a fixed block partition so their result does not depend on
// the thread count, but they may differ from the serial sum in the last ulp.

#include <cstddef>
#include <span>

#include "trc/robust_loss.hpp"

namespace trc::kernels {

/// Below this many elements the parallel kernels run single-threaded.
inline constexpr std::size_t kParallelThreshold = 1 << 14;

namespace serial {

/// dst[out multi-index] = src[permuted multi-index]; `order` is 0-based and
/// output mode j reads source mode order[j].
void permute_copy(std::span<const double> src, std::span<const std::size_t> src_dims,
                  std::span<const std::size_t> order, std::span<double> dst);

/// x = l + theta * (m - l), theta = lambda*w*q / (lambda*w*q + mu_n).
void blend(std::span<double> x, std::span<const double> l, std::span<const double> m,
           std::span<const double> w, std::span<const double> q, double lambda, double mu_n);

/// g += mu * (z - x)
void dual_update(std::span<double> g, std::span<const double> z, std::span<const double> x,
                 double mu);

/// l += (z + g / mu) * inv_n  -- one term of the consensus average.
void consensus_accumulate(std::span<double> l, std::span<const double> z,
                          std::span<const double> g, double mu, double inv_n);

/// q = weight(residual) where support != 0, else 0.
void weights(std::span<double> q, std::span<const double> residual,
             std::span<const double> support, const Estimator& est);

double sum_squares(std::span<const double> a);
double diff_sum_squares(std::span<const double> a, std::span<const double> b);

}  // namespace serial

namespace parallel {

void permute_copy(std::span<const double> src, std::span<const std::size_t> src_dims,
                  std::span<const std::size_t> order, std::span<double> dst);
void blend(std::span<double> x, std::span<const double> l, std::span<const double> m,
           std::span<const double> w, std::span<const double> q, double lambda, double mu_n);
void dual_update(std::span<double> g, std::span<const double> z, std::span<const double> x,
                 double mu);
void consensus_accumulate(std::span<double> l, std::span<const double> z,
                          std::span<const double> g, double mu, double inv_n);
void weights(std::span<double> q, std::span<const double> residual,
             std::span<const double> support, const Estimator& est);
double sum_squares(std::span<const double> a);
double diff_sum_squares(std::span<const double> a, std::span<const double> b);

}  // namespace parallel

}  // namespace trc::kernels
