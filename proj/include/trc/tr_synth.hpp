#pragma once

#include <cstdint>
#include <vector>

#include "trc/tensor.hpp"

namespace trc {

/// Tensor-ring cores: core k has shape r_k x I_k x r_{k+1}, with r_{N+1} = r_1.
struct TrCores {
  std::vector<DenseTensor> cores;

  std::size_t order() const noexcept { return cores.size(); }
  /// [r_1 .. r_N] read from the leading dimension of each core.
  std::vector<std::size_t> ranks() const;
  /// [I_1 .. I_N] read from the middle dimension of each core.
  Dims dims() const;
};

/// Throws DimensionError unless every core is 3rd order and the rank chain closes.
void validate(const TrCores& cores);

/// X(i_1..i_N) = trace(U_1(:, i_1, :) * ... * U_N(:, i_N, :)).
DenseTensor tensor_from_cores(const TrCores& cores);

struct TrSample {
  DenseTensor tensor;
  TrCores cores;
};

/// Standard-normal cores from the "cores" stream of `seed`. When `normalize`
/// is set the tensor is rescaled so max |entry| == 1 (the cores are left as
/// drawn, so the stored cores reproduce the tensor only up to that factor).
TrSample random_tr_tensor(const Dims& dims, const std::vector<std::size_t>& ranks,
                          std::uint64_t seed, bool normalize = true);

/// Number of singular values above rel_tol * sigma_max; 0 for a zero matrix.
std::size_t numerical_rank(const Matrix& m, double rel_tol = 1e-8);

}  // namespace trc
