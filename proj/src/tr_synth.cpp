#include "trc/tr_synth.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "trc/error.hpp"
#include "trc/rng.hpp"

namespace trc {

std::vector<std::size_t> TrCores::ranks() const {
  std::vector<std::size_t> r;
  r.reserve(cores.size());
  for (const auto& c : cores) r.push_back(c.dims()[0]);
  return r;
}

Dims TrCores::dims() const {
  Dims d;
  d.reserve(cores.size());
  for (const auto& c : cores) d.push_back(c.dims()[1]);
  return d;
}

void validate(const TrCores& tr) {
  const std::size_t n = tr.order();
  if (n == 0) throw DimensionError("tensor ring needs at least one core");
  for (std::size_t k = 0; k < n; ++k) {
    if (tr.cores[k].order() != 3) {
      throw DimensionError("core " + std::to_string(k + 1) + " is not third order");
    }
    const auto& next = tr.cores[(k + 1) % n];
    if (tr.cores[k].dims()[2] != next.dims()[0]) {
      throw DimensionError("rank chain broken between core " + std::to_string(k + 1) +
                           " and core " + std::to_string((k + 1) % n + 1));
    }
  }
}

DenseTensor tensor_from_cores(const TrCores& tr) {
  validate(tr);
  const std::size_t n = tr.order();
  const Dims dims = tr.dims();
  DenseTensor out(dims);

  // Lateral slices U_k(:, i, :) as r_k x r_{k+1} matrices; core storage is
  // first-index fastest, so slice i is a strided gather.
  std::vector<std::vector<Matrix>> slices(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& core = tr.cores[k];
    const auto r0 = static_cast<Eigen::Index>(core.dims()[0]);
    const auto mid = core.dims()[1];
    const auto r1 = static_cast<Eigen::Index>(core.dims()[2]);
    slices[k].resize(mid);
    for (std::size_t i = 0; i < mid; ++i) {
      Matrix s(r0, r1);
      for (Eigen::Index a = 0; a < r0; ++a) {
        for (Eigen::Index b = 0; b < r1; ++b) {
          s(a, b) = core[static_cast<std::size_t>(a) + static_cast<std::size_t>(r0) * (i + mid * static_cast<std::size_t>(b))];
        }
      }
      slices[k][i] = std::move(s);
    }
  }

  const auto total = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static) if (out.size() > 4096)
  for (std::ptrdiff_t flat = 0; flat < total; ++flat) {
    std::size_t rem = static_cast<std::size_t>(flat);
    Matrix prod = slices[0][rem % dims[0]];
    rem /= dims[0];
    for (std::size_t k = 1; k < n; ++k) {
      prod = (prod * slices[k][rem % dims[k]]).eval();
      rem /= dims[k];
    }
    out[static_cast<std::size_t>(flat)] = prod.trace();
  }
  return out;
}

TrSample random_tr_tensor(const Dims& dims, const std::vector<std::size_t>& ranks,
                          std::uint64_t seed, bool normalize) {
  if (dims.size() != ranks.size()) {
    throw DimensionError("random_tr_tensor: dims and ranks differ in length");
  }
  const std::size_t n = dims.size();
  RngStream rng(seed, "cores");
  TrCores tr;
  tr.cores.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (ranks[k] == 0) throw DimensionError("TR ranks must be positive");
    DenseTensor core({ranks[k], dims[k], ranks[(k + 1) % n]});
    for (double& v : core.values()) v = rng.normal();
    tr.cores.push_back(std::move(core));
  }
  DenseTensor x = tensor_from_cores(tr);
  if (normalize) {
    double peak = 0.0;
    for (double v : x.values()) peak = std::max(peak, std::abs(v));
    if (peak > 0.0) {
      for (double& v : x.values()) v /= peak;
    }
  }
  return {std::move(x), std::move(tr)};
}

std::size_t numerical_rank(const Matrix& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::BDCSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double cut = rel_tol * s(0);
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cut) ++r;
  }
  return r;
}

}  // namespace trc
