#include "trc/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "trc/error.hpp"
#include "trc/kernels.hpp"

namespace trc {

namespace {

void check_dims(const Dims& dims) {
  if (dims.empty()) throw DimensionError("tensor order must be at least 1");
  for (std::size_t d : dims) {
    if (d == 0) throw DimensionError("tensor dimensions must be positive");
  }
}

void require_same_shape(const DenseTensor& a, const DenseTensor& b, const char* op) {
  if (!a.same_shape(b)) throw DimensionError(std::string(op) + ": shape mismatch");
}

std::string dims_string(std::span<const std::size_t> dims) {
  std::string s = "(";
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(dims[i]);
  }
  return s + ")";
}

template <class Op>
DenseTensor zip(const DenseTensor& a, const DenseTensor& b, const char* name, Op op) {
  require_same_shape(a, b, name);
  DenseTensor out(a.dims());
  const auto n = static_cast<std::ptrdiff_t>(a.size());
  const double* pa = a.data();
  const double* pb = b.data();
  double* po = out.data();
#pragma omp parallel for schedule(static) if (a.size() > kernels::kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) po[i] = op(pa[i], pb[i]);
  return out;
}

}  // namespace

std::size_t product(std::span<const std::size_t> dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

std::size_t linear_index(std::span<const std::size_t> dims, std::span<const std::size_t> index) {
  if (index.size() != dims.size()) {
    throw BoundsError("index has " + std::to_string(index.size()) + " components, tensor order is " +
                      std::to_string(dims.size()));
  }
  std::size_t pos = 0;
  std::size_t stride = 1;
  for (std::size_t c = 0; c < dims.size(); ++c) {
    if (index[c] < 1 || index[c] > dims[c]) {
      throw BoundsError("index " + dims_string(index) + " out of bounds for dims " +
                        dims_string(dims));
    }
    pos += (index[c] - 1) * stride;
    stride *= dims[c];
  }
  return pos;
}

std::size_t linear_index(std::span<const std::size_t> dims, std::initializer_list<std::size_t> index) {
  return linear_index(dims, std::span<const std::size_t>(index.begin(), index.size()));
}

std::vector<std::size_t> multi_index(std::span<const std::size_t> dims, std::size_t flat) {
  std::vector<std::size_t> idx(dims.size());
  for (std::size_t c = 0; c < dims.size(); ++c) {
    idx[c] = flat % dims[c] + 1;
    flat /= dims[c];
  }
  return idx;
}

DenseTensor::DenseTensor() : dims_{1}, values_(1, 0.0) {}

DenseTensor::DenseTensor(Dims dims, double fill) : dims_(std::move(dims)) {
  check_dims(dims_);
  values_.assign(product(dims_), fill);
}

DenseTensor::DenseTensor(Dims dims, std::vector<double> values)
    : dims_(std::move(dims)), values_(std::move(values)) {
  check_dims(dims_);
  if (values_.size() != product(dims_)) {
    throw DimensionError("value count " + std::to_string(values_.size()) +
                         " does not match dims " + dims_string(dims_));
  }
}

double& DenseTensor::at(std::initializer_list<std::size_t> index) {
  return values_[linear_index(dims_, index)];
}
double DenseTensor::at(std::initializer_list<std::size_t> index) const {
  return values_[linear_index(dims_, index)];
}
double& DenseTensor::at(std::span<const std::size_t> index) {
  return values_[linear_index(dims_, index)];
}
double DenseTensor::at(std::span<const std::size_t> index) const {
  return values_[linear_index(dims_, index)];
}

void validate(const UnfoldSpec& spec, std::size_t order) {
  if (spec.k < 1 || spec.k > order || spec.d < 1 || spec.d > order) {
    throw DimensionError("invalid unfolding (k=" + std::to_string(spec.k) +
                         ", d=" + std::to_string(spec.d) + ") for order " + std::to_string(order));
  }
}

std::vector<std::size_t> circular_order(std::size_t order, std::size_t k) {
  std::vector<std::size_t> perm(order);
  for (std::size_t j = 0; j < order; ++j) perm[j] = (k - 1 + j) % order;
  return perm;
}

std::pair<std::size_t, std::size_t> unfold_shape(const Dims& dims, const UnfoldSpec& spec) {
  validate(spec, dims.size());
  const std::size_t n = dims.size();
  std::size_t rows = 1;
  std::size_t cols = 1;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t mode = (spec.k - 1 + j) % n;
    (j < spec.d ? rows : cols) *= dims[mode];
  }
  return {rows, cols};
}

Matrix tr_unfold(const DenseTensor& t, const UnfoldSpec& spec) {
  const auto [rows, cols] = unfold_shape(t.dims(), spec);
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  const auto perm = circular_order(t.order(), spec.k);
  kernels::parallel::permute_copy(t.values(), t.dims(), perm,
                                  std::span<double>(m.data(), rows * cols));
  return m;
}

DenseTensor tr_fold(const Matrix& m, const Dims& dims, const UnfoldSpec& spec) {
  const auto [rows, cols] = unfold_shape(dims, spec);
  if (static_cast<std::size_t>(m.rows()) != rows || static_cast<std::size_t>(m.cols()) != cols) {
    throw DimensionError("fold: matrix is " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", expected " + std::to_string(rows) + "x" +
                         std::to_string(cols));
  }
  const std::size_t n = dims.size();
  const auto perm = circular_order(n, spec.k);
  Dims permuted(n);
  for (std::size_t j = 0; j < n; ++j) permuted[j] = dims[perm[j]];
  // Inverse of a cyclic shift by k-1 is the cyclic shift by n-(k-1).
  const auto inverse = circular_order(n, (n - (spec.k - 1)) % n + 1);
  DenseTensor out(dims);
  kernels::parallel::permute_copy(std::span<const double>(m.data(), rows * cols), permuted, inverse,
                                  out.values());
  return out;
}

DenseTensor hadamard(const DenseTensor& a, const DenseTensor& b) {
  return zip(a, b, "hadamard", [](double x, double y) { return x * y; });
}

DenseTensor add(const DenseTensor& a, const DenseTensor& b) {
  return zip(a, b, "add", [](double x, double y) { return x + y; });
}

DenseTensor sub(const DenseTensor& a, const DenseTensor& b) {
  return zip(a, b, "sub", [](double x, double y) { return x - y; });
}

DenseTensor scale(const DenseTensor& a, double s) {
  DenseTensor out = a;
  for (double& v : out.values()) v *= s;
  return out;
}

double frob_norm(const DenseTensor& t) { return std::sqrt(kernels::parallel::sum_squares(t.values())); }

DenseTensor masked_fill(const DenseTensor& dest, const DenseTensor& src, const DenseTensor& mask) {
  require_same_shape(dest, src, "masked_fill");
  require_same_shape(dest, mask, "masked_fill");
  DenseTensor out = dest;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (mask[i] != 0.0) out[i] = src[i];
  }
  return out;
}

DenseTensor reshape(const DenseTensor& t, Dims new_dims) {
  check_dims(new_dims);
  if (product(new_dims) != t.size()) {
    throw DimensionError("reshape: cannot map " + dims_string(t.dims()) + " onto " +
                         dims_string(new_dims));
  }
  return DenseTensor(std::move(new_dims), std::vector<double>(t.values().begin(), t.values().end()));
}

DenseTensor permute(const DenseTensor& t, std::span<const std::size_t> order) {
  const std::size_t n = t.order();
  if (order.size() != n) throw DimensionError("permute: order length differs from tensor order");
  std::vector<std::size_t> zero_based(n);
  std::vector<bool> seen(n, false);
  for (std::size_t j = 0; j < n; ++j) {
    if (order[j] < 1 || order[j] > n || seen[order[j] - 1]) {
      throw DimensionError("permute: order " + dims_string(order) + " is not a permutation");
    }
    seen[order[j] - 1] = true;
    zero_based[j] = order[j] - 1;
  }
  Dims out_dims(n);
  for (std::size_t j = 0; j < n; ++j) out_dims[j] = t.dims()[zero_based[j]];
  DenseTensor out(out_dims);
  kernels::parallel::permute_copy(t.values(), t.dims(), zero_based, out.values());
  return out;
}

DenseTensor permute(const DenseTensor& t, std::initializer_list<std::size_t> order) {
  return permute(t, std::span<const std::size_t>(order.begin(), order.size()));
}

}  // namespace trc
