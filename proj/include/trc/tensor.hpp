#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace trc {

using Dims = std::vector<std::size_t>;
using Matrix = Eigen::MatrixXd;

/// Product of all entries of `dims` (1 for an empty range).
std::size_t product(std::span<const std::size_t> dims);

/// Flat 0-based position of a 1-based multi-index, first index fastest.
/// Throws BoundsError when any component is outside [1, dims[c]].
std::size_t linear_index(std::span<const std::size_t> dims, std::span<const std::size_t> index);
std::size_t linear_index(std::span<const std::size_t> dims, std::initializer_list<std::size_t> index);

/// Inverse of linear_index: the 1-based multi-index for a flat position.
std::vector<std::size_t> multi_index(std::span<const std::size_t> dims, std::size_t flat);

/// Dense N-order real tensor stored with the first index varying fastest.
///
/// The storage order matches Eigen's column-major layout, so a tensor whose
/// leading modes are grouped into rows can be viewed as a matrix without a
/// copy. Public indexing is 1-based.
class DenseTensor {
 public:
  /// A 1-element tensor of order 1 holding zero.
  DenseTensor();
  explicit DenseTensor(Dims dims, double fill = 0.0);
  DenseTensor(Dims dims, std::vector<double> values);

  static DenseTensor ones(Dims dims) { return DenseTensor(std::move(dims), 1.0); }

  const Dims& dims() const noexcept { return dims_; }
  std::size_t order() const noexcept { return dims_.size(); }
  std::size_t size() const noexcept { return values_.size(); }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  double* data() noexcept { return values_.data(); }
  const double* data() const noexcept { return values_.data(); }

  double& operator[](std::size_t flat) noexcept { return values_[flat]; }
  double operator[](std::size_t flat) const noexcept { return values_[flat]; }

  double& at(std::initializer_list<std::size_t> index);
  double at(std::initializer_list<std::size_t> index) const;
  double& at(std::span<const std::size_t> index);
  double at(std::span<const std::size_t> index) const;

  bool same_shape(const DenseTensor& other) const noexcept { return dims_ == other.dims_; }

  friend bool operator==(const DenseTensor&, const DenseTensor&) = default;

 private:
  Dims dims_;
  std::vector<double> values_;
};

/// Circular TR unfolding selector: rows are the `d` modes starting at `k`.
/// Both fields are 1-based like the public index API.
struct UnfoldSpec {
  std::size_t k = 1;
  std::size_t d = 1;
};

/// Throws DimensionError unless 1 <= k <= order and 1 <= d <= order.
void validate(const UnfoldSpec& spec, std::size_t order);

/// Shape (rows, cols) of the TR unfolding of a tensor with `dims`.
std::pair<std::size_t, std::size_t> unfold_shape(const Dims& dims, const UnfoldSpec& spec);

/// Mode order [k, ..., N, 1, ..., k-1] as 0-based positions.
std::vector<std::size_t> circular_order(std::size_t order, std::size_t k);

Matrix tr_unfold(const DenseTensor& t, const UnfoldSpec& spec);
DenseTensor tr_fold(const Matrix& m, const Dims& dims, const UnfoldSpec& spec);

DenseTensor hadamard(const DenseTensor& a, const DenseTensor& b);
DenseTensor add(const DenseTensor& a, const DenseTensor& b);
DenseTensor sub(const DenseTensor& a, const DenseTensor& b);
DenseTensor scale(const DenseTensor& a, double s);
double frob_norm(const DenseTensor& t);
/// dest where mask == 0, src where mask != 0.
DenseTensor masked_fill(const DenseTensor& dest, const DenseTensor& src, const DenseTensor& mask);

DenseTensor reshape(const DenseTensor& t, Dims new_dims);
/// `order` lists 1-based source modes: output mode j is source mode order[j].
DenseTensor permute(const DenseTensor& t, std::span<const std::size_t> order);
DenseTensor permute(const DenseTensor& t, std::initializer_list<std::size_t> order);

}  // namespace trc
