#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "trc/error.hpp"
#include "trc/rng.hpp"
#include "trc/tensor.hpp"

using trc::DenseTensor;
using trc::Dims;

namespace {

DenseTensor random_tensor(const Dims& dims, std::uint64_t seed) {
  trc::RngStream rng(seed, "tensor-test");
  DenseTensor t(dims);
  for (double& v : t.values()) v = rng.normal();
  return t;
}

DenseTensor iota(const Dims& dims) {
  DenseTensor t(dims);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<double>(i);
  return t;
}

}  // namespace

TEST_CASE("construction checks shape") {
  CHECK(DenseTensor().size() == 1);
  CHECK(DenseTensor({2, 3, 4}).size() == 24);
  CHECK_THROWS_AS(DenseTensor(Dims{}), trc::DimensionError);
  CHECK_THROWS_AS(DenseTensor({2, 0}), trc::DimensionError);
  CHECK_THROWS_AS(DenseTensor({2, 2}, std::vector<double>(3)), trc::DimensionError);
}

TEST_CASE("linear_index is first-index-fastest and 1-based") {
  const Dims d23{2, 3};
  CHECK(trc::linear_index(d23, {1, 1}) == 0);
  CHECK(trc::linear_index(d23, {2, 1}) == 1);
  CHECK(trc::linear_index(Dims{2, 3, 4}, {2, 3, 4}) == 23);
  CHECK_THROWS_AS(trc::linear_index(d23, {3, 1}), trc::BoundsError);
  CHECK_THROWS_AS(trc::linear_index(d23, {0, 1}), trc::BoundsError);
  CHECK_THROWS_AS(trc::linear_index(d23, {1, 1, 1}), trc::BoundsError);

  const Dims d{3, 4, 5};
  for (std::size_t f = 0; f < 60; ++f) {
    auto mi = trc::multi_index(d, f);
    CHECK(trc::linear_index(d, std::span<const std::size_t>(mi)) == f);
  }
}

TEST_CASE("tr_unfold places entries per the circular index formulas") {
  const DenseTensor t = iota({2, 3, 4});
  const auto m = trc::tr_unfold(t, {2, 2});
  REQUIRE(m.rows() == 12);
  REQUIRE(m.cols() == 2);
  // (i1,i2,i3) = (2,1,1) -> (s,t) = (1,2)
  CHECK(m(0, 1) == t.at({2, 1, 1}));
  CHECK(m == oracle::unfold(t, 2, 2));

  SUBCASE("d = N gives a single column") {
    const auto col = trc::tr_unfold(t, {1, 3});
    CHECK(col.rows() == 24);
    CHECK(col.cols() == 1);
  }
  SUBCASE("a matrix unfolds to itself") {
    DenseTensor id({2, 2});
    id.at({1, 1}) = id.at({2, 2}) = 1.0;
    CHECK(trc::tr_unfold(id, {1, 1}) == Eigen::Matrix2d::Identity());
  }
  SUBCASE("invalid selectors") {
    CHECK_THROWS_AS(trc::tr_unfold(t, {0, 1}), trc::DimensionError);
    CHECK_THROWS_AS(trc::tr_unfold(t, {4, 1}), trc::DimensionError);
    CHECK_THROWS_AS(trc::tr_unfold(t, {1, 0}), trc::DimensionError);
    CHECK_THROWS_AS(trc::tr_unfold(t, {1, 4}), trc::DimensionError);
  }
}

TEST_CASE("fold inverts unfold for every selector") {
  const DenseTensor t = random_tensor({3, 4, 5}, 7);
  for (std::size_t k = 1; k <= 3; ++k) {
    for (std::size_t d = 1; d <= 3; ++d) {
      CAPTURE(k);
      CAPTURE(d);
      const auto m = trc::tr_unfold(t, {k, d});
      CHECK(m == oracle::unfold(t, k, d));
      CHECK(trc::tr_fold(m, t.dims(), {k, d}) == t);
    }
  }
  CHECK(trc::tr_fold(Eigen::MatrixXd::Zero(12, 2), {2, 3, 4}, {2, 2}) == DenseTensor({2, 3, 4}));
  CHECK(trc::tr_fold(trc::tr_unfold(iota({2, 3, 4}), {2, 2}), {2, 3, 4}, {2, 2}) == iota({2, 3, 4}));
  CHECK_THROWS_AS(trc::tr_fold(Eigen::MatrixXd::Zero(2, 12), {2, 3, 4}, {2, 2}), trc::DimensionError);
}

TEST_CASE("elementwise operations") {
  const DenseTensor a = random_tensor({2, 2, 2}, 1);
  const DenseTensor b = random_tensor({2, 2, 2}, 2);
  CHECK(trc::hadamard(a, DenseTensor::ones(a.dims())) == a);
  CHECK(trc::frob_norm(DenseTensor({2, 2, 2}, 2.0)) == doctest::Approx(std::sqrt(32.0)).epsilon(1e-15));
  CHECK(trc::masked_fill(a, b, DenseTensor::ones(a.dims())) == b);
  CHECK(trc::masked_fill(a, b, DenseTensor(a.dims())) == a);
  CHECK(trc::sub(trc::add(a, b), b)[3] == doctest::Approx(a[3]));
  CHECK(trc::scale(a, 2.0)[5] == 2.0 * a[5]);
  double ss = 0;
  for (double v : a.values()) ss += v * v;
  CHECK(trc::frob_norm(a) == doctest::Approx(std::sqrt(ss)).epsilon(1e-14));
  CHECK_THROWS_AS(trc::add(a, DenseTensor({2, 4})), trc::DimensionError);
}

TEST_CASE("reshape and permute") {
  const DenseTensor v = iota({6});
  CHECK(trc::reshape(trc::reshape(v, {2, 3}), {6}) == v);
  CHECK_THROWS_AS(trc::reshape(v, {4, 2}), trc::DimensionError);

  const DenseTensor t = random_tensor({2, 3, 4}, 3);
  CHECK(trc::permute(t, {1, 2, 3}) == t);
  const DenseTensor p = trc::permute(t, {3, 1, 2});
  CHECK(p.dims() == Dims{4, 2, 3});
  for (std::size_t i1 = 1; i1 <= 2; ++i1)
    for (std::size_t i2 = 1; i2 <= 3; ++i2)
      for (std::size_t i3 = 1; i3 <= 4; ++i3) CHECK(p.at({i3, i1, i2}) == t.at({i1, i2, i3}));
  CHECK_THROWS_AS(trc::permute(t, {1, 1, 2}), trc::DimensionError);
  CHECK_THROWS_AS(trc::permute(t, {1, 2}), trc::DimensionError);
}
