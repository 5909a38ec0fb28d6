#include <doctest.h>

#include "oracles.hpp"
#include "trc/error.hpp"
#include "trc/rng.hpp"
#include "trc/tr_synth.hpp"

using trc::DenseTensor;
using trc::TrCores;

namespace {

TrCores random_cores(const trc::Dims& dims, const std::vector<std::size_t>& ranks, std::uint64_t seed) {
  trc::RngStream rng(seed, "cores-test");
  TrCores c;
  const std::size_t n = dims.size();
  for (std::size_t k = 0; k < n; ++k) {
    DenseTensor u({ranks[k], dims[k], ranks[(k + 1) % n]});
    for (double& v : u.values()) v = rng.normal();
    c.cores.push_back(std::move(u));
  }
  return c;
}

}  // namespace

TEST_CASE("rank-one ring of two vectors is an outer product") {
  TrCores c;
  c.cores.emplace_back(trc::Dims{1, 3, 1}, std::vector<double>{1, 2, 3});
  c.cores.emplace_back(trc::Dims{1, 2, 1}, std::vector<double>{4, 5});
  const auto x = trc::tensor_from_cores(c);
  REQUIRE(x.dims() == trc::Dims{3, 2});
  for (std::size_t i = 1; i <= 3; ++i)
    for (std::size_t j = 1; j <= 2; ++j)
      CHECK(x.at({i, j}) == static_cast<double>(i) * static_cast<double>(j + 3));
}

TEST_CASE("zero cores give the zero tensor") {
  TrCores c = random_cores({2, 3, 2}, {2, 2, 2}, 1);
  for (auto& u : c.cores) u = DenseTensor(u.dims());
  CHECK(trc::tensor_from_cores(c) == DenseTensor({2, 3, 2}));
}

TEST_CASE("entries match a slice-by-slice trace oracle") {
  const TrCores c = random_cores({2, 3, 4}, {2, 3, 2}, 5);
  const auto x = trc::tensor_from_cores(c);
  oracle::for_each_index(x.dims(), [&](const std::vector<std::size_t>& idx, std::size_t flat) {
    CHECK(x[flat] == doctest::Approx(oracle::tr_entry(c, idx)).epsilon(1e-12));
  });
}

TEST_CASE("core chain validation") {
  TrCores c = random_cores({2, 2, 2}, {2, 2, 2}, 3);
  CHECK_NOTHROW(trc::validate(c));
  CHECK(c.ranks() == std::vector<std::size_t>{2, 2, 2});
  c.cores[2] = DenseTensor({2, 2, 3});
  CHECK_THROWS_AS(trc::validate(c), trc::DimensionError);
  CHECK_THROWS_AS(trc::tensor_from_cores(TrCores{}), trc::DimensionError);
  CHECK_THROWS_AS(trc::random_tr_tensor({2, 2}, {2, 2, 2}, 1), trc::DimensionError);
}

TEST_CASE("random_tr_tensor is seeded and normalized") {
  const auto a = trc::random_tr_tensor({4, 5, 6}, {2, 3, 2}, 11);
  const auto b = trc::random_tr_tensor({4, 5, 6}, {2, 3, 2}, 11);
  const auto c = trc::random_tr_tensor({4, 5, 6}, {2, 3, 2}, 12);
  CHECK(a.tensor == b.tensor);
  CHECK_FALSE(a.tensor == c.tensor);
  double mx = 0;
  for (double v : a.tensor.values()) mx = std::max(mx, std::abs(v));
  CHECK(mx == doctest::Approx(1.0).epsilon(1e-15));

  const auto raw = trc::random_tr_tensor({4, 5, 6}, {2, 3, 2}, 11, false);
  CHECK(raw.tensor == trc::tensor_from_cores(raw.cores));
}

TEST_CASE("unfolding ranks respect the ring bound") {
  const auto unit = trc::random_tr_tensor({3, 4, 5}, {1, 1, 1}, 2);
  for (std::size_t k = 1; k <= 3; ++k)
    for (std::size_t d = 1; d <= 2; ++d) CHECK(trc::numerical_rank(trc::tr_unfold(unit.tensor, {k, d})) == 1);

  const auto s = trc::random_tr_tensor({6, 6, 6}, {2, 2, 2}, 4);
  for (std::size_t k = 1; k <= 3; ++k) CHECK(trc::numerical_rank(trc::tr_unfold(s.tensor, {k, 1})) <= 4);
}

TEST_CASE("numerical_rank") {
  CHECK(trc::numerical_rank(Eigen::MatrixXd::Identity(3, 3)) == 3);
  CHECK(trc::numerical_rank(Eigen::MatrixXd::Zero(3, 4)) == 0);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 1e-12;
  CHECK(trc::numerical_rank(d, 1e-8) == 1);
}
