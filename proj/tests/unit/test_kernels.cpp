#include <doctest.h>

#include <omp.h>

#include <cstring>
#include <numeric>
#include <vector>

#include "trc/kernels.hpp"
#include "trc/rng.hpp"
#include "trc/tensor.hpp"

namespace ks = trc::kernels::serial;
namespace kp = trc::kernels::parallel;

namespace {

std::vector<double> draw(std::size_t n, const char* name, double lo = -2.0, double hi = 2.0) {
  trc::RngStream rng(99, name);
  std::vector<double> v(n);
  for (double& x : v) x = lo + (hi - lo) * rng.uniform();
  return v;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

// one size below the parallel cut-over, one well above it and not a multiple of anything
const std::size_t kSizes[] = {1000, 3 * trc::kernels::kParallelThreshold + 17};

}  // namespace

TEST_CASE("elementwise kernels agree bitwise between serial and parallel") {
  for (std::size_t n : kSizes) {
    CAPTURE(n);
    const auto l = draw(n, "l"), m = draw(n, "m"), z = draw(n, "z"), x = draw(n, "x");
    auto w = draw(n, "w", 0.0, 1.0);
    for (std::size_t i = 0; i < n; i += 7) w[i] = 0.0;
    const auto q = draw(n, "q", 0.0, 1.0);

    std::vector<double> a(n), b(n);
    ks::blend(a, l, m, w, q, 6e-4, 3e-4);
    kp::blend(b, l, m, w, q, 6e-4, 3e-4);
    CHECK(bitwise_equal(a, b));
    for (std::size_t i = 0; i < n; i += 7) CHECK(a[i] == l[i]);

    auto g1 = draw(n, "g"), g2 = g1;
    ks::dual_update(g1, z, x, 0.37);
    kp::dual_update(g2, z, x, 0.37);
    CHECK(bitwise_equal(g1, g2));

    std::vector<double> c1(n, 0.5), c2(n, 0.5);
    ks::consensus_accumulate(c1, z, g1, 0.37, 1.0 / 3.0);
    kp::consensus_accumulate(c2, z, g2, 0.37, 1.0 / 3.0);
    CHECK(bitwise_equal(c1, c2));

    for (auto fam : {trc::LossFamily::huber, trc::LossFamily::welsch, trc::LossFamily::cauchy}) {
      const trc::Estimator est{fam, 0.3};
      std::vector<double> q1(n), q2(n);
      ks::weights(q1, x, w, est);
      kp::weights(q2, x, w, est);
      CHECK(bitwise_equal(q1, q2));
    }
  }
}

TEST_CASE("blend matches the closed form") {
  const std::vector<double> l{0.0, 1.0, 2.0}, m{3.0, 3.0, 3.0}, w{1.0, 1.0, 0.0}, q{1.0, 0.5, 1.0};
  std::vector<double> x(3);
  const double mu_n = 0.3, lambda = 2.0 * mu_n;
  ks::blend(x, l, m, w, q, lambda, mu_n);
  CHECK(x[0] == doctest::Approx(0.0 + (2.0 / 3.0) * 3.0));
  CHECK(x[1] == doctest::Approx(1.0 + 0.5 * 2.0));
  CHECK(x[2] == 2.0);
}

TEST_CASE("reductions are close to serial and independent of thread count") {
  for (std::size_t n : kSizes) {
    CAPTURE(n);
    const auto a = draw(n, "a"), b = draw(n, "b");
    const double s_ser = ks::sum_squares(a);
    const double d_ser = ks::diff_sum_squares(a, b);
    const int saved = omp_get_max_threads();
    std::vector<double> s_par, d_par;
    for (int threads : {1, 2, 3, 8}) {
      omp_set_num_threads(threads);
      s_par.push_back(kp::sum_squares(a));
      d_par.push_back(kp::diff_sum_squares(a, b));
    }
    omp_set_num_threads(saved);
    for (std::size_t i = 1; i < s_par.size(); ++i) {
      CHECK(s_par[i] == s_par[0]);
      CHECK(d_par[i] == d_par[0]);
    }
    CHECK(s_par[0] == doctest::Approx(s_ser).epsilon(1e-12));
    CHECK(d_par[0] == doctest::Approx(d_ser).epsilon(1e-12));
  }
}

TEST_CASE("permute_copy agrees with an index-chasing oracle") {
  const std::vector<std::size_t> dims{5, 7, 3, 11, 13};
  const std::size_t n = 5 * 7 * 3 * 11 * 13;
  const auto src = draw(n, "src");
  const std::vector<std::vector<std::size_t>> orders{
      {0, 1, 2, 3, 4}, {3, 4, 0, 1, 2}, {4, 3, 2, 1, 0}, {1, 0, 3, 2, 4}, {2, 4, 1, 0, 3}};
  for (const auto& order : orders) {
    std::vector<double> ser(n), par(n), ref(n);
    ks::permute_copy(src, dims, order, ser);
    kp::permute_copy(src, dims, order, par);
    std::vector<std::size_t> out_dims(5);
    for (std::size_t j = 0; j < 5; ++j) out_dims[j] = dims[order[j]];
    for (std::size_t f = 0; f < n; ++f) {
      const auto out_idx = trc::multi_index(out_dims, f);  // 1-based
      std::vector<std::size_t> src_idx(5);
      for (std::size_t j = 0; j < 5; ++j) src_idx[order[j]] = out_idx[j];
      ref[f] = src[trc::linear_index(dims, std::span<const std::size_t>(src_idx))];
    }
    CHECK(bitwise_equal(ser, ref));
    CHECK(bitwise_equal(par, ref));
  }
}
