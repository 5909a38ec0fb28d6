// Serial reference kernels vs. their OpenMP counterparts.
//
//   ./bench_kernels --benchmark_filter=blend
//
// Sizes span the kParallelThreshold cut-over so the single-thread fallback
// shows up as well.

#include <benchmark/benchmark.h>

#include <array>
#include <vector>

#include "trc/hqwtrr.hpp"
#include "trc/kernels.hpp"
#include "trc/rng.hpp"

namespace {

namespace ks = trc::kernels::serial;
namespace kp = trc::kernels::parallel;

std::vector<double> random_vec(std::size_t n, const char* name, double lo = -1.0, double hi = 1.0) {
  trc::RngStream rng(42, name);
  std::vector<double> v(n);
  for (double& x : v) x = lo + (hi - lo) * rng.uniform();
  return v;
}

template <bool Parallel>
void BM_Blend(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto l = random_vec(n, "l"), m = random_vec(n, "m");
  auto w = random_vec(n, "w", 0.0, 1.0), q = random_vec(n, "q", 0.0, 1.0);
  std::vector<double> x(n);
  for (auto _ : state) {
    if constexpr (Parallel) kp::blend(x, l, m, w, q, 6e-4, 3e-4);
    else ks::blend(x, l, m, w, q, 6e-4, 3e-4);
    benchmark::DoNotOptimize(x.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

template <bool Parallel>
void BM_Weights(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto r = random_vec(n, "r");
  std::vector<double> s(n, 1.0), q(n);
  const trc::Estimator est{trc::LossFamily::cauchy, 0.15};
  for (auto _ : state) {
    if constexpr (Parallel) kp::weights(q, r, s, est);
    else ks::weights(q, r, s, est);
    benchmark::DoNotOptimize(q.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

template <bool Parallel>
void BM_DiffSumSquares(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto a = random_vec(n, "a"), b = random_vec(n, "b");
  for (auto _ : state) {
    double s = Parallel ? kp::diff_sum_squares(a, b) : ks::diff_sum_squares(a, b);
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

template <bool Parallel>
void BM_DualUpdate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto z = random_vec(n, "z"), x = random_vec(n, "x");
  std::vector<double> g(n);
  for (auto _ : state) {
    if constexpr (Parallel) kp::dual_update(g, z, x, 1e-4);
    else ks::dual_update(g, z, x, 1e-4);
    benchmark::DoNotOptimize(g.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

// Permutation used by the unfolding of a 7-way image reshape at k = 4.
template <bool Parallel>
void BM_PermuteCopy(benchmark::State& state) {
  const std::array<std::size_t, 7> dims{4, 4, 4, 4, 4, 6, 3};
  const std::array<std::size_t, 7> order{3, 4, 5, 6, 0, 1, 2};
  std::size_t n = 1;
  for (auto d : dims) n *= d;
  auto src = random_vec(n, "src");
  std::vector<double> dst(n);
  for (auto _ : state) {
    if constexpr (Parallel) kp::permute_copy(src, dims, order, dst);
    else ks::permute_copy(src, dims, order, dst);
    benchmark::DoNotOptimize(dst.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

// One full solver iteration budget on a small problem, for scale.
void BM_SolveSmall(benchmark::State& state) {
  const trc::Dims dims{8, 8, 8};
  trc::DenseTensor m(dims, random_vec(512, "m"));
  trc::DenseTensor w(dims, 1.0);
  trc::SolverConfig cfg;
  cfg.ranks = {4};
  cfg.max_iters = 20;
  cfg.min_iters = 20;
  cfg.parallel_modes = state.range(0) != 0;
  for (auto _ : state) {
    auto r = trc::solve(m, w, cfg);
    benchmark::DoNotOptimize(r.x.data());
  }
}

#define TRC_PAIR(fn, ...)                                           \
  BENCHMARK_TEMPLATE(fn, false)->Name(#fn "/serial")__VA_ARGS__;    \
  BENCHMARK_TEMPLATE(fn, true)->Name(#fn "/parallel")__VA_ARGS__

TRC_PAIR(BM_Blend, ->RangeMultiplier(8)->Range(1 << 12, 1 << 21));
TRC_PAIR(BM_Weights, ->RangeMultiplier(8)->Range(1 << 12, 1 << 21));
TRC_PAIR(BM_DiffSumSquares, ->RangeMultiplier(8)->Range(1 << 12, 1 << 21));
TRC_PAIR(BM_DualUpdate, ->RangeMultiplier(8)->Range(1 << 12, 1 << 21));
TRC_PAIR(BM_PermuteCopy, );
BENCHMARK(BM_SolveSmall)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
