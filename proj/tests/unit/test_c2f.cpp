#include <doctest.h>

#include <cmath>
#include <numeric>

#include "trc/c2f.hpp"
#include "trc/error.hpp"
#include "trc/metrics.hpp"
#include "trc/rng.hpp"

using trc::DenseTensor;
using trc::Origin;

namespace {

// value encodes (row, col, channel) so any misplaced pixel is visible
DenseTensor coded(std::size_t rows, std::size_t cols, std::size_t ch) {
  DenseTensor t({rows, cols, ch});
  for (std::size_t c = 1; c <= ch; ++c)
    for (std::size_t j = 1; j <= cols; ++j)
      for (std::size_t i = 1; i <= rows; ++i) t.at({i, j, c}) = 10000.0 * c + 100.0 * j + i;
  return t;
}

DenseTensor direct_crop(const DenseTensor& t, std::size_t r0, std::size_t c0, std::size_t h, std::size_t w) {
  const std::size_t ch = t.dims()[2];
  DenseTensor out({h, w, ch});
  for (std::size_t c = 1; c <= ch; ++c)
    for (std::size_t j = 1; j <= w; ++j)
      for (std::size_t i = 1; i <= h; ++i) out.at({i, j, c}) = t.at({r0 + i - 1, c0 + j - 1, c});
  return out;
}

}  // namespace

TEST_CASE("mirror padding") {
  CHECK(trc::mirror_index(-2, 4) == 2);
  CHECK(trc::mirror_index(-1, 4) == 1);
  CHECK(trc::mirror_index(3, 4) == 3);
  CHECK(trc::mirror_index(4, 4) == 2);
  CHECK(trc::mirror_index(5, 4) == 1);

  // a,b,c,d along rows -> c,b,a,b,c,d,c,b
  DenseTensor t({4, 3});
  for (std::size_t i = 1; i <= 4; ++i)
    for (std::size_t j = 1; j <= 3; ++j) t.at({i, j}) = static_cast<double>(i);
  const DenseTensor p = trc::pad_mirror(t, 2);
  REQUIRE(p.dims() == trc::Dims{8, 7});
  const double expect[] = {3, 2, 1, 2, 3, 4, 3, 2};
  for (std::size_t i = 1; i <= 8; ++i)
    for (std::size_t j = 1; j <= 7; ++j) CHECK(p.at({i, j}) == expect[i - 1]);

  const DenseTensor img = coded(5, 6, 2);
  CHECK(trc::pad_mirror(img, 0) == img);
  CHECK(trc::unpad(trc::pad_mirror(img, 2), 2) == img);
  CHECK(trc::frob_norm(trc::pad_mirror(img, 2)) >= trc::frob_norm(img));
  CHECK_THROWS_AS(trc::pad_mirror(img, 5), trc::ArgumentError);
}

TEST_CASE("patch planning") {
  CHECK(trc::plan_axis(10, 4, 2) == std::vector<std::size_t>{1, 3, 5, 7});
  CHECK(trc::plan_axis(11, 4, 2) == std::vector<std::size_t>{1, 3, 5, 7, 8});
  CHECK(trc::plan_axis(12, 4, 0) == std::vector<std::size_t>{1, 5, 9});
  CHECK(trc::plan_axis(4, 4, 2) == std::vector<std::size_t>{1});
  CHECK_THROWS_AS(trc::plan_axis(3, 4, 2), trc::ArgumentError);
  CHECK_THROWS_AS(trc::plan_axis(10, 4, 4), trc::ArgumentError);

  const auto o = trc::plan_patches(10, 11, 4, 2);
  CHECK(o.size() == 4 * 5);
  CHECK(o.front() == Origin{1, 1});
  CHECK(o[1] == Origin{1, 3});
  CHECK(o.back() == Origin{7, 8});

  // every pixel covered
  std::vector<int> cover(10 * 11, 0);
  for (auto org : o)
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) ++cover[(org.row - 1 + i) + 10 * (org.col - 1 + j)];
  CHECK(std::all_of(cover.begin(), cover.end(), [](int c) { return c > 0; }));
}

TEST_CASE("jitter stacks") {
  const DenseTensor img = coded(9, 10, 3);
  SUBCASE("l = 0 is a plain crop") {
    const DenseTensor s = trc::jitter_stack(img, {2, 3}, 4, 0);
    CHECK(s.dims() == trc::Dims{4, 4, 3, 1});
    CHECK(trc::jitter_slice(s, 0) == direct_crop(img, 2, 3, 4, 4));
  }
  SUBCASE("constant image gives identical slices") {
    const DenseTensor s = trc::jitter_stack(DenseTensor({9, 10, 3}, 0.25), {3, 3}, 4, 2);
    for (std::size_t k = 1; k < trc::jitter_count(2); ++k) CHECK(trc::jitter_slice(s, k) == trc::jitter_slice(s, 0));
  }
  SUBCASE("each slice is the crop at the shifted origin") {
    const DenseTensor s = trc::jitter_stack(img, {3, 4}, 4, 2);
    CHECK(s.dims() == trc::Dims{4, 4, 3, 25});
    for (int dy = -2; dy <= 2; ++dy)
      for (int dx = -2; dx <= 2; ++dx)
        CHECK(trc::jitter_slice(s, trc::jitter_index(dy, dx, 2)) ==
              direct_crop(img, static_cast<std::size_t>(3 + dy), static_cast<std::size_t>(4 + dx), 4, 4));
  }
  CHECK_THROWS_AS(trc::jitter_stack(img, {2, 4}, 4, 2), trc::BoundsError);
  CHECK(trc::jitter_index(-2, -2, 2) == 0);
  CHECK(trc::jitter_index(0, 0, 2) == 12);
}

TEST_CASE("combine and confidence weights") {
  const DenseTensor s = coded(4, 4, 1);
  const DenseTensor h({4, 4, 1}, -1.0);
  CHECK(trc::combine(s, h, DenseTensor::ones(s.dims())) == s);
  CHECK(trc::combine(s, h, DenseTensor(s.dims())) == h);
  DenseTensor board(s.dims());
  for (std::size_t i = 0; i < board.size(); ++i) board[i] = static_cast<double>(((i % 4) + (i / 4)) % 2);
  const DenseTensor c = trc::combine(s, h, board);
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(c[i] == (board[i] != 0 ? s[i] : h[i]));

  DenseTensor sc({3}, std::vector<double>{0.5, 0.8, 0.9});
  DenseTensor sh({3}, std::vector<double>{0.5, 0.5, 0.1});
  DenseTensor p({3}, std::vector<double>{1, 1, 0});
  const DenseTensor w = trc::confidence_weights(sc, sh, p, 0.3, 0.2);
  CHECK(w[0] == 1.0);
  CHECK(w[1] == doctest::Approx(std::exp(-0.5)));
  CHECK(w[2] == 0.2);
}

TEST_CASE("aggregation") {
  SUBCASE("overlapping 1-D example") {
    std::vector<trc::PlacedPatch> ones{{{1, 1}, DenseTensor({1, 2}, 1.0)}, {{1, 2}, DenseTensor({1, 2}, 1.0)}};
    CHECK(trc::aggregate({1, 3}, ones) == DenseTensor({1, 3}, 1.0));
    std::vector<trc::PlacedPatch> two{{{1, 1}, DenseTensor({1, 2}, 1.0)}, {{1, 2}, DenseTensor({1, 2}, 3.0)}};
    CHECK(trc::aggregate({1, 3}, two) == DenseTensor({1, 3}, std::vector<double>{1, 2, 3}));
  }
  SUBCASE("tiling reproduces the input") {
    const DenseTensor img = coded(8, 12, 2);
    std::vector<trc::PlacedPatch> tiles;
    for (auto o : trc::plan_patches(8, 12, 4, 0)) tiles.push_back({o, trc::crop(img, o, 4, 4)});
    CHECK(trc::aggregate(img.dims(), tiles) == img);
  }
  SUBCASE("constant patches give a constant canvas and order does not matter") {
    std::vector<trc::PlacedPatch> ps;
    for (auto o : trc::plan_patches(11, 10, 4, 2)) ps.push_back({o, DenseTensor({4, 4, 3}, 0.7)});
    const DenseTensor a = trc::aggregate({11, 10, 3}, ps);
    for (double v : a.values()) CHECK(v == doctest::Approx(0.7).epsilon(1e-15));
    std::vector<trc::PlacedPatch> rev(ps.rbegin(), ps.rend());
    CHECK(trc::aggregate({11, 10, 3}, rev) == a);
  }
  SUBCASE("uncovered pixels are an error") {
    std::vector<trc::PlacedPatch> one{{{1, 1}, DenseTensor({2, 2}, 1.0)}};
    CHECK_THROWS_AS(trc::aggregate({3, 3}, one), trc::Error);
  }
}

TEST_CASE("rank rule") {
  const trc::RankRule rule;
  CHECK(rule.global_rank(0.5, 64, 96) == 11);
  CHECK(rule.local_rank(0.5, 36) == 13);
  CHECK(rule.local_rank(0.5, 36, 8) == 25);
  CHECK(rule.global_rank(0.0001, 4, 4) == 1);
}

TEST_CASE("plan validation") {
  trc::PatchPlan p;
  CHECK_NOTHROW(trc::validate(p));
  p.o = p.m;
  CHECK_THROWS_AS(trc::validate(p), trc::ConfigError);
}

namespace {

// separable positive image: every unfolding has rank one
DenseTensor rank_one_image(std::size_t rows, std::size_t cols) {
  DenseTensor t({rows, cols, 3});
  for (std::size_t c = 1; c <= 3; ++c)
    for (std::size_t j = 1; j <= cols; ++j)
      for (std::size_t i = 1; i <= rows; ++i)
        t.at({i, j, c}) = (0.5 + 0.3 * std::sin(0.3 * i)) * (0.6 + 0.3 * std::cos(0.2 * j)) * (0.5 + 0.2 * c);
  return t;
}

}  // namespace

TEST_CASE("coarse-to-fine on clean, fully observed data is a fixed point") {
  // One colour per channel: every unfolding of the image and of every jitter
  // stack has rank one, so rank-1 solves reproduce the data exactly.
  DenseTensor img({20, 24, 3});
  for (std::size_t c = 1; c <= 3; ++c)
    for (std::size_t j = 1; j <= 24; ++j)
      for (std::size_t i = 1; i <= 20; ++i) img.at({i, j, c}) = 0.2 + 0.25 * static_cast<double>(c);
  trc::PatchPlan plan;
  plan.m = 10;
  plan.o = 5;
  plan.l = 1;
  trc::SolverConfig cfg;
  cfg.epsilon = 1e-8;
  trc::C2fOptions opt;
  opt.global_rank = 1;
  opt.local_rank = 1;
  const auto res = trc::run_c2f(img, DenseTensor::ones(img.dims()), plan, cfg, trc::RankRule{}, opt);
  CHECK(res.observation_rate == 1.0);
  CHECK(res.origins.size() == trc::plan_patches(20, 24, 10, 5).size());
  CHECK(res.patch_reports.size() == res.origins.size());
  CHECK(trc::relative_error(img, res.global) < 1e-6);
  CHECK(trc::relative_error(img, res.refined) < 1e-6);
}

TEST_CASE("global stage is exact on a separable image") {
  const DenseTensor img = rank_one_image(20, 24);
  trc::SolverConfig cfg;
  cfg.epsilon = 1e-8;
  trc::C2fOptions opt;
  opt.global_rank = 1;
  opt.global_only = true;
  const auto res = trc::run_c2f(img, DenseTensor::ones(img.dims()), trc::PatchPlan{}, cfg, trc::RankRule{}, opt);
  CHECK(trc::relative_error(img, res.global) < 1e-6);
  CHECK(res.refined == res.global);
  CHECK(res.patch_reports.empty());
}

TEST_CASE("patch execution order does not change the output") {
  const DenseTensor clean = rank_one_image(20, 20);
  trc::RngStream rng(3, "mask");
  DenseTensor mask(clean.dims());
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = rng.uniform() < 0.6 ? 1.0 : 0.0;
  const DenseTensor obs = trc::hadamard(clean, mask);
  trc::PatchPlan plan;
  plan.m = 8;
  plan.o = 4;
  plan.l = 1;
  trc::SolverConfig cfg;
  cfg.max_iters = 25;
  trc::C2fOptions opt;
  opt.global_rank = 2;
  opt.local_rank = 2;
  const auto a = trc::run_c2f(obs, mask, plan, cfg, trc::RankRule{}, opt);
  const std::size_t n = a.origins.size();
  opt.patch_order.resize(n);
  std::iota(opt.patch_order.rbegin(), opt.patch_order.rend(), std::size_t{0});
  const auto b = trc::run_c2f(obs, mask, plan, cfg, trc::RankRule{}, opt);
  opt.patch_order.clear();
  opt.threads = 3;
  const auto c = trc::run_c2f(obs, mask, plan, cfg, trc::RankRule{}, opt);
  CHECK(a.refined == b.refined);
  CHECK(a.refined == c.refined);

  opt.patch_order = {0, 0};
  CHECK_THROWS_AS(trc::run_c2f(obs, mask, plan, cfg, trc::RankRule{}, opt), trc::ArgumentError);
}

TEST_CASE("c2f input checks") {
  const DenseTensor img = rank_one_image(12, 12);
  DenseTensor half(img.dims(), 0.5);
  CHECK_THROWS_AS(trc::run_c2f(img, half, trc::PatchPlan{}, trc::SolverConfig{}, trc::RankRule{}),
                  trc::ArgumentError);
  CHECK_THROWS_AS(trc::run_c2f(img, DenseTensor({12, 12}), trc::PatchPlan{}, trc::SolverConfig{}, trc::RankRule{}),
                  trc::DimensionError);
}
