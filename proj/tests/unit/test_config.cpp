#include <doctest.h>

#include <string>

#include "trc/error.hpp"
#include "trc/pipeline.hpp"
#include "trc/run_config.hpp"

TEST_CASE("defaults") {
  const trc::RunConfig c;
  CHECK(c.solver.mu0 == 1e-4);
  CHECK(c.solver.lambda_factor == 2.0);
  CHECK(c.solver.alpha == 1.1);
  CHECK(c.solver.epsilon == 1e-3);
  CHECK(c.solver.depth(3) == 2);
  CHECK(c.solver.depth(4) == 2);
  CHECK(c.solver.depth(7) == 4);
  CHECK(c.solver.adaptive.eta == 4.0);
  CHECK(c.solver.adaptive.c_min == 0.15);
  CHECK(c.plan.m == 36);
  CHECK(c.plan.o == 18);
  CHECK(c.plan.l == 2);
  CHECK(c.plan.sigma_w == 0.3);
  CHECK(c.plan.w0 == 0.2);
  CHECK(c.rule.global_coeff == 0.2);
  CHECK(c.rule.local_coeff == 0.5);
}

TEST_CASE("parsing") {
  const auto c = trc::parse_run_config(
      "# comment line\n"
      "mu0 = 1e-3   # trailing comment\n"
      "estimator=welsch\n"
      "\n"
      "ranks = 3,4,5\n"
      "mask = uniform:0.3\n"
      "noise = gmm:0.001,0.25,0.5\n"
      "global_reshape = 4,4,4\n"
      "aggregate_shifted = true\n"
      "quantile_mode = signed\n"
      "timing = false\n"
      "seed = 17\n");
  CHECK(c.solver.mu0 == 1e-3);
  CHECK(c.solver.estimator == trc::LossFamily::welsch);
  CHECK(c.solver.ranks == std::vector<std::size_t>{3, 4, 5});
  CHECK(c.corruption.mask.rate == 0.3);
  CHECK(c.corruption.noise.kind == trc::NoiseKind::gmm);
  CHECK(c.global_reshape == trc::Dims{4, 4, 4});
  CHECK(c.plan.aggregate_shifted);
  CHECK(c.solver.adaptive.mode == trc::QuantileMode::signed_max);
  CHECK_FALSE(c.timing);
  CHECK(c.corruption.seed == 17);
  CHECK(c.c2f_options().global_reshape == trc::Dims{4, 4, 4});
}

TEST_CASE("to_text round-trips") {
  trc::RunConfig c;
  c.solver.alpha = 1.05;
  c.solver.ranks = {2};
  c.plan.m = 20;
  c.plan.o = 10;
  c.corruption = {trc::parse_mask("rows:0.2"), trc::parse_noise("salt-pepper:0.1"), 99};
  c.input = "builtin:piecewise";
  const auto back = trc::parse_run_config(trc::to_text(c));
  CHECK(trc::to_text(back) == trc::to_text(c));
  CHECK(back.solver.alpha == 1.05);
  CHECK(back.corruption.seed == 99);
}

TEST_CASE("errors name the line") {
  try {
    trc::parse_run_config("alpha = 1.1\nbogus = 3\n");
    FAIL("expected a config error");
  } catch (const trc::ConfigError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(trc::parse_run_config("alpha 1.1\n"), trc::ConfigError);
  CHECK_THROWS_AS(trc::parse_run_config("alpha = fast\n"), trc::ConfigError);
  CHECK_THROWS_AS(trc::parse_run_config("timing = maybe\n"), trc::ConfigError);
  CHECK_THROWS_AS(trc::parse_run_config("estimator = tukey\n"), trc::ConfigError);
  CHECK_THROWS_AS(trc::load_run_config("/nonexistent/run.cfg"), trc::IoError);
}

TEST_CASE("csv formatting") {
  std::vector<trc::McRow> rows(2);
  rows[0] = {0, 5, 23.5, 25.25, 19, 0.0};
  rows[1] = {1, 4, 1.0 / 0.0, 30.0, 7, 12.3456};
  CHECK(trc::to_csv(rows) ==
        "run,seed,psnr_global,psnr_c2f,iters_global,wall_ms\n"
        "0,5,23.500000,25.250000,19,0.000\n"
        "1,4,inf,30.000000,7,12.346\n");
  CHECK(trc::run_seed(5, 0) == 5);
  CHECK(trc::run_seed(5, 1) == 4);
}

TEST_CASE("small Monte Carlo sweep is deterministic and ordered") {
  trc::RunConfig c;
  c.plan.m = 16;
  c.plan.o = 8;
  c.plan.l = 1;
  c.solver.max_iters = 15;
  c.corruption = {trc::parse_mask("uniform:0.6"), trc::parse_noise("gaussian:0.001"), 3};
  c.timing = false;
  const trc::DenseTensor clean = trc::load_any("builtin:piecewise");
  const auto a = trc::monte_carlo(clean, c, 3);
  const auto b = trc::monte_carlo(clean, c, 3);
  CHECK(trc::to_csv(a) == trc::to_csv(b));
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].run == i);
    CHECK(a[i].seed == (3u ^ i));
    CHECK(a[i].wall_ms == 0.0);
    CHECK(a[i].psnr_global > 10.0);
  }
}
