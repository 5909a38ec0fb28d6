// trc: corrupt -> complete -> refine -> evaluate, one step per subcommand.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "trc/c2f.hpp"
#include "trc/corruption.hpp"
#include "trc/error.hpp"
#include "trc/hqwtrr.hpp"
#include "trc/metrics.hpp"
#include "trc/pipeline.hpp"
#include "trc/run_config.hpp"
#include "trc/tensor_io.hpp"
#include "trc/tr_synth.hpp"

namespace {

enum Exit : int { kOk = 0, kConfig = 2, kNumeric = 3, kIo = 4 };

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw trc::ConfigError("empty entry in list '" + text + "'");
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != item.size()) throw trc::ConfigError("not a non-negative integer: '" + item + "'");
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.empty()) throw trc::ConfigError("empty list");
  return out;
}

trc::RunConfig config_or_default(const std::string& path) {
  return path.empty() ? trc::RunConfig{} : trc::load_run_config(path);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw trc::IoError("cannot open '" + path + "' for writing");
  os << text;
  if (!os) throw trc::IoError("write failed for '" + path + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust tensor-ring completion toolkit"};
  app.require_subcommand(1);

  // synth
  std::string synth_dims, synth_ranks, synth_out;
  std::uint64_t synth_seed = 0;
  auto* synth = app.add_subcommand("synth", "random tensor-ring tensor");
  synth->add_option("--dims", synth_dims, "comma-separated dimensions")->required();
  synth->add_option("--ranks", synth_ranks, "comma-separated TR ranks (1 or N)")->required();
  synth->add_option("--seed", synth_seed);
  synth->add_option("-o,--output", synth_out)->required();

  // corrupt
  std::string cor_in, cor_mask = "uniform:0.5", cor_noise = "none", cor_out, cor_mask_out;
  std::uint64_t cor_seed = 0;
  auto* corrupt = app.add_subcommand("corrupt", "sample a mask and noise");
  corrupt->add_option("-i,--input", cor_in)->required();
  corrupt->add_option("--mask", cor_mask);
  corrupt->add_option("--noise", cor_noise);
  corrupt->add_option("--seed", cor_seed);
  corrupt->add_option("-o,--output", cor_out)->required();
  corrupt->add_option("-m,--mask-out", cor_mask_out)->required();

  // complete / c2f
  std::string cmp_in, cmp_mask, cmp_cfg, cmp_out, cmp_report;
  auto* complete = app.add_subcommand("complete", "global robust completion");
  complete->add_option("-i,--input", cmp_in)->required();
  complete->add_option("-m,--mask", cmp_mask)->required();
  complete->add_option("--config", cmp_cfg);
  complete->add_option("-o,--output", cmp_out)->required();
  complete->add_option("--report", cmp_report);

  std::string c2f_in, c2f_mask, c2f_cfg, c2f_out, c2f_report;
  auto* c2f = app.add_subcommand("c2f", "coarse-to-fine completion");
  c2f->add_option("-i,--input", c2f_in)->required();
  c2f->add_option("-m,--mask", c2f_mask)->required();
  c2f->add_option("--config", c2f_cfg);
  c2f->add_option("-o,--output", c2f_out)->required();
  c2f->add_option("--report", c2f_report);

  // psnr
  std::string psnr_a, psnr_b;
  auto* psnr = app.add_subcommand("psnr", "PSNR between two tensors (peak 1)");
  psnr->add_option("-a", psnr_a)->required();
  psnr->add_option("-b", psnr_b)->required();

  // convert
  std::string conv_in, conv_out, conv_reshape;
  auto* convert = app.add_subcommand("convert", "convert between .pgm/.ppm and .trt");
  convert->add_option("-i,--input", conv_in, "file or builtin:piecewise")->required();
  convert->add_option("-o,--output", conv_out)->required();
  convert->add_option("--reshape", conv_reshape, "d1,d2,...");

  // mc
  std::size_t mc_runs = 20;
  std::string mc_cfg, mc_out, mc_input;
  auto* mc = app.add_subcommand("mc", "Monte Carlo sweep");
  mc->add_option("--runs", mc_runs);
  mc->add_option("--config", mc_cfg)->required();
  mc->add_option("-i,--input", mc_input, "overrides the config's input");
  mc->add_option("-o,--output", mc_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    if (*synth) {
      const auto dims = parse_sizes(synth_dims);
      auto ranks = parse_sizes(synth_ranks);
      if (ranks.size() == 1) ranks.assign(dims.size(), ranks[0]);
      trc::save_any(synth_out, trc::random_tr_tensor(dims, ranks, synth_seed).tensor);
    } else if (*corrupt) {
      trc::CorruptionSpec spec;
      spec.mask = trc::parse_mask(cor_mask);
      spec.noise = trc::parse_noise(cor_noise);
      spec.seed = cor_seed;
      const auto out = trc::corrupt(trc::load_any(cor_in), spec);
      trc::write_trt(cor_out, out.observed);
      trc::write_trt(cor_mask_out, out.mask);
    } else if (*complete) {
      const auto cfg = config_or_default(cmp_cfg);
      const auto obs = trc::load_any(cmp_in);
      const auto mask = trc::load_any(cmp_mask);
      trc::SolveReport report;
      trc::DenseTensor x;
      if (!cfg.solver.ranks.empty()) {
        auto solved = trc::solve(obs, mask, cfg.solver);
        x = std::move(solved.x);
        report = std::move(solved.report);
      } else {
        auto opts = cfg.c2f_options();
        opts.global_only = true;
        auto res = trc::run_c2f(obs, mask, cfg.plan, cfg.solver, cfg.rule, opts);
        x = std::move(res.global);
        report = std::move(res.global_report);
      }
      trc::save_any(cmp_out, x);
      if (!cmp_report.empty()) write_text(cmp_report, report.to_text());
    } else if (*c2f) {
      const auto cfg = config_or_default(c2f_cfg);
      const auto res = trc::run_c2f(trc::load_any(c2f_in), trc::load_any(c2f_mask), cfg.plan,
                                    cfg.solver, cfg.rule, cfg.c2f_options());
      trc::save_any(c2f_out, res.refined);
      if (!c2f_report.empty()) {
        std::ostringstream os;
        os << "observation_rate " << res.observation_rate << "\n"
           << "global_rank " << res.global_rank << "\n"
           << "local_rank " << res.local_rank << "\n"
           << "patches " << res.origins.size() << "\n"
           << "# global\n"
           << res.global_report.to_text();
        write_text(c2f_report, os.str());
      }
    } else if (*psnr) {
      const double v = trc::psnr(trc::load_any(psnr_a), trc::load_any(psnr_b));
      std::cout << trc::format_number(v, 6) << "\n";
    } else if (*convert) {
      auto t = trc::load_any(conv_in);
      if (!conv_reshape.empty()) t = trc::reshape(t, parse_sizes(conv_reshape));
      trc::save_any(conv_out, t);
    } else if (*mc) {
      auto cfg = trc::load_run_config(mc_cfg);
      if (!mc_input.empty()) cfg.input = mc_input;
      const auto rows = trc::monte_carlo(trc::load_any(cfg.input), cfg, mc_runs);
      write_text(mc_out, trc::to_csv(rows));
    }
  } catch (const trc::IoError& e) {
    std::cerr << "trc: I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const trc::NumericError& e) {
    std::cerr << "trc: numeric failure: " << e.what() << "\n";
    return kNumeric;
  } catch (const trc::Error& e) {
    // configuration, argument and shape problems all trace back to the inputs
    std::cerr << "trc: " << e.what() << "\n";
    return kConfig;
  }
  return kOk;
}
