#include "trc/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <sstream>

#include <omp.h>

#include "trc/corruption.hpp"
#include "trc/error.hpp"
#include "trc/metrics.hpp"
#include "trc/netpbm.hpp"
#include "trc/synthetic_image.hpp"
#include "trc/tensor_io.hpp"

namespace trc {

namespace {

bool is_netpbm(const std::filesystem::path& p) {
  const auto ext = p.extension().string();
  return ext == ".pgm" || ext == ".ppm" || ext == ".pnm";
}

}  // namespace

DenseTensor load_any(const std::string& source) {
  if (source == "builtin:piecewise") return piecewise_smooth_image();
  if (source.empty()) throw ConfigError("no input given");
  const std::filesystem::path p(source);
  return is_netpbm(p) ? read_netpbm(p) : read_trt(p);
}

void save_any(const std::filesystem::path& path, const DenseTensor& t) {
  if (is_netpbm(path)) {
    write_netpbm(path, t);
  } else {
    write_trt(path, t);
  }
}

McRow monte_carlo_run(const DenseTensor& clean, const RunConfig& cfg, std::size_t run, C2fResult* result) {
  McRow row;
  row.run = run;
  row.seed = run_seed(cfg.corruption.seed, run);
  const auto start = std::chrono::steady_clock::now();

  CorruptionSpec spec = cfg.corruption;
  spec.seed = row.seed;
  const Corrupted obs = corrupt(clean, spec);
  C2fResult out = run_c2f(obs.observed, obs.mask, cfg.plan, cfg.solver, cfg.rule, cfg.c2f_options());

  const auto stop = std::chrono::steady_clock::now();
  row.psnr_global = psnr(clean, out.global);
  row.psnr_c2f = psnr(clean, out.refined);
  row.iters_global = out.global_report.iterations;
  row.wall_ms = cfg.timing ? std::chrono::duration<double, std::milli>(stop - start).count() : 0.0;
  if (result) *result = std::move(out);
  return row;
}

std::vector<McRow> monte_carlo(const DenseTensor& clean, const RunConfig& cfg, std::size_t runs) {
  std::vector<McRow> rows(runs);
  std::vector<std::exception_ptr> failures(runs);
  RunConfig inner = cfg;
  // Repetitions are the parallel dimension; patches inside each run are serial.
  inner.threads = 1;
#pragma omp parallel for schedule(dynamic, 1) num_threads(cfg.threads > 0 ? cfg.threads : omp_get_max_threads())
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(runs); ++i) {
    try {
      rows[static_cast<std::size_t>(i)] = monte_carlo_run(clean, inner, static_cast<std::size_t>(i));
    } catch (...) {
      failures[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return rows;
}

std::string format_number(double v, int decimals) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string to_csv(const std::vector<McRow>& rows) {
  std::ostringstream os;
  os << "run,seed,psnr_global,psnr_c2f,iters_global,wall_ms\n";
  for (const auto& r : rows) {
    os << r.run << ',' << r.seed << ',' << format_number(r.psnr_global, 6) << ','
       << format_number(r.psnr_c2f, 6) << ',' << r.iters_global << ',' << format_number(r.wall_ms, 3) << "\n";
  }
  return os.str();
}

}  // namespace trc
