#pragma once

// Glue shared by the command-line tool and the acceptance suite.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "trc/c2f.hpp"
#include "trc/run_config.hpp"
#include "trc/tensor.hpp"

namespace trc {

/// Loads .trt, .pgm/.ppm, or the built-in image named "builtin:piecewise".
DenseTensor load_any(const std::string& source);
/// Writes .pgm/.ppm as NetPBM and everything else as .trt.
void save_any(const std::filesystem::path& path, const DenseTensor& t);

struct McRow {
  std::size_t run = 0;
  std::uint64_t seed = 0;
  double psnr_global = 0.0;
  double psnr_c2f = 0.0;
  std::size_t iters_global = 0;
  double wall_ms = 0.0;
};

/// Seed of run `run`: base seed XOR run index.
inline std::uint64_t run_seed(std::uint64_t base, std::size_t run) { return base ^ run; }

/// One corrupt-complete-refine-evaluate repetition.
McRow monte_carlo_run(const DenseTensor& clean, const RunConfig& cfg, std::size_t run,
                      C2fResult* result = nullptr);
/// `runs` repetitions, executed concurrently and returned in run order.
std::vector<McRow> monte_carlo(const DenseTensor& clean, const RunConfig& cfg, std::size_t runs);

std::string to_csv(const std::vector<McRow>& rows);
/// Fixed-precision decimal, or "inf" / "-inf" / "nan".
std::string format_number(double v, int decimals);

}  // namespace trc
