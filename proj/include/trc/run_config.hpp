#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "trc/c2f.hpp"
#include "trc/corruption.hpp"
#include "trc/hqwtrr.hpp"

namespace trc {

/// Everything a pipeline run needs. Serialized as UTF-8 `key = value` lines
/// with `#` comments; unknown keys are rejected. Defaults are the standard
/// image settings.
struct RunConfig {
  SolverConfig solver;
  PatchPlan plan;
  RankRule rule;
  CorruptionSpec corruption;
  /// Explicit ranks for the two stages; 0 selects the rank rule.
  std::size_t global_rank = 0;
  std::size_t local_rank = 0;
  /// Shape of the global stage; empty keeps the input shape.
  Dims global_reshape;
  /// Clean input for `mc` (path or "builtin:piecewise") and output path.
  std::string input;
  std::string output;
  int threads = 0;
  /// When false, `mc` writes 0 in the wall_ms column.
  bool timing = true;

  C2fOptions c2f_options() const;
};

RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::filesystem::path& path);
/// Every key with its current value, in a form parse_run_config accepts.
std::string to_text(const RunConfig& cfg);

}  // namespace trc
