#pragma once

// Coarse-to-fine completion: a global robust completion followed by
// refinement of jittered patch tensors guided by the global estimate.
//
// Tensors are spatial-leading: mode 1 is rows, mode 2 is columns, and any
// further modes (channels, frames) travel with each pixel.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "trc/hqwtrr.hpp"
#include "trc/tensor.hpp"

namespace trc {

struct PatchPlan {
  std::size_t m = 36;      // patch side
  std::size_t o = 18;      // overlap between neighbouring patches
  std::size_t l = 2;       // jitter length; (2l+1)^2 shifted copies per patch
  double sigma_w = 0.3;    // similarity scale of the confidence weights
  double w0 = 0.2;         // weight of entries filled from the global estimate
  bool aggregate_shifted = false;  // also average the jittered slices
};

void validate(const PatchPlan& plan);

/// Rank heuristic: global r = g*sqrt(p*I1*I2), local r = l*sqrt(p)*m*f^(1/3),
/// both rounded to nearest with a floor of 1.
struct RankRule {
  double global_coeff = 0.2;
  double local_coeff = 0.5;

  std::size_t global_rank(double p, std::size_t rows, std::size_t cols) const;
  std::size_t local_rank(double p, std::size_t m, std::size_t frames = 1) const;
};

/// 1-based top-left corner of a patch.
struct Origin {
  std::size_t row = 1;
  std::size_t col = 1;
  friend auto operator<=>(const Origin&, const Origin&) = default;
};

/// 0-based source index for position j (may be negative or >= n) when an axis
/// of length n is reflected without repeating the edge sample.
std::size_t mirror_index(std::ptrdiff_t j, std::size_t n);

/// Reflect-pads the two spatial modes by l on every side.
DenseTensor pad_mirror(const DenseTensor& t, std::size_t l);
/// Removes an l-pixel border from the two spatial modes.
DenseTensor unpad(const DenseTensor& t, std::size_t l);

/// Origins 1, 1+(m-o), ... along one axis, with a clamped tail at dim-m+1.
std::vector<std::size_t> plan_axis(std::size_t dim, std::size_t m, std::size_t o);
/// Row-major Cartesian product of the per-axis origins.
std::vector<Origin> plan_patches(std::size_t rows, std::size_t cols, std::size_t m, std::size_t o);

/// Spatial crop of height x width at `origin`, keeping all trailing modes.
DenseTensor crop(const DenseTensor& t, Origin origin, std::size_t height, std::size_t width);

/// Number of jitter offsets, (2l+1)^2.
inline std::size_t jitter_count(std::size_t l) { return (2 * l + 1) * (2 * l + 1); }
/// Row-major offset index of (dy, dx) in [-l, l]^2.
inline std::size_t jitter_index(std::ptrdiff_t dy, std::ptrdiff_t dx, std::size_t l) {
  const auto side = static_cast<std::ptrdiff_t>(2 * l + 1);
  const auto il = static_cast<std::ptrdiff_t>(l);
  return static_cast<std::size_t>((dy + il) * side + (dx + il));
}

/// Stacks the m x m crops at origin + (dy, dx) for all offsets into a tensor of
/// shape m x m x (trailing modes) x (2l+1)^2. `origin` is in the coordinates of
/// `padded` and must leave l pixels of margin.
DenseTensor jitter_stack(const DenseTensor& padded, Origin origin, std::size_t m, std::size_t l);
/// Slice `index` of the last mode of a jitter stack.
DenseTensor jitter_slice(const DenseTensor& stack, std::size_t index);

/// P o S + (1 - P) o S_hat.
DenseTensor combine(const DenseTensor& s, const DenseTensor& s_hat, const DenseTensor& p);

/// exp(-(S_c - S_hat)^2 / (2 sigma_w^2)) where observed, w0 elsewhere.
DenseTensor confidence_weights(const DenseTensor& s_c, const DenseTensor& s_hat,
                               const DenseTensor& p, double sigma_w, double w0);

struct PlacedPatch {
  Origin origin;
  DenseTensor block;  // spatial-leading, same trailing modes as the canvas
};

/// Per-pixel mean of all blocks covering each pixel. The result does not depend
/// on the order of `patches`. Throws if any canvas pixel is left uncovered.
DenseTensor aggregate(const Dims& canvas, std::span<const PlacedPatch> patches);

struct C2fOptions {
  /// Shape for the global stage; empty keeps the input shape.
  Dims global_reshape;
  /// Explicit ranks; 0 means use the rank rule.
  std::size_t global_rank = 0;
  std::size_t local_rank = 0;
  /// Worker threads for patch refinement; 0 uses the OpenMP default.
  int threads = 0;
  /// Execution order of patch indices (a permutation); empty means natural.
  std::vector<std::size_t> patch_order;
  /// Skip the refinement stage (global-only completion).
  bool global_only = false;
};

struct C2fResult {
  DenseTensor global;   // coarse completion, input shape
  DenseTensor refined;  // final output, input shape
  SolveReport global_report;
  std::vector<SolveReport> patch_reports;  // indexed like plan_patches
  std::vector<Origin> origins;
  double observation_rate = 0.0;
  std::size_t global_rank = 0;
  std::size_t local_rank = 0;
};

/// Global completion of `observed` under binary `mask`, then patch refinement.
C2fResult run_c2f(const DenseTensor& observed, const DenseTensor& mask, const PatchPlan& plan,
                  const SolverConfig& cfg, const RankRule& rule, const C2fOptions& options = {});

}  // namespace trc
