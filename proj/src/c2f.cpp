#include "trc/c2f.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <string>

#include <omp.h>

#include "trc/error.hpp"

namespace trc {

namespace {

// Number of entries per pixel (product of the trailing modes).
std::size_t pixel_depth(const Dims& dims) {
  return product(std::span<const std::size_t>(dims).subspan(2));
}

void require_spatial(const DenseTensor& t, const char* op) {
  if (t.order() < 2) throw DimensionError(std::string(op) + ": need at least two spatial modes");
}

std::size_t round_rank(double r) {
  const double rounded = std::floor(r + 0.5);
  return rounded < 1.0 ? 1 : static_cast<std::size_t>(rounded);
}

}  // namespace

void validate(const PatchPlan& plan) {
  if (plan.m == 0) throw ConfigError("patch size m must be positive");
  if (plan.o >= plan.m) throw ConfigError("overlap o must be smaller than the patch size m");
  if (!(plan.sigma_w > 0.0)) throw ConfigError("sigma_w must be positive");
  if (!(plan.w0 >= 0.0 && plan.w0 <= 1.0)) throw ConfigError("w0 must lie in [0, 1]");
}

std::size_t RankRule::global_rank(double p, std::size_t rows, std::size_t cols) const {
  return round_rank(global_coeff * std::sqrt(p * static_cast<double>(rows) * static_cast<double>(cols)));
}

std::size_t RankRule::local_rank(double p, std::size_t m, std::size_t frames) const {
  return round_rank(local_coeff * std::sqrt(p) * static_cast<double>(m) *
                    std::cbrt(static_cast<double>(frames)));
}

std::size_t mirror_index(std::ptrdiff_t j, std::size_t n) {
  const auto last = static_cast<std::ptrdiff_t>(n) - 1;
  if (j < 0) j = -j;
  if (j > last) j = 2 * last - j;
  if (j < 0 || j > last) throw BoundsError("mirror padding wider than the axis");
  return static_cast<std::size_t>(j);
}

DenseTensor pad_mirror(const DenseTensor& t, std::size_t l) {
  require_spatial(t, "pad_mirror");
  if (l == 0) return t;
  const std::size_t rows = t.dims()[0];
  const std::size_t cols = t.dims()[1];
  if (rows < l + 1 || cols < l + 1) {
    throw ArgumentError("pad_mirror: padding " + std::to_string(l) + " needs spatial dims >= " +
                        std::to_string(l + 1));
  }
  Dims out_dims = t.dims();
  out_dims[0] += 2 * l;
  out_dims[1] += 2 * l;
  DenseTensor out(out_dims);
  const std::size_t depth = pixel_depth(t.dims());
  const auto il = static_cast<std::ptrdiff_t>(l);
  for (std::size_t p = 0; p < depth; ++p) {
    for (std::size_t c = 0; c < out_dims[1]; ++c) {
      const std::size_t sc = mirror_index(static_cast<std::ptrdiff_t>(c) - il, cols);
      for (std::size_t r = 0; r < out_dims[0]; ++r) {
        const std::size_t sr = mirror_index(static_cast<std::ptrdiff_t>(r) - il, rows);
        out[r + out_dims[0] * (c + out_dims[1] * p)] = t[sr + rows * (sc + cols * p)];
      }
    }
  }
  return out;
}

DenseTensor unpad(const DenseTensor& t, std::size_t l) {
  require_spatial(t, "unpad");
  if (t.dims()[0] <= 2 * l || t.dims()[1] <= 2 * l) throw ArgumentError("unpad: border wider than tensor");
  return crop(t, Origin{l + 1, l + 1}, t.dims()[0] - 2 * l, t.dims()[1] - 2 * l);
}

std::vector<std::size_t> plan_axis(std::size_t dim, std::size_t m, std::size_t o) {
  if (m == 0 || o >= m) throw ArgumentError("plan_axis: need 0 <= o < m");
  if (m > dim) {
    throw ArgumentError("patch size " + std::to_string(m) + " exceeds dimension " + std::to_string(dim));
  }
  const std::size_t stride = m - o;
  const std::size_t last = dim - m + 1;
  std::vector<std::size_t> origins;
  for (std::size_t s = 1; s <= last; s += stride) origins.push_back(s);
  if (origins.back() != last) origins.push_back(last);
  return origins;
}

std::vector<Origin> plan_patches(std::size_t rows, std::size_t cols, std::size_t m, std::size_t o) {
  const auto r = plan_axis(rows, m, o);
  const auto c = plan_axis(cols, m, o);
  std::vector<Origin> out;
  out.reserve(r.size() * c.size());
  for (std::size_t ri : r) {
    for (std::size_t ci : c) out.push_back({ri, ci});
  }
  return out;
}

DenseTensor crop(const DenseTensor& t, Origin origin, std::size_t height, std::size_t width) {
  require_spatial(t, "crop");
  const std::size_t rows = t.dims()[0];
  const std::size_t cols = t.dims()[1];
  if (origin.row < 1 || origin.col < 1 || origin.row + height - 1 > rows ||
      origin.col + width - 1 > cols || height == 0 || width == 0) {
    throw BoundsError("crop " + std::to_string(height) + "x" + std::to_string(width) + " at (" +
                      std::to_string(origin.row) + "," + std::to_string(origin.col) +
                      ") leaves the " + std::to_string(rows) + "x" + std::to_string(cols) + " extent");
  }
  Dims out_dims = t.dims();
  out_dims[0] = height;
  out_dims[1] = width;
  DenseTensor out(out_dims);
  const std::size_t depth = pixel_depth(t.dims());
  const std::size_t r0 = origin.row - 1;
  const std::size_t c0 = origin.col - 1;
  for (std::size_t p = 0; p < depth; ++p) {
    for (std::size_t c = 0; c < width; ++c) {
      const double* src = t.data() + r0 + rows * (c0 + c + cols * p);
      double* dst = out.data() + height * (c + width * p);
      std::copy(src, src + height, dst);
    }
  }
  return out;
}

DenseTensor jitter_stack(const DenseTensor& padded, Origin origin, std::size_t m, std::size_t l) {
  require_spatial(padded, "jitter_stack");
  if (origin.row <= l || origin.col <= l) {
    throw BoundsError("jitter_stack: origin leaves no room for jitter length " + std::to_string(l));
  }
  Dims out_dims = padded.dims();
  out_dims[0] = m;
  out_dims[1] = m;
  const std::size_t slice = product(out_dims);
  out_dims.push_back(jitter_count(l));
  DenseTensor out(out_dims);
  const auto il = static_cast<std::ptrdiff_t>(l);
  for (std::ptrdiff_t dy = -il; dy <= il; ++dy) {
    for (std::ptrdiff_t dx = -il; dx <= il; ++dx) {
      const Origin shifted{static_cast<std::size_t>(static_cast<std::ptrdiff_t>(origin.row) + dy),
                           static_cast<std::size_t>(static_cast<std::ptrdiff_t>(origin.col) + dx)};
      const DenseTensor patch = crop(padded, shifted, m, m);
      std::copy(patch.values().begin(), patch.values().end(),
                out.data() + jitter_index(dy, dx, l) * slice);
    }
  }
  return out;
}

DenseTensor jitter_slice(const DenseTensor& stack, std::size_t index) {
  const Dims& d = stack.dims();
  if (d.size() < 3 || index >= d.back()) throw BoundsError("jitter_slice: index out of range");
  Dims out_dims(d.begin(), d.end() - 1);
  const std::size_t n = product(out_dims);
  const auto first = stack.values().begin() + static_cast<std::ptrdiff_t>(index * n);
  return DenseTensor(std::move(out_dims), std::vector<double>(first, first + static_cast<std::ptrdiff_t>(n)));
}

DenseTensor combine(const DenseTensor& s, const DenseTensor& s_hat, const DenseTensor& p) {
  if (!s.same_shape(s_hat) || !s.same_shape(p)) throw DimensionError("combine: shape mismatch");
  DenseTensor out(s.dims());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = p[i] != 0.0 ? s[i] : s_hat[i];
  return out;
}

DenseTensor confidence_weights(const DenseTensor& s_c, const DenseTensor& s_hat,
                               const DenseTensor& p, double sigma_w, double w0) {
  if (!s_c.same_shape(s_hat) || !s_c.same_shape(p)) {
    throw DimensionError("confidence_weights: shape mismatch");
  }
  if (!(sigma_w > 0.0)) throw ArgumentError("confidence_weights: sigma_w must be positive");
  DenseTensor w(s_c.dims());
  const double denom = 2.0 * sigma_w * sigma_w;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double diff = s_c[i] - s_hat[i];
    w[i] = p[i] != 0.0 ? std::exp(-diff * diff / denom) : w0;
  }
  return w;
}

DenseTensor aggregate(const Dims& canvas, std::span<const PlacedPatch> patches) {
  if (canvas.size() < 2) throw DimensionError("aggregate: canvas needs two spatial modes");
  const std::size_t rows = canvas[0];
  const std::size_t cols = canvas[1];
  const std::size_t depth = pixel_depth(canvas);

  // Accumulate in a canonical order so the sum is independent of input order.
  std::vector<std::size_t> order(patches.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return patches[a].origin < patches[b].origin;
  });

  DenseTensor sum(canvas);
  std::vector<std::size_t> count(rows * cols, 0);
  for (std::size_t idx : order) {
    const auto& p = patches[idx];
    const Dims& bd = p.block.dims();
    if (bd.size() != canvas.size() || !std::equal(bd.begin() + 2, bd.end(), canvas.begin() + 2)) {
      throw DimensionError("aggregate: block trailing modes differ from the canvas");
    }
    const std::size_t h = bd[0];
    const std::size_t w = bd[1];
    if (p.origin.row < 1 || p.origin.col < 1 || p.origin.row + h - 1 > rows ||
        p.origin.col + w - 1 > cols) {
      throw BoundsError("aggregate: patch extends past the canvas");
    }
    const std::size_t r0 = p.origin.row - 1;
    const std::size_t c0 = p.origin.col - 1;
    for (std::size_t d = 0; d < depth; ++d) {
      for (std::size_t c = 0; c < w; ++c) {
        for (std::size_t r = 0; r < h; ++r) {
          sum[(r0 + r) + rows * ((c0 + c) + cols * d)] += p.block[r + h * (c + w * d)];
        }
      }
    }
    for (std::size_t c = 0; c < w; ++c) {
      for (std::size_t r = 0; r < h; ++r) ++count[(r0 + r) + rows * (c0 + c)];
    }
  }
  for (std::size_t px = 0; px < count.size(); ++px) {
    if (count[px] == 0) {
      throw Error("aggregate: pixel (" + std::to_string(px % rows + 1) + "," +
                  std::to_string(px / rows + 1) + ") is not covered by any patch");
    }
  }
  for (std::size_t d = 0; d < depth; ++d) {
    for (std::size_t px = 0; px < count.size(); ++px) {
      sum[px + rows * cols * d] /= static_cast<double>(count[px]);
    }
  }
  return sum;
}

C2fResult run_c2f(const DenseTensor& observed, const DenseTensor& mask, const PatchPlan& plan,
                  const SolverConfig& cfg, const RankRule& rule, const C2fOptions& options) {
  if (!observed.same_shape(mask)) throw DimensionError("run_c2f: observation and mask differ in shape");
  require_spatial(observed, "run_c2f");
  validate(plan);
  for (double v : mask.values()) {
    if (v != 0.0 && v != 1.0) throw ArgumentError("run_c2f: mask must be binary");
  }
  const Dims& dims = observed.dims();
  const std::size_t rows = dims[0];
  const std::size_t cols = dims[1];
  const std::size_t frames = dims.size() >= 4 ? dims[3] : 1;

  C2fResult result;
  double observed_count = 0.0;
  for (double v : mask.values()) observed_count += v;
  result.observation_rate = observed_count / static_cast<double>(mask.size());
  const double p = result.observation_rate;

  // Coarse stage.
  result.global_rank = options.global_rank ? options.global_rank : rule.global_rank(p, rows, cols);
  SolverConfig global_cfg = cfg;
  global_cfg.ranks = {result.global_rank};
  if (options.global_reshape.empty()) {
    auto solved = solve(observed, mask, global_cfg);
    result.global = std::move(solved.x);
    result.global_report = std::move(solved.report);
  } else {
    auto solved = solve(reshape(observed, options.global_reshape), reshape(mask, options.global_reshape),
                        global_cfg);
    result.global = reshape(solved.x, dims);
    result.global_report = std::move(solved.report);
  }
  if (options.global_only) {
    result.refined = result.global;
    return result;
  }

  // Fine stage.
  result.local_rank = options.local_rank ? options.local_rank : rule.local_rank(p, plan.m, frames);
  SolverConfig local_cfg = cfg;
  local_cfg.ranks = {result.local_rank};
  local_cfg.parallel_modes = false;

  const std::size_t l = plan.l;
  const DenseTensor obs_pad = pad_mirror(observed, l);
  const DenseTensor ref_pad = pad_mirror(result.global, l);
  const DenseTensor mask_pad = pad_mirror(mask, l);
  result.origins = plan_patches(rows, cols, plan.m, plan.o);
  const std::size_t count = result.origins.size();

  std::vector<std::size_t> order = options.patch_order;
  if (order.empty()) {
    order.resize(count);
    std::iota(order.begin(), order.end(), std::size_t{0});
  }
  {
    std::vector<std::size_t> check = order;
    std::sort(check.begin(), check.end());
    for (std::size_t i = 0; i < check.size(); ++i) {
      if (check.size() != count || check[i] != i) throw ArgumentError("run_c2f: patch_order is not a permutation");
    }
  }

  std::vector<DenseTensor> refined(count);
  result.patch_reports.resize(count);
  std::vector<std::exception_ptr> failures(count);
  const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(count); ++j) {
    const std::size_t idx = order[static_cast<std::size_t>(j)];
    try {
      const Origin at = result.origins[idx];
      const Origin padded_at{at.row + l, at.col + l};
      const DenseTensor s = jitter_stack(obs_pad, padded_at, plan.m, l);
      const DenseTensor s_hat = jitter_stack(ref_pad, padded_at, plan.m, l);
      const DenseTensor p_s = jitter_stack(mask_pad, padded_at, plan.m, l);
      const DenseTensor s_c = combine(s, s_hat, p_s);
      const DenseTensor w = confidence_weights(s_c, s_hat, p_s, plan.sigma_w, plan.w0);
      auto solved = solve(s_c, w, local_cfg);
      refined[idx] = std::move(solved.x);
      result.patch_reports[idx] = std::move(solved.report);
    } catch (...) {
      failures[idx] = std::current_exception();
    }
  }
  for (std::size_t idx = 0; idx < count; ++idx) {
    if (!failures[idx]) continue;
    const Origin at = result.origins[idx];
    const std::string where = "patch at (" + std::to_string(at.row) + "," + std::to_string(at.col) + "): ";
    try {
      std::rethrow_exception(failures[idx]);
    } catch (const DivergenceError& e) {
      throw DivergenceError(where + e.what(), e.report());
    } catch (const NumericError& e) {
      throw NumericError(where + e.what());
    } catch (const Error& e) {
      throw Error(where + e.what());
    }
  }

  std::vector<PlacedPatch> placed;
  if (!plan.aggregate_shifted) {
    const std::size_t center = jitter_index(0, 0, l);
    placed.reserve(count);
    for (std::size_t idx = 0; idx < count; ++idx) {
      placed.push_back({result.origins[idx], jitter_slice(refined[idx], center)});
    }
    result.refined = aggregate(dims, placed);
  } else {
    const auto il = static_cast<std::ptrdiff_t>(l);
    placed.reserve(count * jitter_count(l));
    for (std::size_t idx = 0; idx < count; ++idx) {
      const Origin at = result.origins[idx];
      for (std::ptrdiff_t dy = -il; dy <= il; ++dy) {
        for (std::ptrdiff_t dx = -il; dx <= il; ++dx) {
          const Origin shifted{static_cast<std::size_t>(static_cast<std::ptrdiff_t>(at.row + l) + dy),
                               static_cast<std::size_t>(static_cast<std::ptrdiff_t>(at.col + l) + dx)};
          placed.push_back({shifted, jitter_slice(refined[idx], jitter_index(dy, dx, l))});
        }
      }
    }
    result.refined = unpad(aggregate(obs_pad.dims(), placed), l);
  }
  return result;
}

}  // namespace trc
