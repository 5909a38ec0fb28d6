#include "trc/corruption.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "shortest.hpp"
#include "trc/error.hpp"

namespace trc {

namespace {

std::vector<double> parse_numbers(std::string_view text, std::string_view what) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string item(text.substr(pos, comma - pos));
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("malformed number '" + item + "' in " + std::string(what));
    }
    pos = comma + 1;
  }
  return out;
}

std::pair<std::string_view, std::string_view> split_kind(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) return {text, {}};
  return {text.substr(0, colon), text.substr(colon + 1)};
}

double single_param(std::string_view args, std::string_view what) {
  const auto v = parse_numbers(args, what);
  if (v.size() != 1) throw ConfigError(std::string(what) + " takes exactly one parameter");
  return v[0];
}

// Classic 5x7 glyphs, one string of 7 rows x 5 columns per character.
struct Glyph {
  char ch;
  std::array<const char*, 7> rows;
};

constexpr std::array<Glyph, 37> kFont{{
    {' ', {".....", ".....", ".....", ".....", ".....", ".....", "....."}},
    {'A', {".###.", "#...#", "#...#", "#####", "#...#", "#...#", "#...#"}},
    {'B', {"####.", "#...#", "#...#", "####.", "#...#", "#...#", "####."}},
    {'C', {".###.", "#...#", "#....", "#....", "#....", "#...#", ".###."}},
    {'D', {"####.", "#...#", "#...#", "#...#", "#...#", "#...#", "####."}},
    {'E', {"#####", "#....", "#....", "####.", "#....", "#....", "#####"}},
    {'F', {"#####", "#....", "#....", "####.", "#....", "#....", "#...."}},
    {'G', {".###.", "#...#", "#....", "#.###", "#...#", "#...#", ".####"}},
    {'H', {"#...#", "#...#", "#...#", "#####", "#...#", "#...#", "#...#"}},
    {'I', {".###.", "..#..", "..#..", "..#..", "..#..", "..#..", ".###."}},
    {'J', {"..###", "...#.", "...#.", "...#.", "...#.", "#..#.", ".##.."}},
    {'K', {"#...#", "#..#.", "#.#..", "##...", "#.#..", "#..#.", "#...#"}},
    {'L', {"#....", "#....", "#....", "#....", "#....", "#....", "#####"}},
    {'M', {"#...#", "##.##", "#.#.#", "#.#.#", "#...#", "#...#", "#...#"}},
    {'N', {"#...#", "#...#", "##..#", "#.#.#", "#..##", "#...#", "#...#"}},
    {'O', {".###.", "#...#", "#...#", "#...#", "#...#", "#...#", ".###."}},
    {'P', {"####.", "#...#", "#...#", "####.", "#....", "#....", "#...."}},
    {'Q', {".###.", "#...#", "#...#", "#...#", "#.#.#", "#..#.", ".##.#"}},
    {'R', {"####.", "#...#", "#...#", "####.", "#.#..", "#..#.", "#...#"}},
    {'S', {".####", "#....", "#....", ".###.", "....#", "....#", "####."}},
    {'T', {"#####", "..#..", "..#..", "..#..", "..#..", "..#..", "..#.."}},
    {'U', {"#...#", "#...#", "#...#", "#...#", "#...#", "#...#", ".###."}},
    {'V', {"#...#", "#...#", "#...#", "#...#", "#...#", ".#.#.", "..#.."}},
    {'W', {"#...#", "#...#", "#...#", "#.#.#", "#.#.#", "#.#.#", ".#.#."}},
    {'X', {"#...#", "#...#", ".#.#.", "..#..", ".#.#.", "#...#", "#...#"}},
    {'Y', {"#...#", "#...#", ".#.#.", "..#..", "..#..", "..#..", "..#.."}},
    {'Z', {"#####", "....#", "...#.", "..#..", ".#...", "#....", "#####"}},
    {'0', {".###.", "#...#", "#..##", "#.#.#", "##..#", "#...#", ".###."}},
    {'1', {"..#..", ".##..", "..#..", "..#..", "..#..", "..#..", ".###."}},
    {'2', {".###.", "#...#", "....#", "...#.", "..#..", ".#...", "#####"}},
    {'3', {"#####", "...#.", "..#..", "...#.", "....#", "#...#", ".###."}},
    {'4', {"...#.", "..##.", ".#.#.", "#..#.", "#####", "...#.", "...#."}},
    {'5', {"#####", "#....", "####.", "....#", "....#", "#...#", ".###."}},
    {'6', {"..##.", ".#...", "#....", "####.", "#...#", "#...#", ".###."}},
    {'7', {"#####", "....#", "...#.", "..#..", ".#...", ".#...", ".#..."}},
    {'8', {".###.", "#...#", "#...#", ".###.", "#...#", "#...#", ".###."}},
    {'9', {".###.", "#...#", "#...#", ".####", "....#", "...#.", ".##.."}},
}};

const Glyph& glyph_for(char ch) {
  const char up = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  for (const auto& g : kFont) {
    if (g.ch == up) return g;
  }
  return kFont[0];
}

// Frames are mode 4 when present; everything between is per-pixel depth.
struct Layout {
  std::size_t rows, cols, depth, frames;
};

Layout layout_of(const Dims& dims) {
  if (dims.size() < 2) throw DimensionError("masks need at least two spatial modes");
  Layout l{dims[0], dims[1], 1, 1};
  if (dims.size() >= 3) l.depth = dims[2];
  for (std::size_t i = 3; i < dims.size(); ++i) l.frames *= dims[i];
  return l;
}

// Writes a per-pixel frame mask (rows x cols, 1 = observed) into every channel.
void apply_pixel_mask(DenseTensor& mask, const Layout& l, std::size_t frame,
                      const std::vector<double>& pixels) {
  const std::size_t plane = l.rows * l.cols;
  for (std::size_t ch = 0; ch < l.depth; ++ch) {
    double* dst = mask.data() + plane * (ch + l.depth * frame);
    std::copy(pixels.begin(), pixels.end(), dst);
  }
}

// Stamps the glyph raster scaled by `scale` at (top, left), clearing ink pixels.
void stamp(std::vector<double>& pixels, const Layout& l, const DenseTensor& raster, std::size_t scale,
           std::ptrdiff_t top, std::ptrdiff_t left) {
  const std::size_t gh = raster.dims()[0];
  const std::size_t gw = raster.dims()[1];
  for (std::size_t c = 0; c < gw * scale; ++c) {
    for (std::size_t r = 0; r < gh * scale; ++r) {
      if (raster[r / scale + gh * (c / scale)] == 0.0) continue;
      const std::ptrdiff_t y = top + static_cast<std::ptrdiff_t>(r);
      const std::ptrdiff_t x = left + static_cast<std::ptrdiff_t>(c);
      if (y < 0 || x < 0 || y >= static_cast<std::ptrdiff_t>(l.rows) ||
          x >= static_cast<std::ptrdiff_t>(l.cols)) {
        continue;
      }
      pixels[static_cast<std::size_t>(y) + l.rows * static_cast<std::size_t>(x)] = 0.0;
    }
  }
}

}  // namespace

MaskSpec parse_mask(std::string_view text) {
  auto [kind, args] = split_kind(text);
  MaskSpec m;
  if (kind == "uniform" || kind == "bernoulli-uniform") {
    m.kind = MaskKind::uniform;
    m.fixed_count = kind == "uniform";
    m.rate = single_param(args, "uniform mask");
  } else if (kind == "rows") {
    m.kind = MaskKind::missing_rows;
    m.rate = single_param(args, "rows mask");
  } else if (kind == "watermark" || kind == "moving-watermark") {
    m.kind = kind == "watermark" ? MaskKind::watermark : MaskKind::moving_watermark;
    if (!args.empty()) m.text = std::string(args);
  } else if (kind == "raindrop") {
    m.kind = MaskKind::raindrop;
    m.rate = single_param(args, "raindrop mask");
  } else {
    throw ConfigError("unknown mask kind '" + std::string(kind) + "'");
  }
  return m;
}

NoiseSpec parse_noise(std::string_view text) {
  auto [kind, args] = split_kind(text);
  NoiseSpec n;
  if (kind == "none") {
    n.kind = NoiseKind::none;
  } else if (kind == "gaussian") {
    n.kind = NoiseKind::gaussian;
    n.var_a = single_param(args, "gaussian noise");
  } else if (kind == "gmm") {
    n.kind = NoiseKind::gmm;
    const auto v = parse_numbers(args, "gmm noise");
    if (v.size() != 3) throw ConfigError("gmm noise takes var_a,var_b,gamma");
    n.var_a = v[0];
    n.var_b = v[1];
    n.gamma = v[2];
  } else if (kind == "salt-pepper") {
    n.kind = NoiseKind::salt_pepper;
    n.gamma = single_param(args, "salt-pepper noise");
  } else if (kind == "random-value") {
    n.kind = NoiseKind::random_value;
    n.gamma = single_param(args, "random-value noise");
  } else {
    throw ConfigError("unknown noise kind '" + std::string(kind) + "'");
  }
  return n;
}

std::string to_string(const MaskSpec& m) {
  std::ostringstream os;
  switch (m.kind) {
    case MaskKind::uniform:
      os << (m.fixed_count ? "uniform:" : "bernoulli-uniform:") << detail::shortest(m.rate);
      break;
    case MaskKind::missing_rows:
      os << "rows:" << detail::shortest(m.rate);
      break;
    case MaskKind::watermark:
      os << "watermark:" << m.text;
      break;
    case MaskKind::moving_watermark:
      os << "moving-watermark:" << m.text;
      break;
    case MaskKind::raindrop:
      os << "raindrop:" << detail::shortest(m.rate);
      break;
  }
  return os.str();
}

std::string to_string(const NoiseSpec& n) {
  std::ostringstream os;
  switch (n.kind) {
    case NoiseKind::none:
      os << "none";
      break;
    case NoiseKind::gaussian:
      os << "gaussian:" << detail::shortest(n.var_a);
      break;
    case NoiseKind::gmm:
      os << "gmm:" << detail::shortest(n.var_a) << ',' << detail::shortest(n.var_b) << ',' << detail::shortest(n.gamma);
      break;
    case NoiseKind::salt_pepper:
      os << "salt-pepper:" << detail::shortest(n.gamma);
      break;
    case NoiseKind::random_value:
      os << "random-value:" << detail::shortest(n.gamma);
      break;
  }
  return os.str();
}

void validate(const CorruptionSpec& spec) {
  const auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!unit(spec.mask.rate)) throw ConfigError("mask rate must lie in [0, 1]");
  if (!unit(spec.noise.gamma)) throw ConfigError("noise gamma must lie in [0, 1]");
  if (!(spec.noise.var_a >= 0.0) || !(spec.noise.var_b >= 0.0)) {
    throw ConfigError("noise variances must be non-negative");
  }
}

DenseTensor rasterize_text(std::string_view text) {
  const std::size_t n = std::max<std::size_t>(text.size(), 1);
  DenseTensor r({7, 6 * n - 1});
  for (std::size_t i = 0; i < text.size(); ++i) {
    const Glyph& g = glyph_for(text[i]);
    for (std::size_t y = 0; y < 7; ++y) {
      for (std::size_t x = 0; x < 5; ++x) {
        if (g.rows[y][x] == '#') r.at({y + 1, 6 * i + x + 1}) = 1.0;
      }
    }
  }
  return r;
}

DenseTensor make_mask(const Dims& dims, const MaskSpec& spec, RngStream& rng) {
  const Layout l = layout_of(dims);
  DenseTensor mask(dims, 1.0);
  const std::size_t total = mask.size();

  switch (spec.kind) {
    case MaskKind::uniform: {
      if (spec.fixed_count) {
        const auto keep = static_cast<std::size_t>(std::llround(spec.rate * static_cast<double>(total)));
        // Partial Fisher-Yates: the first `keep` slots are the observed set.
        std::vector<std::size_t> idx(total);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        for (std::size_t i = 0; i < keep; ++i) {
          const std::size_t j = i + static_cast<std::size_t>(rng.below(total - i));
          std::swap(idx[i], idx[j]);
        }
        std::fill(mask.values().begin(), mask.values().end(), 0.0);
        for (std::size_t i = 0; i < keep; ++i) mask[idx[i]] = 1.0;
      } else {
        for (double& v : mask.values()) v = rng.uniform() < spec.rate ? 1.0 : 0.0;
      }
      break;
    }
    case MaskKind::missing_rows: {
      const auto drop = static_cast<std::size_t>(std::llround(spec.rate * static_cast<double>(l.rows)));
      std::vector<std::size_t> rows(l.rows);
      std::iota(rows.begin(), rows.end(), std::size_t{0});
      for (std::size_t i = 0; i < drop; ++i) {
        std::swap(rows[i], rows[i + static_cast<std::size_t>(rng.below(l.rows - i))]);
      }
      std::vector<double> pixels(l.rows * l.cols, 1.0);
      for (std::size_t i = 0; i < drop; ++i) {
        for (std::size_t c = 0; c < l.cols; ++c) pixels[rows[i] + l.rows * c] = 0.0;
      }
      for (std::size_t f = 0; f < l.frames; ++f) apply_pixel_mask(mask, l, f, pixels);
      break;
    }
    case MaskKind::watermark: {
      // Text tiled in bands across the frame.
      const DenseTensor raster = rasterize_text(spec.text);
      const std::size_t scale = std::max<std::size_t>(1, l.cols / (raster.dims()[1] * 2));
      const std::size_t band = raster.dims()[0] * scale * 2;
      std::vector<double> pixels(l.rows * l.cols, 1.0);
      for (std::size_t top = scale; top < l.rows; top += band) {
        stamp(pixels, l, raster, scale, static_cast<std::ptrdiff_t>(top), static_cast<std::ptrdiff_t>(scale));
      }
      for (std::size_t f = 0; f < l.frames; ++f) apply_pixel_mask(mask, l, f, pixels);
      break;
    }
    case MaskKind::moving_watermark: {
      // One text block travelling linearly from the top-left to the bottom-right corner.
      const DenseTensor raster = rasterize_text(spec.text);
      const std::size_t scale = std::max<std::size_t>(1, l.cols / (raster.dims()[1] * 2));
      const double h = static_cast<double>(raster.dims()[0] * scale);
      const double w = static_cast<double>(raster.dims()[1] * scale);
      for (std::size_t f = 0; f < l.frames; ++f) {
        const double s = l.frames > 1 ? static_cast<double>(f) / static_cast<double>(l.frames - 1) : 0.0;
        const auto top = static_cast<std::ptrdiff_t>(std::lround(s * std::max(0.0, static_cast<double>(l.rows) - h)));
        const auto left = static_cast<std::ptrdiff_t>(std::lround(s * std::max(0.0, static_cast<double>(l.cols) - w)));
        std::vector<double> pixels(l.rows * l.cols, 1.0);
        stamp(pixels, l, raster, scale, top, left);
        apply_pixel_mask(mask, l, f, pixels);
      }
      break;
    }
    case MaskKind::raindrop: {
      // Per-frame vertical streaks with random column, start and length.
      const auto streaks = static_cast<std::size_t>(std::llround(spec.rate * static_cast<double>(l.cols)));
      const std::size_t min_len = std::max<std::size_t>(1, l.rows / 8);
      const std::size_t max_len = std::max(min_len, l.rows / 3);
      for (std::size_t f = 0; f < l.frames; ++f) {
        std::vector<double> pixels(l.rows * l.cols, 1.0);
        for (std::size_t s = 0; s < streaks; ++s) {
          const std::size_t col = rng.below(l.cols);
          const std::size_t start = rng.below(l.rows);
          const std::size_t len = min_len + rng.below(max_len - min_len + 1);
          for (std::size_t r = start; r < std::min(l.rows, start + len); ++r) pixels[r + l.rows * col] = 0.0;
        }
        apply_pixel_mask(mask, l, f, pixels);
      }
      break;
    }
  }
  return mask;
}

Corrupted corrupt(const DenseTensor& clean, const CorruptionSpec& spec) {
  validate(spec);
  for (double v : clean.values()) {
    if (!(v >= 0.0 && v <= 1.0)) throw ArgumentError("corrupt: clean values must lie in [0, 1]");
  }
  RngStream mask_rng(spec.seed, "mask");
  RngStream noise_rng(spec.seed, "noise");
  Corrupted out{DenseTensor(clean.dims()), make_mask(clean.dims(), spec.mask, mask_rng)};

  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    if (out.mask[i] != 0.0) {
      support.push_back(i);
      out.observed[i] = clean[i];
    }
  }

  const NoiseSpec& n = spec.noise;
  switch (n.kind) {
    case NoiseKind::none:
      break;
    case NoiseKind::gaussian: {
      const double sd = std::sqrt(n.var_a);
      for (std::size_t i : support) out.observed[i] += sd * noise_rng.normal();
      break;
    }
    case NoiseKind::gmm: {
      const double sd_a = std::sqrt(n.var_a);
      const double sd_b = std::sqrt(n.var_b);
      for (std::size_t i : support) {
        const bool outlier = noise_rng.uniform() < n.gamma;
        out.observed[i] += (outlier ? sd_b : sd_a) * noise_rng.normal();
      }
      break;
    }
    case NoiseKind::salt_pepper:
    case NoiseKind::random_value: {
      // A fixed fraction gamma of the observed entries, chosen without replacement.
      const auto hit = static_cast<std::size_t>(std::llround(n.gamma * static_cast<double>(support.size())));
      for (std::size_t i = 0; i < hit; ++i) {
        std::swap(support[i], support[i + static_cast<std::size_t>(noise_rng.below(support.size() - i))]);
      }
      for (std::size_t i = 0; i < hit; ++i) {
        const double v = n.kind == NoiseKind::salt_pepper ? (noise_rng.uniform() < 0.5 ? 0.0 : 1.0)
                                                          : noise_rng.uniform();
        out.observed[support[i]] = v;
      }
      break;
    }
  }
  return out;
}

}  // namespace trc
