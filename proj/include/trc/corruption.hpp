#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "trc/rng.hpp"
#include "trc/tensor.hpp"

namespace trc {

enum class MaskKind { uniform, missing_rows, watermark, moving_watermark, raindrop };

struct MaskSpec {
  MaskKind kind = MaskKind::uniform;
  /// Observation rate p (uniform), missing fraction (rows), streak density (raindrop).
  double rate = 1.0;
  /// Text rasterized for the watermark masks.
  std::string text = "ROBUST TRC";
  /// Uniform masks: exactly round(p * size) entries (true) or Bernoulli(p) per entry.
  bool fixed_count = true;
};

enum class NoiseKind { none, gaussian, gmm, salt_pepper, random_value };

struct NoiseSpec {
  NoiseKind kind = NoiseKind::none;
  double var_a = 0.0;  // gaussian variance, or GMM inlier variance
  double var_b = 0.0;  // GMM outlier variance
  double gamma = 0.0;  // outlier probability / corrupted fraction
};

struct CorruptionSpec {
  MaskSpec mask;
  NoiseSpec noise;
  std::uint64_t seed = 0;
};

/// "uniform:0.5", "rows:0.1", "watermark[:TEXT]", "moving-watermark[:TEXT]",
/// "raindrop:0.05", with an optional "bernoulli-" prefix on uniform.
MaskSpec parse_mask(std::string_view text);
/// "none", "gaussian:VAR", "gmm:VA,VB,GAMMA", "salt-pepper:GAMMA", "random-value:GAMMA".
NoiseSpec parse_noise(std::string_view text);
std::string to_string(const MaskSpec& m);
std::string to_string(const NoiseSpec& n);

void validate(const CorruptionSpec& spec);

/// Binary observation mask for a spatial-leading tensor of shape `dims`.
DenseTensor make_mask(const Dims& dims, const MaskSpec& spec, RngStream& rng);

/// Monochrome 5x7 glyph raster of `text` (1 = ink), rows x cols = 7 x 6*len-1.
DenseTensor rasterize_text(std::string_view text);

struct Corrupted {
  DenseTensor observed;  // clean + noise on the mask, 0 elsewhere
  DenseTensor mask;
};

/// Samples a mask from the "mask" stream and noise from the "noise" stream.
Corrupted corrupt(const DenseTensor& clean, const CorruptionSpec& spec);

}  // namespace trc
