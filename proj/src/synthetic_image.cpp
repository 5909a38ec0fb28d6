#include "trc/synthetic_image.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace trc {

DenseTensor piecewise_smooth_image(std::size_t rows, std::size_t cols) {
  DenseTensor img({rows, cols, 3});
  const double pi = std::numbers::pi;
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t r = 0; r < rows; ++r) {
      const double y = (static_cast<double>(r) + 0.5) / static_cast<double>(rows);
      const double x = (static_cast<double>(c) + 0.5) / static_cast<double>(cols);

      std::array<double, 3> rgb{0.35 + 0.25 * x + 0.10 * std::sin(pi * y),
                                0.45 + 0.20 * y - 0.10 * x,
                                0.60 - 0.25 * y + 0.05 * std::cos(2 * pi * x)};

      const double dx = x - 0.32;
      const double dy = (y - 0.45) * static_cast<double>(rows) / static_cast<double>(cols);
      if (dx * dx + dy * dy < 0.17 * 0.17) {
        rgb = {0.85 - 0.30 * y, 0.30 + 0.20 * x, 0.20 + 0.10 * std::sin(3 * pi * x)};
      } else if (x > 0.58 && x < 0.88 && y > 0.18 && y < 0.62) {
        rgb = {0.15 + 0.20 * y, 0.55 + 0.25 * (x - 0.58), 0.80 - 0.20 * y};
      } else if (std::abs(y - (1.25 - 0.9 * x)) < 0.07) {
        rgb = {0.92, 0.88 - 0.20 * x, 0.40 + 0.30 * y};
      }
      for (std::size_t ch = 0; ch < 3; ++ch) {
        img[r + rows * (c + cols * ch)] = std::clamp(rgb[ch], 0.0, 1.0);
      }
    }
  }
  return img;
}

}  // namespace trc
