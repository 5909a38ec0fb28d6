#include "trc/netpbm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "trc/error.hpp"
#include "trc/tensor_io.hpp"

namespace trc {

namespace {

// Header tokenizer: whitespace separated, '#' comments run to end of line.
class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> b) : b_(b) {}

  std::string token() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < b_.size() && !std::isspace(b_[pos_]) && b_[pos_] != '#') ++pos_;
    if (start == pos_) throw FormatError("malformed NetPBM header", pos_);
    return std::string(b_.begin() + static_cast<std::ptrdiff_t>(start), b_.begin() + static_cast<std::ptrdiff_t>(pos_));
  }

  std::size_t number() {
    const std::size_t at = pos_;
    const std::string t = token();
    if (!std::all_of(t.begin(), t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }) ||
        t.size() > 9) {
      throw FormatError("malformed NetPBM header field '" + t + "'", at);
    }
    return std::stoul(t);
  }

  // Exactly one whitespace byte separates maxval from the raster.
  std::size_t raster_start() {
    if (pos_ >= b_.size() || !std::isspace(b_[pos_])) throw FormatError("missing raster separator", pos_);
    return pos_ + 1;
  }

 private:
  void skip() {
    while (pos_ < b_.size()) {
      if (std::isspace(b_[pos_])) {
        ++pos_;
      } else if (b_[pos_] == '#') {
        while (pos_ < b_.size() && b_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> b_;
  std::size_t pos_ = 0;
};

}  // namespace

std::uint8_t quantize(double v) {
  const double c = std::clamp(v, 0.0, 1.0);
  return static_cast<std::uint8_t>(std::floor(c * 255.0 + 0.5));
}

DenseTensor decode_netpbm(std::span<const std::uint8_t> bytes) {
  HeaderReader h(bytes);
  const std::string magic = h.token();
  std::size_t channels = 0;
  if (magic == "P5") {
    channels = 1;
  } else if (magic == "P6") {
    channels = 3;
  } else {
    throw FormatError("unsupported NetPBM magic '" + magic + "'", 0);
  }
  const std::size_t cols = h.number();
  const std::size_t rows = h.number();
  const std::size_t maxval = h.number();
  if (rows == 0 || cols == 0) throw FormatError("empty image", 0);
  if (maxval != 255) throw FormatError("unsupported maxval " + std::to_string(maxval) + " (only 255)", 0);
  const std::size_t start = h.raster_start();
  const std::size_t need = rows * cols * channels;
  if (bytes.size() < start + need) {
    throw FormatError("truncated raster: " + std::to_string(start + need - bytes.size()) + " bytes missing",
                      bytes.size());
  }
  DenseTensor img({rows, cols, channels});
  // The raster is row-major with interleaved channels.
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      for (std::size_t ch = 0; ch < channels; ++ch) {
        img[r + rows * (c + cols * ch)] = bytes[start + (r * cols + c) * channels + ch] / 255.0;
      }
    }
  }
  return img;
}

std::vector<std::uint8_t> encode_netpbm(const DenseTensor& image) {
  const Dims& d = image.dims();
  const std::size_t channels = d.size() == 2 ? 1 : d[2];
  if (d.size() < 2 || d.size() > 3 || (channels != 1 && channels != 3)) {
    throw DimensionError("NetPBM images must be rows x cols x {1,3}");
  }
  const std::size_t rows = d[0];
  const std::size_t cols = d[1];
  const std::string header =
      std::string(channels == 1 ? "P5" : "P6") + "\n" + std::to_string(cols) + " " + std::to_string(rows) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + rows * cols * channels);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      for (std::size_t ch = 0; ch < channels; ++ch) out.push_back(quantize(image[r + rows * (c + cols * ch)]));
    }
  }
  return out;
}

DenseTensor read_netpbm(const std::filesystem::path& path) { return decode_netpbm(read_file_bytes(path)); }

void write_netpbm(const std::filesystem::path& path, const DenseTensor& image) {
  write_file_bytes(path, encode_netpbm(image));
}

}  // namespace trc
