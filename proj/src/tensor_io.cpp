#include "trc/tensor_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>

#include "trc/error.hpp"

namespace trc {

namespace {

constexpr char kMagic[4] = {'T', 'R', 'T', '1'};
constexpr std::size_t kHeaderFixed = 5;

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_u64(std::span<const std::uint8_t> b, std::size_t at) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[at + static_cast<std::size_t>(i)]) << (8 * i);
  return v;
}

void require(std::span<const std::uint8_t> b, std::size_t at, std::size_t need, const char* what) {
  if (b.size() < at + need) {
    throw FormatError("truncated tensor file: " + std::string(what) + " needs " +
                          std::to_string(at + need - b.size()) + " more bytes",
                      b.size());
  }
}

}  // namespace

std::vector<std::uint8_t> encode_trt(const DenseTensor& t) {
  if (t.order() > 255) throw ArgumentError("tensor order exceeds the file format limit of 255");
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderFixed + 8 * t.order() + 8 * t.size());
  out.insert(out.end(), kMagic, kMagic + 4);
  out.push_back(static_cast<std::uint8_t>(t.order()));
  for (std::size_t d : t.dims()) put_u64(out, d);
  for (double v : t.values()) put_u64(out, std::bit_cast<std::uint64_t>(v));
  return out;
}

DenseTensor decode_trt(std::span<const std::uint8_t> b) {
  require(b, 0, kHeaderFixed, "header");
  if (std::memcmp(b.data(), kMagic, 4) != 0) throw FormatError("bad magic, expected TRT1", 0);
  const std::size_t order = b[4];
  if (order == 0) throw FormatError("tensor order must be at least 1", 4);
  require(b, kHeaderFixed, 8 * order, "dimension block");
  Dims dims(order);
  std::size_t count = 1;
  for (std::size_t i = 0; i < order; ++i) {
    const std::size_t at = kHeaderFixed + 8 * i;
    const std::uint64_t d = get_u64(b, at);
    if (d == 0) throw FormatError("zero dimension", at);
    if (d > std::numeric_limits<std::size_t>::max() / 8 / count) throw FormatError("dimension overflow", at);
    dims[i] = static_cast<std::size_t>(d);
    count *= dims[i];
  }
  const std::size_t data_at = kHeaderFixed + 8 * order;
  require(b, data_at, 8 * count, "value block");
  if (b.size() != data_at + 8 * count) {
    throw FormatError("trailing bytes after tensor data", data_at + 8 * count);
  }
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) values[i] = std::bit_cast<double>(get_u64(b, data_at + 8 * i));
  return DenseTensor(std::move(dims), std::move(values));
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read error on '" + path.string() + "'");
  return bytes;
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write error on '" + path.string() + "'");
}

void write_trt(const std::filesystem::path& path, const DenseTensor& t) {
  write_file_bytes(path, encode_trt(t));
}

DenseTensor read_trt(const std::filesystem::path& path) { return decode_trt(read_file_bytes(path)); }

}  // namespace trc
