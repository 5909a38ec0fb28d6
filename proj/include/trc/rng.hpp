#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace trc {

/// 64-bit FNV-1a hash, used to turn stream names into keys.
std::uint64_t fnv1a(std::string_view text) noexcept;

/**
 * Counter-based random stream (Philox-4x32-10).
 *
 * A stream is identified by (seed, name). Its output is a pure function of
 * that key and a 64-bit counter, so two streams with the same key produce the
 * same sequence on every platform, and differently named streams are
 * independent. `split` derives a child stream without touching the parent's
 * counter.
 */
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::string_view name);

  std::uint64_t next_u64();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound);
  /// Standard normal via Box-Muller (two uniforms per variate).
  double normal();

  RngStream split(std::string_view name) const;

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  RngStream(std::uint64_t key, std::uint64_t stream_id, int);

  std::array<std::uint32_t, 4> block(std::uint64_t ctr) const noexcept;

  std::uint64_t key_;
  std::uint64_t stream_id_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int buffered_ = 0;  // 32-bit words left in buffer_, consumed in pairs
};

}  // namespace trc
