#pragma once

#include <cstdint>
#include <random>

namespace dragen {

/// SplitMix64 finalizer; used to derive independent seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// std::mt19937_64 with fixed, implementation-independent conversions.
///
/// Sample i of a run seeded with s uses the stream seeded with
/// splitmix64(splitmix64(s) ^ i), so results do not depend on how samples
/// are spread across threads.
class Rng {
  __extension__ using u128 = unsigned __int128;

 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng for_stream(std::uint64_t seed, std::uint64_t stream) {
    return Rng(splitmix64(splitmix64(seed) ^ stream));
  }

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 bits of precision.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in [0, n), unbiased (Lemire's multiply-and-reject). n > 0.
  /// Bounds up to 2^16 consume 16-bit chunks of an engine output, low
  /// chunk first; larger bounds consume a whole output.
  std::uint64_t below(std::uint64_t n) {
    if (n <= kChunkRange) return below_small(static_cast<std::uint32_t>(n));
    u128 m = static_cast<u128>(engine_()) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        m = static_cast<u128>(engine_()) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Uniform in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

 private:
  static constexpr std::uint32_t kChunkRange = 1U << 16;

  std::uint32_t next_chunk() {
    if (chunks_left_ == 0) {
      chunks_ = engine_();
      chunks_left_ = 4;
    }
    const auto chunk = static_cast<std::uint32_t>(chunks_ & 0xFFFF);
    chunks_ >>= 16;
    --chunks_left_;
    return chunk;
  }

  std::uint32_t below_small(std::uint32_t n) {
    std::uint32_t m = next_chunk() * n;
    if ((m & 0xFFFF) < n) {
      const std::uint32_t threshold = (kChunkRange - n) % n;
      while ((m & 0xFFFF) < threshold) m = next_chunk() * n;
    }
    return m >> 16;
  }

  std::mt19937_64 engine_;
  std::uint64_t chunks_ = 0;
  unsigned chunks_left_ = 0;
};

}  // namespace dragen
