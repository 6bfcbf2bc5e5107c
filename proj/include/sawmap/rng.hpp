#pragma once

#include <cstdint>

namespace sawmap {

// splitmix64 (Vigna). The standard library's distributions are not pinned to
// an algorithm, so seeded runs replayed through <random> may differ between
// standard libraries; this generator produces the same stream everywhere.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1), 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  private:
    std::uint64_t state_;
};

/// splitmix64 finalizer, used to spread raw seeds/stream ids.
inline std::uint64_t mix_bits(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ull;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBull;
    x ^= x >> 31;
    return x;
}

/// Independent stream derived from (seed, stream_id). Streams with distinct
/// ids never share internal state, so work items can draw concurrently.
inline SplitMix64 substream(std::uint64_t seed, std::uint64_t stream_id) {
    return SplitMix64(mix_bits(seed + 0x9E3779B97F4A7C15ull * (stream_id + 1)));
}

}  // namespace sawmap
