#pragma once

#include <cstdint>

namespace lad {

// SplitMix64: counter-based 64-bit generator (output = finalizer of a Weyl
// sequence). Streams derived from (seed, stream id) are independent and make
// results invariant to evaluation order across repetitions.
class SplitMix64 {
  public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    static uint64_t mix(uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

    static SplitMix64 stream(uint64_t seed, uint64_t stream_id) {
        return SplitMix64(mix(seed + 0x9E3779B97F4A7C15ULL * (stream_id + 1)));
    }

    uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    // uniform in [0, 1), 53-bit resolution
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  private:
    uint64_t state_;
};

}  // namespace lad
