#pragma once

#include <cstdint>

// Seeded random streams with a fixed cross-platform algorithm (splitmix64),
// so that identical seeds give identical samples on every toolchain and the
// stream for the k-th draw can be opened independently of the first k-1.

namespace cbb {

struct SplitMix64 {
    uint64_t state;

    explicit SplitMix64(uint64_t seed) : state(seed) {}

    uint64_t next_u64() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Uniform in [0, n) without modulo bias.
    uint64_t next_below(uint64_t n) {
        const uint64_t limit = n * (UINT64_MAX / n);
        uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % n;
    }
};

// Decorrelated child stream, e.g. one per scan index.
inline SplitMix64 substream(uint64_t seed, uint64_t index) {
    SplitMix64 mix(seed ^ (0x632be59bd9b4e019ULL * (index + 1)));
    mix.next_u64();
    return mix;
}

}  // namespace cbb
