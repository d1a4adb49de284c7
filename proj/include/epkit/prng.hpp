#pragma once

#include <cstdint>

namespace epkit {

// splitmix64 finalizer. Used both as a stream mixer and as the per-candidate
// seed derivation for parallel search (stream k of seed s starts at
// mix64(s ^ mix64(k))), so results do not depend on thread count.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform draw from {-bound, ..., bound} via modular reduction.
    long next_int(long bound) {
        const std::uint64_t span = 2 * static_cast<std::uint64_t>(bound) + 1;
        return static_cast<long>(next() % span) - bound;
    }

    // Uniform in [0, 1).
    double next_unit() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
    return mix64(seed ^ mix64(index));
}

} // namespace epkit
