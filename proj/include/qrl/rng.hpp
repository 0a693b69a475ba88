#pragma once

#include <cstdint>
#include <stdexcept>
#include <string_view>

namespace qrl {

// 64-bit FNV-1a. Used for stream derivation and for run-file content hashes.
inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic generator owned by this project so that identical seeds give
// identical streams on every platform. std::uniform_real_distribution and
// friends are implementation-defined, which would break byte-identical runs.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return splitmix64_next(state_); }

    // uniform double in [0, 1), 53 usable bits
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform integer in [0, n), unbiased via rejection
    int uniform_int(int n) {
        if (n <= 0) throw std::invalid_argument("uniform_int: n must be positive");
        const std::uint64_t un = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % un;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return static_cast<int>(x % un);
    }

private:
    std::uint64_t state_;
};

// Derives an independent named substream from a master seed. The stream layout
// of a training run is part of its reproducibility contract: every consumer
// (env resets, epsilon draws, replay sampling, shot sampling, net init) pulls
// from its own stream so adding draws in one place cannot shift another.
inline Rng derive_stream(std::uint64_t master_seed, std::string_view name, std::uint64_t index = 0) {
    std::uint64_t s = master_seed ^ fnv1a64(name);
    s ^= 0x9e3779b97f4a7c15ULL * (index + 1);
    // one warm-up step decorrelates nearby master seeds
    splitmix64_next(s);
    return Rng(s);
}

} // namespace qrl
