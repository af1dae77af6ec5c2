#pragma once

#include <cstdint>
#include <random>

namespace logperm {

/// splitmix64 step; used only to spread seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed of substream i of a master seed. Streams are split by counter:
/// stream i is fully determined by (seed, i), independent of how many
/// streams run or in which order.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t i) {
    return splitmix64(seed ^ splitmix64(i + 1));
}

/// mt19937_64 with uniforms built from the raw 64-bit output. Both the
/// generator and the bit-to-double conversion are pinned, so identical
/// seeds give identical doubles on every conforming platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double u01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 gen_;
};

}  // namespace logperm
