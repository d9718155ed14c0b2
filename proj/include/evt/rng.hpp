#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace evt {

// splitmix64 step; used to hash seed tuples into substream seeds.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Deterministic substream seed from (base, a, b, c); replication results are
// therefore independent of execution order and worker count.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b,
                                 std::uint64_t c) {
    std::uint64_t s = base;
    std::uint64_t out = splitmix64_next(s);
    s ^= a;
    out ^= splitmix64_next(s);
    s ^= b;
    out ^= splitmix64_next(s);
    s ^= c;
    out ^= splitmix64_next(s);
    return out;
}

// Uniform on (0,1]: top 53 bits of a 64-bit draw, shifted into (0,1].
inline double uniform_open0(std::mt19937_64& eng) {
    return static_cast<double>((eng() >> 11) + 1) * 0x1.0p-53;
}

// Standard exponential via inverse transform; floored at 1e-12 so that the
// quantile functions q (defined on y > 0) stay in domain at V = 1.
inline double exponential_draw(std::mt19937_64& eng) {
    const double e = -std::log(uniform_open0(eng));
    return e < 1e-12 ? 1e-12 : e;
}

} // namespace evt
