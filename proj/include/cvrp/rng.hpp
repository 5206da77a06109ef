#pragma once

#include <cstdint>
#include <random>

namespace cvrp {

// All randomness flows from a single user seed. Stage and node seeds are
// derived with splitmix64 so trees and pipelines are reproducible without
// sharing engine state. Sampling avoids std::*_distribution (whose output
// is implementation-defined); with mt19937_64 this makes every draw
// bit-identical across platforms.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    return splitmix64(seed ^ splitmix64(tag));
}

// Index in [0, n). Modulo bias is irrelevant at desk scale and keeps the
// draw fully specified.
inline std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
    return static_cast<std::size_t>(rng() % n);
}

// Double in [0, 1) with 53 random bits.
inline double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
}

inline double uniform_range(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform_unit(rng);
}

}  // namespace cvrp
