#pragma once

#include <cstdint>
#include <random>

namespace eqnet {

// splitmix64; used to derive independent seeds from (master, stream indices).
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic per-stream generator: the same (master, a, b, c) always
// yields the same stream, independent of how work is split over threads.
inline std::mt19937_64 make_stream_rng(std::uint64_t master, std::uint64_t a,
                                       std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t s = master;
    std::uint64_t h = splitmix64(s);
    s ^= a * 0x9e3779b97f4a7c15ULL;
    h ^= splitmix64(s);
    s ^= b * 0xc2b2ae3d27d4eb4fULL;
    h ^= splitmix64(s);
    s ^= c * 0x165667b19e3779f9ULL;
    h ^= splitmix64(s);
    return std::mt19937_64(h);
}

}  // namespace eqnet
