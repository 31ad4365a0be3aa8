// Deterministic seed derivation: every random quantity in the system flows
// from one session seed through named substreams via splitmix64 mixing.
#pragma once

#include <cstdint>
#include <random>

namespace marton {

// Substream identifiers.
inline constexpr uint64_t kStreamConstruction = 1;
inline constexpr uint64_t kStreamSharedRandomness = 2;
inline constexpr uint64_t kStreamChannelNoise = 3;
inline constexpr uint64_t kStreamMessageGen = 4;

inline uint64_t splitmix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline uint64_t mix_seed(uint64_t a, uint64_t b) {
    return splitmix64(splitmix64(a) ^ (0x9e3779b97f4a7c15ULL + b));
}

template <typename... Rest>
uint64_t mix_seed(uint64_t a, uint64_t b, Rest... rest) {
    return mix_seed(mix_seed(a, b), static_cast<uint64_t>(rest)...);
}

inline std::mt19937_64 make_rng(uint64_t seed) {
    return std::mt19937_64(splitmix64(seed));
}

}  // namespace marton
