#pragma once
#include <cmath>
#include <cstdint>

namespace uavsec {

// Counter-based generator: draw i of a stream is a pure function of
// (seed, stream, i), so results are reproducible per seed and sample ranges
// can be split across workers without changing any value.

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Independent child seed for a named substream (sweep point, slot index, ...).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return mix64(seed ^ mix64(stream + 0x632BE59BD9B4E019ULL));
}

/// i-th uniform draw in [0, 1) of the stream identified by seed.
inline double uniform01_at(std::uint64_t seed, std::uint64_t i) {
    return static_cast<double>(mix64(seed + i * 0x9E3779B97F4A7C15ULL) >> 11) * 0x1.0p-53;
}

/// i-th unit-mean exponential draw, via inverse CDF -ln(1 - u).
inline double exponential_at(std::uint64_t seed, std::uint64_t i) {
    return -std::log1p(-uniform01_at(seed, i));
}

} // namespace uavsec
