#pragma once

#include <cstdint>

// Counter-based generator (Philox2x64, 10 rounds). Every uniform is a pure
// function of (seed, stream, index), so parallel path loops can draw their
// numbers in any order and still reproduce bit-identical results. Streams are
// assigned by the callers: one stream per variable slot, with weight streams
// offset by kWeightStreamBase so claim and weight draws never collide.

namespace ht2d {

inline constexpr std::uint64_t kWeightStreamBase = 1ull << 32;

namespace detail {

inline void philox2x64_round(std::uint64_t& x0, std::uint64_t& x1, std::uint64_t k) {
    constexpr std::uint64_t M = 0xD2B74407B1CE6E93ull;
    const unsigned __int128 prod = static_cast<unsigned __int128>(M) * x0;
    const std::uint64_t hi = static_cast<std::uint64_t>(prod >> 64);
    const std::uint64_t lo = static_cast<std::uint64_t>(prod);
    x0 = hi ^ k ^ x1;
    x1 = lo;
}

} // namespace detail

// One 64-bit word at position (stream, index) of the keyed sequence.
inline std::uint64_t philox_word(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    constexpr std::uint64_t W = 0x9E3779B97F4A7C15ull; // Weyl key increment
    std::uint64_t x0 = index, x1 = stream, k = seed;
    for (int r = 0; r < 10; ++r) {
        detail::philox2x64_round(x0, x1, k);
        k += W;
    }
    return x0;
}

// Uniform draw in the open interval (0,1); safe to feed into quantile
// functions that reject the endpoints.
inline double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    const std::uint64_t w = philox_word(seed, stream, index);
    return (static_cast<double>(w >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

} // namespace ht2d
