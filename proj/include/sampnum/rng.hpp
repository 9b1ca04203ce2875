#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace sampnum {

// Independent substream keyed by (seed, keys...). The key sequence fully
// determines the engine state, so streams do not depend on draw order.
inline std::mt19937_64 substream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
    std::seed_seq::result_type words[16];
    std::size_t n = 0;
    words[n++] = static_cast<std::uint32_t>(seed);
    words[n++] = static_cast<std::uint32_t>(seed >> 32);
    for (auto key : keys) {
        if (n + 2 > std::size(words)) break;
        words[n++] = static_cast<std::uint32_t>(key);
        words[n++] = static_cast<std::uint32_t>(key >> 32);
    }
    std::seed_seq seq(words, words + n);
    return std::mt19937_64(seq);
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

} // namespace sampnum
