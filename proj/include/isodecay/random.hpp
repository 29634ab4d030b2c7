#pragma once

#include <cstdint>
#include <random>

namespace isodecay {

/// Uniform double in [0, 1) from the top 53 bits of a mt19937_64 draw.
/// std::uniform_real_distribution is implementation-defined, this is not.
inline double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& gen, double lo, double hi) {
    return lo + (hi - lo) * uniform01(gen);
}

}  // namespace isodecay
