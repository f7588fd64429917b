#ifndef SFCM_SRC_RANDOM_HPP
#define SFCM_SRC_RANDOM_HPP

#include <cstdint>
#include <random>

namespace sfcm::detail {

using Rng = std::mt19937_64;

// Uniform in [0, 1) from the top 53 bits.
inline double unit_uniform(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace sfcm::detail

#endif  // SFCM_SRC_RANDOM_HPP
