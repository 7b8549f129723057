#include "isingflow/common.hpp"

#include <cmath>

namespace isingflow {

double normal01(std::mt19937_64& gen) {
    // Box-Muller, cosine branch only, so consumption per call is fixed.
    double u1 = uniform01(gen);
    double u2 = uniform01(gen);
    while (u1 <= 0.0) u1 = uniform01(gen);  // guard log(0)
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(mix(seed) ^ a) ^ b);
}

}  // namespace isingflow
