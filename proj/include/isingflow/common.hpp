#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace isingflow {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DimensionError : Error {
    using Error::Error;
};

/// Problem-file or input validation failure.
struct ValidationError : Error {
    using Error::Error;
};

/// Integration produced a non-finite or out-of-range state.
struct BlowUpError : Error {
    double time;
    BlowUpError(const std::string& msg, double t) : Error(msg), time(t) {}
};

/// classify() was handed a point that is not critical.
struct NotCriticalError : Error {
    double grad_norm;
    NotCriticalError(const std::string& msg, double g) : Error(msg), grad_norm(g) {}
};

// ---------------------------------------------------------------------------
// Deterministic random helpers.
//
// std::uniform_real_distribution and friends are implementation-defined, so
// seeded outputs would not be stable across standard libraries.  These
// helpers fix the exact bit stream.

inline double uniform01(std::mt19937_64& gen) {
    // 53 random bits -> [0, 1)
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline double uniform_range(std::mt19937_64& gen, double lo, double hi) {
    return lo + (hi - lo) * uniform01(gen);
}

/// Standard normal via Box-Muller; consumes exactly two draws.
double normal01(std::mt19937_64& gen);

/// splitmix64 mix of a seed with stream indices, for derived RNG streams.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

}  // namespace isingflow
