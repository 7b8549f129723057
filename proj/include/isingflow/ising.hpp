#pragma once

#include "isingflow/common.hpp"

#include <cstdint>
#include <vector>

namespace isingflow {

/// A spin assignment, every entry -1 or +1.
using SpinConfig = std::vector<int>;

/// Componentwise signum of a real vector, entries in {-1, 0, +1}.
using SignVector = std::vector<int>;

/// Ising instance: minimize E(v) = -1/2 v^T S v over v in {-1,+1}^n.
///
/// S is symmetric with zero diagonal; both properties are enforced at
/// construction.  Instances are immutable after construction.
class IsingProblem {
public:
    /// Build from a dense coupling matrix (validated).
    static IsingProblem from_dense(const Mat& coupling);

    /// Build from an undirected edge list (i, j, s), each edge given once.
    static IsingProblem from_edges(int n, const std::vector<std::tuple<int, int, double>>& edges);

    int n() const { return static_cast<int>(s_.rows()); }
    const Mat& coupling() const { return s_; }
    double coupling(int i, int j) const { return s_(i, j); }

    /// Largest |eigenvalue| of S.
    double spectral_radius() const;

    /// max eigenvalue of S (lambda_max, used by DOPO/KPO pump thresholds).
    double max_eigenvalue() const;

    /// Sum of |s_ij| over i<j; bounds |E(v)| for every config.
    double abs_coupling_sum() const;

    bool operator==(const IsingProblem& other) const { return s_ == other.s_; }

private:
    explicit IsingProblem(Mat s) : s_(std::move(s)) {}
    Mat s_;
};

struct OracleResult {
    double min_energy = 0.0;
    std::vector<SpinConfig> minimizers;  // all global minimizers, sorted lexicographically
    std::int64_t evaluated_count = 0;
};

/// Ising energy E(v) = -1/2 v^T S v, accumulated in a fixed row-major order
/// so results are bit-reproducible.
double energy(const IsingProblem& problem, const SpinConfig& v);

/// Exact minimum by exhaustive enumeration with Gray-code incremental
/// updates.  Returns the minimum energy and every config attaining it.
/// Throws if n exceeds `cap` (default 24).
OracleResult brute_force(const IsingProblem& problem, int cap = 24);

/// Componentwise signum; exact zero maps to 0.  Input must be finite.
SignVector sign_vector(const Vec& x);

inline bool has_zero_sign(const SignVector& s) {
    for (int v : s)
        if (v == 0) return true;
    return false;
}

}  // namespace isingflow
