#pragma once

#include "isingflow/potential.hpp"

#include <vector>

namespace testutil {

using namespace isingflow;

inline IsingProblem canonical_s2() {
    return IsingProblem::from_dense((Mat(2, 2) << 0, 1, 1, 0).finished());
}

inline IsingProblem example_s3() {
    Mat s(3, 3);
    s << 0, 1, -2,
         1, 0, 3,
        -2, 3, 0;
    return IsingProblem::from_dense(s);
}

inline IsingProblem zero_problem(int n) { return IsingProblem::from_dense(Mat::Zero(n, n)); }

inline IsingProblem random_coupling(int n, std::uint64_t seed, double scale = 1.0) {
    std::mt19937_64 gen(seed);
    Mat s = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double v = scale * (2.0 * uniform01(gen) - 1.0);
            s(i, j) = v;
            s(j, i) = v;
        }
    return IsingProblem::from_dense(s);
}

// Independent O(2^n * n^2) oracle: re-evaluates every config from scratch.
inline OracleResult naive_oracle(const IsingProblem& problem) {
    const int n = problem.n();
    OracleResult result;
    result.evaluated_count = 1LL << n;
    double best = std::numeric_limits<double>::infinity();
    for (long long mask = 0; mask < (1LL << n); ++mask) {
        SpinConfig v(n);
        for (int i = 0; i < n; ++i) v[i] = (mask >> i) & 1 ? -1 : 1;
        const double e = energy(problem, v);
        if (e < best) {
            best = e;
            result.minimizers.clear();
        }
        if (e == best) result.minimizers.push_back(v);
    }
    result.min_energy = best;
    std::sort(result.minimizers.begin(), result.minimizers.end());
    return result;
}

// Central finite differences of a scalar function.
inline Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x) {
    Vec g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double h = 1e-5 * (1.0 + std::abs(x(i)));
        Vec xp = x, xm = x;
        xp(i) += h;
        xm(i) -= h;
        g(i) = (f(xp) - f(xm)) / (2.0 * h);
    }
    return g;
}

inline Mat fd_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x) {
    const Vec f0 = f(x);
    Mat j(f0.size(), x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double h = 1e-5 * (1.0 + std::abs(x(i)));
        Vec xp = x, xm = x;
        xp(i) += h;
        xm(i) -= h;
        j.col(i) = (f(xp) - f(xm)) / (2.0 * h);
    }
    return j;
}

}  // namespace testutil
