#include "isingflow/ising.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

namespace isingflow {

IsingProblem IsingProblem::from_dense(const Mat& coupling) {
    if (coupling.rows() != coupling.cols() || coupling.rows() < 1)
        throw ValidationError("coupling matrix must be square with n >= 1");
    const int n = static_cast<int>(coupling.rows());
    for (int i = 0; i < n; ++i) {
        if (coupling(i, i) != 0.0) {
            std::ostringstream os;
            os << "coupling diagonal must be zero, got S[" << i << "][" << i << "] = "
               << coupling(i, i);
            throw ValidationError(os.str());
        }
        for (int j = 0; j < n; ++j) {
            if (!std::isfinite(coupling(i, j)))
                throw ValidationError("coupling entries must be finite");
            if (coupling(i, j) != coupling(j, i)) {
                std::ostringstream os;
                os << "coupling matrix must be symmetric, S[" << i << "][" << j
                   << "] != S[" << j << "][" << i << "]";
                throw ValidationError(os.str());
            }
        }
    }
    return IsingProblem(coupling);
}

IsingProblem IsingProblem::from_edges(int n, const std::vector<std::tuple<int, int, double>>& edges) {
    if (n < 1) throw ValidationError("n must be >= 1");
    Mat s = Mat::Zero(n, n);
    std::vector<std::pair<int, int>> seen;
    for (const auto& [i, j, w] : edges) {
        if (i < 0 || i >= n || j < 0 || j >= n) {
            std::ostringstream os;
            os << "edge (" << i << "," << j << ") out of range for n = " << n;
            throw ValidationError(os.str());
        }
        if (i == j)
            throw ValidationError("self-coupling edges are not allowed");
        const std::pair<int, int> key = std::minmax(i, j);
        if (std::find(seen.begin(), seen.end(), key) != seen.end()) {
            std::ostringstream os;
            os << "duplicate edge (" << key.first << "," << key.second << ")";
            throw ValidationError(os.str());
        }
        seen.push_back(key);
        if (!std::isfinite(w)) throw ValidationError("edge weight must be finite");
        s(i, j) = w;
        s(j, i) = w;
    }
    return IsingProblem(std::move(s));
}

double IsingProblem::spectral_radius() const {
    Eigen::SelfAdjointEigenSolver<Mat> es(s_, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

double IsingProblem::max_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Mat> es(s_, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(s_.rows() - 1);
}

double IsingProblem::abs_coupling_sum() const {
    double total = 0.0;
    for (int i = 0; i < s_.rows(); ++i)
        for (int j = i + 1; j < s_.cols(); ++j) total += std::abs(s_(i, j));
    return total;
}

double energy(const IsingProblem& problem, const SpinConfig& v) {
    const int n = problem.n();
    if (static_cast<int>(v.size()) != n)
        throw DimensionError("spin config length does not match problem dimension");
    double quad = 0.0;
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) row += problem.coupling(i, j) * v[j];
        quad += v[i] * row;
    }
    return -0.5 * quad;
}

namespace {

// Config after m Gray steps from the all-(+1) state: spin i is flipped iff
// bit i of m ^ (m >> 1) is set.
SpinConfig config_at(std::uint64_t m, int n) {
    const std::uint64_t g = m ^ (m >> 1);
    SpinConfig v(n, 1);
    for (int i = 0; i < n; ++i)
        if ((g >> i) & 1ULL) v[i] = -1;
    return v;
}

}  // namespace

OracleResult brute_force(const IsingProblem& problem, int cap) {
    const int n = problem.n();
    if (n > cap) {
        std::ostringstream os;
        os << "brute_force: n = " << n << " exceeds the oracle cap of " << cap
           << " configurations (2^n enumeration)";
        throw Error(os.str());
    }

    const std::uint64_t total = 1ULL << n;
    const Mat& s = problem.coupling();

    // Incremental walk: flipping spin k changes E by 2 v_k (S v)_k.  The
    // running sums are re-anchored periodically and candidates within a
    // slack of the running minimum are re-evaluated exactly afterwards, so
    // the reported minimum and minimizers are exact.
    SpinConfig v(n, 1);
    Vec field = s * Vec::Ones(n);
    double e = energy(problem, v);

    double scale = 1.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(s(i, j)));
    const double slack = 1e-9 * scale * n;

    double min_e = e;
    std::vector<std::uint64_t> candidates{0};

    for (std::uint64_t m = 1; m < total; ++m) {
        const int k = std::countr_zero(m);
        e += 2.0 * v[k] * field(k);
        v[k] = -v[k];
        for (int j = 0; j < n; ++j) field(j) += 2.0 * v[k] * s(j, k);

        if ((m & 0xFFFFULL) == 0) {  // re-anchor against drift
            for (int j = 0; j < n; ++j) {
                double row = 0.0;
                for (int l = 0; l < n; ++l) row += s(j, l) * v[l];
                field(j) = row;
            }
            e = energy(problem, v);
        }

        if (e < min_e - slack) {
            min_e = e;
            candidates.clear();
            candidates.push_back(m);
        } else if (e <= min_e + slack) {
            candidates.push_back(m);
        }
    }

    // Exact pass over the candidate set.
    OracleResult result;
    result.evaluated_count = static_cast<std::int64_t>(total);
    double exact_min = std::numeric_limits<double>::infinity();
    std::vector<std::pair<double, SpinConfig>> evaluated;
    evaluated.reserve(candidates.size());
    for (std::uint64_t m : candidates) {
        SpinConfig cfg = config_at(m, n);
        double ce = energy(problem, cfg);
        exact_min = std::min(exact_min, ce);
        evaluated.emplace_back(ce, std::move(cfg));
    }
    result.min_energy = exact_min;
    for (auto& [ce, cfg] : evaluated)
        if (ce == exact_min) result.minimizers.push_back(std::move(cfg));
    std::sort(result.minimizers.begin(), result.minimizers.end());
    return result;
}

SignVector sign_vector(const Vec& x) {
    SignVector s(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x(i))) throw ValidationError("sign_vector: non-finite input");
        s[i] = (x(i) > 0.0) - (x(i) < 0.0);
    }
    return s;
}

}  // namespace isingflow
