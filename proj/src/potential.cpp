#include "isingflow/potential.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_map>

namespace isingflow {

PotentialParams::PotentialParams(double a, double b, IsingProblem p)
    : alpha(a), beta(b), problem(std::move(p)) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ValidationError("alpha must be positive and finite");
    if (!(beta > 0.0) || !std::isfinite(beta)) throw ValidationError("beta must be positive and finite");
}

const char* to_string(CpClass c) {
    switch (c) {
        case CpClass::Minimum: return "minimum";
        case CpClass::Saddle: return "saddle";
        case CpClass::Maximum: return "maximum";
        case CpClass::Degenerate: return "degenerate";
    }
    return "?";
}

std::vector<const CriticalPoint*> LandscapeSummary::minima() const {
    std::vector<const CriticalPoint*> out;
    for (const auto& cp : critical_points)
        if (cp.cls == CpClass::Minimum) out.push_back(&cp);
    return out;
}

double newton_tolerance(double alpha) { return 1e-10 * (1.0 + alpha * alpha * alpha); }
double dedup_tolerance(double alpha) { return 1e-6 * (1.0 + alpha); }
double null_tolerance(double alpha) { return 1e-8 * (1.0 + alpha * alpha); }
double value_tie_tolerance(double alpha) { return 1e-9 * (1.0 + alpha * alpha * alpha * alpha); }

double eval_U(const IsingProblem& problem, double beta, double alpha, const Vec& x) {
    const int n = problem.n();
    if (x.size() != n) throw DimensionError("eval_U: dimension mismatch");
    double quartic = 0.0, norm2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double xi = x(i);
        quartic += 0.25 * xi * xi * xi * xi;
        norm2 += xi * xi;
    }
    double coupling = 0.0;
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) row += problem.coupling(i, j) * x(j);
        coupling += x(i) * row;
    }
    return quartic + 0.5 * (beta - alpha * alpha) * norm2 - 0.5 * coupling;
}

Vec grad_U(const IsingProblem& problem, double beta, double alpha, const Vec& x) {
    const int n = problem.n();
    if (x.size() != n) throw DimensionError("grad_U: dimension mismatch");
    Vec g(n);
    const double c = beta - alpha * alpha;
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) row += problem.coupling(i, j) * x(j);
        g(i) = x(i) * x(i) * x(i) + c * x(i) - row;
    }
    return g;
}

Mat hess_U(const IsingProblem& problem, double beta, double alpha, const Vec& x) {
    const int n = problem.n();
    if (x.size() != n) throw DimensionError("hess_U: dimension mismatch");
    Mat h = -problem.coupling();
    const double c = beta - alpha * alpha;
    for (int i = 0; i < n; ++i) h(i, i) += 3.0 * x(i) * x(i) + c;
    return h;
}

CriticalPoint classify(const PotentialParams& params, const Vec& x) {
    const double gnorm = grad_U(params, x).norm();
    const double tol = newton_tolerance(params.alpha);
    if (gnorm > tol) {
        std::ostringstream os;
        os << "classify: point is not critical, |grad U| = " << gnorm << " > " << tol;
        throw NotCriticalError(os.str(), gnorm);
    }

    Eigen::SelfAdjointEigenSolver<Mat> es(hess_U(params, x), Eigen::EigenvaluesOnly);
    const Vec& ev = es.eigenvalues();
    const double ntol = null_tolerance(params.alpha);
    const int n = params.problem.n();

    CriticalPoint cp;
    cp.x = x;
    cp.value = eval_U(params, x);
    cp.grad_norm = gnorm;
    cp.seed = SignVector(n, 0);
    for (int i = 0; i < n; ++i) {
        if (ev(i) < -ntol)
            ++cp.morse_index;
        else if (std::abs(ev(i)) <= ntol)
            ++cp.nullity;
    }
    if (cp.nullity > 0)
        cp.cls = CpClass::Degenerate;
    else if (cp.morse_index == 0)
        cp.cls = CpClass::Minimum;
    else if (cp.morse_index == n)
        cp.cls = CpClass::Maximum;
    else
        cp.cls = CpClass::Saddle;
    return cp;
}

std::optional<Vec> newton_solve(const std::function<Vec(const Vec&)>& grad,
                                const std::function<Mat(const Vec&)>& hess, const Vec& x0,
                                double tol, const NewtonOptions& opts) {
    Vec x = x0;
    Vec g = grad(x);
    double merit = g.squaredNorm();
    double mu = 0.0;  // Levenberg regularization, grown when a step stalls
    double window_merit = merit;

    for (int it = 0; it < opts.max_iterations; ++it) {
        if (g.norm() <= tol) return x;
        if (opts.stall_window > 0 && it > 0 && it % opts.stall_window == 0) {
            if (merit > 0.25 * window_merit) return std::nullopt;
            window_merit = merit;
        }

        Mat h = hess(x);
        if (mu > 0.0) h.diagonal().array() += mu;
        Vec step = h.partialPivLu().solve(-g);
        if (!step.allFinite()) {
            mu = (mu == 0.0) ? 1e-8 * (1.0 + h.diagonal().cwiseAbs().maxCoeff()) : mu * 10.0;
            continue;
        }

        auto backtrack = [&](const Vec& dir) {
            double t = 1.0;
            for (int bt = 0; bt < opts.max_backtracks; ++bt) {
                Vec xt = x + t * dir;
                Vec gt = grad(xt);
                double mt = gt.squaredNorm();
                if (std::isfinite(mt) && mt <= merit * (1.0 - 1e-4 * t)) {
                    x = std::move(xt);
                    g = std::move(gt);
                    merit = mt;
                    return true;
                }
                t *= 0.5;
            }
            return false;
        };

        bool accepted = backtrack(step);
        if (!accepted) {
            // steepest descent on |grad|^2: its gradient is H g
            Vec descent = -(hess(x) * g);
            const double dnorm = descent.norm();
            if (dnorm > 0.0) accepted = backtrack(descent * (g.norm() / dnorm));
        }
        if (accepted) {
            mu *= 0.25;
            if (mu < 1e-14) mu = 0.0;
        } else {
            if (mu > 1e8) return std::nullopt;
            mu = (mu == 0.0) ? 1e-8 : mu * 100.0;
        }
    }
    return g.norm() <= tol ? std::optional<Vec>(x) : std::nullopt;
}

std::optional<Vec> newton_critical_point(const PotentialParams& params, const Vec& x0,
                                         const NewtonOptions& opts) {
    const IsingProblem& pb = params.problem;
    const double beta = params.beta, alpha = params.alpha;
    return newton_solve([&](const Vec& x) { return grad_U(pb, beta, alpha, x); },
                        [&](const Vec& x) { return hess_U(pb, beta, alpha, x); }, x0,
                        opts.tol_scale * (1.0 + alpha * alpha * alpha), opts);
}

namespace {

// Seeds iterate in a fixed odometer order over {-1,0,1}^n (least-significant
// component first), so dedup winners and collision records are deterministic.
SignVector seed_at(long long index, int n) {
    SignVector s(n);
    for (int i = 0; i < n; ++i) {
        s[i] = static_cast<int>(index % 3) - 1;
        index /= 3;
    }
    return s;
}

// Grid hash over candidate points.  Cells are much wider than the dedup
// tolerance, so a near-duplicate lies either in the query's cell or in an
// adjacent one along coordinates that sit within tol of a cell boundary;
// only that (almost always singleton) cell set is probed.
class DedupIndex {
public:
    DedupIndex(double tol, int n) : tol_(tol), cell_(64.0 * tol), n_(n) {}

    // Returns the index of a stored point within tol, or -1.
    int find(const std::vector<Vec>& points, const Vec& q) const {
        std::vector<std::pair<long long, long long>> ranges(n_);
        for (int i = 0; i < n_; ++i) {
            const long long c = cell_of(q(i));
            long long lo = c, hi = c;
            if (q(i) - c * cell_ < tol_) --lo;
            if ((c + 1) * cell_ - q(i) < tol_) ++hi;
            ranges[i] = {lo, hi};
        }
        std::vector<long long> digits(n_);
        for (int i = 0; i < n_; ++i) digits[i] = ranges[i].first;
        while (true) {
            auto it = buckets_.find(hash_cells(digits));
            if (it != buckets_.end()) {
                for (int idx : it->second)
                    if ((points[idx] - q).norm() < tol_) return idx;
            }
            int i = 0;
            for (; i < n_; ++i) {
                if (digits[i] < ranges[i].second) {
                    ++digits[i];
                    break;
                }
                digits[i] = ranges[i].first;
            }
            if (i == n_) break;
        }
        return -1;
    }

    void insert(const Vec& q, int index) {
        std::vector<long long> digits(n_);
        for (int i = 0; i < n_; ++i) digits[i] = cell_of(q(i));
        buckets_[hash_cells(digits)].push_back(index);
    }

private:
    long long cell_of(double v) const { return static_cast<long long>(std::floor(v / cell_)); }

    static std::uint64_t hash_cells(const std::vector<long long>& digits) {
        std::uint64_t h = 1469598103934665603ULL;
        for (long long d : digits) {
            h ^= static_cast<std::uint64_t>(d);
            h *= 1099511628211ULL;
        }
        return h;
    }

    double tol_;
    double cell_;
    int n_;
    std::unordered_map<std::uint64_t, std::vector<int>> buckets_;
};

}  // namespace

LandscapeSummary find_critical_points(const PotentialParams& params, const LandscapeOptions& opts) {
    const int n = params.problem.n();
    if (n > opts.seed_cap) {
        std::ostringstream os;
        os << "find_critical_points: n = " << n << " exceeds the 3^n seed cap (" << opts.seed_cap << ")";
        throw Error(os.str());
    }
    long long total = 1;
    for (int i = 0; i < n; ++i) total *= 3;

    LandscapeSummary summary;
    const double dtol = dedup_tolerance(params.alpha);
    DedupIndex index(dtol, n);
    std::vector<Vec> accepted;

    for (long long idx = 0; idx < total; ++idx) {
        SignVector seed = seed_at(idx, n);
        Vec x0(n);
        for (int i = 0; i < n; ++i) x0(i) = params.alpha * seed[i];

        auto converged = newton_critical_point(params, x0, opts.newton);
        if (!converged) {
            summary.failed_seeds.push_back(std::move(seed));
            if (opts.abort_on_incomplete) {
                summary.aborted_incomplete = true;
                break;
            }
            continue;
        }
        if (index.find(accepted, *converged) >= 0) {
            summary.collided_seeds.push_back(std::move(seed));
            if (opts.abort_on_incomplete) {
                summary.aborted_incomplete = true;
                break;
            }
            continue;
        }
        index.insert(*converged, static_cast<int>(accepted.size()));
        accepted.push_back(*converged);
        CriticalPoint cp = classify(params, *converged);
        cp.seed = std::move(seed);
        summary.critical_points.push_back(std::move(cp));
    }

    for (const auto& cp : summary.critical_points) {
        ++summary.count_by_class[cp.cls];
        if (cp.cls == CpClass::Saddle)
            summary.U_s = summary.U_s ? std::min(*summary.U_s, cp.value) : cp.value;
        if (cp.cls == CpClass::Minimum)
            summary.U_M = summary.U_M ? std::max(*summary.U_M, cp.value) : cp.value;
    }
    return summary;
}

std::vector<CriticalPoint> global_minima(const LandscapeSummary& summary, double alpha) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& cp : summary.critical_points)
        if (cp.cls == CpClass::Minimum) best = std::min(best, cp.value);
    std::vector<CriticalPoint> out;
    const double tol = value_tie_tolerance(alpha);
    for (const auto& cp : summary.critical_points)
        if (cp.cls == CpClass::Minimum && cp.value <= best + tol) out.push_back(cp);
    return out;
}

CalibrationResult calibrate_alpha(const IsingProblem& problem, double beta,
                                  const CalibrationOptions& opts) {
    const int n = problem.n();
    const double heuristic = std::sqrt(beta + 2.0 * (1.0 + problem.spectral_radius()));

    CalibrationResult result;
    if (n > opts.enum_cap) {
        result.alpha = heuristic;
        result.verified = false;
        return result;
    }

    long long expected_total = 1, expected_minima = 1;
    for (int i = 0; i < n; ++i) {
        expected_total *= 3;
        expected_minima *= 2;
    }
    std::optional<OracleResult> oracle;
    if (n <= opts.oracle_cap) oracle = brute_force(problem, opts.oracle_cap);

    for (double alpha = heuristic; alpha <= opts.alpha_max; alpha *= 2.0) {
        ++result.candidates_tried;
        PotentialParams params(alpha, beta, problem);
        LandscapeOptions lo;
        lo.seed_cap = opts.enum_cap;
        lo.abort_on_incomplete = true;
        LandscapeSummary summary = find_critical_points(params, lo);

        if (summary.aborted_incomplete ||
            static_cast<long long>(summary.critical_points.size()) != expected_total)
            continue;

        std::set<SignVector> sign_patterns;
        long long minima_count = 0;
        bool zero_sign = false;
        for (const auto& cp : summary.critical_points) {
            if (cp.cls != CpClass::Minimum) continue;
            ++minima_count;
            SignVector sv = sign_vector(cp.x);
            if (has_zero_sign(sv)) zero_sign = true;
            sign_patterns.insert(std::move(sv));
        }
        if (zero_sign || minima_count != expected_minima ||
            static_cast<long long>(sign_patterns.size()) != expected_minima)
            continue;

        if (oracle) {
            bool all_optimal = true;
            for (const auto& cp : global_minima(summary, alpha)) {
                SignVector sv = sign_vector(cp.x);
                SpinConfig cfg(sv.begin(), sv.end());
                if (!std::binary_search(oracle->minimizers.begin(), oracle->minimizers.end(), cfg)) {
                    all_optimal = false;
                    break;
                }
            }
            if (!all_optimal) continue;
        }

        // (d) sorting minima by U and mapping through the signum must give a
        // non-decreasing spin-energy sequence; predicates (a)-(c) alone stop
        // below the level separation this needs.
        {
            std::vector<const CriticalPoint*> mins = summary.minima();
            std::sort(mins.begin(), mins.end(), [](const CriticalPoint* a, const CriticalPoint* b) {
                return a->value < b->value;
            });
            bool ordered = true;
            double prev = -std::numeric_limits<double>::infinity();
            for (const auto* cp : mins) {
                SignVector sv = sign_vector(cp->x);
                const double e = energy(problem, SpinConfig(sv.begin(), sv.end()));
                if (e < prev) {
                    ordered = false;
                    break;
                }
                prev = e;
            }
            if (!ordered) continue;
        }

        // (e) lowest saddle above highest minimum, so the transit floor
        // separates the wells at the accepted alpha.
        if (summary.U_s && summary.U_M && !(*summary.U_s > *summary.U_M)) continue;

        result.alpha = alpha;
        result.verified = true;
        return result;
    }
    std::ostringstream os;
    os << "calibrate_alpha: no alpha <= " << opts.alpha_max
       << " satisfied the landscape predicates; the instance may be ill-scaled";
    throw Error(os.str());
}

R2ClosedForm r2_closed_form(double alpha, double beta) {
    if (!(alpha > 0.0) || !(beta > 0.0)) throw ValidationError("alpha and beta must be positive");
    const double a2 = alpha * alpha;
    for (double boundary : {beta - 1.0, beta + 1.0, beta + 2.0}) {
        if (a2 == boundary) {
            std::ostringstream os;
            os << "r2_closed_form: alpha^2 = " << a2
               << " sits exactly on a bifurcation value; the critical set is degenerate there";
            throw ValidationError(os.str());
        }
    }

    IsingProblem canonical = IsingProblem::from_dense((Mat(2, 2) << 0, 1, 1, 0).finished());
    auto value_at = [&](double x1, double x2) {
        return eval_U(canonical, beta, alpha, (Vec(2) << x1, x2).finished());
    };

    R2ClosedForm form;
    form.c0 = value_at(0.0, 0.0);
    const double A = a2 - beta;

    if (a2 < beta - 1.0) {
        form.regime = R2Regime::OriginOnly;
        form.points.push_back({{0.0, 0.0}, CpClass::Minimum});
        return form;
    }

    const double l1 = std::sqrt(a2 - beta + 1.0);
    form.lambda1 = l1;
    form.c3 = value_at(l1, l1);

    if (a2 < beta + 1.0) {
        form.regime = R2Regime::TwoMinima;
        form.points.push_back({{l1, l1}, CpClass::Minimum});
        form.points.push_back({{-l1, -l1}, CpClass::Minimum});
        form.points.push_back({{0.0, 0.0}, CpClass::Saddle});
        return form;
    }

    const double l2 = std::sqrt(a2 - beta - 1.0);
    form.lambda2 = l2;
    form.c2 = value_at(l2, -l2);

    if (a2 < beta + 2.0) {
        form.regime = R2Regime::TwoMinimaSaddles;
        form.points.push_back({{l1, l1}, CpClass::Minimum});
        form.points.push_back({{-l1, -l1}, CpClass::Minimum});
        form.points.push_back({{l2, -l2}, CpClass::Saddle});
        form.points.push_back({{-l2, l2}, CpClass::Saddle});
        form.points.push_back({{0.0, 0.0}, CpClass::Maximum});
        return form;
    }

    const double disc = std::sqrt(A * A - 4.0);
    const double l3 = std::sqrt((A + disc) / 2.0);
    const double l4 = std::sqrt((A - disc) / 2.0);
    form.lambda3 = l3;
    form.lambda4 = l4;
    form.c1 = value_at(l3, -l4);

    form.regime = R2Regime::FourMinima;
    form.points.push_back({{l1, l1}, CpClass::Minimum});
    form.points.push_back({{-l1, -l1}, CpClass::Minimum});
    form.points.push_back({{l2, -l2}, CpClass::Minimum});
    form.points.push_back({{-l2, l2}, CpClass::Minimum});
    form.points.push_back({{l3, -l4}, CpClass::Saddle});
    form.points.push_back({{-l3, l4}, CpClass::Saddle});
    form.points.push_back({{l4, -l3}, CpClass::Saddle});
    form.points.push_back({{-l4, l3}, CpClass::Saddle});
    form.points.push_back({{0.0, 0.0}, CpClass::Maximum});
    return form;
}

std::array<double, 3> cubic_roots(double alpha, double eps, int sign) {
    if (!(alpha > 0.0)) throw ValidationError("cubic_roots: alpha must be positive");
    if (eps < 0.0) throw ValidationError("cubic_roots: eps must be nonnegative");
    if (sign != 1 && sign != -1) throw ValidationError("cubic_roots: sign must be +1 or -1");
    if (eps == 0.0) return {-alpha, 0.0, alpha};

    // Real-root condition for x^3 - alpha^2 x + sign*eps*alpha^2.
    const double threshold = std::pow(27.0 * eps * eps / 4.0, 0.25);
    if (!(alpha > threshold)) {
        std::ostringstream os;
        os << "cubic_roots: alpha = " << alpha << " is not above the three-real-root threshold "
           << threshold;
        throw ValidationError(os.str());
    }

    // Trigonometric form of the depressed cubic t^3 + p t + q,
    // p = -alpha^2, q = sign*eps*alpha^2.
    const double p = -alpha * alpha;
    const double q = sign * eps * alpha * alpha;
    const double m = 2.0 * std::sqrt(-p / 3.0);
    double cosarg = 3.0 * q / (p * m);
    cosarg = std::clamp(cosarg, -1.0, 1.0);
    const double theta = std::acos(cosarg);

    std::array<double, 3> roots;
    for (int k = 0; k < 3; ++k) roots[k] = m * std::cos((theta - 2.0 * M_PI * k) / 3.0);
    std::sort(roots.begin(), roots.end());

    // Two Newton polishes on f(x) = x^3/alpha^2 - x + sign*eps; the cubic is
    // evaluated as (x*x*x)/alpha^2 so the subtraction against x is exact.
    const double se = sign * eps;
    for (double& r : roots) {
        for (int it = 0; it < 2; ++it) {
            const double f = (r * r * r) / (alpha * alpha) - r + se;
            const double df = 3.0 * r * r / (alpha * alpha) - 1.0;
            if (df != 0.0) r -= f / df;
        }
    }
    return roots;
}

}  // namespace isingflow
