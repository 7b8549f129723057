#include "isingflow/capture.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace isingflow {

bool hill_contains(const HillQuery& query, const Vec& x) {
    return eval_U(query.params, x) < query.c;
}

std::optional<double> saddle_floor_threshold(const LandscapeSummary& summary) {
    return summary.U_s;
}

double estimate_B5(const IsingProblem& problem, double beta, const std::vector<double>& alpha_samples,
                   const LandscapeOptions& opts) {
    if (alpha_samples.empty()) throw ValidationError("estimate_B5: need at least one alpha sample");
    const int n = problem.n();
    double max_dev = 0.0;
    for (double alpha : alpha_samples) {
        PotentialParams params(alpha, beta, problem);
        LandscapeSummary summary = find_critical_points(params, opts);
        double us = std::numeric_limits<double>::infinity();
        for (const auto& cp : summary.critical_points)
            if (cp.cls == CpClass::Saddle && cp.morse_index == 1) us = std::min(us, cp.value);
        if (!std::isfinite(us)) {
            std::ostringstream os;
            os << "estimate_B5: no index-1 saddle at alpha = " << alpha
               << "; sample below the calibrated threshold?";
            throw Error(os.str());
        }
        const double a2 = alpha * alpha;
        max_dev = std::max(max_dev, std::abs(us / a2 + (n - 1) * a2 / 4.0));
    }
    return 2.0 * max_dev;
}

double estimate_B6(const IsingProblem& problem, double beta, const std::vector<double>& alpha_samples,
                   const LandscapeOptions& opts) {
    if (alpha_samples.empty()) throw ValidationError("estimate_B6: need at least one alpha sample");
    const int n = problem.n();
    double lo = std::numeric_limits<double>::infinity();
    for (double alpha : alpha_samples) {
        PotentialParams params(alpha, beta, problem);
        LandscapeSummary summary = find_critical_points(params, opts);
        for (const auto& cp : summary.critical_points)
            if (cp.cls == CpClass::Minimum)
                lo = std::min(lo, cp.x.squaredNorm() - n * alpha * alpha);
    }
    if (!std::isfinite(lo)) throw Error("estimate_B6: no minima found");
    return lo < 0.0 ? 2.0 * lo : 0.5 * lo;
}

double heuristic_B5(const IsingProblem& problem, double beta) {
    // |U_s/a^2 + (n-1)a^2/4| tends to |(n-1) beta/2 - E_sub| with E_sub a
    // sub-instance spin energy, so sum |s_ij| bounds the coupling part.
    return 2.0 * ((problem.n() - 1) * beta / 2.0 + problem.abs_coupling_sum());
}

double heuristic_B6(const IsingProblem& problem, double beta) {
    return -2.0 * (problem.n() * beta + 2.0 * problem.abs_coupling_sum() + 1.0);
}

double min_on_sphere(const IsingProblem& problem, double beta, double alpha, double r0_sq,
                     const std::vector<Vec>& extra_directions) {
    const int n = problem.n();
    if (r0_sq < 0.0) throw ValidationError("min_on_sphere: r0_sq must be nonnegative");
    if (r0_sq == 0.0) return 0.0;  // U(0) = 0
    const double radius = std::sqrt(r0_sq);

    std::vector<Vec> starts;
    for (int i = 0; i < n; ++i) {
        Vec e = Vec::Zero(n);
        e(i) = radius;
        starts.push_back(e);
        starts.push_back(-e);
    }
    for (const Vec& d : extra_directions) {
        if (d.size() == n && d.norm() > 0.0) starts.push_back(d * (radius / d.norm()));
    }
    std::mt19937_64 gen(0x5EEDBA5E);  // fixed stream: results must not depend on call order
    for (int k = 0; k < 8; ++k) {
        Vec d(n);
        for (int i = 0; i < n; ++i) d(i) = normal01(gen);
        if (d.norm() == 0.0) d(0) = 1.0;
        starts.push_back(d * (radius / d.norm()));
    }

    const double gtol = 1e-10 * (1.0 + alpha * alpha * alpha);
    double best = std::numeric_limits<double>::infinity();
    for (const Vec& start : starts) {
        Vec x = start;
        double fx = eval_U(problem, beta, alpha, x);
        best = std::min(best, fx);
        double step = 1.0 / (1.0 + alpha * alpha);
        for (int it = 0; it < 500; ++it) {
            Vec g = grad_U(problem, beta, alpha, x);
            Vec xhat = x / radius;
            Vec gt = g - g.dot(xhat) * xhat;
            if (gt.norm() <= gtol) break;
            bool moved = false;
            for (int bt = 0; bt < 40; ++bt) {
                Vec xn = x - step * gt;
                xn *= radius / xn.norm();
                const double fn = eval_U(problem, beta, alpha, xn);
                if (fn < fx) {
                    x = std::move(xn);
                    fx = fn;
                    moved = true;
                    step *= 1.5;
                    break;
                }
                step *= 0.5;
            }
            if (!moved) break;
        }
        best = std::min(best, fx);
    }
    return best;
}

CaptureContext CaptureContext::make(const IsingProblem& problem, double beta, double alpha_inf,
                                    int enum_cap) {
    const int n = problem.n();
    CaptureContext ctx{Mode::GeneralN, problem, beta, alpha_inf, 0.0, 0.0, 0.0, 0.0, false, {}, {}};

    const bool canonical_r2 =
        n == 2 && problem.coupling(0, 1) == 1.0 && problem.coupling(1, 0) == 1.0;
    if (canonical_r2) {
        ctx.mode = Mode::R2Canonical;
        ctx.r0 = (alpha_inf * alpha_inf - beta) / 2.0;
        ctx.alpha_star = std::sqrt(beta + 2.0);
        ctx.alpha_inf_validated = alpha_inf > ctx.alpha_star;
        return ctx;
    }

    if (n <= enum_cap) {
        CalibrationOptions copts;
        copts.enum_cap = enum_cap;
        CalibrationResult cal = calibrate_alpha(problem, beta, copts);
        ctx.alpha_star = cal.alpha;
        if (!(alpha_inf > cal.alpha)) {
            std::ostringstream os;
            os << "capture context: alpha_inf = " << alpha_inf
               << " must exceed the calibrated threshold " << cal.alpha;
            throw Error(os.str());
        }
        std::vector<double> samples;
        for (double f : {1.0, 0.75, 0.5})
            if (cal.alpha < f * alpha_inf) samples.push_back(f * alpha_inf);
        if (samples.empty()) samples.push_back(alpha_inf);
        LandscapeOptions lo;
        lo.seed_cap = enum_cap;
        ctx.b5 = estimate_B5(problem, beta, samples, lo);
        ctx.b6 = estimate_B6(problem, beta, samples, lo);

        PotentialParams params(alpha_inf, beta, problem);
        const LandscapeSummary at_inf = find_critical_points(params, lo);
        for (const auto* cp : at_inf.minima()) ctx.minima_directions.push_back(cp->x);
    } else {
        ctx.alpha_star = std::sqrt(beta + 2.0 * (1.0 + problem.spectral_radius()));
        ctx.b5 = heuristic_B5(problem, beta);
        ctx.b6 = heuristic_B6(problem, beta);
    }

    ctx.r0 = (n - 1) * alpha_inf * alpha_inf / 2.0 + ctx.b5;
    ctx.alpha_inf_validated =
        alpha_inf * alpha_inf >= 10.0 * std::abs(2.0 * (ctx.b5 - ctx.b6));
    return ctx;
}

CaptureReport capture_test(const CaptureContext& ctx, const State& state, double alpha_t) {
    CaptureReport report;
    report.t = state.t;
    report.b5_estimate = ctx.b5;
    report.r0 = ctx.r0;
    report.norm_sq = state.x.squaredNorm();
    report.H = hamiltonian_sb(ctx.problem, ctx.beta, alpha_t, state);

    auto sphere_floor = [&ctx](double a) {
        auto it = ctx.ur0_cache.find(a);
        if (it != ctx.ur0_cache.end()) return it->second;
        const double value = min_on_sphere(ctx.problem, ctx.beta, a, ctx.r0, ctx.minima_directions);
        ctx.ur0_cache.emplace(a, value);
        return value;
    };

    const double a2 = alpha_t * alpha_t;
    if (ctx.mode == CaptureContext::Mode::R2Canonical) {
        // Threshold where the disk |x|^2 < R0 carries no minima of U(.,t);
        // the norm clause is implied by superharmonicity there.
        const double valid_a2 = 0.75 * ctx.alpha_inf * ctx.alpha_inf + 0.25 * ctx.beta;
        report.U_B = -(a2 - ctx.beta) * (a2 - ctx.beta) / 4.0;  // U_sd(t)
        if (a2 < valid_a2) {
            report.premature = true;
            return report;
        }
        report.U_R0 = sphere_floor(alpha_t);
        report.in_capture = report.H <= std::min(report.U_R0, report.U_B);
        return report;
    }

    const int n = ctx.problem.n();
    report.U_B = -(n - 1) * a2 * a2 / 4.0 - ctx.b5 * a2;
    if (alpha_t <= ctx.alpha_star) {
        report.premature = true;
        return report;
    }
    if (report.norm_sq <= ctx.r0) return report;
    if (report.H > report.U_B) return report;  // cheap reject before the sphere solve
    report.U_R0 = sphere_floor(alpha_t);
    report.in_capture = report.H <= std::min(report.U_R0, report.U_B);
    return report;
}

const char* to_string(TransitKind k) {
    switch (k) {
        case TransitKind::Transit: return "transit";
        case TransitKind::Capture: return "capture";
        case TransitKind::Undetermined: return "undetermined";
    }
    return "?";
}

TransitVerdict classify_trajectory(const Trajectory& traj, const LandscapeSummary& summary,
                                   double nbhd_radius) {
    std::vector<const CriticalPoint*> minima = summary.minima();
    TransitVerdict verdict;
    if (minima.empty() || traj.samples.empty()) return verdict;

    double radius = nbhd_radius;
    if (radius <= 0.0) {
        double min_dist = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < minima.size(); ++i)
            for (size_t j = i + 1; j < minima.size(); ++j)
                min_dist = std::min(min_dist, (minima[i]->x - minima[j]->x).norm());
        radius = std::isfinite(min_dist) ? min_dist / 3.0 : 1.0;
    }

    // Which minimum's ball (if any) contains each sample.
    std::vector<int> inside(traj.samples.size(), -1);
    std::map<int, double> first_entry;
    for (size_t k = 0; k < traj.samples.size(); ++k) {
        for (size_t m = 0; m < minima.size(); ++m) {
            if ((traj.samples[k].x - minima[m]->x).norm() <= radius) {
                inside[k] = static_cast<int>(m);
                if (!first_entry.count(static_cast<int>(m)))
                    first_entry[static_cast<int>(m)] = traj.samples[k].t;
                break;
            }
        }
    }
    for (const auto& [m, t] : first_entry) {
        verdict.witness_times.push_back(t);
        verdict.minima_visited.push_back(sign_vector(minima[m]->x));
    }

    if (first_entry.size() >= 2) {
        verdict.kind = TransitKind::Transit;
        return verdict;
    }

    const size_t tail_start = traj.samples.size() - (traj.samples.size() + 4) / 5;  // last 20%
    int tail_min = inside[tail_start];
    bool captured = tail_min >= 0;
    for (size_t k = tail_start; captured && k < inside.size(); ++k)
        captured = (inside[k] == tail_min);
    verdict.kind = captured ? TransitKind::Capture : TransitKind::Undetermined;
    return verdict;
}

Eigen::Matrix4d NeckAnalysis::J4() {
    Eigen::Matrix4d j = Eigen::Matrix4d::Zero();
    j(0, 2) = -1.0;
    j(1, 3) = -1.0;
    j(2, 0) = 1.0;
    j(3, 1) = 1.0;
    return j;
}

Eigen::Matrix4d NeckAnalysis::hamiltonian_hessian() const {
    // (y, x) ordering: kinetic block is the identity, position block is the
    // potential Hessian at the saddle, where alpha^2 - beta = l3^2 + l4^2.
    const double l3 = saddle(0), l4 = -saddle(1);
    const double A = l3 * l3 + l4 * l4;
    Eigen::Matrix4d h = Eigen::Matrix4d::Identity();
    h(2, 2) = 3.0 * l3 * l3 - A;
    h(3, 3) = 3.0 * l4 * l4 - A;
    h(2, 3) = -1.0;
    h(3, 2) = -1.0;
    return h;
}

NeckAnalysis neck_linearize(double beta, double alpha) {
    const double A = alpha * alpha - beta;
    if (!(A > 2.0)) {
        std::ostringstream os;
        os << "neck_linearize: requires alpha^2 - beta > 2, got " << A;
        throw ValidationError(os.str());
    }
    const double disc = std::sqrt(A * A - 4.0);
    const double l3 = std::sqrt((A + disc) / 2.0);
    const double l4 = std::sqrt((A - disc) / 2.0);
    const double root = std::sqrt(9.0 * A * A - 32.0);

    NeckAnalysis out;
    out.saddle = {l3, -l4};
    out.mu1 = std::sqrt((root - A) / 2.0);
    out.mu2_im = std::sqrt((root + A) / 2.0);
    // u = root/2 - 3 disc/2 loses digits for large A; the product form
    // u * (3 disc + root)/2 = 1 gives the stable reciprocal.
    out.v = (3.0 * disc + root) / 2.0;
    out.u = 1.0 / out.v;

    out.e1 << -out.mu1 * out.u, -out.mu1, out.u, 1.0;
    out.e2 << out.mu1 * out.u, out.mu1, out.u, 1.0;
    const std::complex<double> mu2(0.0, out.mu2_im);
    out.e3 << mu2 * out.v, -mu2, std::complex<double>(-out.v), std::complex<double>(1.0);
    out.e4 << -mu2 * out.v, mu2, std::complex<double>(-out.v), std::complex<double>(1.0);
    return out;
}

const char* to_string(NeckOrbit k) {
    switch (k) {
        case NeckOrbit::Periodic: return "periodic";
        case NeckOrbit::Asymptotic: return "asymptotic";
        case NeckOrbit::SaddleTransit: return "saddle_transit";
        case NeckOrbit::SaddleNonTransit: return "saddle_non_transit";
    }
    return "?";
}

NeckOrbit classify_neck_orbit(double xi1, double xi2) {
    if (xi1 == 0.0 && xi2 == 0.0) return NeckOrbit::Periodic;
    if (xi1 == 0.0 || xi2 == 0.0) return NeckOrbit::Asymptotic;
    return xi1 * xi2 < 0.0 ? NeckOrbit::SaddleTransit : NeckOrbit::SaddleNonTransit;
}

EllipsePrediction periodic_orbit_ellipse(const NeckAnalysis& analysis, double eta_abs) {
    if (eta_abs < 0.0) throw ValidationError("periodic_orbit_ellipse: |eta| must be nonnegative");
    EllipsePrediction p;
    p.major = 2.0 * analysis.v * eta_abs;
    p.minor = 2.0 * eta_abs;
    p.orientation = eta_abs == 0.0 ? Orientation::Degenerate : Orientation::Clockwise;
    return p;
}

State neck_state(const NeckAnalysis& analysis, double xi1, double xi2, std::complex<double> eta) {
    Eigen::Vector4d z;
    z << 0.0, 0.0, analysis.saddle(0), analysis.saddle(1);
    z += xi1 * analysis.e1 + xi2 * analysis.e2;
    z += 2.0 * (eta * analysis.e3).real();
    State s;
    s.y = (Vec(2) << z(0), z(1)).finished();
    s.x = (Vec(2) << z(2), z(3)).finished();
    s.t = 0.0;
    return s;
}

Eigen::Vector4d neck_coordinates(const NeckAnalysis& analysis, const State& state) {
    Eigen::Vector4d dz;
    dz << state.y(0), state.y(1), state.x(0) - analysis.saddle(0), state.x(1) - analysis.saddle(1);
    Eigen::Matrix4d basis;
    basis.col(0) = analysis.e1;
    basis.col(1) = analysis.e2;
    basis.col(2) = analysis.e3.real();
    basis.col(3) = analysis.e3.imag();
    return basis.partialPivLu().solve(dz);
}

}  // namespace isingflow
