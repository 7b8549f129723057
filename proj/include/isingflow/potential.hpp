#pragma once

#include "isingflow/ising.hpp"

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <vector>

namespace isingflow {

/// Parameters of the quartic potential
///   U(x) = sum_i x_i^4/4 + (beta - alpha^2)/2 |x|^2 - 1/2 x^T S x.
struct PotentialParams {
    double alpha = 1.0;
    double beta = 1.0;
    IsingProblem problem;

    PotentialParams(double a, double b, IsingProblem p);
};

enum class CpClass { Minimum, Saddle, Maximum, Degenerate };

const char* to_string(CpClass c);

/// A classified critical point of U.
struct CriticalPoint {
    Vec x;
    double value = 0.0;
    double grad_norm = 0.0;
    int morse_index = 0;    // negative Hessian eigenvalues
    int nullity = 0;        // eigenvalues within null_tol of zero
    CpClass cls = CpClass::Degenerate;
    SignVector seed;        // member of {-1,0,1}^n whose alpha-scaling seeded Newton
};

struct LandscapeSummary {
    std::vector<CriticalPoint> critical_points;
    std::optional<double> U_s;  // least saddle value
    std::optional<double> U_M;  // greatest minimum value
    std::map<CpClass, int> count_by_class;
    std::vector<SignVector> failed_seeds;    // Newton did not converge
    std::vector<SignVector> collided_seeds;  // converged onto an already-found point
    bool aborted_incomplete = false;         // stopped early under abort_on_incomplete

    std::vector<const CriticalPoint*> minima() const;
};

// Tolerances; every one scales with the natural magnitude of the quantity
// it gates (gradients grow like alpha^3, values like alpha^4).
struct NewtonOptions {
    int max_iterations = 200;
    int max_backtracks = 40;
    double tol_scale = 1e-10;  // converged when |grad| <= tol_scale*(1+alpha^3)
    int stall_window = 25;     // give up when the merit stops shrinking
};

double newton_tolerance(double alpha);
double dedup_tolerance(double alpha);
double null_tolerance(double alpha);
double value_tie_tolerance(double alpha);

double eval_U(const IsingProblem& problem, double beta, double alpha, const Vec& x);
Vec grad_U(const IsingProblem& problem, double beta, double alpha, const Vec& x);
Mat hess_U(const IsingProblem& problem, double beta, double alpha, const Vec& x);

inline double eval_U(const PotentialParams& p, const Vec& x) { return eval_U(p.problem, p.beta, p.alpha, x); }
inline Vec grad_U(const PotentialParams& p, const Vec& x) { return grad_U(p.problem, p.beta, p.alpha, x); }
inline Mat hess_U(const PotentialParams& p, const Vec& x) { return hess_U(p.problem, p.beta, p.alpha, x); }

/// Morse-classify a critical point.  Throws NotCriticalError when the
/// gradient norm exceeds the Newton tolerance.
CriticalPoint classify(const PotentialParams& params, const Vec& x);

/// Damped Newton on grad U from x0.  Returns the converged point, or
/// nothing when the iteration stalls.
std::optional<Vec> newton_critical_point(const PotentialParams& params, const Vec& x0,
                                         const NewtonOptions& opts = {});

/// Generic damped Newton used by the solver above and by callers that bring
/// their own gradient/Hessian (e.g. other potentials in tests).
std::optional<Vec> newton_solve(const std::function<Vec(const Vec&)>& grad,
                                const std::function<Mat(const Vec&)>& hess, const Vec& x0,
                                double tol, const NewtonOptions& opts = {});

struct LandscapeOptions {
    int seed_cap = 16;  // refuse above 3^seed_cap Newton seeds
    NewtonOptions newton;
    // Stop at the first failed or collided seed; the landscape cannot reach
    // 3^n points then.  Used by calibration, where only that predicate matters.
    bool abort_on_incomplete = false;
};

/// Enumerate critical points by damped Newton from the 3^n seeds
/// alpha*{-1,0,1}^n, deduplicate, and classify.  Non-convergence and seed
/// collisions are recorded, not errors.
LandscapeSummary find_critical_points(const PotentialParams& params,
                                      const LandscapeOptions& opts = {});

/// All minima whose value ties the least one within value_tie_tolerance.
std::vector<CriticalPoint> global_minima(const LandscapeSummary& summary, double alpha);

struct CalibrationResult {
    double alpha = 0.0;
    bool verified = false;  // false above the enumeration cap (heuristic only)
    int candidates_tried = 0;
};

struct CalibrationOptions {
    double alpha_max = 1e6;
    int enum_cap = 16;    // verification needs find_critical_points
    int oracle_cap = 24;  // predicate (c) needs brute force
};

/// Smallest alpha from the doubling sequence started at
/// sqrt(beta + 2(1 + rho(S))) for which the landscape is complete (3^n
/// points), the 2^n minima cover all sign patterns, and every global
/// minimum maps to an exact oracle minimizer.
CalibrationResult calibrate_alpha(const IsingProblem& problem, double beta,
                                  const CalibrationOptions& opts = {});

enum class R2Regime {
    OriginOnly,      // alpha^2 < beta - 1
    TwoMinima,       // alpha^2 in (beta-1, beta+1)
    TwoMinimaSaddles,// alpha^2 in (beta+1, beta+2)
    FourMinima       // alpha^2 > beta + 2
};

/// Closed-form critical points of U for n = 2 with S = [[0,1],[1,0]].
struct R2ClosedForm {
    R2Regime regime;
    std::optional<double> lambda1, lambda2, lambda3, lambda4;
    std::vector<std::pair<Eigen::Vector2d, CpClass>> points;
    // Critical values by direct evaluation at the closed-form points:
    // c0 at the origin, c1 at (l3,-l4), c2 at (l2,-l2), c3 at (l1,l1).
    std::optional<double> c0, c1, c2, c3;
};

/// Throws ValidationError when alpha^2 sits exactly on a bifurcation value
/// beta-1, beta+1 or beta+2 (the classification excludes boundaries).
R2ClosedForm r2_closed_form(double alpha, double beta);

/// The three real roots of x^3/alpha^2 - x + sign*eps, increasing.
/// Requires alpha > (27 eps^2 / 4)^(1/4) so all roots are real.
std::array<double, 3> cubic_roots(double alpha, double eps, int sign);

}  // namespace isingflow
