#pragma once

#include "isingflow/dynamics.hpp"
#include "isingflow/potential.hpp"

#include <complex>
#include <map>
#include <optional>

namespace isingflow {

/// Hill's region query: is x inside {U < c}?
struct HillQuery {
    double c = 0.0;
    PotentialParams params;
};

bool hill_contains(const HillQuery& query, const Vec& x);

/// Transit floor: a constant-alpha orbit with H < U_s cannot visit two
/// minima.  Absent when the landscape has no saddles.
std::optional<double> saddle_floor_threshold(const LandscapeSummary& summary);

/// Empirical bound on |U_s(alpha)/alpha^2 + (n-1) alpha^2/4| over the given
/// alpha samples, times a safety factor of 2.  Each sample must be above the
/// calibrated threshold so the landscape is complete.
double estimate_B5(const IsingProblem& problem, double beta, const std::vector<double>& alpha_samples,
                   const LandscapeOptions& opts = {});

/// Empirical lower bound on |x|^2 - n alpha^2 over minima, doubled when
/// negative (conservative direction).
double estimate_B6(const IsingProblem& problem, double beta, const std::vector<double>& alpha_samples,
                   const LandscapeOptions& opts = {});

/// Closed-form bound used above the landscape-enumeration cap; always at
/// least as large as the asymptotic deviation.
double heuristic_B5(const IsingProblem& problem, double beta);
double heuristic_B6(const IsingProblem& problem, double beta);

/// Minimize U over the sphere |x|^2 = r0_sq by multi-start projected
/// gradient descent (axes, the supplied directions, and 8 deterministic
/// random directions).
double min_on_sphere(const IsingProblem& problem, double beta, double alpha, double r0_sq,
                     const std::vector<Vec>& extra_directions = {});

struct CaptureReport {
    bool in_capture = false;
    bool premature = false;      // alpha(t) below the validity threshold
    double t = 0.0;
    double H = 0.0;
    double U_R0 = 0.0;
    double U_B = 0.0;            // U_sd for the 2-spin specialization
    double r0 = 0.0;             // R_0 (squared-norm threshold)
    double norm_sq = 0.0;
    double b5_estimate = 0.0;
};

/// Precomputed quantities for the capture stopping rule of one ramped run.
struct CaptureContext {
    enum class Mode { R2Canonical, GeneralN };

    Mode mode = Mode::GeneralN;
    IsingProblem problem;
    double beta = 1.0;
    double alpha_inf = 1.0;
    double alpha_star = 0.0;     // validity threshold on alpha(t)
    double b5 = 0.0;
    double b6 = 0.0;
    double r0 = 0.0;
    bool alpha_inf_validated = false;  // alpha_inf^2 >= 10 |2 (B5 - B6)|
    std::vector<Vec> minima_directions;

    // U_R0 per alpha value; checks repeat the same alpha grid, so the sphere
    // solve runs once per level.  Guard the context per thread.
    mutable std::map<double, double> ur0_cache;

    /// Uses the 2-spin specialization for the canonical coupling, the
    /// enumerated B5/B6 bounds when n <= enum_cap, and closed-form bounds
    /// above that.
    static CaptureContext make(const IsingProblem& problem, double beta, double alpha_inf,
                               int enum_cap = 10);
};

/// Evaluate the capture test at one state; alpha_t is alpha at state.t.
CaptureReport capture_test(const CaptureContext& ctx, const State& state, double alpha_t);

enum class TransitKind { Transit, Capture, Undetermined };

const char* to_string(TransitKind k);

struct TransitVerdict {
    TransitKind kind = TransitKind::Undetermined;
    std::vector<double> witness_times;       // first entry time per visited minimum
    std::vector<SignVector> minima_visited;  // sign vectors of those minima
};

/// Scan a trajectory against the minima of `summary`.  Neighborhoods are
/// balls of radius nbhd_radius (default: 1/3 of the least inter-minima
/// distance, which keeps them disjoint with constant sign inside).
TransitVerdict classify_trajectory(const Trajectory& traj, const LandscapeSummary& summary,
                                   double nbhd_radius = 0.0);

/// Linearization data at the saddle z0 = (0, 0, lambda3, -lambda4) of the
/// 2-spin canonical system, phase-space coordinates ordered (y1, y2, x1, x2).
struct NeckAnalysis {
    Eigen::Vector2d saddle;                 // (lambda3, -lambda4)
    double mu1 = 0.0;                       // hyperbolic rate, eigenvalues +-mu1
    double mu2_im = 0.0;                    // |Im mu2|, eigenvalues +-i mu2_im
    double u = 0.0, v = 0.0;                // eigenvector parameters
    Eigen::Vector4d e1, e2;                 // hyperbolic eigenvectors (real)
    Eigen::Vector4cd e3, e4;                // elliptic eigenvectors (conjugate pair)

    Eigen::Matrix4d hamiltonian_hessian() const;  // D^2 H(z0)
    static Eigen::Matrix4d J4();                  // standard symplectic matrix
};

/// Requires alpha^2 - beta > 2 (the (lambda3, -lambda4) saddle must exist).
NeckAnalysis neck_linearize(double beta, double alpha);

enum class NeckOrbit { Periodic, Asymptotic, SaddleTransit, SaddleNonTransit };

const char* to_string(NeckOrbit k);

/// Orbit type from the hyperbolic coefficients: crossing iff xi1*xi2 < 0,
/// bouncing iff xi1*xi2 > 0; zeros give periodic/asymptotic orbits.
NeckOrbit classify_neck_orbit(double xi1, double xi2);

enum class Orientation { Clockwise, Degenerate };

struct EllipsePrediction {
    double major = 0.0;
    double minor = 0.0;
    Orientation orientation = Orientation::Clockwise;
};

/// The x-plane ellipse prediction for the periodic neck orbit: axes
/// (2 v |eta|, 2 |eta|), clockwise.
EllipsePrediction periodic_orbit_ellipse(const NeckAnalysis& analysis, double eta_abs);

/// Phase-space point z0 + xi1 e1 + xi2 e2 + 2 Re(eta e3), returned as an SB
/// state (x, y).
State neck_state(const NeckAnalysis& analysis, double xi1, double xi2,
                 std::complex<double> eta = 0.0);

/// Coordinates (xi1, xi2, Re eta-part, Im eta-part) of a state relative to
/// the saddle, in the real eigenbasis [e1, e2, Re e3, Im e3].
Eigen::Vector4d neck_coordinates(const NeckAnalysis& analysis, const State& state);

}  // namespace isingflow
