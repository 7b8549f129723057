#pragma once

#include "isingflow/capture.hpp"
#include "isingflow/dynamics.hpp"

#include <optional>

namespace isingflow {

struct SolveConfig {
    double beta = 1.0;
    // alpha_inf defaults to the calibrated threshold (n <= enum_cap) or the
    // spectral heuristic, scaled so the capture test can fire.
    std::optional<double> alpha_inf;
    double alpha_start = 0.0;
    double ramp_time = 30.0;  // slow enough that the adiabatic following wins
    Schedule::Kind schedule_kind = Schedule::Kind::LinearSaturating;
    double dt = 1e-2;
    double t_max = 35.0;
    std::uint64_t seed = 0;
    int capture_check_stride = 10;
    int record_stride = 10;
    Integrator integrator = Integrator::SymplecticEuler;
    bool use_capture = true;  // stop early once the capture test fires
    int enum_cap = 10;        // landscape enumeration limit for calibration/B5
    double init_amplitude = 0.1;
};

struct SolveResult {
    SpinConfig config;
    Trajectory trajectory;
    CaptureReport last_report;
    bool captured = false;
    double capture_time = 0.0;  // first time the capture test fired
    double alpha_inf = 0.0;     // the value actually used
    int attempts = 1;           // re-runs triggered by a zero sign component
};

/// Pick alpha_inf so the capture stopping rule can fire: above the
/// calibrated/heuristic threshold and above the level where the global
/// minimum's energy clears U_B.
double default_alpha_inf(const IsingProblem& problem, double beta, int enum_cap = 10);

/// Ramped second-order run with the capture stopping rule; the returned spin
/// config is the sign vector of the final position.  A zero sign component
/// triggers a deterministic re-seeded re-run.
SolveResult solve(const IsingProblem& problem, const SolveConfig& config = {});

}  // namespace isingflow
