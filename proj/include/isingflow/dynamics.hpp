#pragma once

#include "isingflow/ising.hpp"
#include "isingflow/potential.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace isingflow {

/// Pump schedule alpha(t): C^1, non-decreasing, bounded by alpha_inf.
struct Schedule {
    enum class Kind { Constant, LinearSaturating, TanhSaturating };

    Kind kind = Kind::Constant;
    double alpha_start = 0.0;
    double alpha_inf = 1.0;
    double ramp_time = 10.0;

    static Schedule constant(double alpha);
    /// Quadratic ease-out ramp: slope 2*(alpha_inf-alpha_start)/ramp_time at
    /// t = 0, saturating exactly at t = ramp_time.
    static Schedule linear(double alpha_start, double alpha_inf, double ramp_time);
    /// alpha_start + (alpha_inf-alpha_start)*tanh(2t/ramp_time); never
    /// saturates exactly, alpha_dot > 0 for all t.
    static Schedule tanh(double alpha_start, double alpha_inf, double ramp_time);

    double alpha(double t) const;
    double alpha_dot(double t) const;
    bool saturated(double t) const;
};

struct State {
    Vec x;
    Vec y;          // empty for first-order flows
    double t = 0.0;
};

enum class Integrator { SymplecticEuler, Leapfrog, RK4 };

const char* to_string(Integrator i);

struct TrajectorySample {
    double t = 0.0;
    double alpha = 0.0;
    double H = 0.0;  // Hamiltonian, or the flow's potential for gradient systems
    Vec x;
    Vec y;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    double dt = 0.0;
    Integrator integrator = Integrator::SymplecticEuler;
    std::uint64_t seed = 0;
};

/// H(x, y, t) = 1/2 |y|^2 + U(x) with alpha frozen at the given value.
double hamiltonian_sb(const IsingProblem& problem, double beta, double alpha, const State& state);

/// dH/dt along solutions: -alpha_dot(t) * alpha(t) * |x|^2 (non-positive for
/// non-decreasing schedules).
double sb_dissipation_rate(const Schedule& schedule, const State& state);

/// Called every `stride` steps during integrate_sb; return true to stop.
using StepCallback = std::function<bool(const State&, double alpha)>;

struct SbCallback {
    int stride = 0;  // 0 disables
    StepCallback fn;
};

/// Second-order pumped system
///   dx_i/dt = y_i,   dy_i/dt = -(x_i^2 + beta - alpha(t)^2) x_i + (S x)_i.
/// Semi-implicit Euler by default: momentum kick from the force at the
/// current position and step-start alpha, then position drift.  Leapfrog is
/// available for time-reversible runs.  Records every record_stride steps
/// plus the final state.  Throws BlowUpError on non-finite state or
/// |x|_inf > 10 * alpha_inf.
Trajectory integrate_sb(const IsingProblem& problem, double beta, const Schedule& schedule,
                        const State& init, double dt, double t_max, int record_stride = 10,
                        Integrator integrator = Integrator::SymplecticEuler,
                        const SbCallback& callback = {});

// --- KPO ------------------------------------------------------------------

/// Hamiltonian of the Kerr-oscillator network at pump value p.
double hamiltonian_kpo(const IsingProblem& problem, double K, double Delta, double xi0, double p,
                       const Vec& x, const Vec& y);

/// RK4 integration of the (non-separable) Kerr-oscillator flow
///   dx/dt = dH_k/dy, dy/dt = -dH_k/dx, pump p(t) from schedule_p.
Trajectory integrate_kpo(const IsingProblem& problem, double K, double Delta, double xi0,
                         const Schedule& schedule_p, const State& init, double dt, double t_max,
                         int record_stride = 10);

// --- gradient-flow CIM ------------------------------------------------------

double eval_Uc(const IsingProblem& problem, double p, double eps, const Vec& x);
Vec grad_Uc(const IsingProblem& problem, double p, double eps, const Vec& x);

/// RK4 on dx/dt = -grad U_c with
///   U_c = sum x_i^4/4 + (1-p)/2 x_i^2 - eps x^T S x.
Trajectory integrate_gradient_cim(const IsingProblem& problem, double p, double eps,
                                  const Vec& init, double dt, double t_max,
                                  int record_stride = 10);

// --- two-quadrature DOPO -----------------------------------------------------

double eval_Ud(const IsingProblem& problem, double p, const Vec& c, const Vec& s);
Vec grad_Ud(const IsingProblem& problem, double p, const Vec& cs);  // stacked (c, s)
Mat hess_Ud(const IsingProblem& problem, double p, const Vec& cs);

/// RK4 on the 2n-dimensional gradient flow of U_d(c, s); the trajectory's x
/// holds c, y holds s, and H holds U_d.
Trajectory integrate_dopo(const IsingProblem& problem, double p, const Vec& init_c,
                          const Vec& init_s, double dt, double t_max, int record_stride = 10);

}  // namespace isingflow
