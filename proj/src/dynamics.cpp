#include "isingflow/dynamics.hpp"

#include <cmath>
#include <sstream>

namespace isingflow {

Schedule Schedule::constant(double alpha) {
    if (!(alpha > 0.0)) throw ValidationError("schedule: alpha must be positive");
    return {Kind::Constant, alpha, alpha, 1.0};
}

Schedule Schedule::linear(double alpha_start, double alpha_inf, double ramp_time) {
    if (alpha_start < 0.0 || !(alpha_inf > 0.0) || alpha_start > alpha_inf || !(ramp_time > 0.0))
        throw ValidationError("schedule: need 0 <= alpha_start <= alpha_inf, ramp_time > 0");
    return {Kind::LinearSaturating, alpha_start, alpha_inf, ramp_time};
}

Schedule Schedule::tanh(double alpha_start, double alpha_inf, double ramp_time) {
    if (alpha_start < 0.0 || !(alpha_inf > 0.0) || alpha_start > alpha_inf || !(ramp_time > 0.0))
        throw ValidationError("schedule: need 0 <= alpha_start <= alpha_inf, ramp_time > 0");
    return {Kind::TanhSaturating, alpha_start, alpha_inf, ramp_time};
}

double Schedule::alpha(double t) const {
    switch (kind) {
        case Kind::Constant:
            return alpha_inf;
        case Kind::LinearSaturating: {
            const double tau = t / ramp_time;
            if (tau >= 1.0) return alpha_inf;
            return alpha_start + (alpha_inf - alpha_start) * tau * (2.0 - tau);
        }
        case Kind::TanhSaturating:
            return alpha_start + (alpha_inf - alpha_start) * std::tanh(2.0 * t / ramp_time);
    }
    return alpha_inf;
}

double Schedule::alpha_dot(double t) const {
    switch (kind) {
        case Kind::Constant:
            return 0.0;
        case Kind::LinearSaturating: {
            const double tau = t / ramp_time;
            if (tau >= 1.0) return 0.0;
            return 2.0 * (alpha_inf - alpha_start) * (1.0 - tau) / ramp_time;
        }
        case Kind::TanhSaturating: {
            const double c = std::cosh(2.0 * t / ramp_time);
            return 2.0 * (alpha_inf - alpha_start) / (ramp_time * c * c);
        }
    }
    return 0.0;
}

bool Schedule::saturated(double t) const {
    if (kind == Kind::Constant) return true;
    if (kind == Kind::LinearSaturating) return t >= ramp_time;
    return std::tanh(2.0 * t / ramp_time) > 1.0 - 1e-12;
}

const char* to_string(Integrator i) {
    switch (i) {
        case Integrator::SymplecticEuler: return "symplectic_euler";
        case Integrator::Leapfrog: return "leapfrog";
        case Integrator::RK4: return "rk4";
    }
    return "?";
}

double hamiltonian_sb(const IsingProblem& problem, double beta, double alpha, const State& state) {
    double kinetic = 0.0;
    for (Eigen::Index i = 0; i < state.y.size(); ++i) kinetic += 0.5 * state.y(i) * state.y(i);
    return kinetic + eval_U(problem, beta, alpha, state.x);
}

double sb_dissipation_rate(const Schedule& schedule, const State& state) {
    return -schedule.alpha_dot(state.t) * schedule.alpha(state.t) * state.x.squaredNorm();
}

namespace {

Vec sb_force(const IsingProblem& problem, double beta, double a2, const Vec& x) {
    const int n = problem.n();
    Vec f(n);
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) row += problem.coupling(i, j) * x(j);
        f(i) = -(x(i) * x(i) + beta - a2) * x(i) + row;
    }
    return f;
}

void check_state(const Vec& x, const Vec& y, double t, double bound) {
    if (!x.allFinite() || !y.allFinite() || x.cwiseAbs().maxCoeff() > bound) {
        std::ostringstream os;
        os << "integration blew up at t = " << t << " (|x|_inf > " << bound
           << " or non-finite); reduce dt";
        throw BlowUpError(os.str(), t);
    }
}

}  // namespace

Trajectory integrate_sb(const IsingProblem& problem, double beta, const Schedule& schedule,
                        const State& init, double dt, double t_max, int record_stride,
                        Integrator integrator, const SbCallback& callback) {
    const int n = problem.n();
    if (init.x.size() != n) throw DimensionError("integrate_sb: init.x dimension mismatch");
    if (!(dt > 0.0)) throw ValidationError("integrate_sb: dt must be positive");
    if (record_stride < 1) throw ValidationError("integrate_sb: record_stride must be >= 1");
    if (integrator == Integrator::RK4)
        throw ValidationError("integrate_sb: use SymplecticEuler or Leapfrog");

    Vec x = init.x;
    Vec y = init.y.size() == n ? init.y : Vec::Zero(n);
    if (!x.allFinite() || !y.allFinite()) throw ValidationError("integrate_sb: non-finite init");

    const double bound = 10.0 * schedule.alpha_inf;
    const long long steps = static_cast<long long>(std::ceil(t_max / dt - 1e-12));

    Trajectory traj;
    traj.dt = dt;
    traj.integrator = integrator;
    traj.samples.reserve(static_cast<size_t>(steps / record_stride) + 2);

    auto record = [&](long long k) {
        const double t = init.t + k * dt;
        const double a = schedule.alpha(t);
        traj.samples.push_back({t, a, hamiltonian_sb(problem, beta, a, {x, y, t}), x, y});
    };
    record(0);

    for (long long k = 0; k < steps; ++k) {
        const double t = init.t + k * dt;
        if (integrator == Integrator::SymplecticEuler) {
            const double a = schedule.alpha(t);
            y += dt * sb_force(problem, beta, a * a, x);
            x += dt * y;
        } else {  // Leapfrog
            const double a0 = schedule.alpha(t);
            y += 0.5 * dt * sb_force(problem, beta, a0 * a0, x);
            x += dt * y;
            const double a1 = schedule.alpha(t + dt);
            y += 0.5 * dt * sb_force(problem, beta, a1 * a1, x);
        }
        check_state(x, y, t + dt, bound);

        const long long k1 = k + 1;
        const bool last = (k1 == steps);
        if (k1 % record_stride == 0 || last) record(k1);
        if (callback.stride > 0 && callback.fn && (k1 % callback.stride == 0 || last)) {
            const double t1 = init.t + k1 * dt;
            if (callback.fn({x, y, t1}, schedule.alpha(t1))) {
                if (k1 % record_stride != 0 && !last) record(k1);
                break;
            }
        }
    }
    return traj;
}

// --- KPO ---------------------------------------------------------------------

double hamiltonian_kpo(const IsingProblem& problem, double K, double Delta, double xi0, double p,
                       const Vec& x, const Vec& y) {
    const int n = problem.n();
    double h = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r2 = x(i) * x(i) + y(i) * y(i);
        h += 0.25 * K * r2 * r2 - 0.5 * p * (x(i) * x(i) - y(i) * y(i)) + 0.5 * Delta * r2;
    }
    double cx = 0.0, cy = 0.0;
    for (int i = 0; i < n; ++i) {
        double rx = 0.0, ry = 0.0;
        for (int j = 0; j < n; ++j) {
            rx += problem.coupling(i, j) * x(j);
            ry += problem.coupling(i, j) * y(j);
        }
        cx += x(i) * rx;
        cy += y(i) * ry;
    }
    return h - 0.5 * xi0 * (cx + cy);
}

namespace {

// Canonical flow of H_k; dy/dt is derived from -dH_k/dx (the constant-p run
// conserves H_k, which pins the signs).
void kpo_rhs(const IsingProblem& problem, double K, double Delta, double xi0, double p,
             const Vec& x, const Vec& y, Vec& dx, Vec& dy) {
    const int n = problem.n();
    for (int i = 0; i < n; ++i) {
        double rx = 0.0, ry = 0.0;
        for (int j = 0; j < n; ++j) {
            rx += problem.coupling(i, j) * x(j);
            ry += problem.coupling(i, j) * y(j);
        }
        const double r2 = x(i) * x(i) + y(i) * y(i);
        dx(i) = (p + Delta + K * r2) * y(i) - xi0 * ry;
        dy(i) = (p - Delta - K * r2) * x(i) + xi0 * rx;
    }
}

}  // namespace

Trajectory integrate_kpo(const IsingProblem& problem, double K, double Delta, double xi0,
                         const Schedule& schedule_p, const State& init, double dt, double t_max,
                         int record_stride) {
    const int n = problem.n();
    if (init.x.size() != n) throw DimensionError("integrate_kpo: init.x dimension mismatch");
    if (!(dt > 0.0)) throw ValidationError("integrate_kpo: dt must be positive");

    Vec x = init.x;
    Vec y = init.y.size() == n ? init.y : Vec::Zero(n);
    const double bound = 10.0 * (1.0 + std::sqrt(schedule_p.alpha_inf / std::max(K, 1e-12)));
    const long long steps = static_cast<long long>(std::ceil(t_max / dt - 1e-12));

    Trajectory traj;
    traj.dt = dt;
    traj.integrator = Integrator::RK4;

    Vec k1x(n), k1y(n), k2x(n), k2y(n), k3x(n), k3y(n), k4x(n), k4y(n);
    auto record = [&](long long k) {
        const double t = init.t + k * dt;
        const double p = schedule_p.alpha(t);
        traj.samples.push_back({t, p, hamiltonian_kpo(problem, K, Delta, xi0, p, x, y), x, y});
    };
    record(0);

    for (long long k = 0; k < steps; ++k) {
        const double t = init.t + k * dt;
        const double p0 = schedule_p.alpha(t);
        const double ph = schedule_p.alpha(t + 0.5 * dt);
        const double p1 = schedule_p.alpha(t + dt);
        kpo_rhs(problem, K, Delta, xi0, p0, x, y, k1x, k1y);
        kpo_rhs(problem, K, Delta, xi0, ph, x + 0.5 * dt * k1x, y + 0.5 * dt * k1y, k2x, k2y);
        kpo_rhs(problem, K, Delta, xi0, ph, x + 0.5 * dt * k2x, y + 0.5 * dt * k2y, k3x, k3y);
        kpo_rhs(problem, K, Delta, xi0, p1, x + dt * k3x, y + dt * k3y, k4x, k4y);
        x += dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        y += dt / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        check_state(x, y, t + dt, bound);

        const long long k1i = k + 1;
        if (k1i % record_stride == 0 || k1i == steps) record(k1i);
    }
    return traj;
}

// --- gradient-flow CIM ---------------------------------------------------------

double eval_Uc(const IsingProblem& problem, double p, double eps, const Vec& x) {
    const int n = problem.n();
    double u = 0.0;
    for (int i = 0; i < n; ++i)
        u += 0.25 * x(i) * x(i) * x(i) * x(i) + 0.5 * (1.0 - p) * x(i) * x(i);
    double coupling = 0.0;
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) row += problem.coupling(i, j) * x(j);
        coupling += x(i) * row;
    }
    return u - eps * coupling;
}

Vec grad_Uc(const IsingProblem& problem, double p, double eps, const Vec& x) {
    const int n = problem.n();
    Vec g(n);
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) row += problem.coupling(i, j) * x(j);
        g(i) = x(i) * x(i) * x(i) + (1.0 - p) * x(i) - 2.0 * eps * row;
    }
    return g;
}

namespace {

Trajectory integrate_gradient_flow(int dim, const std::function<Vec(const Vec&)>& minus_grad,
                                   const std::function<double(const Vec&)>& potential,
                                   const Vec& init, double dt, double t_max, int record_stride,
                                   double bound) {
    if (init.size() != dim) throw DimensionError("gradient flow: init dimension mismatch");
    if (!(dt > 0.0)) throw ValidationError("gradient flow: dt must be positive");

    Vec x = init;
    const long long steps = static_cast<long long>(std::ceil(t_max / dt - 1e-12));

    Trajectory traj;
    traj.dt = dt;
    traj.integrator = Integrator::RK4;

    auto record = [&](long long k) {
        traj.samples.push_back({k * dt, 0.0, potential(x), x, Vec()});
    };
    record(0);

    for (long long k = 0; k < steps; ++k) {
        Vec k1 = minus_grad(x);
        Vec k2 = minus_grad(x + 0.5 * dt * k1);
        Vec k3 = minus_grad(x + 0.5 * dt * k2);
        Vec k4 = minus_grad(x + dt * k3);
        x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!x.allFinite() || x.cwiseAbs().maxCoeff() > bound) {
            std::ostringstream os;
            os << "gradient flow blew up at t = " << (k + 1) * dt;
            throw BlowUpError(os.str(), (k + 1) * dt);
        }
        const long long k1i = k + 1;
        if (k1i % record_stride == 0 || k1i == steps) record(k1i);
    }
    return traj;
}

}  // namespace

Trajectory integrate_gradient_cim(const IsingProblem& problem, double p, double eps,
                                  const Vec& init, double dt, double t_max, int record_stride) {
    const double bound = 10.0 * (1.0 + std::sqrt(std::max(p, 1.0)));
    return integrate_gradient_flow(
        problem.n(), [&](const Vec& x) { return (-grad_Uc(problem, p, eps, x)).eval(); },
        [&](const Vec& x) { return eval_Uc(problem, p, eps, x); }, init, dt, t_max, record_stride,
        bound);
}

// --- DOPO ------------------------------------------------------------------------

double eval_Ud(const IsingProblem& problem, double p, const Vec& c, const Vec& s) {
    const int n = problem.n();
    double u = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r2 = c(i) * c(i) + s(i) * s(i);
        u += 0.25 * r2 * r2 - 0.5 * p * (c(i) * c(i) - s(i) * s(i)) + 0.5 * r2;
    }
    double cc = 0.0, ss = 0.0;
    for (int i = 0; i < n; ++i) {
        double rc = 0.0, rs = 0.0;
        for (int j = 0; j < n; ++j) {
            rc += problem.coupling(i, j) * c(j);
            rs += problem.coupling(i, j) * s(j);
        }
        cc += c(i) * rc;
        ss += s(i) * rs;
    }
    return u - 0.5 * cc - 0.5 * ss;
}

Vec grad_Ud(const IsingProblem& problem, double p, const Vec& cs) {
    const int n = problem.n();
    if (cs.size() != 2 * n) throw DimensionError("grad_Ud: expected a stacked (c, s) vector");
    Vec g(2 * n);
    for (int i = 0; i < n; ++i) {
        double rc = 0.0, rs = 0.0;
        for (int j = 0; j < n; ++j) {
            rc += problem.coupling(i, j) * cs(j);
            rs += problem.coupling(i, j) * cs(n + j);
        }
        const double r2 = cs(i) * cs(i) + cs(n + i) * cs(n + i);
        g(i) = (r2 - p + 1.0) * cs(i) - rc;
        g(n + i) = (r2 + p + 1.0) * cs(n + i) - rs;
    }
    return g;
}

Mat hess_Ud(const IsingProblem& problem, double p, const Vec& cs) {
    const int n = problem.n();
    if (cs.size() != 2 * n) throw DimensionError("hess_Ud: expected a stacked (c, s) vector");
    Mat h = Mat::Zero(2 * n, 2 * n);
    h.topLeftCorner(n, n) = -problem.coupling();
    h.bottomRightCorner(n, n) = -problem.coupling();
    for (int i = 0; i < n; ++i) {
        const double ci = cs(i), si = cs(n + i);
        const double r2 = ci * ci + si * si;
        h(i, i) += r2 + 2.0 * ci * ci - p + 1.0;
        h(n + i, n + i) += r2 + 2.0 * si * si + p + 1.0;
        h(i, n + i) += 2.0 * ci * si;
        h(n + i, i) += 2.0 * ci * si;
    }
    return h;
}

Trajectory integrate_dopo(const IsingProblem& problem, double p, const Vec& init_c,
                          const Vec& init_s, double dt, double t_max, int record_stride) {
    const int n = problem.n();
    if (init_c.size() != n || init_s.size() != n)
        throw DimensionError("integrate_dopo: init dimension mismatch");
    Vec cs(2 * n);
    cs.head(n) = init_c;
    cs.tail(n) = init_s;

    const double bound = 10.0 * (1.0 + std::sqrt(std::max(p, 1.0)));
    Trajectory traj = integrate_gradient_flow(
        2 * n, [&](const Vec& z) { return (-grad_Ud(problem, p, z)).eval(); },
        [&](const Vec& z) { return eval_Ud(problem, p, z.head(n), z.tail(n)); }, cs, dt, t_max,
        record_stride, bound);

    // Split the stacked state back into (c, s) for callers.
    for (auto& sample : traj.samples) {
        Vec full = sample.x;
        sample.x = full.head(n);
        sample.y = full.tail(n);
    }
    return traj;
}

}  // namespace isingflow
