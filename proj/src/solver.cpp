#include "isingflow/solver.hpp"

#include <cmath>

namespace isingflow {

double default_alpha_inf(const IsingProblem& problem, double beta, int enum_cap) {
    const int n = problem.n();
    double threshold;
    double b5;
    if (n <= enum_cap) {
        CalibrationOptions copts;
        copts.enum_cap = enum_cap;
        CalibrationResult cal = calibrate_alpha(problem, beta, copts);
        threshold = cal.alpha;
        std::vector<double> samples{1.5 * cal.alpha, 2.0 * cal.alpha};
        LandscapeOptions lo;
        lo.seed_cap = enum_cap;
        b5 = estimate_B5(problem, beta, samples, lo);
    } else {
        threshold = std::sqrt(beta + 2.0 * (1.0 + problem.spectral_radius()));
        b5 = heuristic_B5(problem, beta);
    }
    // The energy clause H <= U_B needs alpha^4/4 to clear the alpha^2 terms
    // separating the global minimum from U_B: alpha^2 >= 4 (B5 + n beta/2 + |E|).
    const double fire =
        2.0 * std::sqrt(b5 + problem.n() * beta / 2.0 + problem.abs_coupling_sum());
    return 1.1 * std::max(1.05 * threshold, fire);
}

SolveResult solve(const IsingProblem& problem, const SolveConfig& config) {
    const int n = problem.n();
    SolveResult result;
    result.alpha_inf = config.alpha_inf
                           ? *config.alpha_inf
                           : default_alpha_inf(problem, config.beta, config.enum_cap);

    Schedule schedule;
    switch (config.schedule_kind) {
        case Schedule::Kind::Constant:
            schedule = Schedule::constant(result.alpha_inf);
            break;
        case Schedule::Kind::LinearSaturating:
            schedule = Schedule::linear(config.alpha_start, result.alpha_inf, config.ramp_time);
            break;
        case Schedule::Kind::TanhSaturating:
            schedule = Schedule::tanh(config.alpha_start, result.alpha_inf, config.ramp_time);
            break;
    }

    std::optional<CaptureContext> ctx;
    if (config.use_capture)
        ctx = CaptureContext::make(problem, config.beta, result.alpha_inf, config.enum_cap);

    for (int attempt = 0; attempt < 16; ++attempt) {
        result.attempts = attempt + 1;
        std::mt19937_64 gen(mix_seed(config.seed, static_cast<std::uint64_t>(attempt)));
        State init;
        init.x = Vec(n);
        for (int i = 0; i < n; ++i)
            init.x(i) = uniform_range(gen, -config.init_amplitude, config.init_amplitude);
        init.y = Vec::Zero(n);
        init.t = 0.0;

        result.captured = false;
        SbCallback cb;
        if (ctx) {
            cb.stride = config.capture_check_stride;
            cb.fn = [&](const State& s, double alpha_t) {
                CaptureReport rep = capture_test(*ctx, s, alpha_t);
                result.last_report = rep;
                if (rep.in_capture && !result.captured) {
                    result.captured = true;
                    result.capture_time = rep.t;
                }
                return rep.in_capture;
            };
        }

        result.trajectory = integrate_sb(problem, config.beta, schedule, init, config.dt,
                                         config.t_max, config.record_stride, config.integrator, cb);
        result.trajectory.seed = config.seed;

        const Vec& final_x = result.trajectory.samples.back().x;
        SignVector sv = sign_vector(final_x);
        if (!has_zero_sign(sv)) {
            result.config = SpinConfig(sv.begin(), sv.end());
            return result;
        }
        // A zero sign is not a spin: perturb the seed and run again.
    }
    throw Error("solve: readout kept producing zero sign components after 16 re-seeded runs");
}

}  // namespace isingflow
