#include "isingflow/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace isingflow {

const char* to_string(CouplingDistribution d) {
    switch (d) {
        case CouplingDistribution::UniformPM1: return "uniform";
        case CouplingDistribution::Gaussian: return "gaussian";
        case CouplingDistribution::SpinGlassPM1: return "pm1";
    }
    return "?";
}

CouplingDistribution coupling_distribution_from_string(const std::string& s) {
    if (s == "uniform") return CouplingDistribution::UniformPM1;
    if (s == "gaussian") return CouplingDistribution::Gaussian;
    if (s == "pm1") return CouplingDistribution::SpinGlassPM1;
    throw ValidationError("unknown coupling distribution: " + s);
}

const char* to_string(BenchSolver s) {
    switch (s) {
        case BenchSolver::SB: return "sb";
        case BenchSolver::CIM: return "cim";
        case BenchSolver::DOPO: return "dopo";
        case BenchSolver::KPO: return "kpo";
    }
    return "?";
}

BenchSolver bench_solver_from_string(const std::string& s) {
    if (s == "sb") return BenchSolver::SB;
    if (s == "cim") return BenchSolver::CIM;
    if (s == "dopo") return BenchSolver::DOPO;
    if (s == "kpo") return BenchSolver::KPO;
    throw ValidationError("unknown solver: " + s);
}

IsingProblem random_instance(const InstanceSpec& spec) {
    if (spec.n < 1) throw ValidationError("random_instance: n must be >= 1");
    if (!(spec.density > 0.0) || spec.density > 1.0)
        throw ValidationError("random_instance: density must lie in (0, 1]");

    std::mt19937_64 gen(spec.seed);
    Mat s = Mat::Zero(spec.n, spec.n);
    for (int i = 0; i < spec.n; ++i) {
        for (int j = i + 1; j < spec.n; ++j) {
            const bool present = uniform01(gen) < spec.density;
            double value = 0.0;
            switch (spec.distribution) {
                case CouplingDistribution::UniformPM1:
                    value = uniform_range(gen, -1.0, 1.0);
                    break;
                case CouplingDistribution::Gaussian:
                    value = normal01(gen);
                    break;
                case CouplingDistribution::SpinGlassPM1:
                    value = uniform01(gen) < 0.5 ? -1.0 : 1.0;
                    break;
            }
            if (present) {
                s(i, j) = value;
                s(j, i) = value;
            }
        }
    }
    return IsingProblem::from_dense(s);
}

namespace {

SpinConfig readout(const Vec& x, std::uint64_t seed) {
    SignVector sv = sign_vector(x);
    if (!has_zero_sign(sv)) return SpinConfig(sv.begin(), sv.end());
    // Deterministic zero-breaking for the gradient/KPO flows.
    std::mt19937_64 gen(mix_seed(seed, 0xF11Bu));
    SpinConfig cfg(sv.begin(), sv.end());
    for (auto& v : cfg)
        if (v == 0) v = uniform01(gen) < 0.5 ? -1 : 1;
    return cfg;
}

BenchRun run_one(const IsingProblem& problem, const BenchConfig& config, std::uint64_t run_seed) {
    BenchRun run;
    const auto t0 = std::chrono::steady_clock::now();

    switch (config.solver) {
        case BenchSolver::SB: {
            SolveConfig sc = config.sb;
            sc.seed = run_seed;
            SolveResult res = solve(problem, sc);
            run.solver_energy = energy(problem, res.config);
            run.captured = res.captured;
            run.capture_time = res.captured ? res.capture_time : 0.0;
            break;
        }
        case BenchSolver::CIM: {
            const double p = 1.0 + std::pow(default_alpha_inf(problem, 1.0, config.sb.enum_cap), 2.0);
            std::mt19937_64 gen(run_seed);
            Vec x0(problem.n());
            for (int i = 0; i < problem.n(); ++i) x0(i) = uniform_range(gen, -0.1, 0.1);
            Trajectory traj =
                integrate_gradient_cim(problem, p, 0.5, x0, config.sb.dt, config.sb.t_max);
            run.solver_energy = energy(problem, readout(traj.samples.back().x, run_seed));
            break;
        }
        case BenchSolver::DOPO: {
            const double p = std::max(problem.max_eigenvalue() + 2.0,
                                      std::pow(default_alpha_inf(problem, 1.0, config.sb.enum_cap), 2.0));
            std::mt19937_64 gen(run_seed);
            Vec c0(problem.n()), s0(problem.n());
            for (int i = 0; i < problem.n(); ++i) {
                c0(i) = uniform_range(gen, -0.1, 0.1);
                s0(i) = uniform_range(gen, -0.1, 0.1);
            }
            Trajectory traj = integrate_dopo(problem, p, c0, s0, config.sb.dt, config.sb.t_max);
            run.solver_energy = energy(problem, readout(traj.samples.back().x, run_seed));
            break;
        }
        case BenchSolver::KPO: {
            const double p_end = std::max(problem.max_eigenvalue() + 2.0,
                                          std::pow(default_alpha_inf(problem, 1.0, config.sb.enum_cap), 2.0));
            Schedule ramp = Schedule::linear(0.0, p_end, config.sb.ramp_time);
            std::mt19937_64 gen(run_seed);
            State init;
            init.x = Vec(problem.n());
            init.y = Vec(problem.n());
            for (int i = 0; i < problem.n(); ++i) {
                init.x(i) = uniform_range(gen, -0.1, 0.1);
                init.y(i) = uniform_range(gen, -0.1, 0.1);
            }
            Trajectory traj =
                integrate_kpo(problem, 1.0, 1.0, 1.0, ramp, init, config.sb.dt, config.sb.t_max);
            run.solver_energy = energy(problem, readout(traj.samples.back().x, run_seed));
            break;
        }
    }

    run.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return run;
}

}  // namespace

BenchResult run_campaign(const std::vector<InstanceSpec>& specs, const BenchConfig& config,
                         int runs_per_instance) {
    if (runs_per_instance < 1) throw ValidationError("run_campaign: runs_per_instance must be >= 1");

    BenchResult result;
    int successes = 0;
    for (const auto& spec : specs) {
        if (spec.n > config.oracle_cap)
            throw Error("run_campaign: instance exceeds the oracle cap");
        IsingProblem problem = random_instance(spec);
        OracleResult oracle = brute_force(problem, config.oracle_cap);

        for (int r = 0; r < runs_per_instance; ++r) {
            const std::uint64_t run_seed = mix_seed(config.master_seed, spec.seed, r);
            BenchRun run = run_one(problem, config, run_seed);
            run.instance_seed = spec.seed;
            run.run_index = r;
            run.oracle_min_energy = oracle.min_energy;
            run.success = (run.solver_energy == oracle.min_energy);
            successes += run.success ? 1 : 0;
            result.per_instance.push_back(run);
        }
    }

    result.success_rate =
        static_cast<double>(successes) / static_cast<double>(result.per_instance.size());

    std::vector<double> times;
    for (const auto& run : result.per_instance)
        if (run.captured) times.push_back(run.capture_time);
    if (!times.empty()) {
        std::sort(times.begin(), times.end());
        for (double q : {0.1, 0.5, 0.9}) {
            const auto idx = static_cast<size_t>(q * (times.size() - 1) + 0.5);
            result.capture_time_percentiles.push_back(times[idx]);
        }
    }
    return result;
}

}  // namespace isingflow
