// isingflow command line: landscape analysis, dynamical-system runs, the
// capture stopping rule, and the solver-vs-oracle benchmark.
//
// Exit codes: 0 success (solve: captured), 2 usage or input error,
// 3 solver finished uncaptured, 4 numeric blow-up.

#include "isingflow/bench.hpp"
#include "isingflow/io.hpp"
#include "isingflow/solver.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace isingflow;

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write file: " + path);
    return out;
}

int cmd_oracle(const std::string& problem_path, int cap) {
    IsingProblem problem = load_problem(problem_path);
    OracleResult oracle = brute_force(problem, cap);
    std::cout << "min_energy " << format_double(oracle.min_energy) << "\n";
    for (const auto& v : oracle.minimizers) {
        for (size_t i = 0; i < v.size(); ++i) std::cout << (i ? " " : "") << v[i];
        std::cout << "\n";
    }
    return 0;
}

int cmd_solve(const std::string& problem_path, SolveConfig config, bool have_alpha,
              double alpha_inf, const std::string& trace_out) {
    IsingProblem problem = load_problem(problem_path);
    if (have_alpha) config.alpha_inf = alpha_inf;
    SolveResult res = solve(problem, config);

    for (size_t i = 0; i < res.config.size(); ++i)
        std::cout << (i ? " " : "") << res.config[i];
    std::cout << "\n";
    std::cerr << "energy " << format_double(energy(problem, res.config)) << ", alpha_inf "
              << format_double(res.alpha_inf)
              << (res.captured ? ", captured at t = " + format_double(res.capture_time)
                               : ", uncaptured at t_max")
              << "\n";
    if (!trace_out.empty()) write_trace_csv(trace_out, res.trajectory, problem.n());
    return res.captured ? 0 : 3;
}

int cmd_landscape(const std::string& problem_path, double beta, double alpha,
                  const std::string& json_out, const std::string& csv_out,
                  const std::string& grid_out, const std::string& hill_out, double hill_level,
                  bool have_hill_level, double extent, int grid_n, int seed_cap) {
    IsingProblem problem = load_problem(problem_path);
    PotentialParams params(alpha, beta, problem);
    LandscapeOptions opts;
    opts.seed_cap = seed_cap;
    LandscapeSummary summary = find_critical_points(params, opts);

    std::string json = landscape_to_json(summary, alpha, beta);
    if (json_out.empty())
        std::cout << json;
    else
        open_out(json_out) << json;
    if (!csv_out.empty()) {
        auto os = open_out(csv_out);
        write_landscape_csv(os, summary);
    }
    if (!grid_out.empty()) {
        auto os = open_out(grid_out);
        write_grid_csv(os, problem, beta, alpha, extent, grid_n);
    }
    if (!hill_out.empty()) {
        double level = have_hill_level ? hill_level : (summary.U_s ? *summary.U_s : 0.0);
        auto os = open_out(hill_out);
        write_hill_mask_csv(os, problem, beta, alpha, level, extent, grid_n);
    }
    return 0;
}

int cmd_trace(const std::string& problem_path, const std::string& system, double beta,
              double alpha_start, double alpha_inf, double ramp_time, double dt, double t_max,
              std::uint64_t seed, int stride, const std::string& out, double p, double eps) {
    IsingProblem problem = load_problem(problem_path);
    const int n = problem.n();
    std::mt19937_64 gen(seed);
    Vec x0(n), y0(n);
    for (int i = 0; i < n; ++i) {
        x0(i) = uniform_range(gen, -0.1, 0.1);
        y0(i) = uniform_range(gen, -0.1, 0.1);
    }

    Trajectory traj;
    std::vector<int> in_capture;
    if (system == "sb") {
        Schedule schedule = Schedule::linear(alpha_start, alpha_inf, ramp_time);
        traj = integrate_sb(problem, beta, schedule, {x0, Vec::Zero(n), 0.0}, dt, t_max, stride);
        traj.seed = seed;
        try {
            CaptureContext ctx = CaptureContext::make(problem, beta, alpha_inf);
            for (const auto& s : traj.samples) {
                CaptureReport rep = capture_test(ctx, {s.x, s.y, s.t}, s.alpha);
                in_capture.push_back(rep.in_capture ? 1 : 0);
            }
        } catch (const Error& e) {
            std::cerr << "capture column disabled: " << e.what() << "\n";
            in_capture.assign(traj.samples.size(), 0);
        }
    } else if (system == "cim") {
        traj = integrate_gradient_cim(problem, p, eps, x0, dt, t_max, stride);
    } else if (system == "dopo") {
        traj = integrate_dopo(problem, p, x0, y0, dt, t_max, stride);
    } else if (system == "kpo") {
        Schedule ramp = Schedule::linear(0.0, p, ramp_time);
        traj = integrate_kpo(problem, 1.0, 1.0, 1.0, ramp, {x0, y0, 0.0}, dt, t_max, stride);
    } else {
        throw ValidationError("unknown system: " + system);
    }

    if (out.empty())
        write_trace_csv(std::cout, traj, n, in_capture.empty() ? nullptr : &in_capture);
    else
        write_trace_csv(out, traj, n, in_capture.empty() ? nullptr : &in_capture);
    return 0;
}

int cmd_capture(const std::string& problem_path, const std::string& trace_path, double beta,
                double alpha_inf) {
    IsingProblem problem = load_problem(problem_path);
    Trajectory traj = read_trace_csv(trace_path, problem.n());
    CaptureContext ctx = CaptureContext::make(problem, beta, alpha_inf);
    std::cout << capture_report_csv_header() << "\n";
    for (const auto& s : traj.samples) {
        CaptureReport rep = capture_test(ctx, {s.x, s.y, s.t}, s.alpha);
        std::cout << capture_report_csv_row(rep) << "\n";
    }
    return 0;
}

int cmd_bench(int n, int count, const std::string& dist, double density, std::uint64_t seed,
              int runs, const std::string& solver, double beta, double dt, double t_max,
              const std::string& csv_out, const std::string& json_out) {
    std::vector<InstanceSpec> specs;
    for (int i = 0; i < count; ++i)
        specs.push_back({n, coupling_distribution_from_string(dist), density,
                         mix_seed(seed, 0xBE9C4ULL, static_cast<std::uint64_t>(i))});

    BenchConfig config;
    config.solver = bench_solver_from_string(solver);
    config.master_seed = seed;
    config.sb.beta = beta;
    config.sb.dt = dt;
    config.sb.t_max = t_max;

    BenchResult result = run_campaign(specs, config, runs);

    if (csv_out.empty())
        write_bench_csv(std::cout, result);
    else {
        auto os = open_out(csv_out);
        write_bench_csv(os, result);
    }
    std::string summary = bench_summary_json(result);
    if (json_out.empty())
        std::cout << summary;
    else
        open_out(json_out) << summary;

    double wall = 0.0;
    for (const auto& r : result.per_instance) wall += r.wall_seconds;
    std::cerr << "total solver wall time " << format_double(wall) << " s\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ising minimization via bifurcation dynamics, landscape analysis and capture"};
    app.require_subcommand(1);
    app.set_config("--config");

    std::string problem_path, out, json_out, csv_out, grid_out, hill_out, trace_path;
    std::string system = "sb", dist = "uniform", solver = "sb";
    double beta = 1.0, alpha = 5.0, alpha_start = 0.0, alpha_inf = 0.0, ramp_time = 10.0;
    double dt = 1e-2, t_max = 20.0, density = 1.0, extent = 0.0, hill_level = 0.0;
    double p = 10.0, eps = 0.5, eta = 1e-4;
    std::uint64_t seed = 0;
    int cap = 24, seed_cap = 16, grid_n = 201, n = 8, count = 10, runs = 1, stride = 10;

    auto* oracle = app.add_subcommand("oracle", "exact brute-force minimum and all minimizers");
    oracle->add_option("--problem", problem_path, "problem JSON path")->required();
    oracle->add_option("--cap", cap, "enumeration cap on n")->capture_default_str();

    auto* solve_cmd = app.add_subcommand("solve", "ramped run with the capture stopping rule");
    SolveConfig scfg;
    solve_cmd->add_option("--problem", problem_path, "problem JSON path")->required();
    solve_cmd->add_option("--beta", scfg.beta, "detuning constant")->capture_default_str();
    auto* alpha_opt = solve_cmd->add_option("--alpha-inf", alpha_inf, "pump saturation value");
    solve_cmd->add_option("--ramp-time", scfg.ramp_time, "ramp duration")->capture_default_str();
    solve_cmd->add_option("--dt", scfg.dt, "integration step")->capture_default_str();
    solve_cmd->add_option("--t-max", scfg.t_max, "time limit")->capture_default_str();
    solve_cmd->add_option("--seed", seed, "init seed")->capture_default_str();
    solve_cmd->add_option("--trace-out", out, "write the trajectory CSV here");

    auto* landscape = app.add_subcommand("landscape", "enumerate and classify critical points");
    landscape->add_option("--problem", problem_path, "problem JSON path")->required();
    landscape->add_option("--beta", beta, "detuning constant")->capture_default_str();
    landscape->add_option("--alpha", alpha, "pump value")->capture_default_str();
    landscape->add_option("--json-out", json_out, "landscape JSON path (default stdout)");
    landscape->add_option("--csv-out", csv_out, "critical-point CSV path");
    landscape->add_option("--grid-out", grid_out, "n=2 contour grid CSV path");
    landscape->add_option("--hill-out", hill_out, "n=2 Hill-region mask CSV path");
    auto* hill_opt = landscape->add_option("--hill-level", hill_level, "Hill level c (default U_s)");
    landscape->add_option("--extent", extent, "grid half-width (default 1.5*alpha)");
    landscape->add_option("--grid-n", grid_n, "grid samples per axis")->capture_default_str();
    landscape->add_option("--seed-cap", seed_cap, "3^n seed cap")->capture_default_str();

    auto* trace = app.add_subcommand("trace", "integrate one system and emit the trajectory CSV");
    trace->add_option("--problem", problem_path, "problem JSON path")->required();
    trace->add_option("--system", system, "sb|cim|dopo|kpo")->capture_default_str();
    trace->add_option("--beta", beta, "detuning constant (sb)")->capture_default_str();
    trace->add_option("--alpha-start", alpha_start, "ramp start")->capture_default_str();
    trace->add_option("--alpha-inf", alpha_inf, "ramp target (sb)")->capture_default_str();
    trace->add_option("--ramp-time", ramp_time, "ramp duration")->capture_default_str();
    trace->add_option("--p", p, "pump value (cim/dopo) or target (kpo)")->capture_default_str();
    trace->add_option("--eps", eps, "coupling strength (cim)")->capture_default_str();
    trace->add_option("--dt", dt, "integration step")->capture_default_str();
    trace->add_option("--t-max", t_max, "time limit")->capture_default_str();
    trace->add_option("--seed", seed, "init seed")->capture_default_str();
    trace->add_option("--stride", stride, "record stride")->capture_default_str();
    trace->add_option("--out", out, "CSV path (default stdout)");

    auto* capture = app.add_subcommand("capture", "replay a trace CSV through the capture test");
    capture->add_option("--problem", problem_path, "problem JSON path")->required();
    capture->add_option("--trace", trace_path, "trace CSV path")->required();
    capture->add_option("--beta", beta, "detuning constant")->capture_default_str();
    capture->add_option("--alpha-inf", alpha_inf, "schedule saturation value")->required();

    auto* neck = app.add_subcommand("neck", "linearization at the 2-spin saddle");
    neck->add_option("--beta", beta, "detuning constant")->capture_default_str();
    neck->add_option("--alpha", alpha, "pump value")->capture_default_str();
    neck->add_option("--eta", eta, "|eta| for the periodic-orbit prediction")->capture_default_str();

    auto* bifurcate = app.add_subcommand("bifurcate", "closed-form 2-spin critical points");
    bifurcate->add_option("--beta", beta, "detuning constant")->capture_default_str();
    bifurcate->add_option("--alpha", alpha, "pump value")->capture_default_str();

    auto* bench = app.add_subcommand("bench", "random-instance solver-vs-oracle campaign");
    bench->add_option("--n", n, "spins per instance")->capture_default_str();
    bench->add_option("--count", count, "number of instances")->capture_default_str();
    bench->add_option("--dist", dist, "uniform|gaussian|pm1")->capture_default_str();
    bench->add_option("--density", density, "coupling density in (0,1]")->capture_default_str();
    bench->add_option("--seed", seed, "master seed")->capture_default_str();
    bench->add_option("--runs", runs, "runs per instance")->capture_default_str();
    bench->add_option("--solver", solver, "sb|cim|dopo|kpo")->capture_default_str();
    bench->add_option("--beta", beta, "detuning constant")->capture_default_str();
    bench->add_option("--dt", dt, "integration step")->capture_default_str();
    bench->add_option("--t-max", t_max, "time limit")->capture_default_str();
    bench->add_option("--csv-out", csv_out, "per-run CSV path (default stdout)");
    bench->add_option("--json-out", json_out, "summary JSON path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (oracle->parsed()) return cmd_oracle(problem_path, cap);
        if (solve_cmd->parsed())
            return cmd_solve(problem_path, scfg, !alpha_opt->empty(), alpha_inf, out);
        if (landscape->parsed()) {
            if (extent == 0.0) extent = 1.5 * alpha;
            return cmd_landscape(problem_path, beta, alpha, json_out, csv_out, grid_out, hill_out,
                                 hill_level, !hill_opt->empty(), extent, grid_n, seed_cap);
        }
        if (trace->parsed())
            return cmd_trace(problem_path, system, beta, alpha_start,
                             alpha_inf > 0.0 ? alpha_inf : 5.0, ramp_time, dt, t_max, seed, stride,
                             out, p, eps);
        if (capture->parsed()) return cmd_capture(problem_path, trace_path, beta, alpha_inf);
        if (neck->parsed()) {
            NeckAnalysis analysis = neck_linearize(beta, alpha);
            std::cout << neck_to_json(analysis);
            EllipsePrediction ep = periodic_orbit_ellipse(analysis, eta);
            std::cerr << "periodic-orbit prediction: axes " << format_double(ep.major) << " x "
                      << format_double(ep.minor) << "\n";
            return 0;
        }
        if (bifurcate->parsed()) {
            std::cout << r2_closed_form_to_json(r2_closed_form(alpha, beta));
            return 0;
        }
        if (bench->parsed())
            return cmd_bench(n, count, dist, density, seed, runs, solver, beta, dt, t_max, csv_out,
                             json_out);
    } catch (const BlowUpError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
