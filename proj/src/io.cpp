#include "isingflow/io.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace isingflow {

using nlohmann::json;

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc())
        throw Error("format_double: conversion failed");
    return std::string(buf, ptr);
}

namespace {

json parse_json_text(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::ostringstream os;
        os << origin << ": " << e.what();  // nlohmann reports the byte position
        throw ValidationError(os.str());
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

IsingProblem parse_problem(const std::string& json_text) {
    json j = parse_json_text(json_text, "problem JSON");
    if (!j.is_object() || !j.contains("n"))
        throw ValidationError("problem JSON must be an object with an \"n\" field");
    const int n = j.at("n").get<int>();
    if (n < 1) throw ValidationError("problem JSON: n must be >= 1");

    if (j.contains("coupling")) {
        const auto& rows = j.at("coupling");
        if (!rows.is_array() || static_cast<int>(rows.size()) != n)
            throw ValidationError("problem JSON: \"coupling\" must be an n x n array");
        Mat s(n, n);
        for (int i = 0; i < n; ++i) {
            const auto& row = rows.at(i);
            if (!row.is_array() || static_cast<int>(row.size()) != n)
                throw ValidationError("problem JSON: \"coupling\" must be an n x n array");
            for (int k = 0; k < n; ++k) s(i, k) = row.at(k).get<double>();
        }
        return IsingProblem::from_dense(s);
    }
    if (j.contains("edges")) {
        std::vector<std::tuple<int, int, double>> edges;
        for (const auto& e : j.at("edges"))
            edges.emplace_back(e.at("i").get<int>(), e.at("j").get<int>(), e.at("s").get<double>());
        return IsingProblem::from_edges(n, edges);
    }
    throw ValidationError("problem JSON needs either \"coupling\" or \"edges\"");
}

IsingProblem load_problem(const std::string& path) { return parse_problem(read_file(path)); }

std::string problem_to_json(const IsingProblem& problem) {
    json rows = json::array();
    for (int i = 0; i < problem.n(); ++i) {
        json row = json::array();
        for (int k = 0; k < problem.n(); ++k) row.push_back(problem.coupling(i, k));
        rows.push_back(std::move(row));
    }
    json j{{"n", problem.n()}, {"coupling", std::move(rows)}};
    return j.dump(2) + "\n";
}

void save_problem(const IsingProblem& problem, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write file: " + path);
    out << problem_to_json(problem);
}

void write_trace_csv(std::ostream& os, const Trajectory& traj, int n,
                     const std::vector<int>* in_capture) {
    os << "t,alpha,H";
    for (int i = 1; i <= n; ++i) os << ",x" << i;
    for (int i = 1; i <= n; ++i) os << ",y" << i;
    os << ",in_capture\n";
    for (size_t k = 0; k < traj.samples.size(); ++k) {
        const auto& s = traj.samples[k];
        os << format_double(s.t) << ',' << format_double(s.alpha) << ',' << format_double(s.H);
        for (int i = 0; i < n; ++i) os << ',' << format_double(s.x(i));
        for (int i = 0; i < n; ++i) os << ',' << format_double(s.y.size() == n ? s.y(i) : 0.0);
        os << ',' << (in_capture && k < in_capture->size() ? (*in_capture)[k] : 0) << '\n';
    }
}

void write_trace_csv(const std::string& path, const Trajectory& traj, int n,
                     const std::vector<int>* in_capture) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write file: " + path);
    write_trace_csv(out, traj, n, in_capture);
}

Trajectory read_trace_csv(const std::string& path, int n) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("trace CSV is empty: " + path);

    Trajectory traj;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<double> fields;
        const char* p = line.data();
        const char* end = line.data() + line.size();
        while (p < end) {
            double v = 0.0;
            auto [next, ec] = std::from_chars(p, end, v);
            if (ec != std::errc()) {
                std::ostringstream os;
                os << path << ":" << lineno << ": cannot parse number";
                throw ValidationError(os.str());
            }
            fields.push_back(v);
            p = next;
            if (p < end && *p == ',') ++p;
        }
        if (static_cast<int>(fields.size()) != 2 * n + 4) {
            std::ostringstream os;
            os << path << ":" << lineno << ": expected " << 2 * n + 4 << " columns, got "
               << fields.size();
            throw ValidationError(os.str());
        }
        TrajectorySample s;
        s.t = fields[0];
        s.alpha = fields[1];
        s.H = fields[2];
        s.x = Vec(n);
        s.y = Vec(n);
        for (int i = 0; i < n; ++i) s.x(i) = fields[3 + i];
        for (int i = 0; i < n; ++i) s.y(i) = fields[3 + n + i];
        traj.samples.push_back(std::move(s));
    }
    return traj;
}

namespace {

json vec_to_json(const Vec& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

}  // namespace

std::string landscape_to_json(const LandscapeSummary& summary, double alpha, double beta) {
    json points = json::array();
    for (const auto& cp : summary.critical_points) {
        points.push_back({{"x", vec_to_json(cp.x)},
                          {"value", cp.value},
                          {"grad_norm", cp.grad_norm},
                          {"morse_index", cp.morse_index},
                          {"nullity", cp.nullity},
                          {"class", to_string(cp.cls)},
                          {"seed", cp.seed}});
    }
    json counts = json::object();
    for (const auto& [cls, count] : summary.count_by_class) counts[to_string(cls)] = count;
    json j{{"alpha", alpha},
           {"beta", beta},
           {"points", std::move(points)},
           {"count_by_class", std::move(counts)},
           {"failed_seeds", summary.failed_seeds},
           {"collided_seed_count", summary.collided_seeds.size()}};
    j["U_s"] = summary.U_s ? json(*summary.U_s) : json(nullptr);
    j["U_M"] = summary.U_M ? json(*summary.U_M) : json(nullptr);
    return j.dump(2) + "\n";
}

void write_landscape_csv(std::ostream& os, const LandscapeSummary& summary) {
    if (summary.critical_points.empty()) {
        os << "U,morse_index,class\n";
        return;
    }
    const int n = static_cast<int>(summary.critical_points.front().x.size());
    for (int i = 1; i <= n; ++i) os << "x" << i << ',';
    os << "U,morse_index,class\n";
    for (const auto& cp : summary.critical_points) {
        for (int i = 0; i < n; ++i) os << format_double(cp.x(i)) << ',';
        os << format_double(cp.value) << ',' << cp.morse_index << ',' << to_string(cp.cls) << '\n';
    }
}

void write_grid_csv(std::ostream& os, const IsingProblem& problem, double beta, double alpha,
                    double extent, int samples_per_axis) {
    if (problem.n() != 2) throw ValidationError("grid CSV is only defined for n = 2");
    os << "x1,x2,U\n";
    const int m = samples_per_axis;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            const double x1 = -extent + 2.0 * extent * i / (m - 1);
            const double x2 = -extent + 2.0 * extent * j / (m - 1);
            const double u = eval_U(problem, beta, alpha, (Vec(2) << x1, x2).finished());
            os << format_double(x1) << ',' << format_double(x2) << ',' << format_double(u) << '\n';
        }
    }
}

void write_hill_mask_csv(std::ostream& os, const IsingProblem& problem, double beta, double alpha,
                         double c, double extent, int samples_per_axis) {
    if (problem.n() != 2) throw ValidationError("hill mask CSV is only defined for n = 2");
    os << "x1,x2,inside\n";
    const int m = samples_per_axis;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            const double x1 = -extent + 2.0 * extent * i / (m - 1);
            const double x2 = -extent + 2.0 * extent * j / (m - 1);
            const double u = eval_U(problem, beta, alpha, (Vec(2) << x1, x2).finished());
            os << format_double(x1) << ',' << format_double(x2) << ',' << (u < c ? 1 : 0) << '\n';
        }
    }
}

std::string neck_to_json(const NeckAnalysis& analysis) {
    auto cvec = [](const Eigen::Vector4cd& v) {
        json arr = json::array();
        for (int i = 0; i < 4; ++i) arr.push_back({{"re", v(i).real()}, {"im", v(i).imag()}});
        return arr;
    };
    auto rvec = [](const Eigen::Vector4d& v) {
        json arr = json::array();
        for (int i = 0; i < 4; ++i) arr.push_back(v(i));
        return arr;
    };
    json j{{"saddle", {analysis.saddle(0), analysis.saddle(1)}},
           {"mu1", analysis.mu1},
           {"mu2_im", analysis.mu2_im},
           {"u", analysis.u},
           {"v", analysis.v},
           {"e1", rvec(analysis.e1)},
           {"e2", rvec(analysis.e2)},
           {"e3", cvec(analysis.e3)},
           {"e4", cvec(analysis.e4)}};
    return j.dump(2) + "\n";
}

std::string r2_closed_form_to_json(const R2ClosedForm& form) {
    const char* regime = nullptr;
    switch (form.regime) {
        case R2Regime::OriginOnly: regime = "alpha^2 < beta-1"; break;
        case R2Regime::TwoMinima: regime = "beta-1 < alpha^2 < beta+1"; break;
        case R2Regime::TwoMinimaSaddles: regime = "beta+1 < alpha^2 < beta+2"; break;
        case R2Regime::FourMinima: regime = "alpha^2 > beta+2"; break;
    }
    json points = json::array();
    for (const auto& [x, cls] : form.points)
        points.push_back({{"x", {x(0), x(1)}}, {"class", to_string(cls)}});
    json j{{"regime", regime}, {"points", std::move(points)}};
    auto put = [&](const char* name, const std::optional<double>& v) {
        j[name] = v ? json(*v) : json(nullptr);
    };
    put("lambda1", form.lambda1);
    put("lambda2", form.lambda2);
    put("lambda3", form.lambda3);
    put("lambda4", form.lambda4);
    put("c0", form.c0);
    put("c1", form.c1);
    put("c2", form.c2);
    put("c3", form.c3);
    return j.dump(2) + "\n";
}

std::string capture_report_csv_header() {
    return "t,H,U_R0,U_B,r0,norm_sq,b5,premature,in_capture";
}

std::string capture_report_csv_row(const CaptureReport& r) {
    std::ostringstream os;
    os << format_double(r.t) << ',' << format_double(r.H) << ',' << format_double(r.U_R0) << ','
       << format_double(r.U_B) << ',' << format_double(r.r0) << ',' << format_double(r.norm_sq)
       << ',' << format_double(r.b5_estimate) << ',' << (r.premature ? 1 : 0) << ','
       << (r.in_capture ? 1 : 0);
    return os.str();
}

void write_bench_csv(std::ostream& os, const BenchResult& result) {
    os << "instance_seed,run,oracle_min_E,solver_E,success,captured,capture_time\n";
    for (const auto& run : result.per_instance) {
        os << run.instance_seed << ',' << run.run_index << ','
           << format_double(run.oracle_min_energy) << ',' << format_double(run.solver_energy)
           << ',' << (run.success ? 1 : 0) << ',' << (run.captured ? 1 : 0) << ','
           << format_double(run.capture_time) << '\n';
    }
}

std::string bench_summary_json(const BenchResult& result) {
    int captured = 0;
    for (const auto& run : result.per_instance) captured += run.captured ? 1 : 0;
    json j{{"runs", result.per_instance.size()},
           {"success_rate", result.success_rate},
           {"captured", captured}};
    if (!result.capture_time_percentiles.empty()) {
        j["capture_time_p10"] = result.capture_time_percentiles[0];
        j["capture_time_p50"] = result.capture_time_percentiles[1];
        j["capture_time_p90"] = result.capture_time_percentiles[2];
    }
    return j.dump(2) + "\n";
}

}  // namespace isingflow
