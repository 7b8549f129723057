#pragma once

#include "isingflow/bench.hpp"
#include "isingflow/capture.hpp"

#include <iosfwd>
#include <string>

namespace isingflow {

/// Shortest round-trip decimal form of a double (locale-independent).
std::string format_double(double value);

/// Problem JSON: {"n": int, "coupling": [[...]]} dense, or
/// {"n": int, "edges": [{"i":…, "j":…, "s":…}, …]} sparse.
IsingProblem load_problem(const std::string& path);
IsingProblem parse_problem(const std::string& json_text);
void save_problem(const IsingProblem& problem, const std::string& path);
std::string problem_to_json(const IsingProblem& problem);

/// Trace CSV: header t,alpha,H,x1..xn,y1..yn,in_capture.  `in_capture`
/// entries default to 0 when no capture flags are supplied.
void write_trace_csv(std::ostream& os, const Trajectory& traj, int n,
                     const std::vector<int>* in_capture = nullptr);
void write_trace_csv(const std::string& path, const Trajectory& traj, int n,
                     const std::vector<int>* in_capture = nullptr);
Trajectory read_trace_csv(const std::string& path, int n);

std::string landscape_to_json(const LandscapeSummary& summary, double alpha, double beta);
void write_landscape_csv(std::ostream& os, const LandscapeSummary& summary);

/// n = 2 grids for contour plotting: rows x1,x2,U.
void write_grid_csv(std::ostream& os, const IsingProblem& problem, double beta, double alpha,
                    double extent, int samples_per_axis);
/// Hill-region mask at level c: rows x1,x2,inside.
void write_hill_mask_csv(std::ostream& os, const IsingProblem& problem, double beta, double alpha,
                         double c, double extent, int samples_per_axis);

std::string neck_to_json(const NeckAnalysis& analysis);
std::string r2_closed_form_to_json(const R2ClosedForm& form);
std::string capture_report_csv_header();
std::string capture_report_csv_row(const CaptureReport& report);

/// Reproducible bench outputs: wall-clock fields are deliberately excluded.
void write_bench_csv(std::ostream& os, const BenchResult& result);
std::string bench_summary_json(const BenchResult& result);

}  // namespace isingflow
