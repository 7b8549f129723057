#pragma once

#include "isingflow/solver.hpp"

#include <string>
#include <vector>

namespace isingflow {

enum class CouplingDistribution { UniformPM1, Gaussian, SpinGlassPM1 };

const char* to_string(CouplingDistribution d);
CouplingDistribution coupling_distribution_from_string(const std::string& s);

struct InstanceSpec {
    int n = 2;
    CouplingDistribution distribution = CouplingDistribution::UniformPM1;
    double density = 1.0;  // probability each upper-triangle entry is nonzero
    std::uint64_t seed = 0;
};

/// Symmetric zero-diagonal coupling matrix, deterministic per seed.
IsingProblem random_instance(const InstanceSpec& spec);

enum class BenchSolver { SB, CIM, DOPO, KPO };

const char* to_string(BenchSolver s);
BenchSolver bench_solver_from_string(const std::string& s);

struct BenchRun {
    std::uint64_t instance_seed = 0;
    int run_index = 0;
    double oracle_min_energy = 0.0;
    double solver_energy = 0.0;
    bool success = false;  // exact equality of spin energies
    bool captured = false;
    double capture_time = 0.0;  // simulation time, 0 when not captured
    double wall_seconds = 0.0;  // never serialized into reproducible outputs
};

struct BenchResult {
    std::vector<BenchRun> per_instance;
    double success_rate = 0.0;
    // percentiles over captured runs' capture times (p10/p50/p90); empty if none
    std::vector<double> capture_time_percentiles;
};

struct BenchConfig {
    BenchSolver solver = BenchSolver::SB;
    SolveConfig sb;  // also carries beta/dt/t_max defaults for the other flows
    int oracle_cap = 24;
    std::uint64_t master_seed = 0;
};

/// Solve every (instance, run) pair and compare against the exact oracle.
/// Deterministic given the master seed; wall times are measured but excluded
/// from reproducible serializations.
BenchResult run_campaign(const std::vector<InstanceSpec>& specs, const BenchConfig& config,
                         int runs_per_instance);

}  // namespace isingflow
