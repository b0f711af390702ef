#pragma once

#include <string>
#include <vector>

#include "linexp3/config.hpp"
#include "linexp3/evaluation.hpp"

namespace linexp3 {

struct ResolvedParams {
    double eta = 0.0;
    double gamma = 0.0;
    double beta = 0.0;
    int M = 0;
    bool eta_clamped = false;
    bool gamma_clamped = false;
    bool log_clamped = false;
    std::vector<std::string> warnings;
};

// "auto" entries resolved by the theorem-driven tuners; explicit values
// pass through untouched (auto values that depend on them re-clamp).
ResolvedParams resolve_params(const ExperimentConfig& cfg, const EnvironmentBounds& bounds);

struct ExperimentResult {
    RegretCurve curve;
    ResolvedParams params;
    EnvironmentBounds bounds;
    double wall_seconds = 0.0;
};

// Runs all replications (parallel over a worker pool); aggregation order
// is fixed by replication index, so results are independent of the thread
// count.
ExperimentResult run_experiment(const ExperimentConfig& cfg, int threads);

std::string curve_to_csv(const RegretCurve& curve);
std::string summary_json(const ExperimentConfig& cfg, const ExperimentResult& result);

struct SweepPoint {
    int T = 0;
    double final_regret = 0.0;
    double final_stderr = 0.0;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    double exponent = 0.0;
};

// One run per grid value of T; seeds offset by grid_index * 10^6.
SweepResult run_sweep(const ExperimentConfig& cfg, const std::vector<int>& grid,
                      int threads);

std::string sweep_to_csv(const SweepResult& sweep);

}  // namespace linexp3
