#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "linexp3/environment.hpp"
#include "linexp3/evaluation.hpp"

namespace linexp3 {

struct CheckResult {
    std::string name;
    bool pass = false;
    double lhs = 0.0;  // measured quantity
    double rhs = 0.0;  // bound it is checked against
    std::string detail;
};

struct BenchmarkEnv {
    ContextDistribution dist;
    AdversarySpec adv;
};

// Standard benchmark: contexts uniform on {+-e_i} (so Sigma = I/d exactly),
// constant loss parameters with entries drawn once from the given seed,
// rescaled so losses stay in [-1, 1]. epsilon > 0 adds a sign-bump
// residual with random unit directions.
BenchmarkEnv make_benchmark(int K, int d, int T, std::uint64_t seed,
                            double epsilon = 0.0);

// Variant with contexts on {e_i} and positive parameter entries, keeping
// losses inside an interval of length at most one. Used for the
// full-information and counterfactual baselines, whose bounds assume that
// loss range.
BenchmarkEnv make_nonneg_benchmark(int K, int d, int T, std::uint64_t seed,
                                   double epsilon = 0.0);

// Deterministic worst-case-gap benchmark: contexts uniform on {+-e_i}, one
// arm at loss -1 on the positive axes and the rest at +1. Support losses sit
// on the +-1 boundary, maximizing the per-context action gap; used by the
// regret-scaling sweep so lock-in happens inside the horizon grid.
BenchmarkEnv make_max_gap_benchmark(int K, int d, int T);

// Random non-orthogonal unit-norm support with uneven probabilities. The
// misspecification-bias checks need this: on orthonormal supports the
// ghost-sample term cancels the residual mean identically.
BenchmarkEnv make_skewed_benchmark(int K, int d, int T, std::uint64_t seed,
                                   double epsilon = 0.0);

std::vector<CheckResult> suite_estimators();
std::vector<CheckResult> suite_mgr();
std::vector<CheckResult> suite_potential();
std::vector<CheckResult> suite_bounds();

// Dispatch on {estimators, mgr, potential, bounds, all}; throws
// UnknownSuite otherwise.
std::vector<CheckResult> verify_suite(const std::string& name);

std::string format_check(const CheckResult& check);

}  // namespace linexp3
