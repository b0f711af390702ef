#pragma once

#include <cstdint>
#include <vector>

#include "linexp3/environment.hpp"
#include "linexp3/learner.hpp"
#include "linexp3/mgr.hpp"

namespace linexp3 {

enum class Algorithm { RobustLinExp3, RealLinExp3, FullInfo, Counterfactual, Uniform };
enum class MgrMode { Naive, Fast };

// Deterministic comparator: x -> argmin_a <x, sum_t theta_{t,a}>, lowest
// index on ties. Depends only on the (oblivious) adversary sequence.
struct ComparatorPolicy {
    std::vector<Vector> cum_theta;  // K x d

    int decide(const Vector& x) const;
};

ComparatorPolicy comparator_policy(const AdversarySpec& adv, int T);

struct EpisodeRound {
    int t = 0;
    Vector context;
    int action = 0;
    double loss = 0.0;
    double comparator_loss = 0.0;
};

// Per-round policy and estimates, kept only when requested (verification
// needs them; experiment sweeps do not).
struct RoundTrace {
    std::vector<double> probs;
    std::vector<Vector> estimates;  // K x d
};

struct EpisodeConfig {
    Algorithm algorithm = Algorithm::RobustLinExp3;
    double eta = 0.0;
    double gamma = 0.0;
    double beta = 0.0;
    int M = 0;
    MgrMode mgr_mode = MgrMode::Fast;
    bool record_trace = false;
    // Per-round regret computed exactly over the context law (finite
    // support only); averages only over learner randomness.
    bool exact_regret = false;
};

struct RunRecord {
    std::vector<EpisodeRound> rounds;
    std::vector<double> exact_round_regret;  // empty unless exact_regret
    std::vector<RoundTrace> trace;           // empty unless record_trace
    std::uint64_t seed = 0;
    std::uint64_t replication = 0;
    std::uint64_t config_hash = 0;
};

std::uint64_t episode_config_hash(const EpisodeConfig& cfg, int K, int d, int T);

// Executes the bandit interaction for T rounds. Fully deterministic given
// (config, seed, replication): every random consumer uses its own child
// stream keyed by (seed, purpose, replication, round).
RunRecord run_episode(const ContextDistribution& dist, const AdversarySpec& adv,
                      const ComparatorPolicy& comparator,
                      const EnvironmentBounds& bounds, const EpisodeConfig& cfg,
                      std::uint64_t seed, std::uint64_t replication);

struct RegretCurve {
    std::vector<int> grid;  // powers of two up to T, plus T
    std::vector<double> mean_regret;
    std::vector<double> stderr_regret;
    std::vector<double> mean_learner_loss;
    std::vector<double> mean_comparator_loss;
    int replications = 0;
};

// Monte Carlo curve from realized losses. Throws MismatchedConfigs unless
// all records share a config hash and there are at least two of them.
RegretCurve expected_regret(const std::vector<RunRecord>& records);

// Same aggregation but regret taken from the exact per-round values.
RegretCurve expected_regret_exact(const std::vector<RunRecord>& records);

// Least-squares slope of log(regret) against log(T). Throws
// NonPositiveValue on nonpositive inputs or fewer than two points.
double slope_fit(const std::vector<std::pair<double, double>>& points);

// --- verification oracles (numerical checks of analysis-level quantities) ---

struct PotentialReport {
    bool precondition_ok = false;  // |eta <x, estimate>| < 1 throughout
    bool holds = false;
    double lhs = 0.0;
    double rhs = 0.0;
};

// Evaluates both sides of the per-context potential inequality
//   regret_at(x) <= log(K)/eta + 2 gamma U_T(x)
//                   + eta sum_t sum_a pi_t(a|x) <x, est_{t,a}>^2
// from a traced episode. Skips (precondition_ok == false) when the
// pointwise condition |eta <x, est>| < 1 failed at any round.
PotentialReport verify_potential_inequality(const RunRecord& record, double eta,
                                            double gamma,
                                            const ComparatorPolicy& comparator,
                                            const Vector& x);

// |E<X0, est_a> - E loss(X0, a)| by exact enumeration on finite support.
double robust_bias_exact(const ContextDistribution& dist, const AdversarySpec& adv,
                         int t, int arm, const SymMatrix& sigma_inv);

// E[sum_a pi(a|X0) <X0, est_a>^2] by exact enumeration on finite support;
// compare against K d / gamma.
double robust_quadratic_exact(const ContextDistribution& dist, const AdversarySpec& adv,
                              int t, const LearnerState& state,
                              const SymMatrix& sigma_inv);

// Exact expectation of the resampling estimate:
// (I - (I - beta Sigma_ta)^{M+1}) theta_ta.
Vector mgr_expected_estimate(const ContextDistribution& dist, const AdversarySpec& adv,
                             int t, int arm, const LearnerState& state,
                             const MgrConfig& cfg);

// Monte Carlo mean and standard error of sum_a pi(a|X0) <X0, est_a>^2 for
// the resampling estimator; compare against 3 K d.
std::pair<double, double> mgr_quadratic_mc(const ContextDistribution& dist,
                                           const AdversarySpec& adv, int t,
                                           const LearnerState& state,
                                           const MgrConfig& cfg, int samples,
                                           std::uint64_t seed);

}  // namespace linexp3
