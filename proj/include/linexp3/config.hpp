#pragma once

#include <optional>
#include <string>

#include "linexp3/environment.hpp"
#include "linexp3/evaluation.hpp"

namespace linexp3 {

// A hyperparameter that is either a fixed value or resolved by the
// theorem-driven tuner before any run.
struct AutoParam {
    bool is_auto = true;
    double value = 0.0;
};

struct ExperimentConfig {
    Algorithm algorithm = Algorithm::RobustLinExp3;
    int K = 0;
    int d = 0;
    int T = 0;
    std::uint64_t seed = 0;
    int replications = 8;
    AutoParam eta, gamma, beta, M;
    MgrMode mgr_mode = MgrMode::Fast;
    bool exact_regret = false;
    std::string output = "results.csv";

    ContextDistribution distribution;
    AdversarySpec adversary;
};

// Flat "key = value" text, '#' comments, dotted keys for the nested
// environment and adversary blocks. Unknown keys are rejected.
ExperimentConfig parse_config(const std::string& text);

std::string algorithm_name(Algorithm a);

}  // namespace linexp3
