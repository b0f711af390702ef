#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "linexp3/config.hpp"
#include "linexp3/experiment.hpp"

using namespace linexp3;

namespace {

const std::string kMinimal =
    "algorithm = robust_linexp3\n"
    "K = 2\n"
    "d = 2\n"
    "T = 16\n"
    "environment.kind = finite\n"
    "environment.points = 1,0; 0,1\n"
    "environment.probs = 0.5, 0.5\n"
    "adversary.kind = constant\n"
    "adversary.theta = 0.3,0; 0,-0.2\n";

}  // namespace

TEST_CASE("minimal config fills defaults") {
    const ExperimentConfig cfg = parse_config(kMinimal);
    CHECK(cfg.algorithm == Algorithm::RobustLinExp3);
    CHECK(cfg.K == 2);
    CHECK(cfg.replications == 8);
    CHECK(cfg.seed == 0);
    CHECK(cfg.eta.is_auto);
    CHECK(cfg.gamma.is_auto);
    CHECK(cfg.mgr_mode == MgrMode::Fast);
    CHECK_FALSE(cfg.exact_regret);
    CHECK(cfg.output == "results.csv");
    CHECK(cfg.distribution.is_finite());
    CHECK(cfg.adversary.theta(1, 0)[0] == doctest::Approx(0.3));
}

TEST_CASE("comments and explicit values parse") {
    const ExperimentConfig cfg = parse_config(kMinimal +
                                              "# a comment\n"
                                              "eta = 0.01\n"
                                              "seed = 7\n"
                                              "regret = exact\n");
    CHECK_FALSE(cfg.eta.is_auto);
    CHECK(cfg.eta.value == doctest::Approx(0.01));
    CHECK(cfg.seed == 7);
    CHECK(cfg.exact_regret);
}

TEST_CASE("auto parameters resolve through the tuner") {
    const ExperimentConfig cfg = parse_config(kMinimal);
    const EnvironmentBounds bounds = validate_adversary(cfg.adversary, cfg.distribution);
    const ResolvedParams params = resolve_params(cfg, bounds);
    const TunedParams tuned = tune_robust(16, 2, 2, bounds.sigma, bounds.lambda_min);
    CHECK(params.eta == doctest::Approx(tuned.eta));
    CHECK(params.gamma == doctest::Approx(tuned.gamma));

    ExperimentConfig manual = cfg;
    manual.gamma = AutoParam{false, 0.3};
    const ResolvedParams fixed = resolve_params(manual, bounds);
    CHECK(fixed.gamma == doctest::Approx(0.3));
}

TEST_CASE("invalid configs are rejected with the offending field") {
    CHECK_THROWS_AS(parse_config("algorithm = robust_linexp3\nK = 0\nd = 2\nT = 4\n"
                                 "environment.kind = finite\n"
                                 "environment.points = 1,0; 0,1\n"
                                 "environment.probs = 0.5,0.5\n"
                                 "adversary.kind = constant\n"
                                 "adversary.theta = 0.1,0; 0,0.1\n"),
                    ValidationError);
    CHECK_THROWS_AS(parse_config(kMinimal + "mystery = 1\n"), ParseError);
    CHECK_THROWS_AS(parse_config(kMinimal + "not a key value line\n"), ParseError);
    CHECK_THROWS_AS(parse_config(kMinimal + "K = 3\n"), ParseError);  // duplicate
    CHECK_THROWS_AS(parse_config("algorithm = nope\nK = 1\nd = 1\nT = 1\n"
                                 "environment.kind = finite\n"
                                 "environment.points = 1\n"
                                 "environment.probs = 1\n"
                                 "adversary.kind = constant\n"
                                 "adversary.theta = 0\n"),
                    ValidationError);
}

TEST_CASE("runs are deterministic and the CSV is byte-stable") {
    ExperimentConfig cfg = parse_config(kMinimal + "replications = 4\nseed = 3\n");
    const ExperimentResult a = run_experiment(cfg, 1);
    const ExperimentResult b = run_experiment(cfg, 4);  // thread count is irrelevant
    CHECK(curve_to_csv(a.curve) == curve_to_csv(b.curve));
    CHECK(curve_to_csv(a.curve).rfind(
              "t,mean_regret,stderr,mean_learner_loss,mean_comparator_loss\n", 0) == 0);
}

TEST_CASE("sweep output carries the fitted exponent") {
    ExperimentConfig cfg =
        parse_config(kMinimal + "replications = 4\nregret = exact\n");
    const SweepResult sweep = run_sweep(cfg, {16, 32, 64}, 2);
    CHECK(sweep.points.size() == 3);
    CHECK(sweep.points[0].T == 16);
    const std::string csv = sweep_to_csv(sweep);
    CHECK(csv.rfind("T,final_regret,stderr\n", 0) == 0);
    CHECK(csv.find("# exponent,") != std::string::npos);
}

TEST_CASE("uniform single-arm run has zero final regret") {
    const ExperimentConfig cfg = parse_config(
        "algorithm = uniform\n"
        "K = 1\n"
        "d = 1\n"
        "T = 8\n"
        "replications = 2\n"
        "environment.kind = finite\n"
        "environment.points = 1\n"
        "environment.probs = 1\n"
        "adversary.kind = constant\n"
        "adversary.theta = 0.5\n");
    const ExperimentResult result = run_experiment(cfg, 1);
    CHECK(result.curve.mean_regret.back() == doctest::Approx(0.0));
}
