#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "linexp3/evaluation.hpp"
#include "linexp3/verify.hpp"

using namespace linexp3;

namespace {

RunRecord synthetic_record(const std::vector<double>& regrets, std::uint64_t hash) {
    RunRecord r;
    r.config_hash = hash;
    for (std::size_t t = 0; t < regrets.size(); ++t)
        r.rounds.push_back(EpisodeRound{static_cast<int>(t) + 1, {1.0}, 0, regrets[t], 0.0});
    return r;
}

}  // namespace

TEST_CASE("comparator picks the dominated arm") {
    const AdversarySpec adv = AdversarySpec::constant({{0.1}, {0.2}}, 4);
    const ComparatorPolicy comp = comparator_policy(adv, 4);
    CHECK(comp.decide({1.0}) == 0);
    CHECK(comp.decide({-1.0}) == 1);
}

TEST_CASE("comparator tie-break takes the lowest index") {
    const AdversarySpec adv = AdversarySpec::constant({{0.3}, {0.3}}, 4);
    CHECK(comparator_policy(adv, 4).decide({1.0}) == 0);
}

TEST_CASE("piecewise comparator matches brute force") {
    const AdversarySpec adv = AdversarySpec::piecewise(
        {1, 3}, {{{0.4, 0.0}, {0.0, 0.4}}, {{-0.2, 0.1}, {0.3, -0.3}}}, 6);
    const ComparatorPolicy comp = comparator_policy(adv, 6);
    for (const Vector& x : {Vector{1.0, 0.0}, Vector{-1.0, 0.0}, Vector{0.0, 1.0}}) {
        int best = 0;
        double best_v = 1e300;
        for (int a = 0; a < 2; ++a) {
            double v = 0.0;
            for (int t = 1; t <= 6; ++t) v += dot(x, adv.theta(t, a));
            if (v < best_v) {
                best_v = v;
                best = a;
            }
        }
        CHECK(comp.decide(x) == best);
    }
}

TEST_CASE("single arm has zero regret") {
    const ContextDistribution dist = ContextDistribution::finite({{1.0}}, {1.0});
    const AdversarySpec adv = AdversarySpec::constant({{0.5}}, 16);
    const EnvironmentBounds bounds = validate_adversary(adv, dist);
    const ComparatorPolicy comp = comparator_policy(adv, 16);
    EpisodeConfig cfg;
    cfg.algorithm = Algorithm::RobustLinExp3;
    cfg.eta = 0.05;
    cfg.gamma = 0.2;
    const RunRecord a = run_episode(dist, adv, comp, bounds, cfg, 1, 0);
    const RunRecord b = run_episode(dist, adv, comp, bounds, cfg, 1, 1);
    const RegretCurve curve = expected_regret({a, b});
    for (double r : curve.mean_regret) CHECK(r == doctest::Approx(0.0));
}

TEST_CASE("episodes replay bit-identically") {
    const BenchmarkEnv env = make_benchmark(3, 2, 32, 77);
    const EnvironmentBounds bounds = validate_adversary(env.adv, env.dist);
    const ComparatorPolicy comp = comparator_policy(env.adv, 32);
    EpisodeConfig cfg;
    cfg.algorithm = Algorithm::RealLinExp3;
    cfg.eta = 0.02;
    cfg.gamma = 0.1;
    cfg.beta = 0.4;
    cfg.M = 12;
    const RunRecord a = run_episode(env.dist, env.adv, comp, bounds, cfg, 9, 3);
    const RunRecord b = run_episode(env.dist, env.adv, comp, bounds, cfg, 9, 3);
    REQUIRE(a.rounds.size() == b.rounds.size());
    for (std::size_t t = 0; t < a.rounds.size(); ++t) {
        CHECK(a.rounds[t].action == b.rounds[t].action);
        CHECK(a.rounds[t].loss == b.rounds[t].loss);
        CHECK(a.rounds[t].context == b.rounds[t].context);
    }
}

TEST_CASE("two-replication statistics") {
    const std::vector<double> a = {2.0, 2.0, 2.0, 2.0};   // cumulative 8
    const std::vector<double> b = {3.0, 3.0, 3.0, 3.0};   // cumulative 12
    const RegretCurve curve =
        expected_regret({synthetic_record(a, 5), synthetic_record(b, 5)});
    CHECK(curve.grid.back() == 4);
    CHECK(curve.mean_regret.back() == doctest::Approx(10.0));
    CHECK(curve.stderr_regret.back() == doctest::Approx(2.0));
}

TEST_CASE("mismatched configs are rejected") {
    CHECK_THROWS_AS(expected_regret({synthetic_record({1.0}, 5)}), MismatchedConfigs);
    CHECK_THROWS_AS(
        expected_regret({synthetic_record({1.0}, 5), synthetic_record({1.0}, 6)}),
        MismatchedConfigs);
}

TEST_CASE("slope fits") {
    CHECK(slope_fit({{100.0, 10.0}, {10000.0, 100.0}}) == doctest::Approx(0.5));
    const double c = 0.37;
    CHECK(slope_fit({{100.0, c * std::pow(100.0, 2.0 / 3.0)},
                     {1000.0, c * std::pow(1000.0, 2.0 / 3.0)}}) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-12));

    RngStream rng(2, Stream::Scratch, 0, 0);
    std::vector<std::pair<double, double>> noisy;
    for (int i = 0; i < 6; ++i) {
        const double T = std::pow(10.0, 1.0 + 0.5 * i);
        noisy.emplace_back(T, 2.0 * std::sqrt(T) * (1.0 + 0.02 * (rng.uniform() - 0.5)));
    }
    CHECK(slope_fit(noisy) == doctest::Approx(0.5).epsilon(0.1));

    CHECK_THROWS_AS(slope_fit({{100.0, 10.0}}), NonPositiveValue);
    CHECK_THROWS_AS(slope_fit({{100.0, -1.0}, {10.0, 1.0}}), NonPositiveValue);
}

TEST_CASE("uniform policy per-round regret on a hand case") {
    // Single context, K=2, losses (0, 1); comparator picks arm 0.
    const ContextDistribution dist = ContextDistribution::finite({{1.0}}, {1.0});
    const AdversarySpec adv = AdversarySpec::constant({{0.0}, {1.0}}, 8);
    const EnvironmentBounds bounds = validate_adversary(adv, dist);
    const ComparatorPolicy comp = comparator_policy(adv, 8);
    EpisodeConfig cfg;
    cfg.algorithm = Algorithm::Uniform;
    cfg.exact_regret = true;
    const RunRecord a = run_episode(dist, adv, comp, bounds, cfg, 3, 0);
    const RunRecord b = run_episode(dist, adv, comp, bounds, cfg, 3, 1);
    const RegretCurve curve = expected_regret_exact({a, b});
    CHECK(curve.mean_regret.back() == doctest::Approx(8.0 * 0.5).epsilon(1e-12));
    for (double s : curve.stderr_regret) CHECK(s == doctest::Approx(0.0));
}

TEST_CASE("uniform exact regret matches brute force") {
    const BenchmarkEnv env = make_benchmark(3, 2, 16, 55);
    const EnvironmentBounds bounds = validate_adversary(env.adv, env.dist);
    const ComparatorPolicy comp = comparator_policy(env.adv, 16);
    EpisodeConfig cfg;
    cfg.algorithm = Algorithm::Uniform;
    cfg.exact_regret = true;
    const RunRecord a = run_episode(env.dist, env.adv, comp, bounds, cfg, 4, 0);
    const RunRecord b = run_episode(env.dist, env.adv, comp, bounds, cfg, 4, 1);
    const RegretCurve curve = expected_regret_exact({a, b});

    double brute = 0.0;
    for (int t = 1; t <= 16; ++t)
        for (std::size_t i = 0; i < env.dist.points().size(); ++i) {
            const Vector& x = env.dist.points()[i];
            double mean = 0.0;
            for (int arm = 0; arm < 3; ++arm) mean += loss_value(env.adv, t, x, arm) / 3.0;
            brute += env.dist.probs()[i] *
                     (mean - loss_value(env.adv, t, x, comp.decide(x)));
        }
    CHECK(curve.mean_regret.back() == doctest::Approx(brute).epsilon(1e-10));
}

TEST_CASE("exact and Monte Carlo curves agree") {
    const BenchmarkEnv env = make_benchmark(2, 2, 64, 56);
    const EnvironmentBounds bounds = validate_adversary(env.adv, env.dist);
    const ComparatorPolicy comp = comparator_policy(env.adv, 64);
    EpisodeConfig cfg;
    cfg.algorithm = Algorithm::Uniform;

    EpisodeConfig exact_cfg = cfg;
    exact_cfg.exact_regret = true;
    const RunRecord e0 = run_episode(env.dist, env.adv, comp, bounds, exact_cfg, 6, 0);
    const RunRecord e1 = run_episode(env.dist, env.adv, comp, bounds, exact_cfg, 6, 1);
    const double exact_final = expected_regret_exact({e0, e1}).mean_regret.back();

    std::vector<RunRecord> mc;
    for (int r = 0; r < 1000; ++r)
        mc.push_back(run_episode(env.dist, env.adv, comp, bounds, cfg, 6,
                                 static_cast<std::uint64_t>(r)));
    const RegretCurve curve = expected_regret(mc);
    CHECK(std::abs(curve.mean_regret.back() - exact_final) <=
          4.0 * curve.stderr_regret.back());
}

TEST_CASE("potential bound with zero estimates") {
    const ContextDistribution dist = ContextDistribution::finite({{1.0}}, {1.0});
    const AdversarySpec adv = AdversarySpec::constant({{0.0}, {0.0}}, 4);
    const EnvironmentBounds bounds = validate_adversary(adv, dist);
    const ComparatorPolicy comp = comparator_policy(adv, 4);
    EpisodeConfig cfg;
    cfg.algorithm = Algorithm::Uniform;
    cfg.record_trace = true;
    const RunRecord record = run_episode(dist, adv, comp, bounds, cfg, 8, 0);
    const PotentialReport report =
        verify_potential_inequality(record, 0.5, 0.1, comp, {1.0});
    CHECK(report.precondition_ok);
    CHECK(report.holds);
    CHECK(report.lhs == doctest::Approx(0.0));
    CHECK(report.rhs == doctest::Approx(std::log(2.0) / 0.5));
}

TEST_CASE("single-round potential bound by hand") {
    RunRecord record;
    RoundTrace tr;
    tr.probs = {0.5, 0.5};
    tr.estimates = {{0.4}, {-0.2}};
    record.trace.push_back(tr);
    record.rounds.push_back(EpisodeRound{1, {1.0}, 0, 0.0, 0.0});

    ComparatorPolicy comp;
    comp.cum_theta = {{1.0}, {2.0}};  // picks arm 0 at x = +1

    const double eta = 0.5, gamma = 0.2;
    const PotentialReport report =
        verify_potential_inequality(record, eta, gamma, comp, {1.0});
    CHECK(report.precondition_ok);
    // At round 1 the replayed policy is uniform: lhs = 0.5(0.4 - 0.2) - 0.4.
    CHECK(report.lhs == doctest::Approx(0.5 * 0.2 - 0.4).epsilon(1e-12));
    const double u = 0.5 * (0.4 - 0.2) - 0.4;
    const double quad = 0.5 * 0.16 + 0.5 * 0.04;
    CHECK(report.rhs ==
          doctest::Approx(std::log(2.0) / eta + 2.0 * gamma * u + eta * quad));
    CHECK(report.holds);
}
