#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "linexp3/learner.hpp"

using namespace linexp3;

TEST_CASE("policy is uniform at round one") {
    const LearnerState s = LearnerState::initial(4, 2, 0.3, 0.1);
    const auto probs = policy_probs(s, {1.0, -1.0});
    for (double p : probs) CHECK(p == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("eta = 0 collapses the weights") {
    LearnerState s = LearnerState::initial(2, 2, 0.0, 0.2);
    s.cum_estimates = {{3.0, -1.0}, {-2.0, 5.0}};
    const auto probs = policy_probs(s, {1.0, 1.0});
    CHECK(probs[0] == doctest::Approx(0.5));
    CHECK(probs[1] == doctest::Approx(0.5));
}

TEST_CASE("hand-computed softmax with mixing") {
    // scores (0, ln 3) -> softmax (0.75, 0.25), gamma 0.2 -> (0.7, 0.3).
    LearnerState s = LearnerState::initial(2, 1, 1.0, 0.2);
    s.cum_estimates = {{0.0}, {std::log(3.0)}};
    const auto probs = policy_probs(s, {1.0});
    CHECK(probs[0] == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(probs[1] == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("policy floor and normalization") {
    RngStream rng(4, Stream::Scratch, 0, 0);
    for (int trial = 0; trial < 200; ++trial) {
        const int K = 2 + static_cast<int>(rng.uniform() * 5);
        const double gamma = rng.uniform() * 0.9 + 0.05;
        LearnerState s = LearnerState::initial(K, 3, rng.uniform() * 2.0, gamma);
        for (auto& row : s.cum_estimates)
            for (double& v : row) v = 40.0 * (rng.uniform() - 0.5);
        const Vector x = {rng.uniform() - 0.5, rng.uniform() - 0.5, rng.uniform() - 0.5};
        const auto probs = policy_probs(s, x);
        double sum = 0.0;
        for (double p : probs) {
            CHECK(p >= gamma / K - 1e-12);
            sum += p;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("softmax shift invariance") {
    LearnerState s = LearnerState::initial(3, 1, 0.7, 0.1);
    s.cum_estimates = {{1.0}, {2.5}, {-0.5}};
    const auto base = policy_probs(s, {1.0});
    for (auto& row : s.cum_estimates) row[0] += 123.0;  // constant shift per arm
    const auto shifted = policy_probs(s, {1.0});
    for (std::size_t a = 0; a < 3; ++a)
        CHECK(shifted[a] == doctest::Approx(base[a]).epsilon(1e-12));
}

TEST_CASE("draw_action degenerate and frequency") {
    RngStream rng(10, Stream::Action, 0, 0);
    for (int i = 0; i < 100; ++i) CHECK(draw_action({1.0, 0.0}, rng) == 0);

    int first = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        RngStream r(11, Stream::Action, 0, static_cast<std::uint64_t>(i));
        if (draw_action({0.5, 0.5}, r) == 0) ++first;
    }
    CHECK(std::abs(first / static_cast<double>(n) - 0.5) < 0.01);
}

TEST_CASE("inverse-propensity estimate") {
    const SymMatrix id = SymMatrix::identity(2);
    const Vector est = robust_estimate(id, {1.0, 0.0}, 0, 0.5, 0.8, 0);
    CHECK(est[0] == doctest::Approx(1.6));
    CHECK(est[1] == doctest::Approx(0.0));

    CHECK(robust_estimate(id, {1.0, 0.0}, 0, 0.5, 0.8, 1) == Vector{0.0, 0.0});
    CHECK(robust_estimate(id, {1.0, 0.0}, 0, 0.5, 0.0, 0) == Vector{0.0, 0.0});
}

TEST_CASE("resampling estimate") {
    CHECK(real_estimate(Vector{0.5, 0.0}, 0, 1.0, 1) == Vector{0.0, 0.0});

    // M=0: Sigma-plus is beta I.
    Matrix beta_id = Matrix::identity(2);
    beta_id.scale(0.5);
    const Vector est = real_estimate(beta_id, {1.0, 0.0}, 0, 1.0, 0);
    CHECK(est[0] == doctest::Approx(0.5));
    CHECK(est[1] == doctest::Approx(0.0));

    // Vector and matrix modes agree given q = Sigma-plus x.
    Matrix m(2);
    m(0, 0) = 0.7;
    m(0, 1) = -0.2;
    m(1, 0) = 0.1;
    m(1, 1) = 0.9;
    const Vector x = {0.3, -0.4};
    const Vector via_matrix = real_estimate(m, x, 1, 0.6, 1);
    const Vector via_q = real_estimate(m.apply(x), 1, 0.6, 1);
    CHECK(via_matrix[0] == doctest::Approx(via_q[0]).epsilon(1e-12));
    CHECK(via_matrix[1] == doctest::Approx(via_q[1]).epsilon(1e-12));
}

TEST_CASE("full-information estimates") {
    const SymMatrix id = SymMatrix::identity(2);
    const auto ests = fullinfo_estimate(id, {1.0, 0.0}, {0.5, -0.5});
    CHECK(ests[0][0] == doctest::Approx(0.5));
    CHECK(ests[1][0] == doctest::Approx(-0.5));

    const auto zeros = fullinfo_estimate(id, {1.0, 0.0}, {0.0, 0.0});
    CHECK(zeros[0] == Vector{0.0, 0.0});

    const SymMatrix half = SymMatrix::diagonal({0.5, 0.5});
    const SymMatrix half_inv = spd_inverse(spd_factorize(half));
    const auto scaled_est = fullinfo_estimate(half_inv, {1.0, 0.0}, {1.0});
    CHECK(scaled_est[0][0] == doctest::Approx(2.0));
}

TEST_CASE("counterfactual weights") {
    const LossOracle zero = [](int, const Vector&, int) { return 0.0; };
    auto probs = counterfactual_weights(zero, 1, {1.0}, 0.9, 3);
    for (double p : probs) CHECK(p == doctest::Approx(1.0 / 3.0));

    const LossOracle any = [](int, const Vector&, int a) { return a * 0.1; };
    probs = counterfactual_weights(any, 5, {1.0}, 0.0, 2);
    CHECK(probs[0] == doctest::Approx(0.5));

    // Cumulative losses (0, ln 2) at eta 1 -> (2/3, 1/3).
    const LossOracle split = [](int s, const Vector&, int a) {
        return (s == 1 && a == 1) ? std::log(2.0) : 0.0;
    };
    probs = counterfactual_weights(split, 2, {1.0}, 1.0, 2);
    CHECK(probs[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(probs[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("state update") {
    LearnerState s = LearnerState::initial(1, 1, 0.1, 0.1);
    s.cum_estimates[0][0] = 0.5;
    const LearnerState next = update(s, {{0.25}});
    CHECK(next.cum_estimates[0][0] == doctest::Approx(0.75));
    CHECK(next.round == 2);

    const LearnerState same = update(s, {{0.0}});
    CHECK(same.cum_estimates[0][0] == 0.5);
    CHECK(same.round == 2);

    // Two sequential updates match one summed update.
    const LearnerState twice = update(update(s, {{0.1}}), {{0.2}});
    const LearnerState once = update(s, {{0.3}});
    CHECK(twice.cum_estimates[0][0] == doctest::Approx(once.cum_estimates[0][0]));

    CHECK_THROWS_AS(update(s, {{std::nan("")}}), NonFiniteEstimate);
}

TEST_CASE("tuned parameters for the inverse-propensity learner") {
    const TunedParams p = tune_robust(1000, 2, 2, 1.0, 0.25);
    CHECK(p.eta == doctest::Approx(0.00493383).epsilon(1e-4));
    CHECK(p.gamma == doctest::Approx(0.1404888).epsilon(1e-5));
    CHECK_FALSE(p.eta_clamped);
    CHECK_FALSE(p.gamma_clamped);

    const TunedParams tiny = tune_robust(1, 4, 4, 1.0, 0.25);
    CHECK(tiny.gamma_clamped);
    CHECK(tiny.gamma < 1.0);
}

TEST_CASE("tuned parameters for the resampling learner") {
    const TunedParams p = tune_real(10000, 2, 2, 1.0, 1.0, 0.25);
    CHECK(p.beta == doctest::Approx(0.5));
    CHECK(p.gamma == doctest::Approx(0.0303486).epsilon(1e-5));
    CHECK(p.M == 2428);
    CHECK(p.eta_clamped);
    CHECK(p.eta == doctest::Approx(2.0 / 2429.0).epsilon(1e-10));

    CHECK(tune_real(100, 2, 2, 2.0, 1.0, 0.25).beta == doctest::Approx(0.125));

    const TunedParams clamped = tune_real(2, 2, 2, 0.5, 0.5, 0.25);
    CHECK(clamped.log_clamped);  // T sigma^2 R^2 = 0.125 <= e
}
