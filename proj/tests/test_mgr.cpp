#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "linexp3/learner.hpp"
#include "linexp3/mgr.hpp"

using namespace linexp3;

TEST_CASE("beta precondition") {
    CHECK_NOTHROW((MgrConfig{0.5, 3}.check(1.0)));
    CHECK_THROWS_AS((MgrConfig{0.6, 3}.check(1.0)), ValidationError);
    CHECK_THROWS_AS((MgrConfig{-0.1, 3}.check(1.0)), ValidationError);
    CHECK_THROWS_AS((MgrConfig{0.5, -1}.check(1.0)), ValidationError);
}

TEST_CASE("naive with M=0 is beta times the identity") {
    const Matrix out = mgr_naive(MgrConfig{0.5, 0}, scripted({}), 0, 2);
    CHECK(out(0, 0) == doctest::Approx(0.5));
    CHECK(out(1, 1) == doctest::Approx(0.5));
    CHECK(out(0, 1) == 0.0);
}

TEST_CASE("naive single matched draw") {
    const std::vector<ResamplingDraw> script = {{{1.0, 0.0}, 0}};
    const Matrix out = mgr_naive(MgrConfig{0.5, 1}, scripted(script), 0, 2);
    CHECK(out(0, 0) == doctest::Approx(0.75));
    CHECK(out(1, 1) == doctest::Approx(1.0));
    CHECK(out(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("naive single mismatched draw") {
    const std::vector<ResamplingDraw> script = {{{1.0, 0.0}, 1}};
    const Matrix out = mgr_naive(MgrConfig{0.5, 1}, scripted(script), 0, 2);
    CHECK(out(0, 0) == doctest::Approx(1.0));
    CHECK(out(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("fast variant hand values") {
    CHECK(mgr_fast(MgrConfig{0.5, 0}, scripted({}), 0, {1.0, 0.0})[0] ==
          doctest::Approx(0.5));

    const std::vector<ResamplingDraw> script = {{{1.0, 0.0}, 0}};
    const Vector q = mgr_fast(MgrConfig{0.5, 1}, scripted(script), 0, {1.0, 0.0});
    CHECK(q[0] == doctest::Approx(0.75));
    CHECK(q[1] == doctest::Approx(0.0));
}

TEST_CASE("all draws mismatched gives beta(M+1) x") {
    const int M = 7;
    std::vector<ResamplingDraw> script(M, {{0.3, 0.4}, 1});
    const Vector q = mgr_fast(MgrConfig{0.25, M}, scripted(script), 0, {2.0, -1.0});
    CHECK(q[0] == doctest::Approx(0.25 * (M + 1) * 2.0));
    CHECK(q[1] == doctest::Approx(0.25 * (M + 1) * -1.0));
}

TEST_CASE("all-arms pass equals per-arm fast on a shared script") {
    RngStream rng(3, Stream::Scratch, 0, 0);
    for (int trial = 0; trial < 50; ++trial) {
        const int d = 2 + static_cast<int>(rng.uniform() * 4);
        const int K = 2 + static_cast<int>(rng.uniform() * 3);
        const int M = static_cast<int>(rng.uniform() * 20);
        std::vector<ResamplingDraw> script;
        for (int k = 0; k < M; ++k) {
            Vector x(static_cast<std::size_t>(d));
            for (double& c : x) c = rng.uniform() - 0.5;
            script.emplace_back(std::move(x), static_cast<int>(rng.uniform() * K));
        }
        Vector probe(static_cast<std::size_t>(d));
        for (double& c : probe) c = rng.uniform() - 0.5;
        const MgrConfig cfg{0.3, M};
        const std::vector<Vector> all = mgr_all_arms_fast(cfg, scripted(script), K, probe);
        for (int a = 0; a < K; ++a) {
            const Vector one = mgr_fast(cfg, scripted(script), a, probe);
            for (int i = 0; i < d; ++i)
                CHECK(all[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] ==
                      doctest::Approx(one[static_cast<std::size_t>(i)]).epsilon(1e-12));
        }
    }
}

TEST_CASE("degenerate K=1 all-arms") {
    const std::vector<ResamplingDraw> script = {{{1.0, 0.0}, 0}, {{0.0, 1.0}, 0}};
    const std::vector<Vector> all =
        mgr_all_arms_fast(MgrConfig{0.5, 2}, scripted(script), 1, {1.0, 1.0});
    const Vector one = mgr_fast(MgrConfig{0.5, 2}, scripted(script), 0, {1.0, 1.0});
    CHECK(all.size() == 1);
    CHECK(all[0] == one);
}

TEST_CASE("action covariance on hand cases") {
    const ContextDistribution point = ContextDistribution::finite({{1.0}}, {1.0});
    const SymMatrix half = action_covariance_exact(
        point, [](const Vector&) { return std::vector<double>{0.5, 0.5}; }, 0);
    CHECK(half(0, 0) == doctest::Approx(0.5));

    // A rank-deficient per-action covariance is rejected.
    const ContextDistribution flat = ContextDistribution::finite({{1.0, 0.0}}, {1.0});
    CHECK_THROWS_AS(
        action_covariance_exact(
            flat, [](const Vector&) { return std::vector<double>{0.5, 0.5}; }, 0),
        SingularCovariance);

    const ContextDistribution two =
        ContextDistribution::finite({{1.0, 0.0}, {0.0, 1.0}}, {0.5, 0.5});
    const SymMatrix quarter = action_covariance_exact(
        two, [](const Vector&) { return std::vector<double>{0.5, 0.5}; }, 1);
    CHECK(quarter(0, 0) == doctest::Approx(0.25));
    CHECK(quarter(1, 1) == doctest::Approx(0.25));

    // gamma = 1 uniform policy over K arms reproduces Sigma / K.
    const SymMatrix sigma = exact_covariance(two);
    const SymMatrix uniform = action_covariance_exact(
        two, [](const Vector&) { return std::vector<double>{0.25, 0.25, 0.25, 0.25}; }, 2);
    for (int i = 0; i < 2; ++i)
        CHECK(uniform(i, i) == doctest::Approx(sigma(i, i) / 4.0));
}

TEST_CASE("expected resampling matrix") {
    CHECK(expected_sigma_plus(SymMatrix::diagonal({0.5, 0.25}), MgrConfig{0.5, 0})(0, 0) ==
          doctest::Approx(0.5));

    const SymMatrix one = expected_sigma_plus(SymMatrix::diagonal({0.5, 0.25}),
                                              MgrConfig{0.5, 1});
    CHECK(one(0, 0) == doctest::Approx(0.875));
    CHECK(one(1, 1) == doctest::Approx(0.9375));

    const SymMatrix limit = expected_sigma_plus(SymMatrix::diagonal({0.5, 0.25}),
                                                MgrConfig{0.5, 200});
    CHECK(limit(0, 0) == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(limit(1, 1) == doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("contraction bound on the estimate norm") {
    RngStream rng(12, Stream::Scratch, 0, 3);
    for (int trial = 0; trial < 100; ++trial) {
        const int d = 2 + static_cast<int>(rng.uniform() * 3);
        const int M = 1 + static_cast<int>(rng.uniform() * 30);
        const double beta = 0.05 + 0.4 * rng.uniform();
        std::vector<ResamplingDraw> script;
        for (int k = 0; k < M; ++k) {
            // Unit-norm draws so beta <= 1/(2 sigma^2) holds with sigma = 1.
            Vector x(static_cast<std::size_t>(d));
            double n = 0.0;
            while (n < 1e-6) {
                for (double& c : x) c = rng.normal();
                n = norm2(x);
            }
            for (double& c : x) c /= n;
            script.emplace_back(std::move(x), 0);
        }
        const Matrix est = mgr_naive(MgrConfig{beta, M}, scripted(script), 0, d);
        CHECK(operator_norm(est) <= beta * (M + 1) + 1e-9);
    }
}

TEST_CASE("scripted source replays in order and naive consumes exactly M draws") {
    const std::vector<ResamplingDraw> script = {{{1.0, 0.0}, 0}, {{0.0, 1.0}, 0}};
    DrawFn source = scripted(script);
    mgr_naive(MgrConfig{0.5, 2}, source, 0, 2);
    CHECK_THROWS(source());  // both draws consumed
}
