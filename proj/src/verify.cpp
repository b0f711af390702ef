#include "linexp3/verify.hpp"

#include <cmath>
#include <cstdio>

#include "linexp3/learner.hpp"
#include "linexp3/mgr.hpp"
#include "linexp3/rng.hpp"

namespace linexp3 {
namespace {

std::vector<Vector> axis_points(int d, bool both_signs) {
    std::vector<Vector> points;
    for (int i = 0; i < d; ++i) {
        Vector e(static_cast<std::size_t>(d), 0.0);
        e[static_cast<std::size_t>(i)] = 1.0;
        points.push_back(e);
        if (both_signs) {
            e[static_cast<std::size_t>(i)] = -1.0;
            points.push_back(e);
        }
    }
    return points;
}

std::vector<Vector> random_unit_directions(int K, int d, RngStream& rng) {
    std::vector<Vector> dirs;
    for (int a = 0; a < K; ++a) {
        Vector v(static_cast<std::size_t>(d));
        double n = 0.0;
        while (n < 1e-6) {
            for (double& c : v) c = rng.normal();
            n = norm2(v);
        }
        dirs.push_back(scaled(v, 1.0 / n));
    }
    return dirs;
}

CheckResult check(std::string name, double lhs, double rhs, std::string detail = "") {
    CheckResult c;
    c.name = std::move(name);
    c.lhs = lhs;
    c.rhs = rhs;
    c.pass = lhs <= rhs;
    c.detail = std::move(detail);
    return c;
}

// A mildly uneven learner state so policies are not uniform.
LearnerState probe_state(int K, int d, double eta, double gamma, std::uint64_t seed) {
    LearnerState state = LearnerState::initial(K, d, eta, gamma);
    RngStream rng(seed, Stream::Scratch, 7, 0);
    std::vector<Vector> estimates;
    for (int a = 0; a < K; ++a) {
        Vector v(static_cast<std::size_t>(d));
        for (double& c : v) c = rng.uniform() - 0.5;
        estimates.push_back(std::move(v));
    }
    return update(state, estimates);
}

}  // namespace

BenchmarkEnv make_benchmark(int K, int d, int T, std::uint64_t seed, double epsilon) {
    auto points = axis_points(d, true);
    std::vector<double> probs(points.size(), 1.0 / static_cast<double>(points.size()));
    ContextDistribution dist = ContextDistribution::finite(points, probs);

    RngStream rng(seed, Stream::Scratch, 0, 0);
    std::vector<Vector> theta;
    for (int a = 0; a < K; ++a) {
        Vector v(static_cast<std::size_t>(d));
        for (double& c : v) c = 2.0 * rng.uniform() - 1.0;
        theta.push_back(std::move(v));
    }

    std::optional<MisspecSpec> misspec;
    if (epsilon > 0.0) {
        MisspecSpec m;
        m.kind = MisspecSpec::Kind::SignBump;
        m.magnitude = epsilon;
        m.directions = random_unit_directions(K, d, rng);
        misspec = std::move(m);
    }

    AdversarySpec adv = AdversarySpec::constant(std::move(theta), T, std::move(misspec))
                            .scaled_to_bound(dist.sigma());
    return BenchmarkEnv{std::move(dist), std::move(adv)};
}

BenchmarkEnv make_max_gap_benchmark(int K, int d, int T) {
    auto points = axis_points(d, true);
    std::vector<double> probs(points.size(), 1.0 / static_cast<double>(points.size()));
    ContextDistribution dist = ContextDistribution::finite(points, probs);

    // One arm at loss -1 on every positive axis point, the rest at +1 (signs
    // flip on the mirrored points). Support losses sit exactly on the +-1
    // boundary, so the per-context action gap is the largest any finite
    // environment admits and the learners leave the uniform-play regime as
    // early as possible in a horizon sweep. Deliberately not rescaled to the
    // ||theta|| <= 1 ball: boundedness only needs |<x, theta>| <= 1 on the
    // support, which holds here with ||theta|| = sqrt(d).
    std::vector<Vector> theta(static_cast<std::size_t>(K),
                              Vector(static_cast<std::size_t>(d), 1.0));
    for (double& c : theta[0]) c = -1.0;

    return BenchmarkEnv{std::move(dist),
                        AdversarySpec::constant(std::move(theta), T)};
}

BenchmarkEnv make_nonneg_benchmark(int K, int d, int T, std::uint64_t seed,
                                   double epsilon) {
    auto points = axis_points(d, false);
    std::vector<double> probs(points.size(), 1.0 / static_cast<double>(points.size()));
    ContextDistribution dist = ContextDistribution::finite(points, probs);

    RngStream rng(seed, Stream::Scratch, 1, 0);
    const double lo = 0.05 + epsilon, hi = 0.95 - epsilon;
    std::vector<Vector> theta;
    for (int a = 0; a < K; ++a) {
        Vector v(static_cast<std::size_t>(d));
        for (double& c : v) c = lo + (hi - lo) * rng.uniform();
        theta.push_back(std::move(v));
    }

    std::optional<MisspecSpec> misspec;
    if (epsilon > 0.0) {
        MisspecSpec m;
        m.kind = MisspecSpec::Kind::SignBump;
        m.magnitude = epsilon;
        m.directions = random_unit_directions(K, d, rng);
        misspec = std::move(m);
    }

    AdversarySpec adv = AdversarySpec::constant(std::move(theta), T, std::move(misspec))
                            .scaled_to_bound(dist.sigma());
    return BenchmarkEnv{std::move(dist), std::move(adv)};
}

BenchmarkEnv make_skewed_benchmark(int K, int d, int T, std::uint64_t seed,
                                   double epsilon) {
    RngStream rng(seed, Stream::Scratch, 2, 0);
    std::vector<Vector> points;
    std::vector<double> probs;
    double total = 0.0;
    for (int i = 0; i < d + 2; ++i) {
        Vector x(static_cast<std::size_t>(d));
        double n = 0.0;
        while (n < 1e-6) {
            for (double& c : x) c = rng.normal();
            n = norm2(x);
        }
        points.push_back(scaled(x, 1.0 / n));
        const double w = 0.5 + rng.uniform();
        probs.push_back(w);
        total += w;
    }
    for (double& p : probs) p /= total;
    ContextDistribution dist = ContextDistribution::finite(points, probs);
    exact_covariance(dist);  // rejects the (measure-zero) degenerate draw

    std::vector<Vector> theta;
    for (int a = 0; a < K; ++a) {
        Vector v(static_cast<std::size_t>(d));
        for (double& c : v) c = 2.0 * rng.uniform() - 1.0;
        theta.push_back(std::move(v));
    }

    std::optional<MisspecSpec> misspec;
    if (epsilon > 0.0) {
        MisspecSpec m;
        m.kind = MisspecSpec::Kind::SignBump;
        m.magnitude = epsilon;
        m.directions = random_unit_directions(K, d, rng);
        misspec = std::move(m);
    }

    AdversarySpec adv = AdversarySpec::constant(std::move(theta), T, std::move(misspec))
                            .scaled_to_bound(dist.sigma());
    return BenchmarkEnv{std::move(dist), std::move(adv)};
}

std::vector<CheckResult> suite_estimators() {
    std::vector<CheckResult> out;

    // Exact unbiasedness of the inverse-propensity estimate on linear
    // losses: E[estimate_a] = theta_a entrywise, plus the scalar ghost-
    // sample form.
    {
        BenchmarkEnv env = make_benchmark(3, 3, 16, 11);
        const EnvironmentBounds bounds = validate_adversary(env.adv, env.dist);
        double worst = 0.0;
        for (int arm = 0; arm < 3; ++arm) {
            Vector mean(3, 0.0);
            for (std::size_t i = 0; i < env.dist.points().size(); ++i) {
                const Vector& x = env.dist.points()[i];
                axpy(env.dist.probs()[i] * loss_value(env.adv, 1, x, arm),
                     bounds.SigmaInv.apply(x), mean);
            }
            const Vector theta = env.adv.theta(1, arm);
            for (std::size_t i = 0; i < mean.size(); ++i)
                worst = std::max(worst, std::abs(mean[i] - theta[i]));
            worst = std::max(worst,
                             robust_bias_exact(env.dist, env.adv, 1, arm, bounds.SigmaInv));
        }
        out.push_back(check("ipw_unbiased_linear", worst, 1e-10,
                            "entrywise, max over arms"));
    }

    // Resampling expectation identity: E[estimate] = (I - (I - b S)^{M+1}) theta.
    {
        BenchmarkEnv env = make_benchmark(2, 2, 16, 12);
        const LearnerState state = probe_state(2, 2, 0.3, 0.2, 5);
        const MgrConfig cfg{0.4, 3};
        double worst = 0.0;
        for (int arm = 0; arm < 2; ++arm) {
            const Vector expect =
                mgr_expected_estimate(env.dist, env.adv, 1, arm, state, cfg);
            // Independent reference: truncated series
            // beta sum_{k=0}^{M} (I - beta Sigma_ta)^k Sigma_ta theta,
            // built from repeated matrix-vector products only.
            const SymMatrix sigma_ta = action_covariance_exact(
                env.dist, [&](const Vector& x) { return policy_probs(state, x); }, arm);
            SymMatrix residual = SymMatrix::identity(2);
            residual.add_scaled(sigma_ta, -cfg.beta);
            const Vector st = sigma_ta.apply(env.adv.theta(1, arm));
            Vector series(st.size(), 0.0);
            for (int k = 0; k <= cfg.M; ++k)
                axpy(cfg.beta, matrix_power_apply(residual, k, st), series);
            for (std::size_t i = 0; i < series.size(); ++i)
                worst = std::max(worst, std::abs(expect[i] - series[i]));
        }
        out.push_back(check("resampling_expectation_identity", worst, 1e-10));
    }

    return out;
}

std::vector<CheckResult> suite_mgr() {
    std::vector<CheckResult> out;

    // Naive vs fast on random scripts.
    {
        double worst = 0.0;
        RngStream rng(99, Stream::Scratch, 2, 0);
        for (int trial = 0; trial < 1000; ++trial) {
            const int d = 1 + static_cast<int>(rng.uniform() * 8);
            const int K = 1 + static_cast<int>(rng.uniform() * 4);
            const int M = static_cast<int>(rng.uniform() * 65);
            const double beta = 0.05 + 0.4 * rng.uniform();
            std::vector<ResamplingDraw> script;
            for (int k = 0; k < M; ++k) {
                Vector x(static_cast<std::size_t>(d));
                for (double& c : x) c = rng.uniform() - 0.5;
                script.emplace_back(std::move(x), static_cast<int>(rng.uniform() * K));
            }
            Vector probe(static_cast<std::size_t>(d));
            for (double& c : probe) c = rng.uniform() - 0.5;
            const int arm = static_cast<int>(rng.uniform() * K);
            const MgrConfig cfg{beta, M};
            const Matrix naive = mgr_naive(cfg, scripted(script), arm, d);
            const Vector fast = mgr_fast(cfg, scripted(script), arm, probe);
            const Vector via_naive = naive.apply(probe);
            for (std::size_t i = 0; i < fast.size(); ++i)
                worst = std::max(worst, std::abs(fast[i] - via_naive[i]));
        }
        out.push_back(check("naive_fast_equality", worst, 1e-10, "1000 random scripts"));
    }

    // Exact enumeration over draw outcomes matches the closed form.
    {
        std::vector<Vector> points = {{1.0, 0.0}, {0.0, 1.0}, {0.6, 0.8}};
        std::vector<double> probs = {0.5, 0.3, 0.2};
        ContextDistribution dist = ContextDistribution::finite(points, probs);
        const LearnerState state = probe_state(2, 2, 0.3, 0.2, 6);
        PolicyFn policy = [&](const Vector& x) { return policy_probs(state, x); };
        const int arm = 0;
        const MgrConfig cfg{0.4, 3};

        const int n = static_cast<int>(points.size());
        const int outcomes = n * 2;
        Matrix mean(2);
        const int total = outcomes * outcomes * outcomes;  // (nK)^M
        for (int code = 0; code < total; ++code) {
            std::vector<ResamplingDraw> script;
            double weight = 1.0;
            int rest = code;
            for (int k = 0; k < cfg.M; ++k) {
                const int o = rest % outcomes;
                rest /= outcomes;
                const int i = o / 2, a = o % 2;
                weight *= probs[static_cast<std::size_t>(i)] *
                          policy(points[static_cast<std::size_t>(i)])[static_cast<std::size_t>(a)];
                script.emplace_back(points[static_cast<std::size_t>(i)], a);
            }
            mean.add_scaled(mgr_naive(cfg, scripted(script), arm, 2), weight);
        }
        const SymMatrix sigma_ta = action_covariance_exact(dist, policy, arm);
        const SymMatrix expected = expected_sigma_plus(sigma_ta, cfg);
        double worst = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                worst = std::max(worst, std::abs(mean(i, j) - expected(i, j)));
        out.push_back(check("expectation_enumeration", worst, 1e-10, "M=3, 3 points, K=2"));

        // Monte Carlo mean of naive samples against the same closed form.
        RngStream draw_rng(17, Stream::Ghost, 0, 0);
        ResamplingOracle oracle(dist, policy, std::move(draw_rng));
        const int N = 100000;
        Matrix mc(2), mc2(2);
        for (int s = 0; s < N; ++s) {
            const Matrix sample = mgr_naive(cfg, oracle.draw_fn(), arm, 2);
            mc.add_scaled(sample, 1.0);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) mc2(i, j) += sample(i, j) * sample(i, j);
        }
        mc.scale(1.0 / N);
        double worst_z = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                const double var =
                    std::max(0.0, mc2(i, j) / N - mc(i, j) * mc(i, j));
                const double se = std::sqrt(var / N);
                if (se > 0.0)
                    worst_z = std::max(worst_z, std::abs(mc(i, j) - expected(i, j)) / se);
            }
        out.push_back(check("expectation_monte_carlo", worst_z, 4.0,
                            "max |z| over entries, N=1e5"));
    }

    // Truncation bias decay in operator norm.
    {
        BenchmarkEnv env = make_benchmark(3, 3, 16, 13);
        const EnvironmentBounds bounds = validate_adversary(env.adv, env.dist);
        const double gamma = 0.2;
        const LearnerState state = probe_state(3, 3, 0.3, gamma, 8);
        PolicyFn policy = [&](const Vector& x) { return policy_probs(state, x); };
        const SymMatrix sigma_ta = action_covariance_exact(env.dist, policy, 0);
        const double beta = 0.5 / (bounds.sigma * bounds.sigma);
        double worst_gap = -1.0;
        std::string detail;
        for (int M : {1, 10, 100}) {
            SymMatrix residual = SymMatrix::identity(3);
            residual.add_scaled(sigma_ta, -beta);
            // residual^{M+1} column by column.
            Matrix power(3);
            for (int j = 0; j < 3; ++j) {
                Vector e(3, 0.0);
                e[static_cast<std::size_t>(j)] = 1.0;
                const Vector col = matrix_power_apply(residual, M + 1, e);
                for (int i = 0; i < 3; ++i) power(i, j) = col[static_cast<std::size_t>(i)];
            }
            const double bias = bounds.sigma * bounds.R * operator_norm(power);
            const double bound =
                bounds.sigma * bounds.R *
                std::exp(-gamma * beta * bounds.lambda_min * (M + 1) / 3.0);
            worst_gap = std::max(worst_gap, bias - bound);
            char buf[64];
            std::snprintf(buf, sizeof(buf), "M=%d: %.3e<=%.3e ", M, bias, bound);
            detail += buf;
        }
        out.push_back(check("truncation_bias_decay", worst_gap, 0.0, detail));
    }

    return out;
}

std::vector<CheckResult> suite_potential() {
    std::vector<CheckResult> out;
    BenchmarkEnv env = make_benchmark(3, 2, 256, 14);
    const EnvironmentBounds bounds = validate_adversary(env.adv, env.dist);
    const ComparatorPolicy comparator = comparator_policy(env.adv, 256);

    int checked = 0, held = 0, skipped = 0;
    RngStream pick(21, Stream::Scratch, 3, 0);
    for (int episode = 0; episode < 200; ++episode) {
        const int T = 16 + static_cast<int>(pick.uniform() * 241);
        TunedParams tuned = tune_robust(T, 3, 2, bounds.sigma, bounds.lambda_min);
        EpisodeConfig cfg;
        cfg.algorithm = Algorithm::RobustLinExp3;
        cfg.eta = tuned.eta;
        cfg.gamma = tuned.gamma;
        cfg.record_trace = true;
        BenchmarkEnv short_env = env;
        short_env.adv = AdversarySpec::constant(
            [&] {
                std::vector<Vector> th;
                for (int a = 0; a < 3; ++a) th.push_back(env.adv.theta(1, a));
                return th;
            }(),
            T, env.adv.misspec());
        const RunRecord record =
            run_episode(short_env.dist, short_env.adv, comparator, bounds, cfg, 500,
                        static_cast<std::uint64_t>(episode));
        const std::size_t npts = short_env.dist.points().size();
        for (std::size_t i = 0; i < std::min<std::size_t>(5, npts); ++i) {
            const PotentialReport report = verify_potential_inequality(
                record, cfg.eta, cfg.gamma, comparator, short_env.dist.points()[i]);
            if (!report.precondition_ok) {
                ++skipped;
                continue;
            }
            ++checked;
            if (report.holds) ++held;
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%d contexts checked, %d precondition skips",
                  checked, skipped);
    CheckResult c = check("potential_inequality", static_cast<double>(checked - held),
                          0.0, buf);
    c.pass = c.pass && checked > 0;
    out.push_back(c);
    return out;
}

std::vector<CheckResult> suite_bounds() {
    std::vector<CheckResult> out;

    // Misspecification bias against eps*sqrt(d). Needs a skewed support:
    // for orthonormal points the ghost-sample term cancels the residual
    // mean identically and the check would be vacuous.
    for (double eps : {0.05, 0.1}) {
        for (int d : {2, 4, 9}) {
            BenchmarkEnv env = make_skewed_benchmark(3, d, 16, 15 + d, eps);
            const EnvironmentBounds bounds = validate_adversary(env.adv, env.dist);
            double worst = 0.0;
            for (int arm = 0; arm < 3; ++arm)
                worst = std::max(worst, robust_bias_exact(env.dist, env.adv, 1, arm,
                                                          bounds.SigmaInv));
            char name[64];
            std::snprintf(name, sizeof(name), "ipw_bias_eps%.2f_d%d", eps, d);
            out.push_back(check(name, worst, eps * std::sqrt(static_cast<double>(d))));
        }
    }

    // Exact quadratic term against K d / gamma.
    {
        const int K = 3, d = 3;
        BenchmarkEnv env = make_benchmark(K, d, 16, 30);
        const EnvironmentBounds bounds = validate_adversary(env.adv, env.dist);
        const double gamma = 0.15;
        const LearnerState state = probe_state(K, d, 0.4, gamma, 9);
        const double q =
            robust_quadratic_exact(env.dist, env.adv, 1, state, bounds.SigmaInv);
        out.push_back(check("ipw_quadratic", q, K * d / gamma));
    }

    // Monte Carlo quadratic term of the resampling estimator against 3 K d.
    {
        const int K = 3, d = 3;
        BenchmarkEnv env = make_benchmark(K, d, 16, 31);
        const EnvironmentBounds bounds = validate_adversary(env.adv, env.dist);
        const LearnerState state = probe_state(K, d, 0.3, 0.2, 10);
        const MgrConfig cfg{0.5 / (bounds.sigma * bounds.sigma), 40};
        const auto [mean, se] =
            mgr_quadratic_mc(env.dist, env.adv, 1, state, cfg, 100000, 77);
        char detail[64];
        std::snprintf(detail, sizeof(detail), "mean %.4f, stderr %.4f", mean, se);
        out.push_back(check("resampling_quadratic", mean, 3.0 * K * d + 3.0 * se, detail));
    }

    return out;
}

std::vector<CheckResult> verify_suite(const std::string& name) {
    if (name == "estimators") return suite_estimators();
    if (name == "mgr") return suite_mgr();
    if (name == "potential") return suite_potential();
    if (name == "bounds") return suite_bounds();
    if (name == "all") {
        std::vector<CheckResult> out = suite_estimators();
        for (auto&& c : suite_mgr()) out.push_back(std::move(c));
        for (auto&& c : suite_potential()) out.push_back(std::move(c));
        for (auto&& c : suite_bounds()) out.push_back(std::move(c));
        return out;
    }
    throw UnknownSuite("unknown verification suite '" + name + "'");
}

std::string format_check(const CheckResult& check) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%s %-32s measured %.6e bound %.6e %s",
                  check.pass ? "PASS" : "FAIL", check.name.c_str(), check.lhs,
                  check.rhs, check.detail.c_str());
    return buf;
}

}  // namespace linexp3
