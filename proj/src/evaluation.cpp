#include "linexp3/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace linexp3 {

int ComparatorPolicy::decide(const Vector& x) const {
    int best = 0;
    double best_value = dot(x, cum_theta.front());
    for (std::size_t a = 1; a < cum_theta.size(); ++a) {
        const double v = dot(x, cum_theta[a]);
        if (v < best_value) {
            best_value = v;
            best = static_cast<int>(a);
        }
    }
    return best;
}

ComparatorPolicy comparator_policy(const AdversarySpec& adv, int T) {
    ComparatorPolicy comp;
    comp.cum_theta.assign(static_cast<std::size_t>(adv.num_arms()),
                          Vector(adv.dimension(), 0.0));
    for (int t = 1; t <= T; ++t)
        for (int a = 0; a < adv.num_arms(); ++a)
            axpy(1.0, adv.theta(t, a), comp.cum_theta[static_cast<std::size_t>(a)]);
    return comp;
}

std::uint64_t episode_config_hash(const EpisodeConfig& cfg, int K, int d, int T) {
    auto mix = [](std::uint64_t h, std::uint64_t v) {
        h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    };
    auto bits = [](double x) {
        std::uint64_t u;
        static_assert(sizeof(u) == sizeof(x));
        __builtin_memcpy(&u, &x, sizeof(u));
        return u;
    };
    std::uint64_t h = 0x811c9dc5ULL;
    h = mix(h, static_cast<std::uint64_t>(cfg.algorithm));
    h = mix(h, bits(cfg.eta));
    h = mix(h, bits(cfg.gamma));
    h = mix(h, bits(cfg.beta));
    h = mix(h, static_cast<std::uint64_t>(cfg.M));
    h = mix(h, static_cast<std::uint64_t>(cfg.mgr_mode));
    h = mix(h, static_cast<std::uint64_t>(K));
    h = mix(h, static_cast<std::uint64_t>(d));
    h = mix(h, static_cast<std::uint64_t>(T));
    return h;
}

RunRecord run_episode(const ContextDistribution& dist, const AdversarySpec& adv,
                      const ComparatorPolicy& comparator,
                      const EnvironmentBounds& bounds, const EpisodeConfig& cfg,
                      std::uint64_t seed, std::uint64_t replication) {
    const int K = adv.num_arms();
    const int d = dist.dimension();
    const int T = adv.horizon();
    if (cfg.exact_regret && !dist.is_finite())
        throw ValidationError("run_episode: exact regret requires finite support");

    RunRecord record;
    record.seed = seed;
    record.replication = replication;
    record.config_hash = episode_config_hash(cfg, K, d, T);
    record.rounds.reserve(static_cast<std::size_t>(T));
    if (cfg.exact_regret) record.exact_round_regret.reserve(static_cast<std::size_t>(T));

    LearnerState state = LearnerState::initial(K, d, cfg.eta, cfg.gamma);
    const MgrConfig mgr_cfg{cfg.beta, cfg.M};
    const bool has_state = cfg.algorithm == Algorithm::RobustLinExp3 ||
                           cfg.algorithm == Algorithm::RealLinExp3 ||
                           cfg.algorithm == Algorithm::FullInfo;

    // Counterfactual feedback on finite support keeps an incremental table
    // of cumulative true losses per (support point, arm).
    std::vector<std::vector<double>> cf_cum;
    if (cfg.algorithm == Algorithm::Counterfactual && dist.is_finite())
        cf_cum.assign(dist.points().size(), std::vector<double>(static_cast<std::size_t>(K), 0.0));

    auto cf_probs_from_cum = [&](std::size_t point_index) {
        std::vector<double> scores(static_cast<std::size_t>(K));
        for (int a = 0; a < K; ++a)
            scores[static_cast<std::size_t>(a)] =
                -cfg.eta * cf_cum[point_index][static_cast<std::size_t>(a)];
        const double top = *std::max_element(scores.begin(), scores.end());
        double sum = 0.0;
        std::vector<double> probs(static_cast<std::size_t>(K));
        for (int a = 0; a < K; ++a) {
            probs[static_cast<std::size_t>(a)] = std::exp(scores[static_cast<std::size_t>(a)] - top);
            sum += probs[static_cast<std::size_t>(a)];
        }
        for (double& p : probs) p /= sum;
        return probs;
    };

    LossOracle oracle = [&adv](int s, const Vector& x, int a) {
        return loss_value(adv, s, x, a);
    };

    for (int t = 1; t <= T; ++t) {
        RngStream ctx_rng(seed, Stream::Context, replication, static_cast<std::uint64_t>(t));
        int point_index = -1;
        Vector x;
        if (dist.is_finite()) {
            point_index = ctx_rng.categorical(dist.probs());
            x = dist.points()[static_cast<std::size_t>(point_index)];
        } else {
            x = sample_context(dist, ctx_rng);
        }

        std::vector<double> probs;
        switch (cfg.algorithm) {
            case Algorithm::Uniform:
                probs.assign(static_cast<std::size_t>(K), 1.0 / K);
                break;
            case Algorithm::Counterfactual:
                probs = dist.is_finite()
                            ? cf_probs_from_cum(static_cast<std::size_t>(point_index))
                            : counterfactual_weights(oracle, t, x, cfg.eta, K);
                break;
            default:
                probs = policy_probs(state, x);
                break;
        }

        RngStream act_rng(seed, Stream::Action, replication, static_cast<std::uint64_t>(t));
        const int action = draw_action(probs, act_rng);
        const double loss = loss_value(adv, t, x, action);
        const int comp_arm = comparator.decide(x);
        const double comp_loss = loss_value(adv, t, x, comp_arm);

        if (cfg.exact_regret) {
            double expected_loss = 0.0;
            double best_loss = 0.0;
            for (std::size_t i = 0; i < dist.points().size(); ++i) {
                const Vector& xi = dist.points()[i];
                std::vector<double> pi_x;
                switch (cfg.algorithm) {
                    case Algorithm::Uniform:
                        pi_x.assign(static_cast<std::size_t>(K), 1.0 / K);
                        break;
                    case Algorithm::Counterfactual:
                        pi_x = cf_probs_from_cum(i);
                        break;
                    default:
                        pi_x = policy_probs(state, xi);
                        break;
                }
                double mean_loss = 0.0;
                for (int a = 0; a < K; ++a)
                    mean_loss += pi_x[static_cast<std::size_t>(a)] * loss_value(adv, t, xi, a);
                expected_loss += dist.probs()[i] * mean_loss;
                best_loss += dist.probs()[i] * loss_value(adv, t, xi, comparator.decide(xi));
            }
            record.exact_round_regret.push_back(expected_loss - best_loss);
        }

        std::vector<Vector> estimates;
        switch (cfg.algorithm) {
            case Algorithm::RobustLinExp3: {
                estimates.assign(static_cast<std::size_t>(K), Vector(d, 0.0));
                estimates[static_cast<std::size_t>(action)] = robust_estimate(
                    bounds.SigmaInv, x, action, probs[static_cast<std::size_t>(action)],
                    loss, action);
                break;
            }
            case Algorithm::RealLinExp3: {
                estimates.assign(static_cast<std::size_t>(K), Vector(d, 0.0));
                const LearnerState& snapshot = state;
                ResamplingOracle res_oracle(
                    dist, [&snapshot](const Vector& xc) { return policy_probs(snapshot, xc); },
                    RngStream(seed, Stream::Resampling, replication,
                              static_cast<std::uint64_t>(t)));
                if (cfg.mgr_mode == MgrMode::Fast) {
                    Vector q = mgr_fast(mgr_cfg, res_oracle.draw_fn(), action, x);
                    estimates[static_cast<std::size_t>(action)] =
                        real_estimate(q, action, loss, action);
                } else {
                    Matrix sigma_plus = mgr_naive(mgr_cfg, res_oracle.draw_fn(), action, d);
                    estimates[static_cast<std::size_t>(action)] =
                        real_estimate(sigma_plus, x, action, loss, action);
                }
                break;
            }
            case Algorithm::FullInfo: {
                std::vector<double> losses(static_cast<std::size_t>(K));
                for (int a = 0; a < K; ++a)
                    losses[static_cast<std::size_t>(a)] = loss_value(adv, t, x, a);
                estimates = fullinfo_estimate(bounds.SigmaInv, x, losses);
                break;
            }
            default:
                break;
        }

        if (cfg.record_trace) {
            RoundTrace tr;
            tr.probs = probs;
            tr.estimates = estimates.empty()
                               ? std::vector<Vector>(static_cast<std::size_t>(K), Vector(d, 0.0))
                               : estimates;
            record.trace.push_back(std::move(tr));
        }

        record.rounds.push_back(EpisodeRound{t, x, action, loss, comp_loss});

        if (has_state) state = update(state, estimates);
        if (cfg.algorithm == Algorithm::Counterfactual && dist.is_finite())
            for (std::size_t i = 0; i < dist.points().size(); ++i)
                for (int a = 0; a < K; ++a)
                    cf_cum[i][static_cast<std::size_t>(a)] +=
                        loss_value(adv, t, dist.points()[i], a);
    }
    return record;
}

namespace {

std::vector<int> round_grid(int T) {
    std::vector<int> grid;
    for (int t = 1; t <= T; t *= 2) {
        grid.push_back(t);
        if (t > T / 2) break;
    }
    if (grid.empty() || grid.back() != T) grid.push_back(T);
    return grid;
}

RegretCurve aggregate(const std::vector<RunRecord>& records, bool exact) {
    if (records.size() < 2)
        throw MismatchedConfigs("expected_regret: need at least two replications");
    const std::uint64_t h = records.front().config_hash;
    const std::size_t T = records.front().rounds.size();
    for (const RunRecord& r : records) {
        if (r.config_hash != h || r.rounds.size() != T)
            throw MismatchedConfigs("expected_regret: records from different configs");
        if (exact && r.exact_round_regret.size() != T)
            throw MismatchedConfigs("expected_regret_exact: missing exact regret");
    }

    RegretCurve curve;
    curve.grid = round_grid(static_cast<int>(T));
    curve.replications = static_cast<int>(records.size());
    const std::size_t G = curve.grid.size();
    const std::size_t n = records.size();

    std::vector<std::vector<double>> regret_at(G, std::vector<double>(n, 0.0));
    std::vector<double> learner_sum(G, 0.0), comp_sum(G, 0.0);

    for (std::size_t r = 0; r < n; ++r) {
        double cum_regret = 0.0, cum_learner = 0.0, cum_comp = 0.0;
        std::size_t g = 0;
        for (std::size_t t = 0; t < T; ++t) {
            const EpisodeRound& round = records[r].rounds[t];
            cum_learner += round.loss;
            cum_comp += round.comparator_loss;
            cum_regret += exact ? records[r].exact_round_regret[t]
                                : (round.loss - round.comparator_loss);
            while (g < G && static_cast<std::size_t>(curve.grid[g]) == t + 1) {
                regret_at[g][r] = cum_regret;
                learner_sum[g] += cum_learner;
                comp_sum[g] += cum_comp;
                ++g;
            }
        }
    }

    for (std::size_t g = 0; g < G; ++g) {
        const double mean =
            std::accumulate(regret_at[g].begin(), regret_at[g].end(), 0.0) / n;
        double var = 0.0;
        for (double v : regret_at[g]) var += (v - mean) * (v - mean);
        var /= (n - 1);
        curve.mean_regret.push_back(mean);
        curve.stderr_regret.push_back(std::sqrt(var / n));
        curve.mean_learner_loss.push_back(learner_sum[g] / n);
        curve.mean_comparator_loss.push_back(comp_sum[g] / n);
    }
    return curve;
}

}  // namespace

RegretCurve expected_regret(const std::vector<RunRecord>& records) {
    return aggregate(records, false);
}

RegretCurve expected_regret_exact(const std::vector<RunRecord>& records) {
    return aggregate(records, true);
}

double slope_fit(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 2)
        throw NonPositiveValue("slope_fit: need at least two points");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [t, regret] : points) {
        if (t <= 0.0 || regret <= 0.0)
            throw NonPositiveValue("slope_fit: nonpositive value");
        const double lx = std::log(t);
        const double ly = std::log(regret);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = static_cast<double>(points.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

PotentialReport verify_potential_inequality(const RunRecord& record, double eta,
                                            double gamma,
                                            const ComparatorPolicy& comparator,
                                            const Vector& x) {
    PotentialReport report;
    if (record.trace.empty())
        throw ValidationError("verify_potential_inequality: episode has no trace");

    const int K = static_cast<int>(record.trace.front().probs.size());
    const int d = static_cast<int>(x.size());
    const int star = comparator.decide(x);

    LearnerState replay = LearnerState::initial(K, d, eta, gamma);
    report.precondition_ok = true;
    double lhs = 0.0, quad = 0.0, uniform_gap = 0.0;
    for (const RoundTrace& tr : record.trace) {
        const std::vector<double> pi_x = policy_probs(replay, x);
        double mean_est = 0.0;
        for (int a = 0; a < K; ++a) {
            const double est = dot(x, tr.estimates[static_cast<std::size_t>(a)]);
            if (std::abs(eta * est) >= 1.0) report.precondition_ok = false;
            lhs += pi_x[static_cast<std::size_t>(a)] * est;
            quad += pi_x[static_cast<std::size_t>(a)] * est * est;
            mean_est += est / K;
        }
        const double star_est = dot(x, tr.estimates[static_cast<std::size_t>(star)]);
        lhs -= star_est;
        uniform_gap += mean_est - star_est;
        replay = update(replay, tr.estimates);
    }

    report.lhs = lhs;
    report.rhs = std::log(static_cast<double>(K)) / eta + 2.0 * gamma * uniform_gap +
                 eta * quad;
    report.holds = lhs <= report.rhs + 1e-9;
    return report;
}

double robust_bias_exact(const ContextDistribution& dist, const AdversarySpec& adv,
                         int t, int arm, const SymMatrix& sigma_inv) {
    if (!dist.is_finite())
        throw ValidationError("robust_bias_exact: finite support required");
    // E<X0, est_a> = sum_{x0, x} p(x0) p(x) x0^T SigmaInv x loss(x, a);
    // the propensity weight cancels exactly against the action draw.
    Vector inner(dist.dimension(), 0.0);  // sum_x p(x) SigmaInv x loss(x,a)
    for (std::size_t i = 0; i < dist.points().size(); ++i) {
        const Vector& xi = dist.points()[i];
        axpy(dist.probs()[i] * loss_value(adv, t, xi, arm), sigma_inv.apply(xi), inner);
    }
    double est_mean = 0.0, loss_mean = 0.0;
    for (std::size_t i = 0; i < dist.points().size(); ++i) {
        est_mean += dist.probs()[i] * dot(dist.points()[i], inner);
        loss_mean += dist.probs()[i] * loss_value(adv, t, dist.points()[i], arm);
    }
    return std::abs(est_mean - loss_mean);
}

double robust_quadratic_exact(const ContextDistribution& dist, const AdversarySpec& adv,
                              int t, const LearnerState& state,
                              const SymMatrix& sigma_inv) {
    if (!dist.is_finite())
        throw ValidationError("robust_quadratic_exact: finite support required");
    const int K = state.num_arms();
    double total = 0.0;
    for (std::size_t i0 = 0; i0 < dist.points().size(); ++i0) {
        const Vector& x0 = dist.points()[i0];
        const std::vector<double> pi_x0 = policy_probs(state, x0);
        const Vector w = sigma_inv.apply(x0);
        for (std::size_t i = 0; i < dist.points().size(); ++i) {
            const Vector& xt = dist.points()[i];
            const std::vector<double> pi_xt = policy_probs(state, xt);
            const double cross = dot(w, xt);
            for (int a = 0; a < K; ++a) {
                const double loss = loss_value(adv, t, xt, a);
                // chosen == a with prob pi(a|xt); estimate carries 1/pi(a|xt).
                total += dist.probs()[i0] * dist.probs()[i] *
                         pi_x0[static_cast<std::size_t>(a)] /
                         pi_xt[static_cast<std::size_t>(a)] * cross * cross * loss * loss;
            }
        }
    }
    return total;
}

Vector mgr_expected_estimate(const ContextDistribution& dist, const AdversarySpec& adv,
                             int t, int arm, const LearnerState& state,
                             const MgrConfig& cfg) {
    PolicyFn policy = [&state](const Vector& x) { return policy_probs(state, x); };
    const SymMatrix sigma_ta = action_covariance_exact(dist, policy, arm);
    const SymMatrix expected_plus = expected_sigma_plus(sigma_ta, cfg);
    // E est = E[SigmaPlus] Sigma_ta theta (draws are independent of X_t).
    return expected_plus.apply(sigma_ta.apply(adv.theta(t, arm)));
}

std::pair<double, double> mgr_quadratic_mc(const ContextDistribution& dist,
                                           const AdversarySpec& adv, int t,
                                           const LearnerState& state,
                                           const MgrConfig& cfg, int samples,
                                           std::uint64_t seed) {
    PolicyFn policy = [&state](const Vector& x) { return policy_probs(state, x); };
    double sum = 0.0, sum_sq = 0.0;
    for (int n = 0; n < samples; ++n) {
        RngStream ghost_rng(seed, Stream::Ghost, static_cast<std::uint64_t>(n), 0);
        RngStream ctx_rng(seed, Stream::Context, static_cast<std::uint64_t>(n), 0);
        RngStream act_rng(seed, Stream::Action, static_cast<std::uint64_t>(n), 0);
        const Vector x0 = sample_context(dist, ghost_rng);
        const Vector xt = sample_context(dist, ctx_rng);
        const std::vector<double> pi_xt = policy(xt);
        const int chosen = act_rng.categorical(pi_xt);
        const double loss = loss_value(adv, t, xt, chosen);

        ResamplingOracle oracle(dist, policy,
                                RngStream(seed, Stream::Resampling,
                                          static_cast<std::uint64_t>(n), 0));
        const Vector q = mgr_fast(cfg, oracle.draw_fn(), chosen, xt);
        const Vector est = real_estimate(q, chosen, loss, chosen);
        const double inner = dot(x0, est);
        const double value = policy(x0)[static_cast<std::size_t>(chosen)] * inner * inner;
        sum += value;
        sum_sq += value * value;
    }
    const double mean = sum / samples;
    const double var = std::max(0.0, sum_sq / samples - mean * mean);
    return {mean, std::sqrt(var / samples)};
}

}  // namespace linexp3
