#include "linexp3/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <thread>

#include <json.hpp>

namespace linexp3 {

ResolvedParams resolve_params(const ExperimentConfig& cfg, const EnvironmentBounds& bounds) {
    ResolvedParams p;
    const double sigma = bounds.sigma;
    const double lmin = bounds.lambda_min;
    const double logk = std::log(static_cast<double>(cfg.K));

    switch (cfg.algorithm) {
        case Algorithm::RobustLinExp3: {
            TunedParams tuned = tune_robust(cfg.T, cfg.K, cfg.d, sigma, lmin);
            p.gamma = cfg.gamma.is_auto ? tuned.gamma : cfg.gamma.value;
            p.gamma_clamped = cfg.gamma.is_auto && tuned.gamma_clamped;
            if (cfg.eta.is_auto) {
                p.eta = std::pow(static_cast<double>(cfg.T), -2.0 / 3.0) *
                        std::pow(static_cast<double>(cfg.K) * cfg.d, -1.0 / 3.0) *
                        std::pow(logk, 2.0 / 3.0);
                const double cap = p.gamma * lmin / (cfg.K * sigma * sigma);
                if (p.eta > cap) {
                    p.eta = cap;
                    p.eta_clamped = true;
                    p.warnings.push_back("eta clamped to gamma*lambda_min/(K sigma^2)");
                }
            } else {
                p.eta = cfg.eta.value;
            }
            p.warnings.insert(p.warnings.end(), tuned.warnings.begin(), tuned.warnings.end());
            break;
        }
        case Algorithm::RealLinExp3: {
            TunedParams tuned =
                tune_real(cfg.T, cfg.K, cfg.d, sigma, bounds.R, lmin);
            p.beta = cfg.beta.is_auto ? tuned.beta : cfg.beta.value;
            p.gamma = cfg.gamma.is_auto ? tuned.gamma : cfg.gamma.value;
            p.gamma_clamped = cfg.gamma.is_auto && tuned.gamma_clamped;
            p.log_clamped = tuned.log_clamped;
            if (cfg.M.is_auto) {
                double log_arg = static_cast<double>(cfg.T) * sigma * sigma *
                                 bounds.R * bounds.R;
                if (log_arg <= M_E) log_arg = M_E;
                p.M = static_cast<int>(
                    std::ceil(cfg.K * sigma * sigma * std::log(log_arg) / (p.gamma * lmin)));
            } else {
                p.M = static_cast<int>(cfg.M.value);
            }
            if (cfg.eta.is_auto) {
                p.eta = tuned.eta;
                p.eta_clamped = tuned.eta_clamped;
                const double cap = 2.0 / (p.M + 1);
                if (p.eta > cap) {
                    p.eta = cap;
                    p.eta_clamped = true;
                    p.warnings.push_back("eta clamped to 2/(M+1)");
                }
            } else {
                p.eta = cfg.eta.value;
            }
            p.warnings.insert(p.warnings.end(), tuned.warnings.begin(), tuned.warnings.end());
            MgrConfig{p.beta, p.M}.check(sigma);
            break;
        }
        case Algorithm::FullInfo: {
            p.gamma = cfg.gamma.is_auto ? 0.0 : cfg.gamma.value;
            if (cfg.eta.is_auto) {
                p.eta = std::sqrt(logk / (static_cast<double>(cfg.d) * cfg.T));
                const double cap = lmin / (sigma * sigma);
                if (p.eta > cap) {
                    p.eta = cap;
                    p.eta_clamped = true;
                    p.warnings.push_back("eta clamped to lambda_min/sigma^2");
                }
            } else {
                p.eta = cfg.eta.value;
            }
            break;
        }
        case Algorithm::Counterfactual:
            p.gamma = cfg.gamma.is_auto ? 0.0 : cfg.gamma.value;
            p.eta = cfg.eta.is_auto ? std::sqrt(8.0 * logk / cfg.T) : cfg.eta.value;
            break;
        case Algorithm::Uniform:
            p.eta = 0.0;
            p.gamma = 1.0;
            break;
    }
    return p;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, int threads) {
    const auto start = std::chrono::steady_clock::now();

    const AdversarySpec adv = cfg.adversary.horizon() == cfg.T
                                  ? cfg.adversary
                                  : cfg.adversary.with_horizon(cfg.T);
    ExperimentResult result;
    result.bounds = validate_adversary(adv, cfg.distribution);
    result.params = resolve_params(cfg, result.bounds);

    const ComparatorPolicy comparator = comparator_policy(adv, cfg.T);

    EpisodeConfig episode;
    episode.algorithm = cfg.algorithm;
    episode.eta = result.params.eta;
    episode.gamma = result.params.gamma;
    episode.beta = result.params.beta;
    episode.M = result.params.M;
    episode.mgr_mode = cfg.mgr_mode;
    episode.exact_regret = cfg.exact_regret;

    std::vector<RunRecord> records(static_cast<std::size_t>(cfg.replications));
    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;) {
            const int r = next.fetch_add(1);
            if (r >= cfg.replications) return;
            records[static_cast<std::size_t>(r)] =
                run_episode(cfg.distribution, adv, comparator, result.bounds,
                            episode, cfg.seed, static_cast<std::uint64_t>(r));
        }
    };
    if (threads <= 1 || cfg.replications == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        const int n = std::min(threads, cfg.replications);
        pool.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) pool.emplace_back(worker);
        for (std::thread& th : pool) th.join();
    }

    if (cfg.replications == 1) {
        // Degenerate single-replication curve (stderr undefined -> 0).
        std::vector<RunRecord> doubled = {records[0], records[0]};
        result.curve = cfg.exact_regret ? expected_regret_exact(doubled)
                                        : expected_regret(doubled);
        for (double& s : result.curve.stderr_regret) s = 0.0;
        result.curve.replications = 1;
    } else {
        result.curve = cfg.exact_regret ? expected_regret_exact(records)
                                        : expected_regret(records);
    }

    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

namespace {

std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace

std::string curve_to_csv(const RegretCurve& curve) {
    std::string out = "t,mean_regret,stderr,mean_learner_loss,mean_comparator_loss\n";
    for (std::size_t i = 0; i < curve.grid.size(); ++i) {
        out += std::to_string(curve.grid[i]);
        out += ',';
        out += fmt12(curve.mean_regret[i]);
        out += ',';
        out += fmt12(curve.stderr_regret[i]);
        out += ',';
        out += fmt12(curve.mean_learner_loss[i]);
        out += ',';
        out += fmt12(curve.mean_comparator_loss[i]);
        out += '\n';
    }
    return out;
}

std::string summary_json(const ExperimentConfig& cfg, const ExperimentResult& result) {
    nlohmann::json j;
    j["algorithm"] = algorithm_name(cfg.algorithm);
    j["K"] = cfg.K;
    j["d"] = cfg.d;
    j["T"] = cfg.T;
    j["seed"] = cfg.seed;
    j["replications"] = cfg.replications;
    j["regret"] = cfg.exact_regret ? "exact" : "monte_carlo";
    j["resolved"] = {
        {"eta", result.params.eta},
        {"gamma", result.params.gamma},
        {"beta", result.params.beta},
        {"M", result.params.M},
        {"eta_clamped", result.params.eta_clamped},
        {"gamma_clamped", result.params.gamma_clamped},
        {"log_clamped", result.params.log_clamped},
        {"warnings", result.params.warnings},
    };
    j["environment"] = {
        {"sigma", result.bounds.sigma},
        {"R", result.bounds.R},
        {"lambda_min", result.bounds.lambda_min},
    };
    j["final_regret"] = result.curve.mean_regret.back();
    j["final_stderr"] = result.curve.stderr_regret.back();
    j["wall_seconds"] = result.wall_seconds;
    return j.dump(2) + "\n";
}

SweepResult run_sweep(const ExperimentConfig& cfg, const std::vector<int>& grid,
                      int threads) {
    if (grid.size() < 3)
        throw ValidationError("sweep: need a grid of at least 3 horizons");
    SweepResult sweep;
    std::vector<std::pair<double, double>> fit_points;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        ExperimentConfig point = cfg;
        point.T = grid[i];
        point.seed = cfg.seed + static_cast<std::uint64_t>(i) * 1000000ULL;
        point.adversary = cfg.adversary.with_horizon(grid[i]);
        ExperimentResult result = run_experiment(point, threads);
        sweep.points.push_back(SweepPoint{grid[i], result.curve.mean_regret.back(),
                                          result.curve.stderr_regret.back()});
        fit_points.emplace_back(static_cast<double>(grid[i]),
                                result.curve.mean_regret.back());
    }
    sweep.exponent = slope_fit(fit_points);
    return sweep;
}

std::string sweep_to_csv(const SweepResult& sweep) {
    std::string out = "T,final_regret,stderr\n";
    for (const SweepPoint& p : sweep.points) {
        out += std::to_string(p.T);
        out += ',';
        out += fmt12(p.final_regret);
        out += ',';
        out += fmt12(p.final_stderr);
        out += '\n';
    }
    out += "# exponent," + fmt12(sweep.exponent) + "\n";
    return out;
}

}  // namespace linexp3
