#include "linexp3/learner.hpp"

#include <algorithm>
#include <cmath>

namespace linexp3 {

LearnerState LearnerState::initial(int num_arms, int dim, double eta, double gamma) {
    LearnerState s;
    s.cum_estimates.assign(static_cast<std::size_t>(num_arms), Vector(dim, 0.0));
    s.eta = eta;
    s.gamma = gamma;
    s.round = 1;
    return s;
}

std::vector<double> policy_probs(const LearnerState& state, const Vector& x) {
    const int K = state.num_arms();
    std::vector<double> scores(static_cast<std::size_t>(K));
    for (int a = 0; a < K; ++a)
        scores[static_cast<std::size_t>(a)] =
            -state.eta * dot(x, state.cum_estimates[static_cast<std::size_t>(a)]);
    const double top = *std::max_element(scores.begin(), scores.end());
    double sum = 0.0;
    std::vector<double> probs(static_cast<std::size_t>(K));
    for (int a = 0; a < K; ++a) {
        probs[static_cast<std::size_t>(a)] = std::exp(scores[static_cast<std::size_t>(a)] - top);
        sum += probs[static_cast<std::size_t>(a)];
    }
    const double mix = state.gamma / K;
    double total = 0.0;
    for (double& p : probs) {
        p = (1.0 - state.gamma) * (p / sum) + mix;
        total += p;
    }
    for (double& p : probs) p /= total;  // exact renormalization
    return probs;
}

int draw_action(const std::vector<double>& probs, RngStream& rng) {
    return rng.categorical(probs);
}

Vector robust_estimate(const SymMatrix& sigma_inv, const Vector& x, int chosen,
                       double prob_chosen, double loss, int arm) {
    if (arm != chosen || loss == 0.0) return Vector(x.size(), 0.0);
    Vector est = sigma_inv.apply(x);
    const double scale = loss / prob_chosen;
    for (double& v : est) v *= scale;
    return est;
}

Vector real_estimate(const Vector& q, int chosen, double loss, int arm) {
    if (arm != chosen || loss == 0.0) return Vector(q.size(), 0.0);
    return scaled(q, loss);
}

Vector real_estimate(const Matrix& sigma_plus, const Vector& x, int chosen,
                     double loss, int arm) {
    if (arm != chosen || loss == 0.0) return Vector(x.size(), 0.0);
    return scaled(sigma_plus.apply(x), loss);
}

std::vector<Vector> fullinfo_estimate(const SymMatrix& sigma_inv, const Vector& x,
                                      const std::vector<double>& losses) {
    Vector base = sigma_inv.apply(x);
    std::vector<Vector> out;
    out.reserve(losses.size());
    for (double loss : losses) out.push_back(scaled(base, loss));
    return out;
}

std::vector<double> counterfactual_weights(const LossOracle& oracle, int t,
                                           const Vector& x, double eta, int num_arms) {
    std::vector<double> scores(static_cast<std::size_t>(num_arms), 0.0);
    for (int a = 0; a < num_arms; ++a) {
        double cum = 0.0;
        for (int s = 1; s < t; ++s) cum += oracle(s, x, a);
        scores[static_cast<std::size_t>(a)] = -eta * cum;
    }
    const double top = *std::max_element(scores.begin(), scores.end());
    double sum = 0.0;
    std::vector<double> probs(static_cast<std::size_t>(num_arms));
    for (int a = 0; a < num_arms; ++a) {
        probs[static_cast<std::size_t>(a)] = std::exp(scores[static_cast<std::size_t>(a)] - top);
        sum += probs[static_cast<std::size_t>(a)];
    }
    for (double& p : probs) p /= sum;
    return probs;
}

LearnerState update(const LearnerState& state, const std::vector<Vector>& estimates) {
    LearnerState next = state;
    for (std::size_t a = 0; a < estimates.size(); ++a) {
        if (!all_finite(estimates[a]))
            throw NonFiniteEstimate("update: non-finite estimate for arm " +
                                    std::to_string(a));
        axpy(1.0, estimates[a], next.cum_estimates[a]);
    }
    next.round = state.round + 1;
    return next;
}

TunedParams tune_robust(int T, int K, int d, double sigma, double lambda_min) {
    TunedParams p;
    const double logk = std::log(static_cast<double>(K));
    const double kd = static_cast<double>(K) * d;
    p.eta = std::pow(static_cast<double>(T), -2.0 / 3.0) * std::pow(kd, -1.0 / 3.0) *
            std::pow(logk, 2.0 / 3.0);
    p.gamma = std::pow(static_cast<double>(T), -1.0 / 3.0) * std::pow(kd * logk, 1.0 / 3.0);
    if (p.gamma >= 1.0) {
        p.gamma = 1.0 - 1e-6;
        p.gamma_clamped = true;
        p.warnings.push_back("gamma clamped below 1; T too small for the tuned value");
    }
    const double eta_cap = p.gamma * lambda_min / (K * sigma * sigma);
    if (p.eta > eta_cap) {
        p.eta = eta_cap;
        p.eta_clamped = true;
        p.warnings.push_back("eta clamped to gamma*lambda_min/(K sigma^2)");
    }
    return p;
}

TunedParams tune_real(int T, int K, int d, double sigma, double R, double lambda_min) {
    TunedParams p;
    p.beta = 1.0 / (2.0 * sigma * sigma);
    double log_arg = static_cast<double>(T) * sigma * sigma * R * R;
    if (log_arg <= M_E) {
        log_arg = M_E;
        p.log_clamped = true;
        p.warnings.push_back("log(T sigma^2 R^2) clamped to 1; T sigma^2 R^2 <= e");
    }
    const double logterm = std::log(log_arg);
    p.gamma = std::sqrt(logterm / T);
    if (p.gamma >= 1.0) {
        p.gamma = 1.0 - 1e-6;
        p.gamma_clamped = true;
        p.warnings.push_back("gamma clamped below 1");
    }
    p.M = static_cast<int>(std::ceil(K * sigma * sigma * logterm / (p.gamma * lambda_min)));
    const double logk = std::log(static_cast<double>(K));
    p.eta = std::sqrt(logk / (static_cast<double>(d) * K * T * logterm));
    const double eta_cap = 2.0 / (p.M + 1);
    if (p.eta > eta_cap) {
        p.eta = eta_cap;
        p.eta_clamped = true;
        p.warnings.push_back("eta clamped to 2/(M+1)");
    }
    return p;
}

}  // namespace linexp3
