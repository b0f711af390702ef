#pragma once

#include <functional>
#include <string>
#include <vector>

#include "linexp3/mgr.hpp"
#include "linexp3/numkit.hpp"
#include "linexp3/rng.hpp"

namespace linexp3 {

// Cumulative loss-parameter estimates plus exponential-weights
// hyperparameters. Updated functionally: update() returns a new state.
struct LearnerState {
    std::vector<Vector> cum_estimates;  // K x d, all zeros at round 1
    double eta = 0.0;
    double gamma = 0.0;
    int round = 1;

    static LearnerState initial(int num_arms, int dim, double eta, double gamma);
    int num_arms() const { return static_cast<int>(cum_estimates.size()); }
};

// pi(a|x) = (1-gamma) softmax_a(-eta <x, cum_a>) + gamma/K, with
// max-subtraction before exponentiation. Entries are >= gamma/K and sum
// to 1 up to roundoff.
std::vector<double> policy_probs(const LearnerState& state, const Vector& x);

int draw_action(const std::vector<double>& probs, RngStream& rng);

// Inverse-propensity estimate 1{chosen==a}/prob * SigmaInv x * loss.
Vector robust_estimate(const SymMatrix& sigma_inv, const Vector& x, int chosen,
                       double prob_chosen, double loss, int arm);

// Resampling estimate from the precomputed q = SigmaPlus x.
Vector real_estimate(const Vector& q, int chosen, double loss, int arm);
// Matrix-mode variant.
Vector real_estimate(const Matrix& sigma_plus, const Vector& x, int chosen,
                     double loss, int arm);

// One estimate per arm from all K observed losses.
std::vector<Vector> fullinfo_estimate(const SymMatrix& sigma_inv, const Vector& x,
                                      const std::vector<double>& losses);

// Exponential weights over true past losses, no uniform mixing. The
// oracle evaluates any past loss function at any (context, arm).
using LossOracle = std::function<double(int round, const Vector& x, int arm)>;
std::vector<double> counterfactual_weights(const LossOracle& oracle, int t,
                                           const Vector& x, double eta, int num_arms);

LearnerState update(const LearnerState& state, const std::vector<Vector>& estimates);

struct TunedParams {
    double eta = 0.0;
    double gamma = 0.0;
    double beta = 0.0;
    int M = 0;
    bool eta_clamped = false;
    bool gamma_clamped = false;
    bool log_clamped = false;
    std::vector<std::string> warnings;
};

// eta = T^{-2/3} (Kd)^{-1/3} (ln K)^{2/3}, gamma = T^{-1/3} (Kd ln K)^{1/3},
// then gamma is clamped into (0,1) and eta to gamma*lambda_min/(K sigma^2).
TunedParams tune_robust(int T, int K, int d, double sigma, double lambda_min);

// beta = 1/(2 sigma^2), gamma = sqrt(ln(T sigma^2 R^2)/T),
// M = ceil(K sigma^2 ln(T sigma^2 R^2)/(gamma lambda_min)),
// eta = sqrt(ln K/(d K T ln(T sigma^2 R^2))), with the log argument
// clamped below at e and eta clamped to 2/(M+1).
TunedParams tune_real(int T, int K, int d, double sigma, double R, double lambda_min);

}  // namespace linexp3
