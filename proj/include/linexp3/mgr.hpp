#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "linexp3/environment.hpp"
#include "linexp3/numkit.hpp"
#include "linexp3/rng.hpp"

namespace linexp3 {

struct MgrConfig {
    double beta = 0.0;
    int M = 0;

    // Theorem precondition: 0 < beta <= 1/(2 sigma^2).
    void check(double sigma) const;
};

// One resampling draw: context X(k) and the arm A(k) sampled from the
// current policy at X(k).
using ResamplingDraw = std::pair<Vector, int>;
using DrawFn = std::function<ResamplingDraw()>;

// Evaluates the current policy at a context, returning probabilities over
// the K arms.
using PolicyFn = std::function<std::vector<double>(const Vector&)>;

// Sampling access to (distribution, policy) on a dedicated random stream.
// For finite-support distributions the per-point policy probabilities are
// precomputed once, so a draw is an index lookup.
class ResamplingOracle {
public:
    ResamplingOracle(const ContextDistribution& dist, PolicyFn policy, RngStream rng);

    ResamplingDraw draw();
    DrawFn draw_fn() {
        return [this] { return draw(); };
    }

private:
    const ContextDistribution* dist_;
    PolicyFn policy_;
    RngStream rng_;
    std::vector<std::vector<double>> cached_probs_;  // finite support only
};

// Records M draws up front so naive and fast variants can share one script.
std::vector<ResamplingDraw> record_draws(const DrawFn& source, int M);

// Turns a recorded script back into a draw source (replays in order).
DrawFn scripted(const std::vector<ResamplingDraw>& script);

// Naive matrix-valued resampling: beta*I + beta*sum_k A_k with
// A_k = (I - beta B_k) A_{k-1}, B_k = 1{A(k)=a} X(k)X(k)^T.
// Consumes exactly M draws.
Matrix mgr_naive(const MgrConfig& cfg, const DrawFn& source, int arm, int dim);

// Vector-valued variant: returns the naive estimate applied to x, using
// only vector-vector products. Identical draws give identical results to
// mgr_naive(...)*x up to roundoff.
Vector mgr_fast(const MgrConfig& cfg, const DrawFn& source, int arm, const Vector& x);

// Single pass of M shared draws across all K arms; arm a is updated only
// on steps with A(k) == a.
std::vector<Vector> mgr_all_arms_fast(const MgrConfig& cfg, const DrawFn& source,
                                      int num_arms, const Vector& x);

// Sigma_{t,a} = sum_i p_i pi(a|x_i) x_i x_i^T, exact on finite support.
SymMatrix action_covariance_exact(const ContextDistribution& dist,
                                  const PolicyFn& policy, int arm);

// Exact expectation of mgr_naive over oracle randomness:
// beta * sum_{k=0}^{M} (I - beta Sigma_ta)^k
//   = (I - (I - beta Sigma_ta)^{M+1}) Sigma_ta^{-1}.
SymMatrix expected_sigma_plus(const SymMatrix& sigma_ta, const MgrConfig& cfg);

}  // namespace linexp3
