#include "linexp3/mgr.hpp"

#include <cmath>
#include <string>

namespace linexp3 {

void MgrConfig::check(double sigma) const {
    if (beta <= 0.0)
        throw ValidationError("mgr: beta must be positive");
    if (sigma > 0.0 && beta > 1.0 / (2.0 * sigma * sigma) + 1e-12)
        throw ValidationError("mgr: beta > 1/(2 sigma^2)");
    if (M < 0) throw ValidationError("mgr: M must be nonnegative");
}

ResamplingOracle::ResamplingOracle(const ContextDistribution& dist, PolicyFn policy,
                                   RngStream rng)
    : dist_(&dist), policy_(std::move(policy)), rng_(rng) {
    if (dist_->is_finite()) {
        cached_probs_.reserve(dist_->points().size());
        for (const Vector& x : dist_->points()) cached_probs_.push_back(policy_(x));
    }
}

ResamplingDraw ResamplingOracle::draw() {
    if (dist_->is_finite()) {
        const int i = rng_.categorical(dist_->probs());
        const Vector& x = dist_->points()[static_cast<std::size_t>(i)];
        const int a = rng_.categorical(cached_probs_[static_cast<std::size_t>(i)]);
        return {x, a};
    }
    Vector x = sample_context(*dist_, rng_);
    const int a = rng_.categorical(policy_(x));
    return {std::move(x), a};
}

std::vector<ResamplingDraw> record_draws(const DrawFn& source, int M) {
    std::vector<ResamplingDraw> script;
    script.reserve(static_cast<std::size_t>(M));
    for (int k = 0; k < M; ++k) script.push_back(source());
    return script;
}

DrawFn scripted(const std::vector<ResamplingDraw>& script) {
    std::size_t next = 0;
    return [&script, next]() mutable { return script.at(next++); };
}

Matrix mgr_naive(const MgrConfig& cfg, const DrawFn& source, int arm, int dim) {
    Matrix product = Matrix::identity(dim);  // A_k, running
    Matrix result(dim);                      // sum of A_k
    for (int k = 1; k <= cfg.M; ++k) {
        ResamplingDraw drawn = source();
        const Vector& x = drawn.first;
        if (drawn.second == arm) {
            // A_k = (I - beta x xT) A_{k-1}: subtract beta x (xT A_{k-1}).
            Vector xt_a(x.size(), 0.0);
            for (int i = 0; i < dim; ++i) {
                double s = 0.0;
                for (int j = 0; j < dim; ++j) s += x[static_cast<std::size_t>(j)] * product(j, i);
                xt_a[static_cast<std::size_t>(i)] = s;
            }
            product.subtract_scaled_outer(cfg.beta, x, xt_a);
        }
        result.add_scaled(product, 1.0);
    }
    Matrix out = Matrix::identity(dim);
    out.add_scaled(result, 1.0);
    out.scale(cfg.beta);
    return out;
}

Vector mgr_fast(const MgrConfig& cfg, const DrawFn& source, int arm, const Vector& x) {
    Vector y = x;           // Y_k
    Vector acc = x;         // Y_0 + sum_k Y_k
    for (int k = 1; k <= cfg.M; ++k) {
        ResamplingDraw drawn = source();
        if (drawn.second == arm) {
            const double inner = dot(y, drawn.first);
            axpy(-cfg.beta * inner, drawn.first, y);
        }
        axpy(1.0, y, acc);
    }
    return scaled(acc, cfg.beta);
}

std::vector<Vector> mgr_all_arms_fast(const MgrConfig& cfg, const DrawFn& source,
                                      int num_arms, const Vector& x) {
    std::vector<Vector> y(static_cast<std::size_t>(num_arms), x);
    std::vector<Vector> acc(static_cast<std::size_t>(num_arms), x);
    for (int k = 1; k <= cfg.M; ++k) {
        ResamplingDraw drawn = source();
        const int a = drawn.second;
        if (a >= 0 && a < num_arms) {
            Vector& ya = y[static_cast<std::size_t>(a)];
            const double inner = dot(ya, drawn.first);
            axpy(-cfg.beta * inner, drawn.first, ya);
        }
        for (int b = 0; b < num_arms; ++b)
            axpy(1.0, y[static_cast<std::size_t>(b)], acc[static_cast<std::size_t>(b)]);
    }
    for (Vector& q : acc)
        for (double& v : q) v *= cfg.beta;
    return acc;
}

SymMatrix action_covariance_exact(const ContextDistribution& dist,
                                  const PolicyFn& policy, int arm) {
    if (!dist.is_finite())
        throw ValidationError("action_covariance_exact: finite support required");
    SymMatrix sigma(dist.dimension());
    for (std::size_t i = 0; i < dist.points().size(); ++i) {
        const double w =
            dist.probs()[i] * policy(dist.points()[i])[static_cast<std::size_t>(arm)];
        sigma.add_scaled_outer(w, dist.points()[i]);
    }
    if (jacobi_eigenvalues(sigma).front() <= 1e-14)
        throw SingularCovariance("action_covariance_exact: degenerate Sigma_ta");
    return sigma;
}

SymMatrix expected_sigma_plus(const SymMatrix& sigma_ta, const MgrConfig& cfg) {
    const int d = sigma_ta.dim();
    if (jacobi_eigenvalues(sigma_ta).front() <= 0.0)
        throw NotPositiveDefinite("expected_sigma_plus: Sigma_ta not positive definite");
    SymMatrix step = SymMatrix::identity(d);       // (I - beta Sigma)^k
    SymMatrix contraction = SymMatrix::identity(d);
    contraction.add_scaled(sigma_ta, -cfg.beta);
    SymMatrix sum = SymMatrix::identity(d);        // sum_{k=0}^{M} (I - beta Sigma)^k
    for (int k = 1; k <= cfg.M; ++k) {
        step = step.multiply_sym(contraction);
        sum.add_scaled(step, 1.0);
    }
    sum.scale(cfg.beta);
    return sum;
}

}  // namespace linexp3
