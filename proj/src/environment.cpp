#include "linexp3/environment.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace linexp3 {

ContextDistribution ContextDistribution::finite(std::vector<Vector> points,
                                                std::vector<double> probs) {
    if (points.empty() || points.size() != probs.size())
        throw ValidationError("finite support: points/probs size mismatch");
    const int d = static_cast<int>(points.front().size());
    double sum = 0.0;
    double sigma = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (static_cast<int>(points[i].size()) != d)
            throw ValidationError("finite support: inconsistent dimensions");
        if (!all_finite(points[i]))
            throw ValidationError("finite support: non-finite point");
        if (probs[i] < 0.0) throw ValidationError("finite support: negative probability");
        sum += probs[i];
        sigma = std::max(sigma, norm2(points[i]));
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw ValidationError("finite support: probabilities sum to " + std::to_string(sum));
    ContextDistribution dist;
    dist.kind_ = Kind::FiniteSupport;
    dist.dimension_ = d;
    dist.sigma_ = sigma;
    dist.points_ = std::move(points);
    dist.probs_ = std::move(probs);
    return dist;
}

ContextDistribution ContextDistribution::sphere(int dimension, double radius) {
    if (dimension < 1 || radius <= 0.0)
        throw ValidationError("sphere: need dimension >= 1 and radius > 0");
    ContextDistribution dist;
    dist.kind_ = Kind::SphereUniform;
    dist.dimension_ = dimension;
    dist.radius_ = radius;
    dist.sigma_ = radius;
    return dist;
}

ContextDistribution ContextDistribution::cube(int dimension, double half_width) {
    if (dimension < 1 || half_width <= 0.0)
        throw ValidationError("cube: need dimension >= 1 and half_width > 0");
    ContextDistribution dist;
    dist.kind_ = Kind::CubeUniform;
    dist.dimension_ = dimension;
    dist.half_width_ = half_width;
    dist.sigma_ = half_width * std::sqrt(static_cast<double>(dimension));
    return dist;
}

Vector sample_context(const ContextDistribution& dist, RngStream& rng) {
    switch (dist.kind()) {
        case ContextDistribution::Kind::FiniteSupport: {
            const int i = rng.categorical(dist.probs());
            return dist.points()[static_cast<std::size_t>(i)];
        }
        case ContextDistribution::Kind::SphereUniform: {
            Vector x(dist.dimension());
            double n = 0.0;
            do {
                for (double& v : x) v = rng.normal();
                n = norm2(x);
            } while (n == 0.0);
            for (double& v : x) v *= dist.radius() / n;
            return x;
        }
        case ContextDistribution::Kind::CubeUniform: {
            Vector x(dist.dimension());
            for (double& v : x)
                v = dist.half_width() * (2.0 * rng.uniform() - 1.0);
            return x;
        }
    }
    throw ValidationError("sample_context: unknown kind");
}

SymMatrix exact_covariance(const ContextDistribution& dist) {
    const int d = dist.dimension();
    SymMatrix sigma(d);
    switch (dist.kind()) {
        case ContextDistribution::Kind::FiniteSupport:
            for (std::size_t i = 0; i < dist.points().size(); ++i)
                sigma.add_scaled_outer(dist.probs()[i], dist.points()[i]);
            break;
        case ContextDistribution::Kind::SphereUniform: {
            const double v = dist.radius() * dist.radius() / d;
            for (int i = 0; i < d; ++i) sigma.set(i, i, v);
            break;
        }
        case ContextDistribution::Kind::CubeUniform: {
            const double v = dist.half_width() * dist.half_width() / 3.0;
            for (int i = 0; i < d; ++i) sigma.set(i, i, v);
            break;
        }
    }
    if (jacobi_eigenvalues(sigma).front() <= 1e-12)
        throw SingularCovariance("exact_covariance: smallest eigenvalue <= 1e-12");
    return sigma;
}

double MisspecSpec::value(const Vector& x, int arm) const {
    const double s = dot(x, directions[static_cast<std::size_t>(arm)]);
    switch (kind) {
        case Kind::SignBump:
            return magnitude * ((s > 0.0) - (s < 0.0));
        case Kind::Cosine:
            return magnitude * std::cos(frequency * s);
    }
    return 0.0;
}

namespace {

void check_theta_block(const std::vector<Vector>& theta, int arms, int dim) {
    if (static_cast<int>(theta.size()) != arms)
        throw ValidationError("adversary: wrong number of arm parameter vectors");
    for (const Vector& row : theta) {
        if (static_cast<int>(row.size()) != dim)
            throw ValidationError("adversary: parameter dimension mismatch");
        if (!all_finite(row)) throw ValidationError("adversary: non-finite parameter");
    }
}

void check_misspec(const std::optional<MisspecSpec>& misspec, int arms, int dim) {
    if (!misspec) return;
    if (misspec->magnitude < 0.0)
        throw ValidationError("adversary: negative misspecification magnitude");
    if (static_cast<int>(misspec->directions.size()) != arms)
        throw ValidationError("adversary: misspec needs one direction per arm");
    for (const Vector& v : misspec->directions)
        if (static_cast<int>(v.size()) != dim)
            throw ValidationError("adversary: misspec direction dimension mismatch");
}

}  // namespace

AdversarySpec AdversarySpec::constant(std::vector<Vector> theta, int horizon,
                                      std::optional<MisspecSpec> misspec) {
    if (horizon < 1) throw ValidationError("adversary: horizon must be >= 1");
    AdversarySpec adv;
    adv.kind_ = Kind::Constant;
    adv.num_arms_ = static_cast<int>(theta.size());
    adv.dimension_ = theta.empty() ? 0 : static_cast<int>(theta.front().size());
    check_theta_block(theta, adv.num_arms_, adv.dimension_);
    check_misspec(misspec, adv.num_arms_, adv.dimension_);
    adv.horizon_ = horizon;
    adv.segment_starts_ = {1};
    adv.segment_thetas_ = {std::move(theta)};
    adv.misspec_ = std::move(misspec);
    return adv;
}

AdversarySpec AdversarySpec::piecewise(std::vector<int> segment_starts,
                                       std::vector<std::vector<Vector>> segment_thetas,
                                       int horizon,
                                       std::optional<MisspecSpec> misspec) {
    if (horizon < 1) throw ValidationError("adversary: horizon must be >= 1");
    if (segment_starts.empty() || segment_starts.size() != segment_thetas.size())
        throw ValidationError("adversary: segments/starts mismatch");
    if (segment_starts.front() != 1)
        throw ValidationError("adversary: first segment must start at round 1");
    for (std::size_t i = 1; i < segment_starts.size(); ++i)
        if (segment_starts[i] <= segment_starts[i - 1])
            throw ValidationError("adversary: segment starts must increase");
    AdversarySpec adv;
    adv.kind_ = Kind::PiecewiseConstant;
    adv.num_arms_ = static_cast<int>(segment_thetas.front().size());
    adv.dimension_ = static_cast<int>(segment_thetas.front().front().size());
    for (const auto& block : segment_thetas)
        check_theta_block(block, adv.num_arms_, adv.dimension_);
    check_misspec(misspec, adv.num_arms_, adv.dimension_);
    adv.horizon_ = horizon;
    adv.segment_starts_ = std::move(segment_starts);
    adv.segment_thetas_ = std::move(segment_thetas);
    adv.misspec_ = std::move(misspec);
    return adv;
}

AdversarySpec AdversarySpec::sinusoidal(std::vector<Vector> base, double amplitude,
                                        double period, int horizon,
                                        std::optional<MisspecSpec> misspec) {
    if (horizon < 1) throw ValidationError("adversary: horizon must be >= 1");
    if (period <= 0.0) throw ValidationError("adversary: period must be positive");
    AdversarySpec adv;
    adv.kind_ = Kind::SinusoidalDrift;
    adv.num_arms_ = static_cast<int>(base.size());
    adv.dimension_ = base.empty() ? 0 : static_cast<int>(base.front().size());
    check_theta_block(base, adv.num_arms_, adv.dimension_);
    check_misspec(misspec, adv.num_arms_, adv.dimension_);
    adv.horizon_ = horizon;
    adv.base_ = std::move(base);
    adv.amplitude_ = amplitude;
    adv.period_ = period;
    adv.misspec_ = std::move(misspec);
    return adv;
}

Vector AdversarySpec::theta(int t, int arm) const {
    if (t < 1 || t > horizon_)
        throw ValidationError("adversary: round out of range");
    if (arm < 0 || arm >= num_arms_)
        throw ValidationError("adversary: arm out of range");
    switch (kind_) {
        case Kind::Constant:
            return segment_thetas_.front()[static_cast<std::size_t>(arm)];
        case Kind::PiecewiseConstant: {
            std::size_t seg = 0;
            while (seg + 1 < segment_starts_.size() && segment_starts_[seg + 1] <= t) ++seg;
            return segment_thetas_[seg][static_cast<std::size_t>(arm)];
        }
        case Kind::SinusoidalDrift: {
            const double s = 1.0 + amplitude_ * std::sin(2.0 * M_PI * t / period_);
            return scaled(base_[static_cast<std::size_t>(arm)], s);
        }
    }
    throw ValidationError("adversary: unknown kind");
}

double AdversarySpec::misspec_value(const Vector& x, int arm) const {
    return misspec_ ? misspec_->value(x, arm) : 0.0;
}

double AdversarySpec::parameter_norm_bound() const {
    double r = 0.0;
    if (kind_ == Kind::SinusoidalDrift) {
        const double s = 1.0 + std::abs(amplitude_);
        for (const Vector& v : base_) r = std::max(r, s * norm2(v));
    } else {
        for (const auto& block : segment_thetas_)
            for (const Vector& v : block) r = std::max(r, norm2(v));
    }
    return r;
}

AdversarySpec AdversarySpec::scaled_to_bound(double sigma) const {
    const double eps = epsilon();
    if (eps >= 1.0)
        throw ValidationError("adversary: misspecification magnitude >= 1 cannot be scaled in");
    const double r = parameter_norm_bound();
    if (r * sigma <= 1.0 - eps) return *this;
    const double s = (1.0 - eps) / (r * sigma);
    AdversarySpec out = *this;
    for (auto& block : out.segment_thetas_)
        for (Vector& v : block)
            for (double& e : v) e *= s;
    for (Vector& v : out.base_)
        for (double& e : v) e *= s;
    return out;
}

AdversarySpec AdversarySpec::with_horizon(int horizon) const {
    if (horizon < 1) throw ValidationError("adversary: horizon must be >= 1");
    if (kind_ == Kind::PiecewiseConstant && segment_starts_.back() > horizon)
        throw ValidationError("adversary: segment starts past the new horizon");
    AdversarySpec out = *this;
    out.horizon_ = horizon;
    return out;
}

std::vector<int> AdversarySpec::representative_rounds() const {
    switch (kind_) {
        case Kind::Constant:
            return {1};
        case Kind::PiecewiseConstant:
            return segment_starts_;
        case Kind::SinusoidalDrift: {
            // One cycle of rounds; enough to witness the extreme scales
            // together with the norm-bound check in validate_adversary.
            std::vector<int> rounds;
            const int n = std::min(horizon_, static_cast<int>(std::ceil(period_)) + 1);
            for (int t = 1; t <= n; ++t) rounds.push_back(t);
            return rounds;
        }
    }
    return {1};
}

double loss_value(const AdversarySpec& adv, int t, const Vector& x, int arm) {
    const double value = dot(x, adv.theta(t, arm)) + adv.misspec_value(x, arm);
    if (std::abs(value) > 1.0 + 1e-12)
        throw LossOutOfRange("loss_value: |loss| = " + std::to_string(std::abs(value)) +
                             " > 1 at round " + std::to_string(t) + ", arm " +
                             std::to_string(arm));
    return value;
}

EnvironmentBounds validate_adversary(const AdversarySpec& adv,
                                     const ContextDistribution& dist) {
    if (adv.dimension() != dist.dimension())
        throw ValidationError("validate_adversary: dimension mismatch");

    EnvironmentBounds bounds;
    bounds.sigma = dist.sigma();
    bounds.R = adv.parameter_norm_bound();
    bounds.Sigma = exact_covariance(dist);
    SpdCertificate cert = spd_factorize(bounds.Sigma);
    bounds.lambda_min = cert.lambda_min;
    bounds.SigmaInv = spd_inverse(cert);

    const double eps = adv.epsilon();
    if (dist.is_finite() && adv.kind() != AdversarySpec::Kind::SinusoidalDrift) {
        for (int t : adv.representative_rounds())
            for (const Vector& x : dist.points())
                for (int a = 0; a < adv.num_arms(); ++a)
                    loss_value(adv, t, x, a);  // throws on violation
    } else if (dist.is_finite()) {
        // Drifting sequence: check the worst-case scale at every support point
        // plus the representative rounds exactly.
        for (int t : adv.representative_rounds())
            for (const Vector& x : dist.points())
                for (int a = 0; a < adv.num_arms(); ++a)
                    loss_value(adv, t, x, a);
        if (bounds.R * bounds.sigma + eps > 1.0 + 1e-12)
            throw LossOutOfRange("validate_adversary: ||theta|| sigma + eps = " +
                                 std::to_string(bounds.R * bounds.sigma + eps) + " > 1");
    } else {
        if (bounds.R * bounds.sigma + eps > 1.0 + 1e-12)
            throw LossOutOfRange("validate_adversary: ||theta|| sigma + eps = " +
                                 std::to_string(bounds.R * bounds.sigma + eps) + " > 1");
    }
    return bounds;
}

}  // namespace linexp3
