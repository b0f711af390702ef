#pragma once

#include <optional>
#include <vector>

#include "linexp3/numkit.hpp"
#include "linexp3/rng.hpp"

namespace linexp3 {

// Context distributions with exactly known covariance. sigma() is the
// almost-sure norm bound on a draw.
class ContextDistribution {
public:
    enum class Kind { FiniteSupport, SphereUniform, CubeUniform };

    static ContextDistribution finite(std::vector<Vector> points,
                                      std::vector<double> probs);
    static ContextDistribution sphere(int dimension, double radius);
    static ContextDistribution cube(int dimension, double half_width);

    Kind kind() const { return kind_; }
    int dimension() const { return dimension_; }
    double sigma() const { return sigma_; }
    const std::vector<Vector>& points() const { return points_; }
    const std::vector<double>& probs() const { return probs_; }
    double radius() const { return radius_; }
    double half_width() const { return half_width_; }
    bool is_finite() const { return kind_ == Kind::FiniteSupport; }

    // Empty placeholder; only meaningful when built via a factory.
    ContextDistribution() = default;

private:
    Kind kind_ = Kind::FiniteSupport;
    int dimension_ = 0;
    double sigma_ = 0.0;
    std::vector<Vector> points_;
    std::vector<double> probs_;
    double radius_ = 0.0;
    double half_width_ = 0.0;
};

Vector sample_context(const ContextDistribution& dist, RngStream& rng);

// Exact covariance: finite support sums p_i x_i x_iT; the sphere gives
// (radius^2/d) I and the cube (h^2/3) I. Throws SingularCovariance when
// the smallest eigenvalue is at most 1e-12.
SymMatrix exact_covariance(const ContextDistribution& dist);

// Bounded nonlinear residual added on top of the linear loss.
struct MisspecSpec {
    enum class Kind { SignBump, Cosine };
    Kind kind = Kind::SignBump;
    std::vector<Vector> directions;  // one per arm
    double frequency = 1.0;          // Cosine only
    double magnitude = 0.0;          // epsilon

    double value(const Vector& x, int arm) const;
};

// Oblivious loss-parameter sequence: theta(t, a) is a pure function of
// (t, a). Construction never depends on learner history.
class AdversarySpec {
public:
    enum class Kind { Constant, PiecewiseConstant, SinusoidalDrift };

    static AdversarySpec constant(std::vector<Vector> theta, int horizon,
                                  std::optional<MisspecSpec> misspec = std::nullopt);
    // segments: (start_round, K x d array), starts strictly increasing, first == 1.
    static AdversarySpec piecewise(std::vector<int> segment_starts,
                                   std::vector<std::vector<Vector>> segment_thetas,
                                   int horizon,
                                   std::optional<MisspecSpec> misspec = std::nullopt);
    static AdversarySpec sinusoidal(std::vector<Vector> base, double amplitude,
                                    double period, int horizon,
                                    std::optional<MisspecSpec> misspec = std::nullopt);

    Kind kind() const { return kind_; }
    int num_arms() const { return num_arms_; }
    int dimension() const { return dimension_; }
    int horizon() const { return horizon_; }
    const std::optional<MisspecSpec>& misspec() const { return misspec_; }
    double epsilon() const { return misspec_ ? misspec_->magnitude : 0.0; }

    Vector theta(int t, int arm) const;
    double misspec_value(const Vector& x, int arm) const;

    // max over t,a of ||theta(t,a)||.
    double parameter_norm_bound() const;

    // Rescale all linear parts so that parameter_norm_bound()*sigma +
    // epsilon <= 1. No-op when the bound already holds.
    AdversarySpec scaled_to_bound(double sigma) const;

    // Same sequence rule over a different horizon (used by sweeps).
    AdversarySpec with_horizon(int horizon) const;

    // Representative rounds covering every distinct parameter regime
    // (one per segment; a cycle of rounds for drifting sequences).
    std::vector<int> representative_rounds() const;

    // Empty placeholder; only meaningful when built via a factory.
    AdversarySpec() = default;

private:
    Kind kind_ = Kind::Constant;
    int num_arms_ = 0;
    int dimension_ = 0;
    int horizon_ = 0;
    std::vector<int> segment_starts_;
    std::vector<std::vector<Vector>> segment_thetas_;
    std::vector<Vector> base_;
    double amplitude_ = 0.0;
    double period_ = 1.0;
    std::optional<MisspecSpec> misspec_;
};

// loss = <x, theta(t,a)> + eps(x,a). Throws LossOutOfRange if the result
// leaves [-1, 1]; that signals a mis-constructed adversary.
double loss_value(const AdversarySpec& adv, int t, const Vector& x, int arm);

struct EnvironmentBounds {
    double sigma = 0.0;
    double R = 0.0;
    double lambda_min = 0.0;
    SymMatrix Sigma;
    SymMatrix SigmaInv;
};

// Checks |loss| <= 1 on the support: exhaustively for finite support
// (all points, all representative rounds, all arms), via the
// ||theta||*sigma + epsilon bound for continuous distributions.
EnvironmentBounds validate_adversary(const AdversarySpec& adv,
                                     const ContextDistribution& dist);

}  // namespace linexp3
