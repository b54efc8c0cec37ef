#pragma once

#include <memory>
#include <vector>

#include "smoothswitch/core.hpp"

namespace smoothswitch {

/// V(ỹ) = −∫_{−1}^{ỹ} φ(v) dv for the reduced drift φ.
///
/// Linear outside [−1, 1]. Inside, the antiderivative is exact for a
/// polynomial A; otherwise it is tabulated at 65 nodes by adaptive
/// Gauss–Kronrod and completed from the nearest node per query.
class PiecewisePotential {
public:
    explicit PiecewisePotential(ReducedSystem reduced);

    double operator()(double y_tilde) const;
    /// −∫_{−1}^{s} A for s ∈ [−1, 1].
    double interior(double s) const;
    double at_plus_one() const { return v1_; }
    const ReducedSystem& reduced() const { return reduced_; }

private:
    double interior_quadrature(double s) const;

    ReducedSystem reduced_;
    std::optional<Polynomial> antiderivative_;
    double anti_at_minus_one_ = 0.0;
    std::shared_ptr<const std::vector<double>> table_;
    double v1_ = 0.0;
};

inline double potential_eval(const PiecewisePotential& pot, double y_tilde)
{
    return pot(y_tilde);
}

}  // namespace smoothswitch
