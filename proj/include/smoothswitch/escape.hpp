#pragma once

// Mean escape time of the reduced SDE from |ỹ| < r̃, started at ỹ = 0.
//
// The exact value is the double integral
//   T̃ = (2/κ̃²) ∫∫_{−r̃ ≤ u ≤ v ≤ r̃} (H(v) − C) e^{2(V(v) − V(u))/κ̃²} du dv
// evaluated in log space; the asymptotic value is the Laplace estimate of the
// potential-well contribution (switched by a Stokes multiplier) plus the
// outer transit time r̃/a⁺.

#include <optional>
#include <string>
#include <vector>

#include "smoothswitch/potential.hpp"

namespace smoothswitch {

/// |A′| below this at a selected turning point is treated as coalescence.
inline constexpr double kDegenerateSlope = 1e-6;

enum class EscapeRegime { LargeKappa, SmallKappa };

std::string to_string(EscapeRegime regime);

struct TurningPoint {
    double y = 0.0;
    double slope = 0.0;  // A′(y)
};

struct WellAnalysis {
    std::vector<TurningPoint> roots;
    /// Selected (minimum of V, maximum of V) pair, when one exists.
    std::optional<TurningPoint> y1;
    std::optional<TurningPoint> y2;
    int stokes = 0;
    double depth = 0.0;  // V(ỹ₂) − V(ỹ₁), 0 when no pair
};

/// Roots of A in (−1, 1) and the deepest adjacent pair with
/// A′(ỹ₁) < 0 < A′(ỹ₂). The Stokes multiplier is 1 iff such a pair exists
/// with −1 < ỹ₁ < ỹ₂ < 1, ỹ₂ > 0 and positive depth.
WellAnalysis turning_points(const ReducedSystem& red);
WellAnalysis turning_points(const PiecewisePotential& pot);

struct CResult {
    double C = 0.0;
    double log_C = 0.0;
    double C_bound = 0.0;
    double log_C_bound = 0.0;
    bool within_bound = false;  // compared in log space
};

/// C = ∫_0^{r̃} e^{2V/κ̃²} / ∫_{−r̃}^{r̃} e^{2V/κ̃²} and the upper bound
/// 2a⁻(1/a⁺ + 2/κ̃²)e^{−r̃a⁻/κ̃²}. Requires a⁻ > 0.
CResult escape_C(const ReducedSystem& red, const PiecewisePotential& pot);

struct ExactOptions {
    bool include_c = true;
    double rel_tol = 1e-9;
    /// Panels per gap between split points at the first refinement level.
    int min_sub = 2;
    int max_sub = 1024;
};

struct ExactEscape {
    double value = 0.0;
    double log_value = 0.0;
    /// Same integral with C set to zero.
    double log_value_without_c = 0.0;
    double C = 0.0;
    double log_C = 0.0;
    /// |Δ log T̃| between the last two refinement levels.
    double refinement_change = 0.0;
    int n_sub = 0;
    bool reflected = false;
};

/// Exact T̃. Requires crossing; configurations with a⁻, a⁺ < 0 are
/// reflected first. Throws QuadratureFailure if refinement stalls.
ExactEscape escape_time_exact_detailed(const ReducedSystem& red, const ExactOptions& opts = {});
double escape_time_exact(const ReducedSystem& red);

struct AsymptoticEscape {
    double value = 0.0;
    double log_value = 0.0;
    EscapeRegime regime = EscapeRegime::LargeKappa;
};

/// r̃/a⁺ for κ̃ ≥ 1; otherwise
/// 2πS/√(−A′(ỹ₁)A′(ỹ₂))·e^{2·depth/κ̃²} + r̃/a⁺ combined in log space.
/// Throws DegenerateWell when S = 1 and a selected |A′| < kDegenerateSlope.
AsymptoticEscape escape_time_asymptotic(const ReducedSystem& red, const WellAnalysis& well);

struct EscapeResult {
    double T_tilde_exact = 0.0;
    double log_T_tilde_exact = 0.0;
    double T_tilde_asym = 0.0;
    double log_T_tilde_asym = 0.0;
    double T_unscaled = 0.0;  // ε·T̃_exact
    double C = 0.0;
    double log_C = 0.0;
    double C_bound = 0.0;
    double log_C_bound = 0.0;
    bool c_within_bound = false;
    double refinement_change = 0.0;
    WellAnalysis well;
    EscapeRegime regime = EscapeRegime::LargeKappa;
    bool reflected = false;
};

/// Full analysis of a crossing configuration (reflected to a⁺ > 0 if needed).
EscapeResult escape_pipeline(const ReducedSystem& red);

}  // namespace smoothswitch
