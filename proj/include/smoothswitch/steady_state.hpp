#pragma once

#include <string>
#include <vector>

#include "smoothswitch/potential.hpp"

namespace smoothswitch {

/// Noise ratio above which (or below whose inverse) the occupation
/// probability is labelled with an asymptotic regime.
inline constexpr double kKappaSplit = 3.0;

/// Stationary density p_ss(ỹ) = K·exp(−2V(ỹ)/κ̃²) of the reduced SDE.
/// Exists only for attracting sliding (a⁻ > 0 > a⁺).
class StationaryDensity {
public:
    double operator()(double y_tilde) const;
    double log_density(double y_tilde) const;

    /// log K (K itself under- or overflows at small κ̃).
    double log_normalization() const { return log_k_; }
    /// Probability mass in (−∞,−1), [−1,1] and (1,∞).
    double mass_left() const { return mass_left_; }
    double mass_interior() const { return mass_interior_; }
    double mass_right() const { return mass_right_; }

    double window() const { return window_; }
    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    const PiecewisePotential& potential() const { return pot_; }

private:
    friend StationaryDensity stationary_density(const PiecewisePotential&, int);
    explicit StationaryDensity(PiecewisePotential pot) : pot_(std::move(pot)) {}

    PiecewisePotential pot_;
    double log_k_ = 0.0;
    double mass_left_ = 0.0;
    double mass_interior_ = 0.0;
    double mass_right_ = 0.0;
    double window_ = 0.0;
    std::vector<double> grid_;
    std::vector<double> values_;
};

/// Normalises p_ss with closed-form linear tails and log-space interior
/// quadrature, and samples it on [−w, w] with
/// w = 1 + 10κ̃²·max(1/a⁻, 1/(−a⁺)). Throws NotNormalizable unless the
/// reduced system is attracting sliding.
StationaryDensity stationary_density(const PiecewisePotential& pot, int grid_points = 401);

enum class OccupationRegime { LargeKappa, SmallKappa, Intermediate };

std::string to_string(OccupationRegime regime);

struct OccupationResult {
    double p_exact = 0.0;
    double p_asym = 0.0;
    OccupationRegime regime = OccupationRegime::Intermediate;
};

/// ℙ[|ỹ| ≤ 1] under p_ss.
double occupation_probability_exact(const PiecewisePotential& pot);

/// Large-κ̃ limit 4/((1/a⁻ + 1/(−a⁺))κ̃²) for κ̃ ≥ kKappaSplit, 1 for
/// κ̃ ≤ 1/kKappaSplit, and the exact value in between.
OccupationResult occupation_probability_asymptotic(const PiecewisePotential& pot);

}  // namespace smoothswitch
