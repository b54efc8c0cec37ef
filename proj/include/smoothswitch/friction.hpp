#pragma once

// Dry-friction oscillator with a cubic smoothing of the Coulomb law:
//   dz = (y − 1) dt,   dy = (1 − z − y − 𝓕(y)) dt + κ dW,
// where 𝓕(y) = α·{−1; s + μ(s − s³); 1} with s = y/ε.

#include <optional>
#include <string>
#include <vector>

#include "smoothswitch/core.hpp"
#include "smoothswitch/escape.hpp"

namespace smoothswitch {

struct FrictionParams {
    double alpha = 1.0;
    double mu = 3.0;
    double eps = 0.01;
    double kappa = 0.01;
    double r = 0.1;
    double z0 = -0.5;

    /// Throws PreconditionError unless α > 0, μ ≥ 0 and 0 < ε < r.
    void validate() const;
};

double friction_force(double y, const FrictionParams& p);

struct BreakawayInfo {
    double beta = 0.0;
    /// Present iff μ > 1/2.
    std::optional<double> y_s;      // +ε√((1+μ)/(3μ)); turning points are ±y_s
    std::optional<double> u_pm;     // +√((1+μ)/(3μ))
    double z0_plus = 0.0;           // 1 − β
    double z0_minus = 0.0;          // 1 + β
    bool has_turning_points = false;
};

BreakawayInfo breakaway(const FrictionParams& p);

enum class FrictionRegion { FilippovSliding, SpuriousSliding, Crossing };

std::string to_string(FrictionRegion region);

/// Sliding on (1−α, 1+α); spurious sliding on (z₀⁽⁺⁾, 1−α] and
/// [1+α, z₀⁽⁻⁾) when μ > 1/2; crossing elsewhere.
FrictionRegion region_map(double z0, const FrictionParams& p);

/// A(u) = 1 − z₀ − α(u + μ(u − u³)) as a polynomial.
Polynomial friction_interior(const FrictionParams& p);

/// Reduced system at (y, z) = (0, z₀): a∓ = 1 − z₀ ± α, κ̃ = κ/√ε, r̃ = r/ε.
ReducedSystem reduced_from_friction(const FrictionParams& p);

/// Full two-dimensional system with x = (y, z), switching on y = 0, and its
/// noise (only the y equation is forced).
SmoothedSystem friction_system(const FrictionParams& p);
NoiseSpec friction_noise(const FrictionParams& p);

struct ScanRow {
    double z0 = 0.0;
    double kappa = 0.0;
    double mu = 0.0;
    int stokes = 0;
    std::optional<double> T_exact;       // scaled T̃
    std::optional<double> T_asym;
    std::optional<double> log10_T_exact;
    std::optional<double> log10_T_asym;
    double well_depth = 0.0;
    WellAnalysis well;
    std::string status = "ok";
    /// Quadrature refinement change of the exact value.
    double refinement_change = 0.0;

    bool ok() const { return T_exact.has_value(); }
};

/// Evaluates one (z₀, κ) cell; never throws, errors land in `status`.
ScanRow scan_cell(double z0, double kappa, const FrictionParams& base);

/// Rows ordered z₀-major, κ-minor, independent of the thread count
/// (0 = hardware concurrency).
std::vector<ScanRow> scan_escape_times(std::span<const double> z0_grid,
                                       std::span<const double> kappa_list,
                                       const FrictionParams& base, unsigned n_threads = 0);

/// n points uniformly spaced over [lo, hi] (lo only when n = 1).
std::vector<double> uniform_grid(double lo, double hi, std::size_t n);

}  // namespace smoothswitch
