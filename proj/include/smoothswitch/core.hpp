#pragma once

// Domain types for piecewise-smooth, smoothed and noisy systems near a single
// switching surface y = x[switch_index], plus the reduced one-dimensional
// problem that the steady-state and escape-time analyses work on.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace smoothswitch {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller-side contract was violated (wrong region, bad sizes, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

class NotSliding : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class NotNormalizable : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class BadScales : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

/// A(±1) does not meet the outer drifts a±.
class ContinuityError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class QuadratureFailure : public Error {
public:
    using Error::Error;
};

/// Turning points coalesce; the Laplace prefactor diverges.
class DegenerateWell : public Error {
public:
    using Error::Error;
};

inline constexpr double kTolZero = 1e-12;
inline constexpr double kTolCont = 1e-9;

// ---------------------------------------------------------------------------
// Filippov classification
// ---------------------------------------------------------------------------

enum class RegionKind { Crossing, AttractingSliding, RepellingSliding, Degenerate };

std::string to_string(RegionKind kind);

/// Classifies the switching-surface point from the normal drift components
/// a⁻ (below) and a⁺ (above). Degenerate when either is within kTolZero of
/// zero, relative to max(|a⁻|, |a⁺|).
RegionKind classify(double a_minus, double a_plus);

struct SlidingField {
    std::vector<double> field;
    double lambda = 0.0;
};

/// Convex combination λ·f⁺ + (1−λ)·f⁻ tangent to the surface. Throws
/// NotSliding unless fm[idx] > 0 > fp[idx].
SlidingField filippov_sliding_field(std::span<const double> fm, std::span<const double> fp,
                                    std::size_t switch_index);

// ---------------------------------------------------------------------------
// Full-dimensional systems
// ---------------------------------------------------------------------------

/// out = f(x); out has the same length as x.
using VectorField = std::function<void(std::span<const double> x, std::span<double> out)>;
/// out = F(s, x) with s = y/ε ∈ [−1, 1].
using LayerField =
    std::function<void(double s, std::span<const double> x, std::span<double> out)>;

struct PiecewiseSystem {
    std::size_t dim = 0;
    VectorField f_minus;
    VectorField f_plus;
    std::size_t switch_index = 0;

    std::vector<double> eval_minus(std::span<const double> x) const;
    std::vector<double> eval_plus(std::span<const double> x) const;
};

struct SmoothedSystem {
    PiecewiseSystem base;
    double eps = 0.0;
    LayerField layer;

    std::vector<double> eval_layer(double s, std::span<const double> x) const;
    /// Three-branch right-hand side at x (f⁻ / F(y/ε, x) / f⁺).
    void drift(std::span<const double> x, std::span<double> out) const;
};

struct NoiseSpec {
    double kappa = 0.0;
    /// Row-major dim×dim diffusion-direction matrix D.
    std::vector<double> D;

    std::size_t dim() const;
    /// Euclidean norm of row i of D.
    double row_norm(std::size_t i) const;
    static NoiseSpec identity(std::size_t dim, double kappa);
};

struct ContinuityReport {
    std::vector<double> gap_plus;   // |F(1, x0) − f⁺(x0)| per component
    std::vector<double> gap_minus;  // |F(−1, x0) − f⁻(x0)| per component
    double max_gap = 0.0;
    bool pass = false;
};

ContinuityReport continuity_check(const SmoothedSystem& sys, std::span<const double> x0,
                                  double tol);

// ---------------------------------------------------------------------------
// Reduced 1-D problem
// ---------------------------------------------------------------------------

/// Dense polynomial, coefficients in ascending order.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coeffs);

    double operator()(double x) const;
    Polynomial derivative() const;
    /// Antiderivative with zero constant term.
    Polynomial antiderivative() const;
    /// q(x) = p(−x).
    Polynomial reflected() const;
    Polynomial operator*(double k) const;

    std::size_t degree() const { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }
    std::span<const double> coefficients() const { return coeffs_; }

private:
    std::vector<double> coeffs_;
};

/// The normal component A(s) of the layer field on s ∈ [−1, 1]. Either a
/// polynomial (closed-form antiderivative and derivative) or an opaque
/// evaluator (numerical antiderivative and derivative).
class InteriorDrift {
public:
    explicit InteriorDrift(Polynomial poly);
    explicit InteriorDrift(std::function<double(double)> fn);

    double operator()(double s) const;
    double derivative(double s) const;
    const std::optional<Polynomial>& polynomial() const { return poly_; }

    /// s ↦ −A(−s), the drift seen after the reflection ỹ → −ỹ.
    InteriorDrift reflected() const;

private:
    std::optional<Polynomial> poly_;
    std::optional<Polynomial> dpoly_;
    std::function<double(double)> fn_;
};

/// Roots of A in the open interval (−1, 1), ascending. Closed form up to
/// degree three, otherwise sign-change bracketing on 512 panels refined by
/// bisection.
std::vector<double> interior_roots(const InteriorDrift& drift);

class ReducedSystem {
public:
    /// Unscaled construction: κ̃ = kappa_eff/√ε, r̃ = r/ε.
    /// Throws BadScales if ε ≥ r, PreconditionError if kappa_eff ≤ 0,
    /// ContinuityError if A(±1) misses a±.
    ReducedSystem(double a_minus, double a_plus, InteriorDrift drift, double eps,
                  double kappa_eff, double r);

    /// Scaled construction with ε = 1 so that t = t̃.
    static ReducedSystem from_scaled(double a_minus, double a_plus, InteriorDrift drift,
                                     double kappa_tilde, double r_tilde);

    double a_minus() const { return a_minus_; }
    double a_plus() const { return a_plus_; }
    const InteriorDrift& interior() const { return drift_; }
    double kappa_tilde() const { return kappa_tilde_; }
    double r_tilde() const { return r_tilde_; }
    double eps() const { return eps_; }
    double kappa_eff() const { return kappa_eff_; }
    double r() const { return r_; }
    RegionKind region() const { return classify(a_minus_, a_plus_); }

    /// Scale-separation warnings (ε ≤ r/5, κ ≤ r/2).
    const std::vector<std::string>& warnings() const { return warnings_; }

    /// φ(ỹ): a⁻ for ỹ ≤ −1, A(ỹ) inside, a⁺ for ỹ ≥ 1.
    double drift(double y_tilde) const;

    /// Same system seen under ỹ → −ỹ.
    ReducedSystem reflected() const;

private:
    ReducedSystem() = default;
    void validate();

    double a_minus_ = 0.0;
    double a_plus_ = 0.0;
    InteriorDrift drift_{Polynomial{}};
    double kappa_tilde_ = 0.0;
    double r_tilde_ = 0.0;
    double eps_ = 0.0;
    double kappa_eff_ = 0.0;
    double r_ = 0.0;
    std::vector<std::string> warnings_;
};

/// Linear interpolant A(s) = (1+s)/2·a⁺ + (1−s)/2·a⁻.
InteriorDrift linear_interior(double a_minus, double a_plus);

/// Projects the smoothed noisy system onto its normal coordinate at the
/// surface point x0 (switch component ignored; defaults to the origin).
ReducedSystem reduce(const SmoothedSystem& sys, const NoiseSpec& noise, double r,
                     std::span<const double> x0 = {});

}  // namespace smoothswitch
