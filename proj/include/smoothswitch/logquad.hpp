#pragma once

// Log-space quadrature for integrands of the form exp(g(x)).
//
// Exponents reach O(10^4) at small noise, so every panel sum subtracts its
// largest exponent before exponentiating and results are carried as logs.

#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace smoothswitch::logquad {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log(e^a + e^b).
inline double log_add(double a, double b)
{
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double m = a > b ? a : b;
    return m + std::log1p(std::exp(-std::abs(a - b)));
}

/// log(e^a − e^b) for a ≥ b; NaN if b > a.
inline double log_sub(double a, double b)
{
    if (b == kNegInf) return a;
    if (b > a) return std::numeric_limits<double>::quiet_NaN();
    if (b == a) return kNegInf;
    const double d = b - a;
    return a + (d > -0.6931471805599453 ? std::log(-std::expm1(d)) : std::log1p(-std::exp(d)));
}

/// log ∫_{x0}^{x1} exp(k·x) dx for x1 ≥ x0 and any sign of k.
double log_int_exp_linear(double k, double x0, double x1);

/// ∫_0^L ∫_0^v exp(−k(v−u)) du dv = (L − (1 − e^{−kL})/k)/k for k > 0.
double double_int_exp_decay(double k, double L);

/// 32-point Gauss–Legendre rule on [−1, 1].
struct GaussRule {
    std::array<double, 32> nodes;
    std::array<double, 32> weights;
};
const GaussRule& gauss32();

/// log ∫_a^b exp(g(x)) dx on a single 32-point panel.
template <class Exponent>
double log_panel(const Exponent& g, double a, double b)
{
    if (!(b > a)) return kNegInf;
    const auto& rule = gauss32();
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    std::array<double, 32> e;
    double m = kNegInf;
    for (std::size_t j = 0; j < 32; ++j) {
        e[j] = g(mid + half * rule.nodes[j]);
        if (e[j] > m) m = e[j];
    }
    if (m == kNegInf) return kNegInf;
    double s = 0.0;
    for (std::size_t j = 0; j < 32; ++j) s += rule.weights[j] * std::exp(e[j] - m);
    return m + std::log(s * half);
}

/// Panels of [breaks.front(), breaks.back()], each gap split into n_sub equal pieces.
std::vector<double> refine_breaks(std::span<const double> breaks, int n_sub);

/// Sorted, deduplicated breakpoints of [lo, hi] including the given interior cuts.
std::vector<double> make_breaks(double lo, double hi, std::span<const double> cuts);

struct LogIntegral {
    double log_value = kNegInf;
    double change = 0.0;  // |Δ log| between the last two refinement levels
    int n_sub = 0;
};

/// log ∫ exp(g) over [breaks.front(), breaks.back()] with composite panels,
/// doubling n_sub until the log changes by less than tol.
/// Throws QuadratureFailure if n_sub would exceed max_sub.
template <class Exponent>
LogIntegral log_integrate(const Exponent& g, std::span<const double> breaks, double tol = 1e-12,
                          int max_sub = 1024);

}  // namespace smoothswitch::logquad

#include "smoothswitch/core.hpp"

namespace smoothswitch::logquad {

template <class Exponent>
LogIntegral log_integrate(const Exponent& g, std::span<const double> breaks, double tol,
                          int max_sub)
{
    auto eval = [&](int n_sub) {
        const auto pts = refine_breaks(breaks, n_sub);
        double acc = kNegInf;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) acc = log_add(acc, log_panel(g, pts[i], pts[i + 1]));
        return acc;
    };
    LogIntegral out;
    int n = 1;
    double prev = eval(n);
    for (n = 2; n <= max_sub; n *= 2) {
        const double cur = eval(n);
        out.change = (cur == prev) ? 0.0 : std::abs(cur - prev);
        out.log_value = cur;
        out.n_sub = n;
        if (out.change < tol) return out;
        prev = cur;
    }
    throw QuadratureFailure("log-space quadrature did not converge");
}

}  // namespace smoothswitch::logquad
