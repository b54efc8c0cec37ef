#include "smoothswitch/escape.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "smoothswitch/logquad.hpp"

namespace smoothswitch {

using logquad::kNegInf;
using logquad::log_add;

std::string to_string(EscapeRegime regime)
{
    return regime == EscapeRegime::LargeKappa ? "large-kappa" : "small-kappa";
}

namespace {

// Canonical rightward crossing (a⁻, a⁺ > 0); reflects a⁻, a⁺ < 0.
std::pair<ReducedSystem, bool> canonical_crossing(const ReducedSystem& red)
{
    if (red.region() != RegionKind::Crossing) {
        std::ostringstream msg;
        msg << "escape-time analysis needs a crossing configuration, got "
            << to_string(red.region()) << " (a- = " << red.a_minus() << ", a+ = " << red.a_plus()
            << ")";
        throw PreconditionError(msg.str());
    }
    if (red.a_plus() < 0.0) return {red.reflected(), true};
    return {red, false};
}

std::vector<double> interior_breaks(const ReducedSystem& red)
{
    auto cuts = interior_roots(red.interior());
    cuts.push_back(0.0);
    return logquad::make_breaks(-1.0, 1.0, cuts);
}

}  // namespace

// ---------------------------------------------------------------------------

WellAnalysis turning_points(const PiecewisePotential& pot)
{
    const auto& A = pot.reduced().interior();
    WellAnalysis w;
    for (double y : interior_roots(A)) w.roots.push_back({y, A.derivative(y)});

    // Rank adjacent (min, max) pairs by (satisfies location conditions, depth).
    bool best_valid = false;
    for (std::size_t i = 0; i + 1 < w.roots.size(); ++i) {
        const auto& lo = w.roots[i];
        const auto& hi = w.roots[i + 1];
        if (!(lo.slope < 0.0 && hi.slope > 0.0)) continue;
        const double depth = pot.interior(hi.y) - pot.interior(lo.y);
        const bool valid = hi.y > 0.0 && depth > 0.0;
        const bool better = !w.y1 || (valid && !best_valid) || (valid == best_valid && depth > w.depth);
        if (better) {
            w.y1 = lo;
            w.y2 = hi;
            w.depth = depth;
            best_valid = valid;
        }
    }
    w.stokes = best_valid ? 1 : 0;
    return w;
}

WellAnalysis turning_points(const ReducedSystem& red)
{
    return turning_points(PiecewisePotential(red));
}

// ---------------------------------------------------------------------------

CResult escape_C(const ReducedSystem& red, const PiecewisePotential& pot)
{
    if (!(red.a_minus() > 0.0)) throw PreconditionError("escape_C requires a- > 0");
    const double k2 = red.kappa_tilde() * red.kappa_tilde();
    const double beta = 2.0 / k2;
    const double L = red.r_tilde() - 1.0;
    auto up = [&](double u) { return beta * pot.interior(u); };

    const auto breaks = interior_breaks(red);
    std::vector<double> neg, pos;
    for (double b : breaks) {
        if (b <= 0.0) neg.push_back(b);
        if (b >= 0.0) pos.push_back(b);
    }
    const double in_neg = logquad::log_integrate(up, neg).log_value;
    const double in_pos = logquad::log_integrate(up, pos).log_value;
    const double tail_pos = beta * pot.at_plus_one() + logquad::log_int_exp_linear(-beta * red.a_plus(), 0.0, L);
    const double tail_neg = logquad::log_int_exp_linear(-beta * red.a_minus(), -L, 0.0);

    CResult c;
    const double num = log_add(in_pos, tail_pos);
    const double den = log_add(num, log_add(in_neg, tail_neg));
    c.log_C = num - den;
    c.C = std::exp(c.log_C);
    if (red.a_plus() > 0.0) {
        c.log_C_bound = std::log(2.0 * red.a_minus() * (1.0 / red.a_plus() + 2.0 / k2)) -
                        red.r_tilde() * red.a_minus() / k2;
    } else {
        c.log_C_bound = std::numeric_limits<double>::infinity();
    }
    c.C_bound = std::exp(c.log_C_bound);
    c.within_bound = c.log_C <= c.log_C_bound;
    return c;
}

// ---------------------------------------------------------------------------

namespace {

struct LevelSums {
    double log_T = 0.0;
    double log_T0 = 0.0;  // C = 0
    double log_C = 0.0;
};

LevelSums exact_level(const ReducedSystem& red, const PiecewisePotential& pot,
                      std::span<const double> breaks, int n_sub, bool include_c)
{
    const double beta = 2.0 / (red.kappa_tilde() * red.kappa_tilde());
    const double L = red.r_tilde() - 1.0;
    const double am = red.a_minus();
    const double ap = red.a_plus();
    auto minus_v = [&](double u) { return -beta * pot.interior(u); };
    const auto& rule = logquad::gauss32();

    // I(v) = ∫_{−r̃}^{v} e^{−2V/κ̃²}; start at v = −1 from the linear tail.
    double log_I = logquad::log_int_exp_linear(beta * am, -L, 0.0);
    double log_J_pos = kNegInf, log_J_neg = kNegInf;
    double log_c_pos = kNegInf, log_c_neg = kNegInf;

    const auto pts = logquad::refine_breaks(breaks, n_sub);
    std::array<double, 32> term, cterm;
    for (std::size_t p = 0; p + 1 < pts.size(); ++p) {
        const double a = pts[p], b = pts[p + 1];
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        double m = kNegInf, mc = kNegInf;
        for (std::size_t j = 0; j < 32; ++j) {
            const double v = mid + half * rule.nodes[j];
            const double bv = beta * pot.interior(v);
            const double log_Iv = log_add(log_I, logquad::log_panel(minus_v, a, v));
            term[j] = bv + log_Iv;
            cterm[j] = bv;
            m = std::max(m, term[j]);
            mc = std::max(mc, cterm[j]);
        }
        double s = 0.0, sc = 0.0;
        for (std::size_t j = 0; j < 32; ++j) {
            s += rule.weights[j] * std::exp(term[j] - m);
            sc += rule.weights[j] * std::exp(cterm[j] - mc);
        }
        const double log_panel_J = m + std::log(s * half);
        const double log_panel_c = mc + std::log(sc * half);
        if (mid >= 0.0) {
            log_J_pos = log_add(log_J_pos, log_panel_J);
            log_c_pos = log_add(log_c_pos, log_panel_c);
        } else {
            log_J_neg = log_add(log_J_neg, log_panel_J);
            log_c_neg = log_add(log_c_neg, log_panel_c);
        }
        log_I = log_add(log_I, logquad::log_panel(minus_v, a, b));
    }

    const double bv1 = beta * pot.at_plus_one();
    const double log_right = logquad::log_int_exp_linear(-beta * ap, 0.0, L);
    // v ∈ [1, r̃]: I(1)·∫ e^{2V(v)/κ̃²} dv plus the closed-form outer-outer piece.
    log_J_pos = log_add(log_J_pos, log_add(log_I + bv1 + log_right,
                                           std::log(logquad::double_int_exp_decay(beta * ap, L))));
    // v ∈ [−r̃, −1]: closed form.
    log_J_neg = log_add(log_J_neg, std::log(logquad::double_int_exp_decay(beta * am, L)));

    LevelSums out;
    const double log_beta = std::log(beta);
    out.log_T0 = log_beta + log_J_pos;
    const double num = log_add(log_c_pos, bv1 + log_right);
    const double den = log_add(num, log_add(log_c_neg, logquad::log_int_exp_linear(-beta * am, -L, 0.0)));
    out.log_C = num - den;
    if (!include_c) {
        out.log_T = out.log_T0;
        return out;
    }
    // (1 − C)·J⁺ − C·J⁻
    const double log_one_minus_c = logquad::log_sub(0.0, out.log_C);
    const double lt = logquad::log_sub(log_one_minus_c + log_J_pos, out.log_C + log_J_neg);
    if (!std::isfinite(lt)) throw QuadratureFailure("escape-time integral lost positivity");
    out.log_T = log_beta + lt;
    return out;
}

}  // namespace

ExactEscape escape_time_exact_detailed(const ReducedSystem& input, const ExactOptions& opts)
{
    const auto [red, reflected] = canonical_crossing(input);
    const PiecewisePotential pot(red);
    const auto breaks = interior_breaks(red);

    int n = std::max(1, opts.min_sub);
    auto prev = exact_level(red, pot, breaks, n, opts.include_c);
    for (n *= 2; n <= opts.max_sub; n *= 2) {
        const auto cur = exact_level(red, pot, breaks, n, opts.include_c);
        const double change =
            std::max(std::abs(cur.log_T - prev.log_T), std::abs(cur.log_T0 - prev.log_T0));
        if (change < opts.rel_tol) {
            ExactEscape e;
            e.log_value = cur.log_T;
            e.value = std::exp(cur.log_T);
            e.log_value_without_c = cur.log_T0;
            e.log_C = cur.log_C;
            e.C = std::exp(cur.log_C);
            e.refinement_change = change;
            e.n_sub = n;
            e.reflected = reflected;
            return e;
        }
        prev = cur;
    }
    throw QuadratureFailure("escape-time quadrature did not converge");
}

double escape_time_exact(const ReducedSystem& red)
{
    return escape_time_exact_detailed(red).value;
}

// ---------------------------------------------------------------------------

AsymptoticEscape escape_time_asymptotic(const ReducedSystem& red, const WellAnalysis& well)
{
    if (!(red.a_plus() > 0.0)) {
        throw PreconditionError("asymptotic escape time needs a+ > 0 (reflect first)");
    }
    AsymptoticEscape out;
    out.regime = red.kappa_tilde() >= 1.0 ? EscapeRegime::LargeKappa : EscapeRegime::SmallKappa;
    const double transit = red.r_tilde() / red.a_plus();
    if (out.regime == EscapeRegime::LargeKappa || well.stokes == 0) {
        out.value = transit;
        out.log_value = std::log(transit);
        return out;
    }
    const double s1 = well.y1->slope;
    const double s2 = well.y2->slope;
    if (std::abs(s1) < kDegenerateSlope || std::abs(s2) < kDegenerateSlope) {
        std::ostringstream msg;
        msg << "turning points coalesce (A'(y1) = " << s1 << ", A'(y2) = " << s2 << ")";
        throw DegenerateWell(msg.str());
    }
    const double k2 = red.kappa_tilde() * red.kappa_tilde();
    const double log_well =
        std::log(2.0 * std::numbers::pi) - 0.5 * std::log(-s1 * s2) + 2.0 * well.depth / k2;
    out.log_value = log_add(log_well, std::log(transit));
    out.value = std::exp(out.log_value);
    return out;
}

// ---------------------------------------------------------------------------

EscapeResult escape_pipeline(const ReducedSystem& input)
{
    const auto [red, reflected] = canonical_crossing(input);
    const PiecewisePotential pot(red);

    EscapeResult res;
    res.reflected = reflected;
    res.well = turning_points(pot);
    const auto c = escape_C(red, pot);
    res.C_bound = c.C_bound;
    res.log_C_bound = c.log_C_bound;
    res.c_within_bound = c.within_bound;

    const auto exact = escape_time_exact_detailed(red);
    res.T_tilde_exact = exact.value;
    res.log_T_tilde_exact = exact.log_value;
    res.refinement_change = exact.refinement_change;
    res.C = c.C;
    res.log_C = c.log_C;
    res.T_unscaled = red.eps() * exact.value;

    const auto asym = escape_time_asymptotic(red, res.well);
    res.T_tilde_asym = asym.value;
    res.log_T_tilde_asym = asym.log_value;
    res.regime = asym.regime;
    return res;
}

}  // namespace smoothswitch
