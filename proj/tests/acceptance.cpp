// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "smoothswitch/escape.hpp"
#include "smoothswitch/friction.hpp"
#include "smoothswitch/mc.hpp"
#include "smoothswitch/steady_state.hpp"

using namespace smoothswitch;

namespace {

using Clock = std::chrono::steady_clock;

// Every number produced while checking criteria 1-9 passes through here.
struct FiniteLog {
    std::size_t checked = 0;
    std::size_t bad = 0;
    std::string first_bad;

    double operator()(double x, const char* what)
    {
        ++checked;
        if (!std::isfinite(x)) {
            if (bad++ == 0) first_bad = what;
        }
        return x;
    }
} finite;

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const char* name, double budget_s, const std::function<Outcome()>& fn)
{
    const auto t0 = Clock::now();
    Outcome o;
    try {
        o = fn();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    const bool in_time = secs < budget_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::printf("%s [%d] %s: %s (%.3g s, budget %.3g s%s)\n", pass ? "PASS" : "FAIL", id, name,
                o.detail.c_str(), secs, budget_s, in_time ? "" : ", over budget");
    std::fflush(stdout);
}

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

FrictionParams fig6(double mu = 3.0)
{
    FrictionParams p;
    p.alpha = 1.0;
    p.mu = mu;
    p.eps = 0.01;
    p.r = 0.1;
    return p;
}

const std::vector<double> kFig6Kappas{0.01, 0.02, 0.05, 0.1};

// Criterion-3 rows are reused by criterion 10.
std::vector<ScanRow> criterion3_rows;
std::vector<double> criterion3_grid;

Outcome breakaway_point()
{
    const auto p = fig6();
    const auto t0 = Clock::now();
    const auto b = breakaway(p);
    const double us = std::chrono::duration<double, std::micro>(Clock::now() - t0).count();
    finite(b.z0_plus, "breakaway");
    const bool ok = b.z0_plus >= -0.785 && b.z0_plus <= -0.775 && us < 1000.0;
    return {ok, fmt("z0+ = %.6f, call took %.1f us", b.z0_plus, us)};
}

Outcome noise_threshold()
{
    auto p = fig6();
    p.z0 = -0.4;
    const auto gap = [&](double kappa) {
        p.kappa = kappa;
        const auto red = reduced_from_friction(p);
        const double lt = finite(escape_time_exact_detailed(red).log_value, "threshold T");
        return lt - std::log(10.0 * red.r_tilde() / red.a_plus());
    };
    // T̃ decreases with κ: gap(lo) > 0 > gap(hi).
    double lo = 0.005, hi = 0.5;
    if (!(gap(lo) > 0.0 && gap(hi) < 0.0)) return {false, "threshold not bracketed"};
    for (int i = 0; i < 60; ++i) {
        const double mid = std::sqrt(lo * hi);
        (gap(mid) > 0.0 ? lo : hi) = mid;
    }
    const double ks = std::sqrt(lo * hi);
    const double ref = std::sqrt(-p.eps / std::log(p.eps));
    return {ks >= 0.023 && ks <= 0.093, fmt("kappa* = %.5f (reference scale %.4f)", ks, ref)};
}

Outcome exact_vs_asymptotic()
{
    const auto p = fig6();
    const double zp = breakaway(p).z0_plus;
    criterion3_grid = uniform_grid(-1.4, -0.1, 200);
    criterion3_rows = scan_escape_times(criterion3_grid, kFig6Kappas, p);
    double worst = 0.0;
    std::size_t used = 0, bad = 0;
    std::string where;
    for (const auto& row : criterion3_rows) {
        if (std::abs(row.z0 - zp) < 0.05) continue;
        ++used;
        if (!row.T_exact || !row.T_asym) {
            ++bad;
            where = fmt("z0=%.4f kappa=%g %s", row.z0, row.kappa, row.status.c_str());
            continue;
        }
        const double le = std::log(finite(*row.T_exact, "T exact"));
        const double la = std::log(finite(*row.T_asym, "T asym"));
        const double rel = std::abs(la - le) / std::abs(le);
        if (rel > worst) {
            worst = rel;
            where = fmt("z0=%.4f kappa=%g", row.z0, row.kappa);
        }
    }
    return {bad == 0 && worst < 0.3,
            fmt("%zu cells, %zu failed, max relative log error %.4f at %s", used, bad, worst, where.c_str())};
}

Outcome stokes_location()
{
    std::string detail;
    bool ok = true;
    // upper end close to 0 so the μ = 1 release point (≈ −0.089) is inside
    const auto grid = uniform_grid(-1.4, -0.01, 200);
    const double dz = grid[1] - grid[0];
    for (double mu : {1.0, 2.0, 3.0, 4.0}) {
        auto p = fig6(mu);
        const double zp = breakaway(p).z0_plus;
        std::vector<int> s;
        for (double z0 : grid) {
            p.z0 = z0;
            p.kappa = 0.01;
            s.push_back(turning_points(reduced_from_friction(p)).stokes);
        }
        // exactly one 0 -> 1 switch
        std::size_t switches = 0, at = 0;
        for (std::size_t i = 1; i < s.size(); ++i) {
            if (s[i] != s[i - 1]) {
                ++switches;
                at = i;
            }
        }
        const bool one = switches == 1 && s.front() == 0 && s.back() == 1;
        const bool cell = one && grid[at - 1] <= zp && zp < grid[at];
        const double miss = one ? std::abs(0.5 * (grid[at - 1] + grid[at]) - zp) : INFINITY;
        ok = ok && cell && miss <= dz;
        detail += fmt("mu=%g z0+=%.4f switch in [%.4f, %.4f]%s; ", mu, zp, one ? grid[at - 1] : NAN,
                      one ? grid[at] : NAN, cell ? "" : " WRONG");
    }
    return {ok, detail};
}

Outcome half_mu()
{
    const auto p = fig6(0.5);
    const auto grid = uniform_grid(-1.4, -0.1, 200);
    const auto rows = scan_escape_times(grid, kFig6Kappas, p);
    const std::size_t nk = kFig6Kappas.size();
    bool bit_equal = true;
    double worst = 0.0;
    std::string where;
    std::size_t n_bad = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t j = 0; j < nk; ++j) {
            const auto& row = rows[i * nk + j];
            if (!row.T_exact || !row.T_asym) {
                bit_equal = false;
                worst = INFINITY;
                continue;
            }
            if (*row.T_asym != *rows[i * nk].T_asym) bit_equal = false;
            auto q = p;
            q.z0 = row.z0;
            q.kappa = row.kappa;
            const auto red = reduced_from_friction(q);
            const double transit = red.r_tilde() / red.a_plus();
            const double rel = std::abs(finite(*row.T_exact, "T exact") / transit - 1.0);
            n_bad += rel >= 0.2;
            if (rel > worst) {
                worst = rel;
                where = fmt("z0=%.4f kappa=%g", row.z0, row.kappa);
            }
        }
    }
    return {bit_equal && worst < 0.2,
            fmt("asymptotic bit-equal across kappa: %s; max |T_exact/(r/a+) - 1| = %.4f at %s; "
                "%zu of %zu cells >= 0.2",
                bit_equal ? "yes" : "no", worst, where.c_str(), n_bad, rows.size())};
}

struct McCase {
    const char* label;
    ReducedSystem red;
};

std::vector<McCase> mc_cases()
{
    std::vector<McCase> out;
    out.push_back({"linear 1|1 kt=1", ReducedSystem::from_scaled(1, 1, linear_interior(1, 1), 1.0, 5.0)});
    out.push_back({"linear 2|0.5 kt=0.5",
                   ReducedSystem::from_scaled(2, 0.5, linear_interior(2, 0.5), 0.5, 5.0)});
    // cubic bump through the endpoint values
    out.push_back({"cubic 1.5|0.8 kt=2",
                   ReducedSystem::from_scaled(1.5, 0.8, InteriorDrift(Polynomial({1.45, -0.35, -0.3})), 2.0,
                                              5.0)});
    FrictionParams p;
    p.r = 0.05;
    p.z0 = -1.0;
    p.kappa = 0.15;
    out.push_back({"friction z0=-1 kt=1.5", reduced_from_friction(p)});
    p.z0 = -0.5;
    p.kappa = 0.08;
    out.push_back({"friction z0=-0.5 kt=0.8", reduced_from_friction(p)});
    return out;
}

Outcome mc_equivalence()
{
    bool ok = true;
    std::string detail;
    std::uint64_t seed = 600;
    for (const auto& c : mc_cases()) {
        const double exact = finite(escape_time_exact(c.red), "T exact");
        auto cfg = McConfig::defaults_for(c.red, ++seed);
        const auto est = mc_escape_time(c.red, cfg);
        finite(est.mean, "mc mean");
        bool hit = est.contains(exact) && !est.unreliable;
        std::string note = fmt("%s: exact %.4f, mc %.4f ± %.4f", c.label, exact, est.mean, est.stderr_);
        if (!hit) {
            cfg.step /= 4.0;
            const auto fine = mc_escape_time(c.red, cfg);
            finite(fine.mean, "mc mean");
            const double z = std::abs(fine.mean - exact) / fine.stderr_;
            hit = z < 3.0 && !fine.unreliable;
            note += fmt(" -> h/4: %.4f ± %.4f (%.2f se)", fine.mean, fine.stderr_, z);
        }
        ok = ok && hit;
        detail += note + "; ";
    }
    return {ok, detail};
}

Outcome occupation()
{
    const auto sys = [](double kt) {
        return ReducedSystem::from_scaled(1, -1, linear_interior(1, -1), kt, 10.0);
    };
    const double p_large = finite(occupation_probability_exact(PiecewisePotential(sys(10.0))), "P");
    const double p_small = finite(occupation_probability_exact(PiecewisePotential(sys(0.1))), "P");
    bool ok = std::abs(p_large / 0.02 - 1.0) < 0.1 && p_small >= 0.99;
    std::string detail = fmt("P(10) = %.5f, 1 - P(0.1) = %.3e; ", p_large, 1.0 - p_small);
    std::uint64_t seed = 700;
    for (double kt : {0.3, 1.0, 3.0}) {
        const auto red = sys(kt);
        const double exact = finite(occupation_probability_exact(PiecewisePotential(red)), "P");
        auto cfg = McConfig::defaults_for(red, ++seed);
        // O(h) stationary bias of Euler–Maruyama is ~0.15h here; keep it under one se
        cfg.step = std::min(cfg.step, 0.0025);
        const double burn = std::max(10.0, 10.0 * kt * kt);
        cfg.t_max = burn + std::max(100.0, 20.0 * kt * kt);
        const auto est = mc_occupation(red, cfg, burn);
        finite(est.mean, "mc occupancy");
        ok = ok && est.contains(exact);
        detail += fmt("kt=%g exact %.8f mc %.8f ± %.2e (%.2f se)%s; ", kt, exact, est.mean, est.stderr_,
                      (est.mean - exact) / est.stderr_, est.contains(exact) ? "" : " MISS");
    }
    return {ok, detail};
}

Outcome c_bound()
{
    auto p = fig6();
    const auto z0s = uniform_grid(-1.4, -0.1, 10);
    std::size_t n = 0, over = 0;
    double worst_drop = 0.0, worst_ratio = -INFINITY;
    for (double z0 : z0s) {
        for (int k = 0; k < 10; ++k) {
            p.z0 = z0;
            p.kappa = 0.01 * std::pow(10.0, k / 9.0);
            const auto red = reduced_from_friction(p);
            const PiecewisePotential pot(red);
            const auto c = escape_C(red, pot);
            finite(c.log_C_bound, "log C bound");
            ++n;
            over += !(c.log_C <= c.log_C_bound);
            worst_ratio = std::max(worst_ratio, c.log_C - c.log_C_bound);
            const auto ex = escape_time_exact_detailed(red);
            const double drop = std::abs(std::expm1(ex.log_value_without_c - ex.log_value));
            finite(drop, "C drop");
            worst_drop = std::max(worst_drop, drop);
        }
    }
    return {over == 0 && worst_drop < 1e-6,
            fmt("%zu points, %zu above bound, max log(C/bound) = %.3g, max relative change with C=0: %.3g", n,
                over, worst_ratio, worst_drop)};
}

Outcome normalizability()
{
    std::mt19937_64 rng(909);
    std::uniform_real_distribution<double> mag(0.2, 3.0), bump(-1.0, 1.0), kt(0.2, 5.0);
    std::bernoulli_distribution coin;
    std::size_t n_sliding = 0, mismatches = 0;
    for (int i = 0; i < 50; ++i) {
        const double am = coin(rng) ? mag(rng) : -mag(rng);
        const double ap = coin(rng) ? mag(rng) : -mag(rng);
        const double b = bump(rng), c = bump(rng);
        // A(±1) = a± with a random quadratic and cubic part
        const Polynomial A({0.5 * (am + ap) - b, 0.5 * (ap - am) - c, b, c});
        const auto red = ReducedSystem::from_scaled(am, ap, InteriorDrift(A), kt(rng), 10.0);
        const bool sliding = classify(am, ap) == RegionKind::AttractingSliding;
        n_sliding += sliding;
        bool ok = false;
        try {
            const auto d = stationary_density(PiecewisePotential(red));
            finite(d.log_normalization(), "log normalization");
            ok = true;
        } catch (const NotNormalizable&) {
        } catch (const NotSliding&) {
        }
        mismatches += ok != sliding;
    }
    return {mismatches == 0, fmt("50 configurations (%zu sliding), %zu mismatches", n_sliding, mismatches)};
}

Outcome robustness()
{
    if (criterion3_rows.empty()) return {false, "criterion 3 rows unavailable"};
    const double zp = breakaway(fig6()).z0_plus;
    double worst = 0.0;
    std::size_t n = 0;
    for (const auto& row : criterion3_rows) {
        if (std::abs(row.z0 - zp) < 0.05 || !row.T_exact) continue;
        auto p = fig6();
        p.z0 = row.z0;
        p.kappa = row.kappa;
        const auto red = reduced_from_friction(p);
        const auto base = escape_time_exact_detailed(red);
        ExactOptions doubled;
        doubled.min_sub = 2 * base.n_sub;
        doubled.max_sub = std::max(doubled.max_sub, 4 * base.n_sub);
        const auto fine = escape_time_exact_detailed(red, doubled);
        finite(fine.log_value, "refined T");
        worst = std::max(worst, std::abs(std::expm1(fine.log_value - base.log_value)));
        ++n;
    }
    const bool ok = finite.bad == 0 && worst < 1e-6;
    return {ok, fmt("%zu non-finite of %zu checked values%s%s; panel doubling at %zu points changes T by "
                    "at most %.3g relative",
                    finite.bad, finite.checked, finite.bad ? ", first: " : "", finite.first_bad.c_str(), n,
                    worst)};
}

}  // namespace

int main()
{
    report(1, "breakaway point", 1.0, breakaway_point);
    report(2, "noise threshold", 60.0, noise_threshold);
    report(3, "exact/asymptotic agreement", 300.0, exact_vs_asymptotic);
    report(4, "Stokes switch location", 60.0, stokes_location);
    report(5, "kappa independence at mu = 1/2", 120.0, half_mu);
    report(6, "Monte Carlo vs quadrature", 300.0, mc_equivalence);
    report(7, "occupation probabilities", 180.0, occupation);
    report(8, "C bound", 60.0, c_bound);
    report(9, "normalizability dichotomy", 10.0, normalizability);
    report(10, "numerical robustness", 600.0, robustness);
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
