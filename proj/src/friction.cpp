#include "smoothswitch/friction.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

namespace smoothswitch {

void FrictionParams::validate() const
{
    if (!(alpha > 0.0)) throw PreconditionError("friction amplitude alpha must be positive");
    if (!(mu >= 0.0)) throw PreconditionError("cubic shape parameter mu must be non-negative");
    if (!(eps > 0.0 && eps < r)) throw BadScales("friction needs 0 < eps < r");
}

double friction_force(double y, const FrictionParams& p)
{
    if (y <= -p.eps) return -p.alpha;
    if (y >= p.eps) return p.alpha;
    const double s = y / p.eps;
    return p.alpha * (s + p.mu * (s - s * s * s));
}

BreakawayInfo breakaway(const FrictionParams& p)
{
    BreakawayInfo b;
    b.has_turning_points = p.mu > 0.5;
    if (b.has_turning_points) {
        const double u = std::sqrt((1.0 + p.mu) / (3.0 * p.mu));
        b.u_pm = u;
        b.y_s = p.eps * u;
        b.beta = p.alpha * 2.0 * std::pow(1.0 + p.mu, 1.5) / (3.0 * std::sqrt(3.0 * p.mu));
    } else {
        b.beta = p.alpha;
    }
    b.z0_plus = 1.0 - b.beta;
    b.z0_minus = 1.0 + b.beta;
    return b;
}

std::string to_string(FrictionRegion region)
{
    switch (region) {
    case FrictionRegion::FilippovSliding: return "filippov-sliding";
    case FrictionRegion::SpuriousSliding: return "spurious-sliding";
    case FrictionRegion::Crossing: return "crossing";
    }
    return "unknown";
}

FrictionRegion region_map(double z0, const FrictionParams& p)
{
    if (1.0 - p.alpha < z0 && z0 < 1.0 + p.alpha) return FrictionRegion::FilippovSliding;
    const auto b = breakaway(p);
    if (b.has_turning_points &&
        ((b.z0_plus < z0 && z0 <= 1.0 - p.alpha) || (1.0 + p.alpha <= z0 && z0 < b.z0_minus))) {
        return FrictionRegion::SpuriousSliding;
    }
    return FrictionRegion::Crossing;
}

Polynomial friction_interior(const FrictionParams& p)
{
    return Polynomial({1.0 - p.z0, -p.alpha * (1.0 + p.mu), 0.0, p.alpha * p.mu});
}

ReducedSystem reduced_from_friction(const FrictionParams& p)
{
    p.validate();
    return ReducedSystem(1.0 - p.z0 + p.alpha, 1.0 - p.z0 - p.alpha,
                         InteriorDrift(friction_interior(p)), p.eps, p.kappa, p.r);
}

SmoothedSystem friction_system(const FrictionParams& p)
{
    p.validate();
    const double alpha = p.alpha;
    const double mu = p.mu;
    SmoothedSystem sys;
    sys.base.dim = 2;
    sys.base.switch_index = 0;
    sys.base.f_minus = [alpha](std::span<const double> x, std::span<double> out) {
        out[0] = 1.0 - x[1] - x[0] + alpha;
        out[1] = x[0] - 1.0;
    };
    sys.base.f_plus = [alpha](std::span<const double> x, std::span<double> out) {
        out[0] = 1.0 - x[1] - x[0] - alpha;
        out[1] = x[0] - 1.0;
    };
    sys.eps = p.eps;
    sys.layer = [alpha, mu](double s, std::span<const double> x, std::span<double> out) {
        out[0] = 1.0 - x[1] - x[0] - alpha * (s + mu * (s - s * s * s));
        out[1] = x[0] - 1.0;
    };
    return sys;
}

NoiseSpec friction_noise(const FrictionParams& p)
{
    return NoiseSpec{p.kappa, {1.0, 0.0, 0.0, 0.0}};
}

ScanRow scan_cell(double z0, double kappa, const FrictionParams& base)
{
    ScanRow row;
    row.z0 = z0;
    row.kappa = kappa;
    row.mu = base.mu;
    try {
        FrictionParams p = base;
        p.z0 = z0;
        p.kappa = kappa;
        if (!(1.0 - z0 - p.alpha > 0.0)) {
            row.status = "rejected: a+ <= 0";
            return row;
        }
        const auto red = reduced_from_friction(p);
        const PiecewisePotential pot(red);
        row.well = turning_points(pot);
        row.stokes = row.well.stokes;
        row.well_depth = row.well.depth;
        const auto exact = escape_time_exact_detailed(red);
        row.T_exact = exact.value;
        row.log10_T_exact = exact.log_value / std::log(10.0);
        row.refinement_change = exact.refinement_change;
        try {
            const auto asym = escape_time_asymptotic(red, row.well);
            row.T_asym = asym.value;
            row.log10_T_asym = asym.log_value / std::log(10.0);
        } catch (const DegenerateWell& e) {
            row.status = std::string("degenerate-well: ") + e.what();
        }
    } catch (const std::exception& e) {
        row.status = std::string("error: ") + e.what();
    }
    return row;
}

std::vector<ScanRow> scan_escape_times(std::span<const double> z0_grid,
                                       std::span<const double> kappa_list,
                                       const FrictionParams& base, unsigned n_threads)
{
    const std::size_t nk = kappa_list.size();
    const std::size_t n = z0_grid.size() * nk;
    std::vector<ScanRow> rows(n);
    if (n == 0) return rows;
    unsigned threads = n_threads ? n_threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            rows[i] = scan_cell(z0_grid[i / nk], kappa_list[i % nk], base);
        }
    };
    if (threads == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    return rows;
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t n)
{
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
        g[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    if (n > 1) g.back() = hi;
    return g;
}

}  // namespace smoothswitch
