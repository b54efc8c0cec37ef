#include "smoothswitch/steady_state.hpp"

#include <cmath>
#include <sstream>

#include "smoothswitch/logquad.hpp"

namespace smoothswitch {

namespace {

using logquad::log_add;

void require_sliding(const ReducedSystem& red)
{
    if (red.region() != RegionKind::AttractingSliding) {
        std::ostringstream msg;
        msg << "no steady-state density: region is " << to_string(red.region())
            << " (a- = " << red.a_minus() << ", a+ = " << red.a_plus() << ")";
        throw NotNormalizable(msg.str());
    }
}

struct LogMasses {
    double left;
    double interior;
    double right;
    double total;
};

// Unnormalised log masses of exp(−2V/κ̃²) on the three branches.
LogMasses log_masses(const PiecewisePotential& pot)
{
    const auto& red = pot.reduced();
    const double k2 = red.kappa_tilde() * red.kappa_tilde();
    const double beta = 2.0 / k2;
    LogMasses m{};
    m.left = std::log(k2 / (2.0 * red.a_minus()));
    m.right = std::log(k2 / (-2.0 * red.a_plus())) - beta * pot.at_plus_one();
    const auto roots = interior_roots(red.interior());
    const auto breaks = logquad::make_breaks(-1.0, 1.0, roots);
    m.interior = logquad::log_integrate([&](double u) { return -beta * pot.interior(u); }, breaks)
                     .log_value;
    m.total = log_add(log_add(m.left, m.interior), m.right);
    return m;
}

}  // namespace

std::string to_string(OccupationRegime regime)
{
    switch (regime) {
    case OccupationRegime::LargeKappa: return "large-kappa";
    case OccupationRegime::SmallKappa: return "small-kappa";
    case OccupationRegime::Intermediate: return "intermediate";
    }
    return "unknown";
}

double StationaryDensity::log_density(double y) const
{
    const double k = pot_.reduced().kappa_tilde();
    return log_k_ - 2.0 * pot_(y) / (k * k);
}

double StationaryDensity::operator()(double y) const
{
    return std::exp(log_density(y));
}

StationaryDensity stationary_density(const PiecewisePotential& pot, int grid_points)
{
    const auto& red = pot.reduced();
    require_sliding(red);
    if (grid_points < 2) throw PreconditionError("density grid needs at least two points");

    const auto m = log_masses(pot);
    StationaryDensity d(pot);
    d.log_k_ = -m.total;
    d.mass_left_ = std::exp(m.left - m.total);
    d.mass_interior_ = std::exp(m.interior - m.total);
    d.mass_right_ = std::exp(m.right - m.total);

    const double k2 = red.kappa_tilde() * red.kappa_tilde();
    d.window_ = 1.0 + 10.0 * k2 * std::max(1.0 / red.a_minus(), 1.0 / -red.a_plus());
    d.grid_.resize(static_cast<std::size_t>(grid_points));
    d.values_.resize(d.grid_.size());
    for (std::size_t i = 0; i < d.grid_.size(); ++i) {
        const double y = -d.window_ + 2.0 * d.window_ * static_cast<double>(i) / (grid_points - 1);
        d.grid_[i] = y;
        d.values_[i] = d(y);
    }
    return d;
}

double occupation_probability_exact(const PiecewisePotential& pot)
{
    require_sliding(pot.reduced());
    const auto m = log_masses(pot);
    return std::exp(m.interior - m.total);
}

OccupationResult occupation_probability_asymptotic(const PiecewisePotential& pot)
{
    const auto& red = pot.reduced();
    require_sliding(red);
    OccupationResult out;
    out.p_exact = occupation_probability_exact(pot);
    const double k = red.kappa_tilde();
    if (k >= kKappaSplit) {
        out.regime = OccupationRegime::LargeKappa;
        out.p_asym = 4.0 / ((1.0 / red.a_minus() + 1.0 / -red.a_plus()) * k * k);
    } else if (k <= 1.0 / kKappaSplit) {
        out.regime = OccupationRegime::SmallKappa;
        out.p_asym = 1.0;
    } else {
        out.regime = OccupationRegime::Intermediate;
        out.p_asym = out.p_exact;
    }
    return out;
}

}  // namespace smoothswitch
