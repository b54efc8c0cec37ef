#include "smoothswitch/potential.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace smoothswitch {

namespace {

constexpr int kTableIntervals = 64;

double node(int k)
{
    return -1.0 + 2.0 * k / kTableIntervals;
}

double integrate_drift(const InteriorDrift& A, double a, double b)
{
    if (a == b) return 0.0;
    const double lo = std::min(a, b), hi = std::max(a, b);
    auto f = [&A](double s) { return A(s); };
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    // Error estimate: one panel against two halves.
    const double mid = 0.5 * (lo + hi);
    const double whole = GK::integrate(f, lo, hi, 0);
    const double v = GK::integrate(f, lo, mid, 0) + GK::integrate(f, mid, hi, 0);
    if (!(std::abs(v - whole) <= 1e-12 * std::max(1.0, std::abs(v)))) {
        throw QuadratureFailure("interior antiderivative did not reach 1e-12");
    }
    return a < b ? v : -v;
}

}  // namespace

PiecewisePotential::PiecewisePotential(ReducedSystem reduced) : reduced_(std::move(reduced))
{
    const auto& A = reduced_.interior();
    if (A.polynomial()) {
        antiderivative_ = A.polynomial()->antiderivative();
        anti_at_minus_one_ = (*antiderivative_)(-1.0);
    } else {
        auto table = std::make_shared<std::vector<double>>(kTableIntervals + 1, 0.0);
        for (int k = 1; k <= kTableIntervals; ++k) {
            (*table)[k] = (*table)[k - 1] - integrate_drift(A, node(k - 1), node(k));
        }
        table_ = std::move(table);
    }
    v1_ = interior(1.0);
}

double PiecewisePotential::interior(double s) const
{
    if (antiderivative_) return anti_at_minus_one_ - (*antiderivative_)(s);
    return interior_quadrature(s);
}

double PiecewisePotential::interior_quadrature(double s) const
{
    const int k = std::clamp(static_cast<int>(std::lround((s + 1.0) * kTableIntervals / 2.0)), 0,
                             kTableIntervals);
    return (*table_)[k] - integrate_drift(reduced_.interior(), node(k), s);
}

double PiecewisePotential::operator()(double y) const
{
    if (y <= -1.0) return -reduced_.a_minus() * (y + 1.0);
    if (y >= 1.0) return v1_ - reduced_.a_plus() * (y - 1.0);
    return interior(y);
}

}  // namespace smoothswitch
