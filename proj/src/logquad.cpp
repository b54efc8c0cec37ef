#include "smoothswitch/logquad.hpp"

#include <algorithm>

#include <boost/math/quadrature/gauss.hpp>

namespace smoothswitch::logquad {

double log_int_exp_linear(double k, double x0, double x1)
{
    const double len = x1 - x0;
    if (!(len > 0.0)) return kNegInf;
    const double kl = std::abs(k) * len;
    if (kl < 1e-10) return std::log(len) + 0.5 * k * (x0 + x1);
    // ∫ e^{kx} = e^{k·x_top}(1 − e^{−|k|len})/|k| with x_top the end where kx is largest.
    const double top = k > 0.0 ? k * x1 : k * x0;
    return top + std::log(-std::expm1(-kl)) - std::log(std::abs(k));
}

double double_int_exp_decay(double k, double L)
{
    const double x = k * L;
    // L − (1 − e^{−x})/k = (x − 1 + e^{−x})/k, evaluated without cancellation.
    double f;
    if (x < 1e-3) {
        f = x * x * (0.5 - x / 6.0 + x * x / 24.0);
    } else {
        f = x + std::expm1(-x);
    }
    return f / (k * k);
}

const GaussRule& gauss32()
{
    static const GaussRule rule = [] {
        using G = boost::math::quadrature::gauss<double, 32>;
        const auto& x = G::abscissa();
        const auto& w = G::weights();
        GaussRule r{};
        // Boost stores the 16 non-negative abscissae; mirror them.
        for (std::size_t i = 0; i < 16; ++i) {
            r.nodes[15 - i] = -x[i];
            r.weights[15 - i] = w[i];
            r.nodes[16 + i] = x[i];
            r.weights[16 + i] = w[i];
        }
        return r;
    }();
    return rule;
}

std::vector<double> refine_breaks(std::span<const double> breaks, int n_sub)
{
    std::vector<double> out;
    if (breaks.empty()) return out;
    out.reserve((breaks.size() - 1) * static_cast<std::size_t>(n_sub) + 1);
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double a = breaks[i];
        const double h = (breaks[i + 1] - a) / n_sub;
        for (int k = 0; k < n_sub; ++k) out.push_back(a + k * h);
    }
    out.push_back(breaks.back());
    return out;
}

std::vector<double> make_breaks(double lo, double hi, std::span<const double> cuts)
{
    std::vector<double> b{lo, hi};
    for (double c : cuts) {
        if (c > lo && c < hi) b.push_back(c);
    }
    std::sort(b.begin(), b.end());
    // Drop slivers narrower than 1e-9 that would only add empty panels.
    std::vector<double> out{b.front()};
    for (std::size_t i = 1; i < b.size(); ++i) {
        if (b[i] - out.back() > 1e-9) out.push_back(b[i]);
    }
    if (out.back() != hi) out.back() = hi;
    return out;
}

}  // namespace smoothswitch::logquad
