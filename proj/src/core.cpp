#include "smoothswitch/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/differentiation/finite_difference.hpp>

namespace smoothswitch {

std::string to_string(RegionKind kind)
{
    switch (kind) {
    case RegionKind::Crossing: return "crossing";
    case RegionKind::AttractingSliding: return "attracting-sliding";
    case RegionKind::RepellingSliding: return "repelling-sliding";
    case RegionKind::Degenerate: return "degenerate";
    }
    return "unknown";
}

RegionKind classify(double a_minus, double a_plus)
{
    const double scale = std::max(std::abs(a_minus), std::abs(a_plus));
    if (scale == 0.0 || std::abs(a_minus) <= kTolZero * scale ||
        std::abs(a_plus) <= kTolZero * scale) {
        return RegionKind::Degenerate;
    }
    if ((a_minus > 0.0) == (a_plus > 0.0)) return RegionKind::Crossing;
    return a_minus > 0.0 ? RegionKind::AttractingSliding : RegionKind::RepellingSliding;
}

SlidingField filippov_sliding_field(std::span<const double> fm, std::span<const double> fp,
                                    std::size_t switch_index)
{
    if (fm.size() != fp.size() || switch_index >= fm.size()) {
        throw PreconditionError("filippov_sliding_field: dimension mismatch");
    }
    const double am = fm[switch_index];
    const double ap = fp[switch_index];
    if (!(am > 0.0 && ap < 0.0)) {
        std::ostringstream msg;
        msg << "not an attracting sliding configuration (a- = " << am << ", a+ = " << ap << ")";
        throw NotSliding(msg.str());
    }
    SlidingField out;
    out.lambda = am / (am - ap);
    out.field.resize(fm.size());
    for (std::size_t i = 0; i < fm.size(); ++i) {
        out.field[i] = out.lambda * fp[i] + (1.0 - out.lambda) * fm[i];
    }
    out.field[switch_index] = 0.0;
    return out;
}

// ---------------------------------------------------------------------------

std::vector<double> PiecewiseSystem::eval_minus(std::span<const double> x) const
{
    std::vector<double> out(dim);
    f_minus(x, out);
    return out;
}

std::vector<double> PiecewiseSystem::eval_plus(std::span<const double> x) const
{
    std::vector<double> out(dim);
    f_plus(x, out);
    return out;
}

std::vector<double> SmoothedSystem::eval_layer(double s, std::span<const double> x) const
{
    std::vector<double> out(base.dim);
    layer(s, x, out);
    return out;
}

void SmoothedSystem::drift(std::span<const double> x, std::span<double> out) const
{
    const double y = x[base.switch_index];
    if (y <= -eps) {
        base.f_minus(x, out);
    } else if (y >= eps) {
        base.f_plus(x, out);
    } else {
        layer(y / eps, x, out);
    }
}

std::size_t NoiseSpec::dim() const
{
    return static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(D.size()))));
}

double NoiseSpec::row_norm(std::size_t i) const
{
    const std::size_t n = dim();
    if (n * n != D.size() || i >= n) throw PreconditionError("NoiseSpec: D is not square");
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += D[i * n + j] * D[i * n + j];
    return std::sqrt(s);
}

NoiseSpec NoiseSpec::identity(std::size_t dim, double kappa)
{
    NoiseSpec n;
    n.kappa = kappa;
    n.D.assign(dim * dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) n.D[i * dim + i] = 1.0;
    return n;
}

ContinuityReport continuity_check(const SmoothedSystem& sys, std::span<const double> x0,
                                  double tol)
{
    if (!(tol > 0.0)) throw PreconditionError("continuity_check: tol must be positive");
    const auto fp = sys.base.eval_plus(x0);
    const auto fm = sys.base.eval_minus(x0);
    const auto Fp = sys.eval_layer(1.0, x0);
    const auto Fm = sys.eval_layer(-1.0, x0);

    ContinuityReport rep;
    rep.gap_plus.resize(fp.size());
    rep.gap_minus.resize(fm.size());
    for (std::size_t i = 0; i < fp.size(); ++i) {
        rep.gap_plus[i] = std::abs(Fp[i] - fp[i]);
        rep.gap_minus[i] = std::abs(Fm[i] - fm[i]);
        rep.max_gap = std::max({rep.max_gap, rep.gap_plus[i], rep.gap_minus[i]});
    }
    rep.pass = rep.max_gap <= tol;
    return rep;
}

// ---------------------------------------------------------------------------
// Polynomial
// ---------------------------------------------------------------------------

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs))
{
    while (coeffs_.size() > 1 && coeffs_.back() == 0.0) coeffs_.pop_back();
}

double Polynomial::operator()(double x) const
{
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Polynomial Polynomial::derivative() const
{
    if (coeffs_.size() <= 1) return Polynomial{{0.0}};
    std::vector<double> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs_[k];
    return Polynomial{std::move(d)};
}

Polynomial Polynomial::antiderivative() const
{
    std::vector<double> a(coeffs_.size() + 1, 0.0);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) a[k + 1] = coeffs_[k] / static_cast<double>(k + 1);
    return Polynomial{std::move(a)};
}

Polynomial Polynomial::reflected() const
{
    auto c = coeffs_;
    for (std::size_t k = 1; k < c.size(); k += 2) c[k] = -c[k];
    return Polynomial{std::move(c)};
}

Polynomial Polynomial::operator*(double k) const
{
    auto c = coeffs_;
    for (auto& v : c) v *= k;
    return Polynomial{std::move(c)};
}

// ---------------------------------------------------------------------------
// InteriorDrift
// ---------------------------------------------------------------------------

InteriorDrift::InteriorDrift(Polynomial poly)
    : poly_(std::move(poly)), dpoly_(poly_->derivative())
{
}

InteriorDrift::InteriorDrift(std::function<double(double)> fn) : fn_(std::move(fn))
{
    if (!fn_) throw PreconditionError("InteriorDrift: empty evaluator");
}

double InteriorDrift::operator()(double s) const
{
    return poly_ ? (*poly_)(s) : fn_(s);
}

double InteriorDrift::derivative(double s) const
{
    if (dpoly_) return (*dpoly_)(s);
    return boost::math::differentiation::finite_difference_derivative<decltype(fn_), double, 6>(fn_, s);
}

InteriorDrift InteriorDrift::reflected() const
{
    if (poly_) return InteriorDrift{poly_->reflected() * -1.0};
    auto f = fn_;
    return InteriorDrift{std::function<double(double)>{[f](double s) { return -f(-s); }}};
}

namespace {

void polish_newton(const Polynomial& p, const Polynomial& dp, double& x)
{
    for (int it = 0; it < 4; ++it) {
        const double fx = p(x);
        const double dfx = dp(x);
        if (dfx == 0.0 || !std::isfinite(dfx)) return;
        const double next = x - fx / dfx;
        if (!(std::abs(p(next)) < std::abs(fx))) return;
        x = next;
    }
}

std::vector<double> real_roots_low_degree(const Polynomial& p)
{
    const auto c = p.coefficients();
    double scale = 0.0;
    for (double v : c) scale = std::max(scale, std::abs(v));
    auto negligible = [&](double v) { return std::abs(v) <= 1e-14 * scale; };

    std::size_t deg = p.degree();
    while (deg > 0 && negligible(c[deg])) --deg;

    std::vector<double> roots;
    if (deg == 0) return roots;
    if (deg == 1) {
        roots.push_back(-c[0] / c[1]);
    } else if (deg == 2) {
        const double a = c[2], b = c[1], cc = c[0];
        const double disc = b * b - 4.0 * a * cc;
        if (disc >= 0.0) {
            const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
            if (q != 0.0) {
                roots.push_back(q / a);
                roots.push_back(cc / q);
            } else {
                roots.push_back(0.0);
            }
        }
    } else {
        // Depressed cubic t³ + pt + q = 0 with u = t − b/3.
        const double b = c[2] / c[3], cc = c[1] / c[3], d = c[0] / c[3];
        const double pp = cc - b * b / 3.0;
        const double qq = 2.0 * b * b * b / 27.0 - b * cc / 3.0 + d;
        const double shift = -b / 3.0;
        const double disc = qq * qq / 4.0 + pp * pp * pp / 27.0;
        if (pp < 0.0 && disc <= 0.0) {
            const double m = 2.0 * std::sqrt(-pp / 3.0);
            const double arg = std::clamp(3.0 * qq / (pp * m), -1.0, 1.0);
            const double theta = std::acos(arg) / 3.0;
            for (int k = 0; k < 3; ++k) {
                roots.push_back(m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0) + shift);
            }
        } else {
            const double sq = std::sqrt(std::max(disc, 0.0));
            roots.push_back(std::cbrt(-qq / 2.0 + sq) + std::cbrt(-qq / 2.0 - sq) + shift);
        }
    }
    const Polynomial dp = p.derivative();
    for (auto& r : roots) polish_newton(p, dp, r);
    std::sort(roots.begin(), roots.end());
    return roots;
}

std::vector<double> bracketed_roots(const InteriorDrift& A)
{
    constexpr int kPanels = 512;
    std::vector<double> roots;
    double x0 = -1.0;
    double f0 = A(x0);
    for (int i = 1; i <= kPanels; ++i) {
        const double x1 = -1.0 + 2.0 * i / kPanels;
        const double f1 = A(x1);
        if (f1 == 0.0 && i < kPanels) {
            roots.push_back(x1);
        } else if ((f0 < 0.0 && f1 > 0.0) || (f0 > 0.0 && f1 < 0.0)) {
            double lo = x0, hi = x1, flo = f0;
            while (hi - lo > 1e-12) {
                const double mid = 0.5 * (lo + hi);
                const double fm = A(mid);
                if ((fm < 0.0) == (flo < 0.0) && fm != 0.0) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push_back(0.5 * (lo + hi));
        }
        x0 = x1;
        f0 = f1;
    }
    return roots;
}

}  // namespace

std::vector<double> interior_roots(const InteriorDrift& drift)
{
    std::vector<double> all;
    if (drift.polynomial() && drift.polynomial()->degree() <= 3) {
        all = real_roots_low_degree(*drift.polynomial());
    } else {
        all = bracketed_roots(drift);
    }
    std::vector<double> out;
    for (double r : all) {
        if (r > -1.0 && r < 1.0 && std::isfinite(r)) out.push_back(r);
    }
    return out;
}

// ---------------------------------------------------------------------------
// ReducedSystem
// ---------------------------------------------------------------------------

ReducedSystem::ReducedSystem(double a_minus, double a_plus, InteriorDrift drift, double eps,
                             double kappa_eff, double r)
    : a_minus_(a_minus),
      a_plus_(a_plus),
      drift_(std::move(drift)),
      eps_(eps),
      kappa_eff_(kappa_eff),
      r_(r)
{
    if (!(eps > 0.0) || !std::isfinite(eps)) throw BadScales("eps must be positive");
    if (!(eps < r)) {
        std::ostringstream msg;
        msg << "smoothing half-width eps = " << eps << " must be smaller than r = " << r;
        throw BadScales(msg.str());
    }
    kappa_tilde_ = kappa_eff / std::sqrt(eps);
    r_tilde_ = r / eps;
    if (eps > r / 5.0) warnings_.push_back("eps > r/5: weak scale separation");
    if (kappa_eff > r / 2.0) warnings_.push_back("kappa > r/2: weak scale separation");
    validate();
}

ReducedSystem ReducedSystem::from_scaled(double a_minus, double a_plus, InteriorDrift drift,
                                         double kappa_tilde, double r_tilde)
{
    return ReducedSystem(a_minus, a_plus, std::move(drift), 1.0, kappa_tilde, r_tilde);
}

void ReducedSystem::validate()
{
    if (!std::isfinite(a_minus_) || !std::isfinite(a_plus_)) {
        throw PreconditionError("outer drifts must be finite");
    }
    if (!(kappa_tilde_ > 0.0) || !std::isfinite(kappa_tilde_)) {
        throw PreconditionError("effective noise amplitude must be positive");
    }
    if (!(r_tilde_ > 1.0)) throw BadScales("scaled escape radius must exceed 1");
    const double gm = std::abs(drift_(-1.0) - a_minus_);
    const double gp = std::abs(drift_(1.0) - a_plus_);
    if (gm > kTolCont * std::max(1.0, std::abs(a_minus_)) ||
        gp > kTolCont * std::max(1.0, std::abs(a_plus_))) {
        std::ostringstream msg;
        msg << "interior drift does not match outer drifts: |A(-1)-a-| = " << gm
            << ", |A(1)-a+| = " << gp;
        throw ContinuityError(msg.str());
    }
}

double ReducedSystem::drift(double y) const
{
    if (y <= -1.0) return a_minus_;
    if (y >= 1.0) return a_plus_;
    return drift_(y);
}

ReducedSystem ReducedSystem::reflected() const
{
    ReducedSystem out(*this);
    out.a_minus_ = -a_plus_;
    out.a_plus_ = -a_minus_;
    out.drift_ = drift_.reflected();
    return out;
}

InteriorDrift linear_interior(double a_minus, double a_plus)
{
    return InteriorDrift{Polynomial{{0.5 * (a_plus + a_minus), 0.5 * (a_plus - a_minus)}}};
}

ReducedSystem reduce(const SmoothedSystem& sys, const NoiseSpec& noise, double r,
                     std::span<const double> x0)
{
    const std::size_t n = sys.base.dim;
    const std::size_t idx = sys.base.switch_index;
    if (idx >= n) throw PreconditionError("switch_index out of range");
    if (!x0.empty() && x0.size() != n) throw PreconditionError("base point has wrong dimension");
    if (noise.D.size() != n * n) throw PreconditionError("diffusion matrix has wrong dimension");

    std::vector<double> base(n, 0.0);
    if (!x0.empty()) std::copy(x0.begin(), x0.end(), base.begin());
    base[idx] = 0.0;

    const double am = sys.base.eval_minus(base)[idx];
    const double ap = sys.base.eval_plus(base)[idx];
    const double kappa_eff = noise.kappa * noise.row_norm(idx);
    if (!(sys.eps < r)) {
        std::ostringstream msg;
        msg << "smoothing half-width eps = " << sys.eps << " must be smaller than r = " << r;
        throw BadScales(msg.str());
    }
    if (!(kappa_eff > 0.0)) {
        throw PreconditionError("effective noise amplitude is zero; stochastic analysis needs kappa > 0");
    }

    auto layer = sys.layer;
    auto fn = [layer, base, idx](double s) {
        thread_local std::vector<double> buf;
        buf.resize(base.size());
        layer(s, base, buf);
        return buf[idx];
    };
    return ReducedSystem(am, ap, InteriorDrift{std::function<double(double)>{fn}}, sys.eps,
                         kappa_eff, r);
}

}  // namespace smoothswitch
