#include "smoothswitch/mc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

namespace smoothswitch {

namespace {

std::uint64_t splitmix64(std::uint64_t& state)
{
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

unsigned worker_count(const McConfig& cfg, std::size_t jobs)
{
    unsigned n = cfg.n_threads;
    if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

// Runs body(i) for i in [0, n); each index is independent, so the split
// between threads does not affect the results.
template <class Body>
void parallel_for(std::size_t n, unsigned threads, Body body)
{
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < n; i += threads) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

void check_common(const McConfig& cfg)
{
    if (!(cfg.step > 0.0) || !(cfg.t_max > 0.0) || cfg.n_paths < 2) {
        throw PreconditionError("Monte Carlo needs step > 0, t_max > 0 and at least two paths");
    }
}

McEstimate summarize(std::vector<double>& samples, std::size_t censored, const McConfig& cfg)
{
    McEstimate est;
    est.n_paths = samples.size();
    est.seed = cfg.seed;
    est.n_censored = censored;
    est.unreliable = censored > 0;
    const double n = static_cast<double>(samples.size());
    est.mean = pairwise_sum(samples) / n;
    for (auto& s : samples) s = (s - est.mean) * (s - est.mean);
    const double var = pairwise_sum(samples) / (n - 1.0);
    est.stderr_ = std::sqrt(var / n);
    est.ci_low = est.mean - 1.96 * est.stderr_;
    est.ci_high = est.mean + 1.96 * est.stderr_;
    return est;
}

// Exit step of one reduced path started at 0, or -1 if censored.
long long reduced_exit_step(const ReducedSystem& red, const McConfig& cfg, std::uint64_t path)
{
    auto eng = path_engine(cfg.seed, path);
    std::normal_distribution<double> normal;
    const double h = cfg.step;
    const double sig = red.kappa_tilde() * std::sqrt(h);
    const double rt = red.r_tilde();
    const auto n_max = static_cast<long long>(std::ceil(cfg.t_max / h));
    double y = 0.0;
    for (long long k = 1; k <= n_max; ++k) {
        y += red.drift(y) * h + sig * normal(eng);
        if (std::abs(y) >= rt) return k;
    }
    return -1;
}

}  // namespace

McConfig McConfig::defaults_for(const ReducedSystem& red, std::uint64_t seed)
{
    McConfig cfg;
    const double k2 = red.kappa_tilde() * red.kappa_tilde();
    cfg.step = std::min(0.01, 0.01 * k2);
    cfg.n_paths = 10000;
    cfg.seed = seed;
    const double ap = std::abs(red.a_plus());
    cfg.t_max = ap > 0.0 ? 100.0 * red.r_tilde() / ap : 100.0 * red.r_tilde();
    return cfg;
}

std::vector<std::string> check_config(const ReducedSystem& red, const McConfig& cfg)
{
    std::vector<std::string> out;
    const double k2 = red.kappa_tilde() * red.kappa_tilde();
    if (cfg.step > 0.01 * k2 && cfg.step > 1e-3) {
        std::ostringstream msg;
        msg << "step " << cfg.step << " is coarse for kappa~ = " << red.kappa_tilde()
            << " (suggest <= " << std::min(0.01, 0.01 * k2) << ")";
        out.push_back(msg.str());
    }
    const double amax = std::max(std::abs(red.a_minus()), std::abs(red.a_plus()));
    if (cfg.step * amax > 0.1) out.push_back("drift moves more than 0.1 per step");
    if (cfg.n_paths < 1000) out.push_back("fewer than 1000 paths; the interval will be wide");
    return out;
}

std::mt19937_64 path_engine(std::uint64_t seed, std::uint64_t path_index)
{
    std::uint64_t state = seed;
    const std::uint64_t a = splitmix64(state);
    state = a ^ (path_index * 0xD1B54A32D192ED03ULL);
    std::seed_seq seq{splitmix64(state), splitmix64(state), splitmix64(state), splitmix64(state)};
    return std::mt19937_64(seq);
}

double pairwise_sum(std::span<const double> xs)
{
    if (xs.size() <= 16) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s;
    }
    const std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

ReducedPath simulate_reduced(const ReducedSystem& red, const McConfig& cfg, double y0,
                             std::uint64_t path_index)
{
    check_common(cfg);
    auto eng = path_engine(cfg.seed, path_index);
    std::normal_distribution<double> normal;
    const double h = cfg.step;
    const double sig = red.kappa_tilde() * std::sqrt(h);
    const auto n_max = static_cast<std::size_t>(std::ceil(cfg.t_max / h));

    ReducedPath p;
    p.step = h;
    p.y.push_back(y0);
    double y = y0;
    for (std::size_t k = 1; k <= n_max; ++k) {
        y += red.drift(y) * h + sig * normal(eng);
        p.y.push_back(y);
        if (std::abs(y) >= red.r_tilde()) {
            p.escaped = true;
            p.exit_time = static_cast<double>(k) * h;
            return p;
        }
    }
    p.exit_time = cfg.t_max;
    return p;
}

McEstimate mc_escape_time(const ReducedSystem& red, const McConfig& cfg)
{
    check_common(cfg);
    std::vector<double> times(cfg.n_paths);
    std::vector<char> censored(cfg.n_paths, 0);
    parallel_for(cfg.n_paths, worker_count(cfg, cfg.n_paths), [&](std::size_t i) {
        const auto k = reduced_exit_step(red, cfg, i);
        if (k < 0) {
            censored[i] = 1;
            times[i] = cfg.t_max;
        } else {
            times[i] = static_cast<double>(k) * cfg.step;
        }
    });
    const auto n_cens = static_cast<std::size_t>(std::count(censored.begin(), censored.end(), 1));
    return summarize(times, n_cens, cfg);
}

McEstimate mc_occupation(const ReducedSystem& red, const McConfig& cfg, double t_burn)
{
    check_common(cfg);
    if (red.region() != RegionKind::AttractingSliding) {
        throw NotNormalizable("occupation needs an attracting sliding configuration");
    }
    const double k2 = red.kappa_tilde() * red.kappa_tilde();
    if (t_burn < 10.0 * k2) {
        std::ostringstream msg;
        msg << "burn-in " << t_burn << " shorter than 10*kappa~^2 = " << 10.0 * k2;
        throw PreconditionError(msg.str());
    }
    if (cfg.t_max <= t_burn) throw PreconditionError("t_max must exceed the burn-in time");

    const double h = cfg.step;
    const auto n_burn = static_cast<std::size_t>(std::ceil(t_burn / h));
    const auto n_total = static_cast<std::size_t>(std::ceil(cfg.t_max / h));
    const double sig = red.kappa_tilde() * std::sqrt(h);
    std::vector<double> frac(cfg.n_paths);
    parallel_for(cfg.n_paths, worker_count(cfg, cfg.n_paths), [&](std::size_t i) {
        auto eng = path_engine(cfg.seed, i);
        std::normal_distribution<double> normal;
        double y = 0.0;
        std::size_t inside = 0;
        for (std::size_t k = 1; k <= n_total; ++k) {
            y += red.drift(y) * h + sig * normal(eng);
            if (k > n_burn && std::abs(y) <= 1.0) ++inside;
        }
        frac[i] = static_cast<double>(inside) / static_cast<double>(n_total - n_burn);
    });
    return summarize(frac, 0, cfg);
}

FullPath simulate_full(const SmoothedSystem& sys, const NoiseSpec& noise,
                       std::span<const double> x0, const McConfig& cfg,
                       std::optional<double> exit_radius, std::uint64_t path_index,
                       std::size_t stride)
{
    check_common(cfg);
    const std::size_t n = sys.base.dim;
    if (x0.size() != n || noise.dim() != n) {
        throw PreconditionError("state, system and noise dimensions differ");
    }
    stride = std::max<std::size_t>(stride, 1);
    auto eng = path_engine(cfg.seed, path_index);
    std::normal_distribution<double> normal;
    const double h = cfg.step;
    const double sig = noise.kappa * std::sqrt(h);
    const auto n_max = static_cast<std::size_t>(std::ceil(cfg.t_max / h));
    const std::size_t idx = sys.base.switch_index;

    FullPath p;
    p.dim = n;
    p.step = h;
    p.stride = stride;
    std::vector<double> x(x0.begin(), x0.end()), f(n), xi(n);
    p.states.insert(p.states.end(), x.begin(), x.end());
    for (std::size_t k = 1; k <= n_max; ++k) {
        sys.drift(x, f);
        for (auto& v : xi) v = normal(eng);
        for (std::size_t i = 0; i < n; ++i) {
            double dw = 0.0;
            for (std::size_t j = 0; j < n; ++j) dw += noise.D[i * n + j] * xi[j];
            x[i] += f[i] * h + sig * dw;
        }
        const bool out = exit_radius && std::abs(x[idx]) >= *exit_radius;
        if (k % stride == 0 || out) p.states.insert(p.states.end(), x.begin(), x.end());
        if (out) {
            p.escaped = true;
            p.exit_time = static_cast<double>(k) * h;
            return p;
        }
    }
    p.exit_time = cfg.t_max;
    return p;
}

McEstimate mc_full_escape_time(const SmoothedSystem& sys, const NoiseSpec& noise,
                               std::span<const double> x0, double r, const McConfig& cfg)
{
    check_common(cfg);
    std::vector<double> times(cfg.n_paths);
    std::vector<char> censored(cfg.n_paths, 0);
    const std::vector<double> start(x0.begin(), x0.end());
    // Only the exit time is needed; keep almost nothing of the trajectory.
    const auto stride = static_cast<std::size_t>(std::ceil(cfg.t_max / cfg.step)) + 1;
    parallel_for(cfg.n_paths, worker_count(cfg, cfg.n_paths), [&](std::size_t i) {
        const auto p = simulate_full(sys, noise, start, cfg, r, i, stride);
        times[i] = p.exit_time;
        censored[i] = p.escaped ? 0 : 1;
    });
    const auto n_cens = static_cast<std::size_t>(std::count(censored.begin(), censored.end(), 1));
    return summarize(times, n_cens, cfg);
}

}  // namespace smoothswitch
