#pragma once

// Seeded Euler–Maruyama simulation of the reduced and full systems.
//
// Every path draws from its own generator seeded by (seed, path_index), so
// results do not depend on the number of worker threads.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "smoothswitch/core.hpp"

namespace smoothswitch {

struct McConfig {
    double step = 0.01;
    std::size_t n_paths = 10000;
    std::uint64_t seed = 1;
    double t_max = 100.0;
    /// 0 = hardware concurrency.
    unsigned n_threads = 0;

    /// h = min(0.01, 0.01κ̃²), 10⁴ paths, t_max = 100·r̃/|a⁺|.
    static McConfig defaults_for(const ReducedSystem& red, std::uint64_t seed = 1);
};

/// Non-fatal configuration issues (step too coarse for the noise scale, ...).
std::vector<std::string> check_config(const ReducedSystem& red, const McConfig& cfg);

struct McEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::size_t n_censored = 0;
    std::size_t n_paths = 0;
    std::uint64_t seed = 0;
    /// Set whenever any path was censored at t_max.
    bool unreliable = false;

    bool contains(double x) const { return ci_low <= x && x <= ci_high; }
};

/// Generator for one path; splitmix64 of (seed, index) seeds a Mersenne twister.
std::mt19937_64 path_engine(std::uint64_t seed, std::uint64_t path_index);

struct ReducedPath {
    double step = 0.0;
    std::vector<double> y;  // y[k] at t̃ = k·step
    bool escaped = false;
    double exit_time = 0.0;  // t_max when not escaped
};

/// One path from y0 until |ỹ| ≥ r̃ or t̃ ≥ t_max.
ReducedPath simulate_reduced(const ReducedSystem& red, const McConfig& cfg, double y0,
                             std::uint64_t path_index = 0);

/// Mean first time |ỹ| reaches r̃ from ỹ = 0.
McEstimate mc_escape_time(const ReducedSystem& red, const McConfig& cfg);

/// Fraction of steps with |ỹ| ≤ 1 after t_burn, averaged over paths.
/// Requires attracting sliding and t_burn ≥ 10κ̃².
McEstimate mc_occupation(const ReducedSystem& red, const McConfig& cfg, double t_burn);

struct FullPath {
    std::size_t dim = 0;
    double step = 0.0;
    std::size_t stride = 1;
    /// Row-major states, one row per recorded step.
    std::vector<double> states;
    bool escaped = false;
    double exit_time = 0.0;

    std::size_t size() const { return dim == 0 ? 0 : states.size() / dim; }
    double at(std::size_t row, std::size_t i) const { return states[row * dim + i]; }
};

/// Euler–Maruyama for dx = drift(x)dt + κD dW in unscaled time (cfg.step and
/// cfg.t_max are unscaled here). Stops early once |x[switch_index]| ≥
/// exit_radius when one is given; records every `stride`-th state.
FullPath simulate_full(const SmoothedSystem& sys, const NoiseSpec& noise,
                       std::span<const double> x0, const McConfig& cfg,
                       std::optional<double> exit_radius = std::nullopt,
                       std::uint64_t path_index = 0, std::size_t stride = 1);

/// Mean exit time of |y| from r for the full system (unscaled), for
/// comparison against the reduced estimate.
McEstimate mc_full_escape_time(const SmoothedSystem& sys, const NoiseSpec& noise,
                               std::span<const double> x0, double r, const McConfig& cfg);

/// Pairwise (cascade) summation.
double pairwise_sum(std::span<const double> xs);

}  // namespace smoothswitch
