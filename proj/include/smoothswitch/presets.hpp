#pragma once

// Named example systems for the command line and tests.

#include <string>
#include <vector>

#include "smoothswitch/core.hpp"

namespace smoothswitch {

struct PresetParams {
    // cubic-friction
    double z0 = -0.5;
    double alpha = 1.0;
    double mu = 3.0;
    // linear
    double a_minus = 1.0;
    double a_plus = -1.0;
    // shared
    double eps = 0.01;
    double kappa = 0.01;
    double r = 0.1;
};

struct PresetSystem {
    std::string name;
    SmoothedSystem system;
    NoiseSpec noise;
    /// Base point on the switching surface.
    std::vector<double> x0;
};

/// "cubic-friction": the dry-friction oscillator, x = (y, z), based at (0, z₀).
/// "linear": scalar system with constant drifts a± and the linear layer.
/// Throws PreconditionError for an unknown name.
PresetSystem make_preset(const std::string& name, const PresetParams& params);

std::vector<std::string> preset_names();

}  // namespace smoothswitch
