#include "smoothswitch/presets.hpp"

#include "smoothswitch/friction.hpp"

namespace smoothswitch {

namespace {

PresetSystem linear_preset(const PresetParams& p)
{
    const double am = p.a_minus;
    const double ap = p.a_plus;
    PresetSystem out;
    out.name = "linear";
    out.system.base.dim = 1;
    out.system.base.switch_index = 0;
    out.system.base.f_minus = [am](std::span<const double>, std::span<double> f) { f[0] = am; };
    out.system.base.f_plus = [ap](std::span<const double>, std::span<double> f) { f[0] = ap; };
    out.system.eps = p.eps;
    out.system.layer = [am, ap](double s, std::span<const double>, std::span<double> f) {
        f[0] = 0.5 * (1.0 + s) * ap + 0.5 * (1.0 - s) * am;
    };
    out.noise = NoiseSpec::identity(1, p.kappa);
    out.x0 = {0.0};
    return out;
}

}  // namespace

PresetSystem make_preset(const std::string& name, const PresetParams& params)
{
    if (name == "cubic-friction") {
        FrictionParams fp;
        fp.z0 = params.z0;
        fp.alpha = params.alpha;
        fp.mu = params.mu;
        fp.eps = params.eps;
        fp.kappa = params.kappa;
        fp.r = params.r;
        PresetSystem out;
        out.name = name;
        out.system = friction_system(fp);
        out.noise = friction_noise(fp);
        out.x0 = {0.0, params.z0};
        return out;
    }
    if (name == "linear") return linear_preset(params);
    throw PreconditionError("unknown preset '" + name + "'");
}

std::vector<std::string> preset_names()
{
    return {"cubic-friction", "linear"};
}

}  // namespace smoothswitch
