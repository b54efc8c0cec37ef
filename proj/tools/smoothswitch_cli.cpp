// smoothswitch command-line front end.
//
// Exit codes: 0 success, 2 argument error, 3 precondition violation,
// 4 empty result, 1 internal numerical failure.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "smoothswitch/escape.hpp"
#include "smoothswitch/friction.hpp"
#include "smoothswitch/mc.hpp"
#include "smoothswitch/report.hpp"
#include "smoothswitch/steady_state.hpp"

using namespace smoothswitch;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitParse = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitEmpty = 4;

struct SystemArgs {
    std::string preset;
    double a_minus = NAN;
    double a_plus = NAN;
    std::vector<double> A_poly;
    double z0 = -0.5;
    double alpha = 1.0;
    double mu = 3.0;
    double eps = 0.01;
    double kappa = 0.01;
    double r = 0.1;
};

struct Args {
    SystemArgs sys;
    bool exact_only = false;
    bool asym_only = false;
    std::string out;
    // mc
    std::string mode = "escape";
    std::size_t paths = 10000;
    double step = 0.0;
    std::uint64_t seed = 1;
    double t_max = 0.0;
    double t_burn = 0.0;
    unsigned threads = 0;
    // friction-scan
    std::vector<double> kappas{0.01, 0.02, 0.05, 0.1};
    double z0_min = -1.5;
    double z0_max = -0.05;
    std::size_t n = 200;
};

void add_system_options(CLI::App* cmd, SystemArgs& s)
{
    cmd->add_option("--preset", s.preset, "Named system: cubic-friction or linear")
        ->check(CLI::IsMember({"cubic-friction", "linear"}));
    cmd->add_option("--a-minus", s.a_minus, "Normal drift below the surface");
    cmd->add_option("--a-plus", s.a_plus, "Normal drift above the surface");
    cmd->add_option("--A-poly", s.A_poly, "Layer drift A(s) coefficients, ascending powers of s")
        ->delimiter(',');
    cmd->add_option("--z0", s.z0, "Spring extension (cubic-friction)");
    cmd->add_option("--alpha", s.alpha, "Kinetic friction amplitude (cubic-friction)");
    cmd->add_option("--mu", s.mu, "Cubic shape parameter (cubic-friction)");
    cmd->add_option("--eps", s.eps, "Smoothing half-width");
    cmd->add_option("--kappa", s.kappa, "Noise amplitude");
    cmd->add_option("--r", s.r, "Escape radius");
}

ReducedSystem build_reduced(const SystemArgs& s)
{
    if (s.preset == "cubic-friction") {
        FrictionParams p;
        p.z0 = s.z0;
        p.alpha = s.alpha;
        p.mu = s.mu;
        p.eps = s.eps;
        p.kappa = s.kappa;
        p.r = s.r;
        return reduced_from_friction(p);
    }
    if (std::isnan(s.a_minus) || std::isnan(s.a_plus)) {
        throw PreconditionError("give --preset cubic-friction or both --a-minus and --a-plus");
    }
    if (s.preset == "linear" || s.A_poly.empty()) {
        return ReducedSystem(s.a_minus, s.a_plus, linear_interior(s.a_minus, s.a_plus), s.eps,
                             s.kappa, s.r);
    }
    return ReducedSystem(s.a_minus, s.a_plus, InteriorDrift(Polynomial(s.A_poly)), s.eps, s.kappa,
                         s.r);
}

void echo_system(RunManifest& m, const SystemArgs& s)
{
    if (!s.preset.empty()) m.params.emplace_back("preset", s.preset);
    if (s.preset == "cubic-friction") {
        m.params.emplace_back("z0", format_number(s.z0));
        m.params.emplace_back("alpha", format_number(s.alpha));
        m.params.emplace_back("mu", format_number(s.mu));
    } else {
        m.params.emplace_back("a-minus", format_number(s.a_minus));
        m.params.emplace_back("a-plus", format_number(s.a_plus));
        if (!s.A_poly.empty()) {
            std::string c;
            for (std::size_t i = 0; i < s.A_poly.size(); ++i) {
                c += (i ? "," : "") + format_number(s.A_poly[i]);
            }
            m.params.emplace_back("A-poly", c);
        }
    }
    m.params.emplace_back("eps", format_number(s.eps));
    m.params.emplace_back("kappa", format_number(s.kappa));
    m.params.emplace_back("r", format_number(s.r));
}

// Writes the table either to stdout or to --out plus a JSON sidecar.
class Output {
public:
    explicit Output(const std::string& path) : path_(path), start_(std::chrono::steady_clock::now())
    {
        if (!path_.empty()) {
            file_ = std::make_unique<std::ofstream>(path_);
            if (!*file_) throw PreconditionError("cannot open output file " + path_);
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }
    bool to_file() const { return static_cast<bool>(file_); }

    void finish(const RunManifest& m)
    {
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        if (!file_) return;
        file_->close();
        std::ofstream side(path_ + ".manifest.json");
        side << m.to_json(secs) << '\n';
        std::cerr << "wrote " << path_ << " (" << m.n_rows << " rows, " << secs << " s)\n";
    }

private:
    std::string path_;
    std::unique_ptr<std::ofstream> file_;
    std::chrono::steady_clock::time_point start_;
};

RunManifest base_manifest(const std::string& sub)
{
    RunManifest m;
    m.tool_version = SMOOTHSWITCH_VERSION;
    m.subcommand = sub;
    return m;
}

// ---------------------------------------------------------------------------

int cmd_classify(const Args& a)
{
    if (std::isnan(a.sys.a_minus) || std::isnan(a.sys.a_plus)) {
        std::cerr << "classify needs --a-minus and --a-plus\n";
        return kExitParse;
    }
    std::cout << to_string(classify(a.sys.a_minus, a.sys.a_plus)) << '\n';
    return kExitOk;
}

int cmd_escape(const Args& a)
{
    const auto input = build_reduced(a.sys);
    if (input.region() != RegionKind::Crossing) {
        throw PreconditionError("escape needs a crossing configuration, got " +
                                to_string(input.region()));
    }
    const auto red = input.a_plus() < 0.0 ? input.reflected() : input;
    const PiecewisePotential pot(red);
    const auto well = turning_points(pot);
    const auto c = escape_C(red, pot);

    std::vector<std::string> head{"a_minus", "a_plus", "eps",     "kappa", "r",
                                  "kappa_tilde", "r_tilde", "region", "S", "well_depth"};
    std::vector<std::string> row{format_number(input.a_minus()), format_number(input.a_plus()),
                                 format_number(red.eps()),       format_number(red.kappa_eff()),
                                 format_number(red.r()),         format_number(red.kappa_tilde()),
                                 format_number(red.r_tilde()),   to_string(input.region()),
                                 std::to_string(well.stokes),    format_number(well.depth)};
    std::string status = "ok";
    if (!a.asym_only) {
        const auto e = escape_time_exact_detailed(red);
        for (auto h : {"T_tilde_exact", "log_T_tilde_exact", "T_exact", "C", "log_C", "C_bound",
                       "log_C_bound", "c_within_bound", "refinement_change"}) {
            head.emplace_back(h);
        }
        for (auto v : {format_number(e.value), format_number(e.log_value),
                       format_number(red.eps() * e.value), format_number(c.C),
                       format_number(c.log_C), format_number(c.C_bound),
                       format_number(c.log_C_bound), std::string(c.within_bound ? "true" : "false"),
                       format_number(e.refinement_change)}) {
            row.push_back(v);
        }
    }
    if (!a.exact_only) {
        head.insert(head.end(), {"T_tilde_asym", "log_T_tilde_asym", "regime"});
        try {
            const auto s = escape_time_asymptotic(red, well);
            row.insert(row.end(),
                       {format_number(s.value), format_number(s.log_value), to_string(s.regime)});
        } catch (const DegenerateWell& e) {
            row.insert(row.end(), {"", "", ""});
            status = std::string("degenerate-well: ") + e.what();
        }
    }
    head.emplace_back("reflected");
    row.emplace_back(input.a_plus() < 0.0 ? "true" : "false");
    head.emplace_back("status");
    row.push_back(status);

    RunManifest m = base_manifest("escape");
    echo_system(m, a.sys);
    m.n_rows = 1;
    m.warnings = input.warnings();
    Output out(a.out);
    if (out.to_file()) m.write_header(out.stream());
    write_csv_row(out.stream(), head);
    write_csv_row(out.stream(), row);
    out.finish(m);
    return kExitOk;
}

int cmd_occupancy(const Args& a)
{
    const auto red = build_reduced(a.sys);
    const PiecewisePotential pot(red);
    const auto occ = occupation_probability_asymptotic(pot);
    const auto dens = stationary_density(pot);

    RunManifest m = base_manifest("occupancy");
    echo_system(m, a.sys);
    m.n_rows = 1;
    m.warnings = red.warnings();
    Output out(a.out);
    if (out.to_file()) m.write_header(out.stream());
    write_csv_row(out.stream(), {"kappa_tilde", "P_exact", "P_asym", "regime", "mass_left",
                                 "mass_right", "log_normalization"});
    write_csv_row(out.stream(),
                  {format_number(red.kappa_tilde()), format_number(occ.p_exact),
                   format_number(occ.p_asym), to_string(occ.regime),
                   format_number(dens.mass_left()), format_number(dens.mass_right()),
                   format_number(dens.log_normalization())});
    out.finish(m);
    return kExitOk;
}

int cmd_mc(const Args& a)
{
    const auto red = build_reduced(a.sys);
    auto cfg = McConfig::defaults_for(red, a.seed);
    cfg.n_paths = a.paths;
    cfg.n_threads = a.threads;
    if (a.step > 0.0) cfg.step = a.step;

    McEstimate est;
    double analytic = 0.0;
    double t_burn = 0.0;
    if (a.mode == "escape") {
        if (red.region() != RegionKind::Crossing) {
            throw PreconditionError("escape mode needs a crossing configuration");
        }
        if (a.t_max > 0.0) cfg.t_max = a.t_max;
        analytic = escape_time_exact(red);
        est = mc_escape_time(red, cfg);
    } else if (a.mode == "occupancy") {
        if (red.region() != RegionKind::AttractingSliding) {
            throw PreconditionError("occupancy mode needs an attracting sliding configuration");
        }
        const double k2 = red.kappa_tilde() * red.kappa_tilde();
        t_burn = a.t_burn > 0.0 ? a.t_burn : std::max(10.0 * k2, 10.0);
        cfg.t_max = a.t_max > 0.0 ? a.t_max : t_burn + std::max(100.0, 20.0 * k2);
        analytic = occupation_probability_exact(PiecewisePotential(red));
        est = mc_occupation(red, cfg, t_burn);
    } else {
        throw CLI::ValidationError("--mode", "must be escape or occupancy");
    }

    RunManifest m = base_manifest("mc");
    m.params.emplace_back("mode", a.mode);
    echo_system(m, a.sys);
    m.params.emplace_back("paths", std::to_string(cfg.n_paths));
    m.params.emplace_back("step", format_number(cfg.step));
    m.params.emplace_back("t-max", format_number(cfg.t_max));
    if (a.mode == "occupancy") m.params.emplace_back("t-burn", format_number(t_burn));
    m.seeds = {cfg.seed};
    m.n_rows = 1;
    m.warnings = check_config(red, cfg);
    for (const auto& w : m.warnings) std::cerr << "warning: " << w << '\n';

    Output out(a.out);
    if (out.to_file()) m.write_header(out.stream());
    write_csv_row(out.stream(), {"mode", "mean", "stderr", "ci_low", "ci_high", "n_censored",
                                 "n_paths", "seed", "unreliable", "analytic", "within_ci"});
    write_csv_row(out.stream(),
                  {a.mode, format_number(est.mean), format_number(est.stderr_),
                   format_number(est.ci_low), format_number(est.ci_high),
                   std::to_string(est.n_censored), std::to_string(est.n_paths),
                   std::to_string(est.seed), est.unreliable ? "true" : "false",
                   format_number(analytic), est.contains(analytic) ? "true" : "false"});
    out.finish(m);
    return kExitOk;
}

int cmd_friction_scan(const Args& a)
{
    FrictionParams p;
    p.alpha = a.sys.alpha;
    p.mu = a.sys.mu;
    p.eps = a.sys.eps;
    p.r = a.sys.r;
    p.validate();
    if (a.n == 0 || a.kappas.empty()) throw PreconditionError("empty scan grid");
    const auto grid = uniform_grid(a.z0_min, a.z0_max, a.n);
    const auto rows = scan_escape_times(grid, a.kappas, p, a.threads);

    RunManifest m = base_manifest("friction-scan");
    m.params.emplace_back("mu", format_number(p.mu));
    m.params.emplace_back("alpha", format_number(p.alpha));
    m.params.emplace_back("eps", format_number(p.eps));
    m.params.emplace_back("r", format_number(p.r));
    std::string ks;
    for (std::size_t i = 0; i < a.kappas.size(); ++i) ks += (i ? "," : "") + format_number(a.kappas[i]);
    m.params.emplace_back("kappa", ks);
    m.params.emplace_back("z0-min", format_number(a.z0_min));
    m.params.emplace_back("z0-max", format_number(a.z0_max));
    m.params.emplace_back("n", std::to_string(a.n));
    m.n_rows = rows.size();
    for (const auto& r : rows) m.n_failed_rows += r.ok() ? 0 : 1;

    Output out(a.out);
    m.write_header(out.stream());
    write_csv_row(out.stream(), {"z0", "kappa", "mu", "S", "T_exact", "T_asym", "log10_T_exact",
                                 "log10_T_asym", "well_depth", "status"});
    for (const auto& r : rows) {
        write_csv_row(out.stream(),
                      {format_number(r.z0), format_number(r.kappa), format_number(r.mu),
                       std::to_string(r.stokes), format_number(r.T_exact), format_number(r.T_asym),
                       format_number(r.log10_T_exact), format_number(r.log10_T_asym),
                       format_number(r.well_depth), r.status});
    }
    out.finish(m);
    return m.n_failed_rows == m.n_rows ? kExitEmpty : kExitOk;
}

// ---------------------------------------------------------------------------

// Expands `--config FILE` into flags; flags already given on the command
// line win. Returns an empty optional on success, an error message otherwise.
std::optional<std::string> expand_config(std::vector<std::string>& args,
                                         const std::set<std::string>& switches)
{
    auto it = std::find(args.begin(), args.end(), "--config");
    std::string path;
    if (it != args.end()) {
        if (it + 1 == args.end()) return "--config needs a file name";
        path = *(it + 1);
        args.erase(it, it + 2);
    } else {
        for (auto jt = args.begin(); jt != args.end(); ++jt) {
            if (jt->rfind("--config=", 0) == 0) {
                path = jt->substr(9);
                args.erase(jt);
                break;
            }
        }
    }
    if (path.empty()) return std::nullopt;

    std::ifstream in(path);
    if (!in) return "cannot read config file " + path;
    std::set<std::string> given;
    for (const auto& s : args) {
        if (s.rfind("--", 0) == 0) given.insert(s.substr(2, s.find('=') - 2));
    }
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        if (trim(line).empty()) continue;
        if (eq == std::string::npos) {
            return path + ":" + std::to_string(lineno) + ": expected key = value";
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (given.count(key)) continue;
        if (switches.count(key)) {
            if (value == "true" || value == "1") args.push_back("--" + key);
            continue;
        }
        args.push_back("--" + key);
        args.push_back(value);
    }
    return std::nullopt;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Noise near smoothed switching surfaces: occupation and escape times", "smoothswitch"};
    app.footer("Any subcommand accepts --config FILE with `key = value` lines; flags on the command line win.");
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");
    Args a;

    auto* classify_cmd = app.add_subcommand("classify", "Filippov region from a- and a+");
    classify_cmd->add_option("--a-minus", a.sys.a_minus)->required();
    classify_cmd->add_option("--a-plus", a.sys.a_plus)->required();

    auto* escape_cmd = app.add_subcommand("escape", "Mean escape time for a crossing configuration");
    add_system_options(escape_cmd, a.sys);
    auto* exact_flag = escape_cmd->add_flag("--exact-only", a.exact_only, "Only exact columns");
    escape_cmd->add_flag("--asym-only", a.asym_only, "Only asymptotic columns")->excludes(exact_flag);
    escape_cmd->add_option("--out", a.out, "CSV output file (default stdout)");

    auto* occ_cmd = app.add_subcommand("occupancy", "Stationary occupation of the layer (sliding)");
    add_system_options(occ_cmd, a.sys);
    occ_cmd->add_option("--out", a.out, "CSV output file (default stdout)");

    auto* mc_cmd = app.add_subcommand("mc", "Monte-Carlo estimate against the analytic value");
    add_system_options(mc_cmd, a.sys);
    mc_cmd->add_option("--mode", a.mode, "escape or occupancy")
        ->check(CLI::IsMember({"escape", "occupancy"}));
    mc_cmd->add_option("--paths", a.paths, "Number of paths")->check(CLI::Range(2, 100000000));
    mc_cmd->add_option("--step", a.step, "Euler-Maruyama step in scaled time (default rule if 0)");
    mc_cmd->add_option("--seed", a.seed, "Base seed");
    mc_cmd->add_option("--t-max", a.t_max, "Horizon in scaled time (default rule if 0)");
    mc_cmd->add_option("--t-burn", a.t_burn, "Occupancy burn-in in scaled time");
    mc_cmd->add_option("--threads", a.threads, "Worker threads (0 = all cores)");
    mc_cmd->add_option("--out", a.out, "CSV output file (default stdout)");

    auto* scan_cmd = app.add_subcommand("friction-scan", "Escape times over a z0 x kappa grid");
    scan_cmd->add_option("--mu", a.sys.mu, "Cubic shape parameter");
    scan_cmd->add_option("--alpha", a.sys.alpha, "Kinetic friction amplitude");
    scan_cmd->add_option("--eps", a.sys.eps, "Smoothing half-width");
    scan_cmd->add_option("--r", a.sys.r, "Escape radius");
    scan_cmd->add_option("--kappa", a.kappas, "Noise amplitudes, comma separated")->delimiter(',');
    scan_cmd->add_option("--z0-min", a.z0_min, "Lower end of the z0 grid");
    scan_cmd->add_option("--z0-max", a.z0_max, "Upper end of the z0 grid");
    scan_cmd->add_option("--n", a.n, "Number of z0 points");
    scan_cmd->add_option("--threads", a.threads, "Worker threads (0 = all cores)");
    scan_cmd->add_option("--out", a.out, "CSV output file (default stdout)");

    auto* version_cmd = app.add_subcommand("version", "Print the version");

    std::vector<std::string> args(argv + 1, argv + argc);
    if (auto err = expand_config(args, {"exact-only", "asym-only"})) {
        std::cerr << "error: " << *err << '\n';
        return kExitParse;
    }
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitParse;
    }

    try {
        if (*version_cmd) {
            std::cout << "smoothswitch " << SMOOTHSWITCH_VERSION << '\n';
            return kExitOk;
        }
        if (*classify_cmd) return cmd_classify(a);
        if (*escape_cmd) return cmd_escape(a);
        if (*occ_cmd) return cmd_occupancy(a);
        if (*mc_cmd) return cmd_mc(a);
        if (*scan_cmd) return cmd_friction_scan(a);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitPrecondition;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitParse;
}
