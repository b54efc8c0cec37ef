#include "smoothswitch/report.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace smoothswitch {

std::string format_number(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string format_number(const std::optional<double>& x)
{
    return x ? format_number(*x) : std::string();
}

std::string csv_escape(const std::string& field)
{
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_csv_row(std::ostream& os, const std::vector<std::string>& fields)
{
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) os << ',';
        os << csv_escape(fields[i]);
    }
    os << '\n';
}

void RunManifest::write_header(std::ostream& os) const
{
    os << "# tool: smoothswitch " << tool_version << '\n';
    os << "# subcommand: " << subcommand << '\n';
    for (const auto& [k, v] : params) os << "# param " << k << ": " << v << '\n';
    if (!seeds.empty()) {
        os << "# seeds:";
        for (auto s : seeds) os << ' ' << s;
        os << '\n';
    }
    os << "# rows: " << n_rows << " (failed: " << n_failed_rows << ")\n";
    for (const auto& w : warnings) os << "# warning: " << w << '\n';
}

std::string RunManifest::to_json(double wall_seconds) const
{
    nlohmann::ordered_json j;
    j["tool"] = "smoothswitch";
    j["version"] = tool_version;
    j["subcommand"] = subcommand;
    auto& p = j["params"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : params) p[k] = v;
    j["seeds"] = seeds;
    j["rows"] = n_rows;
    j["failed_rows"] = n_failed_rows;
    j["warnings"] = warnings;
    j["wall_clock_seconds"] = wall_seconds;
    return j.dump(2);
}

}  // namespace smoothswitch
