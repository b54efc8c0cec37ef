#pragma once

// CSV output with round-trip number formatting and run manifests.

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace smoothswitch {

/// 17 significant digits ("%.17g"); "nan"/"inf"/"-inf" for non-finite values.
std::string format_number(double x);
/// Empty string for a missing value.
std::string format_number(const std::optional<double>& x);

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_escape(const std::string& field);

void write_csv_row(std::ostream& os, const std::vector<std::string>& fields);

struct RunManifest {
    std::string tool_version;
    std::string subcommand;
    /// Parameter echo in the order given.
    std::vector<std::pair<std::string, std::string>> params;
    std::vector<unsigned long long> seeds;
    std::size_t n_rows = 0;
    std::size_t n_failed_rows = 0;
    std::vector<std::string> warnings;

    /// Deterministic `# key: value` header lines (no timing information).
    void write_header(std::ostream& os) const;
    /// JSON object including the wall-clock duration.
    std::string to_json(double wall_seconds) const;
};

}  // namespace smoothswitch
