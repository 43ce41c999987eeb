#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "canodual/problems.hpp"
#include "canodual/reconstruct.hpp"

namespace canodual {

struct SweepRow {
    double r = 0.0;
    std::array<std::optional<double>, 3> zeta;
    /// u_i(r) - u_i(r_min); absent where branch i cannot be integrated from r_min.
    std::array<std::optional<double>, 3> u;
};

struct SweepTable {
    std::vector<SweepRow> rows;
};

/// Roots of all three branches on a uniform grid, plus the primal fields of
/// each branch on the longest prefix of the grid where that branch exists.
SweepTable build_sweep(const Problem& problem, std::size_t nodes);

/// Header `r,zeta1,zeta2,zeta3,u1,u2,u3`, 12 significant digits, '\n' line
/// ends, absent values left empty.
std::string sweep_to_csv(const SweepTable& table);
SweepTable sweep_from_csv(std::string_view text);

/// Writes atomically (temporary file, then rename). Returns bytes written.
std::size_t export_csv(const SweepTable& table, const std::string& path);

/// Columns of a solved branch: r,zeta,u,u_prime,branch.
std::string branch_to_csv(const SolutionBranch& branch);

/// Generic CSV reader: header names and rows with empty cells as nullopt.
struct CsvData {
    std::vector<std::string> header;
    std::vector<std::vector<std::optional<double>>> rows;

    /// Throws InvalidArgument for an unknown column.
    [[nodiscard]] std::size_t column(std::string_view name) const;
};
CsvData parse_csv(std::string_view text);

struct Series {
    std::string label;
    std::vector<std::array<double, 2>> points;
};

/// Standalone SVG, one polyline per series, linear axes autoscaled with 5%
/// margins. Throws InvalidArgument for a series with fewer than two points.
std::string render_svg_string(const std::vector<Series>& series, const std::string& x_label,
                              const std::string& y_label);
std::size_t render_svg(const std::vector<Series>& series, const std::string& x_label,
                       const std::string& y_label, const std::string& path);

/// Shortest-round-trip-safe formatting with 12 significant digits.
std::string format_number(double value);

std::size_t write_file_atomic(const std::string& path, std::string_view content);
std::string read_file(const std::string& path);

}  // namespace canodual
