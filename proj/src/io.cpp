#include "canodual/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "canodual/error.hpp"

namespace canodual {

std::string format_number(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.12g", value);
    return buffer;
}

SweepTable build_sweep(const Problem& problem, std::size_t nodes) {
    auto grid = std::make_shared<const RadialGrid>(make_radial_grid(domain_min(problem), domain_max(problem), nodes));
    const Material& m = material_of(problem);

    SweepTable table;
    table.rows.resize(grid->size());
    for (std::size_t i = 0; i < grid->size(); ++i) {
        const RootSet roots = solve_dae(StressSample(stress_at(problem, (*grid)[i]).sigma_sq), m);
        table.rows[i].r = (*grid)[i];
        for (int b = 1; b <= 3; ++b) table.rows[i].zeta[b - 1] = roots.branch(b);
    }

    for (int b = 1; b <= 3; ++b) {
        const std::size_t prefix = branch_prefix_length(problem, *grid, b);
        if (prefix < 2) continue;
        auto sub = prefix == grid->size()
                       ? grid
                       : std::make_shared<const RadialGrid>(std::vector<double>(
                             grid->nodes().begin(), grid->nodes().begin() + static_cast<std::ptrdiff_t>(prefix)));
        const SolutionBranch branch = solve_branch(problem, BranchMap::single(sub->r_min(), sub->r_max(), b), sub);
        for (std::size_t i = 0; i < prefix; ++i) table.rows[i].u[b - 1] = branch.u().values[i];
    }
    return table;
}

namespace {

void append_cell(std::string& out, const std::optional<double>& v) {
    out += ',';
    if (v) out += format_number(*v);
}

std::vector<std::string> split_line(std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        cells.emplace_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

std::optional<double> parse_cell(const std::string& cell) {
    if (cell.empty()) return std::nullopt;
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(cell, &used);
    } catch (const std::exception&) {
        throw InvalidArgument("CSV cell is not a number: " + cell);
    }
    if (used != cell.size()) throw InvalidArgument("CSV cell is not a number: " + cell);
    return v;
}

std::string xml_escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string sweep_to_csv(const SweepTable& table) {
    std::string out = "r,zeta1,zeta2,zeta3,u1,u2,u3\n";
    for (const SweepRow& row : table.rows) {
        out += format_number(row.r);
        for (const auto& z : row.zeta) append_cell(out, z);
        for (const auto& u : row.u) append_cell(out, u);
        out += '\n';
    }
    return out;
}

CsvData parse_csv(std::string_view text) {
    CsvData data;
    std::size_t start = 0;
    bool first = true;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        start = end + 1;
        if (line.empty()) continue;
        auto cells = split_line(line);
        if (first) {
            data.header = std::move(cells);
            first = false;
            continue;
        }
        if (cells.size() != data.header.size()) throw InvalidArgument("CSV row width does not match the header");
        std::vector<std::optional<double>> row;
        row.reserve(cells.size());
        for (const auto& cell : cells) row.push_back(parse_cell(cell));
        data.rows.push_back(std::move(row));
    }
    if (first) throw InvalidArgument("CSV input has no header");
    return data;
}

std::size_t CsvData::column(std::string_view name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw InvalidArgument("CSV has no column '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - header.begin());
}

SweepTable sweep_from_csv(std::string_view text) {
    const CsvData data = parse_csv(text);
    const std::vector<std::string> expected{"r", "zeta1", "zeta2", "zeta3", "u1", "u2", "u3"};
    if (data.header != expected) throw InvalidArgument("not a sweep table header");
    SweepTable table;
    for (const auto& cells : data.rows) {
        if (!cells[0]) throw InvalidArgument("sweep row without r");
        SweepRow row;
        row.r = *cells[0];
        for (std::size_t k = 0; k < 3; ++k) {
            row.zeta[k] = cells[1 + k];
            row.u[k] = cells[4 + k];
        }
        table.rows.push_back(row);
    }
    return table;
}

std::size_t export_csv(const SweepTable& table, const std::string& path) {
    return write_file_atomic(path, sweep_to_csv(table));
}

std::string branch_to_csv(const SolutionBranch& branch) {
    std::string out = "r,zeta,u,u_prime,branch\n";
    const RadialGrid& grid = *branch.grid();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out += format_number(grid[i]);
        append_cell(out, branch.zeta().values[i]);
        append_cell(out, branch.u().values[i]);
        append_cell(out, branch.u_prime().values[i]);
        out += ',' + std::to_string(branch.branch_map().branch_at(grid[i])) + '\n';
    }
    return out;
}

std::string render_svg_string(const std::vector<Series>& series, const std::string& x_label,
                              const std::string& y_label) {
    if (series.empty()) throw InvalidArgument("render_svg needs at least one series");
    double x_lo = std::numeric_limits<double>::infinity();
    double x_hi = -x_lo;
    double y_lo = x_lo;
    double y_hi = -x_lo;
    for (const Series& s : series) {
        if (s.points.size() < 2) throw InvalidArgument("render_svg needs at least two points per series");
        for (const auto& [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) throw InvalidArgument("render_svg: non-finite point");
            x_lo = std::min(x_lo, x);
            x_hi = std::max(x_hi, x);
            y_lo = std::min(y_lo, y);
            y_hi = std::max(y_hi, y);
        }
    }
    auto pad = [](double& lo, double& hi) {
        double span = hi - lo;
        if (span == 0.0) span = std::max(1.0, std::abs(lo));
        lo -= 0.05 * span;
        hi += 0.05 * span;
    };
    pad(x_lo, x_hi);
    pad(y_lo, y_hi);

    constexpr double width = 640.0;
    constexpr double height = 480.0;
    constexpr double left = 70.0;
    constexpr double right = 20.0;
    constexpr double top = 20.0;
    constexpr double bottom = 50.0;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;
    auto px = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * plot_w; };
    auto py = [&](double y) { return top + (y_hi - y) / (y_hi - y_lo) * plot_h; };

    auto tick = [](double v) {
        char buffer[32];
        std::snprintf(buffer, sizeof buffer, "%.4g", v);
        return std::string(buffer);
    };

    static constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\"" << plot_h
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double fx = x_lo + (x_hi - x_lo) * t / 4.0;
        const double fy = y_lo + (y_hi - y_lo) * t / 4.0;
        svg << "<text x=\"" << px(fx) << "\" y=\"" << height - bottom + 18 << "\" font-size=\"11\" text-anchor=\"middle\">"
            << tick(fx) << "</text>\n";
        svg << "<text x=\"" << left - 6 << "\" y=\"" << py(fy) + 4 << "\" font-size=\"11\" text-anchor=\"end\">"
            << tick(fy) << "</text>\n";
    }
    svg << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 10 << "\" font-size=\"13\" text-anchor=\"middle\">"
        << xml_escape(x_label) << "</text>\n";
    svg << "<text x=\"16\" y=\"" << top + plot_h / 2 << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << top + plot_h / 2 << ")\">" << xml_escape(y_label) << "</text>\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        svg << "<polyline fill=\"none\" stroke=\"" << palette[k % 5] << "\" stroke-width=\"1.5\" data-label=\""
            << xml_escape(series[k].label) << "\" points=\"";
        for (std::size_t i = 0; i < series[k].points.size(); ++i) {
            if (i > 0) svg << ' ';
            svg << px(series[k].points[i][0]) << ',' << py(series[k].points[i][1]);
        }
        svg << "\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

std::size_t render_svg(const std::vector<Series>& series, const std::string& x_label, const std::string& y_label,
                       const std::string& path) {
    return write_file_atomic(path, render_svg_string(series, x_label, y_label));
}

std::size_t write_file_atomic(const std::string& path, std::string_view content) {
    const std::string temp = path + ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open for writing: " + temp);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw IoError("write failed: " + temp);
    }
    std::error_code ec;
    std::filesystem::rename(temp, path, ec);
    if (ec) {
        std::filesystem::remove(temp, ec);
        throw IoError("cannot move output into place: " + path);
    }
    return content.size();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace canodual
