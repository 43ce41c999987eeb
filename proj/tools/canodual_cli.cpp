#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "canodual/dae.hpp"
#include "canodual/energy.hpp"
#include "canodual/error.hpp"
#include "canodual/io.hpp"
#include "canodual/problems.hpp"
#include "canodual/reconstruct.hpp"
#include "canodual/verify.hpp"

using nlohmann::json;
namespace cd = canodual;

namespace {

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

int run_roots(double nu, double lambda, double sigma_sq) {
    const cd::RootSet roots = cd::solve_dae(cd::StressSample(sigma_sq), cd::Material(nu, lambda));
    json out{{"regime", std::string(cd::to_string(roots.regime))},
             {"zeta1", optional_json(roots.zeta1)},
             {"zeta2", optional_json(roots.zeta2)},
             {"zeta3", optional_json(roots.zeta3)},
             {"theta", optional_json(roots.theta)},
             {"count", roots.count()}};
    std::cout << out.dump(2) << '\n';
    return 0;
}

int run_sweep(const std::string& config, std::size_t nodes, const std::string& out) {
    const cd::Problem problem = cd::problem_from_file(config);
    const std::size_t bytes = cd::export_csv(cd::build_sweep(problem, nodes), out);
    std::cerr << "wrote " << bytes << " bytes to " << out << '\n';
    return 0;
}

cd::BranchMap branch_argument(const std::string& arg, const cd::Problem& problem) {
    if (arg == "1" || arg == "2" || arg == "3")
        return cd::BranchMap::single(cd::domain_min(problem), cd::domain_max(problem), std::stoi(arg));
    return cd::branch_map_from_file(arg);
}

int run_solve(const std::string& config, const std::string& branch_arg, std::size_t nodes,
              const std::string& out) {
    const cd::Problem problem = cd::problem_from_file(config);
    const cd::BranchMap map = branch_argument(branch_arg, problem);
    auto grid = std::make_shared<const cd::RadialGrid>(
        cd::make_radial_grid(cd::domain_min(problem), cd::domain_max(problem), nodes));
    cd::SolutionBranch branch = cd::solve_branch(problem, map, grid);

    json labels = nullptr;
    try {
        labels = json::array();
        for (auto label : cd::classify_branch(branch, cd::dimension_of(problem)))
            labels.push_back(std::string(cd::to_string(label)));
    } catch (const cd::ClassificationConflict& e) {
        labels = nullptr;
        std::cerr << "classification: " << e.what() << '\n';
    }
    const cd::EnergyReport energy = cd::duality_gap(problem, branch);
    cd::write_file_atomic(out, cd::branch_to_csv(branch));

    json summary{{"branch_map", json::parse(cd::branch_map_to_json(map))},
                 {"primal", energy.primal},
                 {"dual", energy.dual},
                 {"gap", energy.gap},
                 {"labels", labels},
                 {"csv", out}};
    std::cout << summary.dump(2) << '\n';
    return 0;
}

int run_verify(const std::string& config, const std::string& report_path, std::size_t nodes) {
    const cd::Problem problem = cd::problem_from_file(config);
    cd::SuiteOptions options;
    options.nodes = nodes;
    const cd::VerificationReport report = cd::run_suite(problem, options);
    cd::write_file_atomic(report_path, cd::report_to_json(report));
    for (const auto& check : report.checks) {
        if (!check.pass) std::cerr << "FAIL " << check.name << ": " << check.value << " (threshold " << check.threshold << ")\n";
    }
    std::cerr << (report.overall ? "all checks passed" : "verification failed") << '\n';
    return report.overall ? 0 : 1;
}

int run_plot(const std::string& in, const std::string& x, const std::vector<std::string>& ys,
             const std::string& out) {
    const cd::CsvData data = cd::parse_csv(cd::read_file(in));
    const std::size_t xc = data.column(x);
    std::vector<cd::Series> series;
    for (const auto& y : ys) {
        const std::size_t yc = data.column(y);
        cd::Series s{y, {}};
        for (const auto& row : data.rows) {
            if (row[xc] && row[yc]) s.points.push_back({*row[xc], *row[yc]});
        }
        series.push_back(std::move(s));
    }
    const std::string y_label = ys.size() == 1 ? ys.front() : std::string("value");
    cd::render_svg(series, x, y_label, out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Critical points of the double-well variational problem by canonical duality"};
    app.require_subcommand(1);

    double nu = 1.0;
    double lambda = 1.0;
    double sigma_sq = 0.0;
    auto* roots = app.add_subcommand("roots", "Real roots of the dual cubic at one stress level");
    roots->add_option("--nu", nu, "Material stiffness")->capture_default_str();
    roots->add_option("--lambda", lambda, "Well parameter")->capture_default_str();
    roots->add_option("--sigma-sq", sigma_sq, "Squared stress magnitude")->required();

    std::string config;
    std::string out;
    std::size_t nodes = cd::kDefaultGridNodes;
    auto* sweep = app.add_subcommand("sweep", "Tabulate all three branches across the domain");
    sweep->add_option("--config", config, "Problem JSON")->required()->check(CLI::ExistingFile);
    sweep->add_option("--nodes", nodes, "Grid nodes")->capture_default_str()->check(CLI::Range(2, 1 << 24));
    sweep->add_option("--out", out, "Output CSV")->required();

    std::string branch_arg;
    auto* solve = app.add_subcommand("solve", "Reconstruct one branch or a mixed branch map");
    solve->add_option("--config", config, "Problem JSON")->required()->check(CLI::ExistingFile);
    solve->add_option("--branch", branch_arg, "1, 2, 3 or a branch map JSON file")->required();
    solve->add_option("--nodes", nodes, "Grid nodes")->capture_default_str()->check(CLI::Range(2, 1 << 24));
    solve->add_option("--out", out, "Output CSV")->required();

    std::string report;
    auto* verify = app.add_subcommand("verify", "Run the verification suite");
    verify->add_option("--config", config, "Problem JSON")->required()->check(CLI::ExistingFile);
    verify->add_option("--nodes", nodes, "Grid nodes")->capture_default_str()->check(CLI::Range(8, 1 << 24));
    verify->add_option("--report", report, "Output report JSON")->required();

    std::string in;
    std::string x_col;
    std::vector<std::string> y_cols;
    auto* plot = app.add_subcommand("plot", "Render CSV columns as an SVG line plot");
    plot->add_option("--in", in, "Input CSV")->required()->check(CLI::ExistingFile);
    plot->add_option("--x", x_col, "Column for the x axis")->required();
    plot->add_option("--y", y_cols, "Column(s) for the y axis")->required();
    plot->add_option("--out", out, "Output SVG")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*roots) return run_roots(nu, lambda, sigma_sq);
        if (*sweep) return run_sweep(config, nodes, out);
        if (*solve) return run_solve(config, branch_arg, nodes, out);
        if (*verify) return run_verify(config, report, nodes);
        if (*plot) return run_plot(in, x_col, y_cols, out);
    } catch (const cd::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
