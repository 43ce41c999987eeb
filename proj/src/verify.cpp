#include "canodual/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "canodual/error.hpp"

namespace canodual {

void VerificationReport::add(std::string name, double value, double threshold, bool pass) {
    checks.push_back({std::move(name), value, threshold, pass});
    overall = overall && pass;
}

void VerificationReport::add_at_most(std::string name, double value, double threshold) {
    add(std::move(name), value, threshold, value <= threshold);
}

const Check* VerificationReport::find(const std::string& name) const {
    for (const auto& c : checks) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

std::string report_to_json(const VerificationReport& report) {
    using nlohmann::json;
    json checks = json::array();
    for (const auto& c : report.checks) {
        // JSON has no infinities; non-finite measurements are written as null
        json value = std::isfinite(c.value) ? json(c.value) : json(nullptr);
        checks.push_back({{"name", c.name}, {"value", value}, {"threshold", c.threshold}, {"pass", c.pass}});
    }
    return json{{"checks", checks}, {"overall", report.overall}}.dump(2);
}

namespace {

bool signs_match(int branch, double coeff, double dual) {
    switch (branch) {
        case 1: return coeff > 0.0 && dual < 0.0;
        case 2: return coeff > 0.0 && dual > 0.0;
        case 3: return coeff < 0.0 && dual < 0.0;
        default: return false;
    }
}

}  // namespace

SignCensus triality_sign_census(const SolutionBranch& branch) {
    const Material& m = material_of(branch.problem());
    const RadialGrid& grid = *branch.grid();
    SignCensus census;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (branch.regimes()[i] == Regime::Boundary) continue;
        const int label = branch.branch_map().branch_at(grid[i]);
        const double zeta = branch.zeta().values[i];
        const StressSample sample(stress_at(branch.problem(), grid[i]).sigma_sq);
        const double coeff = second_variation_primal_coeff(zeta, m);
        const double dual = second_variation_dual_integrand(zeta, sample, m);
        ++census.nodes;
        if (!signs_match(label, coeff, dual)) ++census.conflicts;
    }
    return census;
}

std::vector<TrialityLabel> classify_branch(const SolutionBranch& branch, int dimension) {
    const SignCensus census = triality_sign_census(branch);
    if (census.conflicts > 0) {
        throw ClassificationConflict("second-variation signs contradict the branch label at " +
                                     std::to_string(census.conflicts) + " nodes");
    }
    const RadialGrid& grid = *branch.grid();
    const BranchMap& map = branch.branch_map();
    std::vector<TrialityLabel> labels;
    for (std::size_t k = 0; k < map.segments().size(); ++k) {
        switch (map.segments()[k].branch) {
            case 1: {
                bool one_root_everywhere = true;
                for (std::size_t i = 0; i < grid.size(); ++i) {
                    if (map.segment_index(grid[i]) == k && branch.regimes()[i] != Regime::OneReal) {
                        one_root_everywhere = false;
                    }
                }
                labels.push_back(one_root_everywhere ? TrialityLabel::GlobalMinCandidate : TrialityLabel::LocalMin);
                break;
            }
            case 2:
                labels.push_back(dimension >= 2 ? TrialityLabel::Indefinite1DMin : TrialityLabel::LocalMin);
                break;
            default:
                labels.push_back(TrialityLabel::LocalMax);
                break;
        }
    }
    return labels;
}

EnergyReport duality_gap(const Problem& problem, const SolutionBranch& branch, double rel_tol) {
    const QuadratureResult primal = primal_energy(problem, branch.profile(), rel_tol);
    const QuadratureResult dual = dual_energy(problem, branch.zeta_profile(), rel_tol);
    EnergyReport report;
    report.primal = primal.value;
    report.dual = dual.value;
    report.gap = primal.value - dual.value;
    report.quad_error_estimate = primal.error_estimate + dual.error_estimate;
    return report;
}

namespace {

struct Normalised {
    double lo;
    double width;
};

Normalised unit_coordinate(const Problem& problem) {
    const double lo = domain_min(problem);
    return {lo, domain_max(problem) - lo};
}

FieldProfile polynomial_profile(const Problem& problem, std::vector<double> coeffs, double scale) {
    const auto [lo, width] = unit_coordinate(problem);
    FieldProfile phi;
    phi.value = [=](double r) {
        const double xi = (r - lo) / width;
        double acc = 0.0;
        for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * xi + coeffs[k];
        return scale * acc;
    };
    phi.slope = [=](double r) {
        const double xi = (r - lo) / width;
        double acc = 0.0;
        for (std::size_t k = coeffs.size(); k-- > 1;) acc = acc * xi + static_cast<double>(k) * coeffs[k];
        return scale * acc / width;
    };
    phi.breaks = {lo, lo + width};
    return phi;
}

double unit_draw(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

std::vector<FieldProfile> stationarity_directions(const Problem& problem, int directions) {
    std::vector<FieldProfile> out;
    for (int k = 1; k <= directions + 1; ++k) {
        std::vector<double> coeffs(static_cast<std::size_t>(k) + 1, 0.0);
        coeffs.back() = 1.0;
        out.push_back(polynomial_profile(problem, std::move(coeffs), 1.0));
    }
    return out;
}

namespace {

double probe_with_scale(const Problem& problem, const FieldProfile& u, int directions, double scale) {
    const double h = 1e-6 * scale;
    double worst = 0.0;
    for (const FieldProfile& phi : stationarity_directions(problem, directions)) {
        auto increment = [&](double eps) { return primal_energy_increment(problem, u, phi, eps).value; };
        worst = std::max(worst, std::abs(finite_diff(increment, 0.0, h)));
    }
    return worst;
}

}  // namespace

double stationarity_probe(const Problem& problem, const FieldProfile& u, int directions) {
    double scale = 1.0;
    for (double r : u.breaks) scale = std::max(scale, std::abs(u.value(r)));
    return probe_with_scale(problem, u, directions, scale);
}

double stationarity_probe(const Problem& problem, const SolutionBranch& branch, int directions) {
    double scale = 1.0;
    for (double v : branch.u().values) scale = std::max(scale, std::abs(v));
    return probe_with_scale(problem, branch.profile(), directions, scale);
}

FieldProfile random_perturbation(const Problem& problem, std::mt19937_64& rng) {
    std::vector<double> coeffs(5, 0.0);
    for (std::size_t k = 1; k < coeffs.size(); ++k) coeffs[k] = 2.0 * unit_draw(rng) - 1.0;
    const FieldProfile raw = polynomial_profile(problem, coeffs, 1.0);
    auto energy = [&](double r) {
        const double s = raw.slope(r);
        return s * s * measure_weight(problem, r);
    };
    const double norm_sq = integrate_adaptive(energy, domain_min(problem), domain_max(problem), 1e-13).value;
    if (!(norm_sq > 0.0)) return random_perturbation(problem, rng);
    return polynomial_profile(problem, std::move(coeffs), 1.0 / std::sqrt(norm_sq));
}

PerturbationRange perturbation_probe(const Problem& problem, const FieldProfile& u, int trials, double eps,
                                     std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    PerturbationRange range{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (int t = 0; t < trials; ++t) {
        const FieldProfile phi = random_perturbation(problem, rng);
        const double delta = primal_energy_increment(problem, u, phi, eps).value;
        range.min_delta = std::min(range.min_delta, delta);
        range.max_delta = std::max(range.max_delta, delta);
    }
    return range;
}

PerturbationRange perturbation_probe(const Problem& problem, const SolutionBranch& branch, int trials,
                                     double eps, std::uint64_t seed) {
    return perturbation_probe(problem, branch.profile(), trials, eps, seed);
}

namespace {

constexpr double kDaeTol = 1e-12;
constexpr double kConstitutiveTol = 1e-12;
constexpr double kPdeTol = 1e-6;
constexpr double kCompatibilityTol = 1e-8;
constexpr double kGapTol = 1e-6;
constexpr double kShiftTol = 1e-10;
constexpr double kStationarityTol = 1e-5;
constexpr double kPerturbationTol = 1e-10;

bool ordered(const RootSet& roots, double nl) {
    const double upper2 = 0.0;
    const double mid = -2.0 * nl / 3.0;
    if (roots.zeta1 && *roots.zeta1 < 0.0) return false;
    if (roots.zeta2 && (*roots.zeta2 > upper2 || *roots.zeta2 < mid)) return false;
    if (roots.zeta3 && (*roots.zeta3 > mid || *roots.zeta3 < -nl)) return false;
    return true;
}

void pointwise_checks(const Problem& problem, const RadialGrid& grid, VerificationReport& report) {
    const Material& m = material_of(problem);
    const double nl = m.nu() * m.lambda();
    std::size_t violations = 0;
    double worst = 0.0;
    for (double r : grid.nodes()) {
        const StressSample sample(stress_at(problem, r).sigma_sq);
        const RootSet roots = solve_dae(sample, m);
        if (!ordered(roots, nl)) ++violations;
        for (int b = 1; b <= 3; ++b) {
            if (const auto z = roots.branch(b)) {
                worst = std::max(worst, std::abs(dae_residual(*z, sample, m)) / std::max(1.0, sample.sigma_sq()));
            }
        }
    }
    report.add_at_most("dae_residual", worst, kDaeTol);
    report.add_at_most("ordering", static_cast<double>(violations), 0.0);
}

void branch_checks(const Problem& problem, const SolutionBranch& branch, int b, const SuiteOptions& options,
                   VerificationReport& report, double& primal_out) {
    const std::string prefix = "branch" + std::to_string(b) + ".";
    const Material& m = material_of(problem);

    report.add_at_most(prefix + "constitutive", constitutive_residual(branch, m), kConstitutiveTol);
    report.add_at_most(prefix + "pde_residual", pde_residual(problem, branch), kPdeTol * load_scale(problem));
    if (const auto* annulus = std::get_if<AnnulusProblem>(&problem)) {
        report.add_at_most(prefix + "compatibility", compatibility_residual(*annulus, branch), kCompatibilityTol);
    }

    const EnergyReport energy = duality_gap(problem, branch);
    primal_out = energy.primal;
    report.add_at_most(prefix + "duality_gap", std::abs(energy.gap), kGapTol * std::abs(energy.dual));

    if (is_pure_traction(problem)) {
        const FieldProfile u = branch.profile();
        const double base = primal_energy(problem, u).value;
        double worst = 0.0;
        for (double c : {1.0, -1.0, 10.0, -10.0}) {
            FieldProfile shifted = u;
            shifted.value = [&u, c](double r) { return u.value(r) + c; };
            worst = std::max(worst, std::abs(primal_energy(problem, shifted).value - base));
        }
        report.add_at_most(prefix + "shift_invariance", worst, kShiftTol * std::abs(base));
    }

    report.add_at_most(prefix + "stationarity", stationarity_probe(problem, branch, options.directions),
                       kStationarityTol * std::abs(energy.primal));

    const int dim = dimension_of(problem);
    if (b == 1 || b == 3 || dim == 1) {
        const PerturbationRange range = perturbation_probe(problem, branch, options.trials, options.eps, options.seed);
        if (b == 3) {
            report.add_at_most(prefix + "perturbation_max", range.max_delta, kPerturbationTol);
        } else {
            report.add(prefix + "perturbation_min", range.min_delta, -kPerturbationTol,
                       range.min_delta >= -kPerturbationTol);
        }
    }

    const SignCensus census = triality_sign_census(branch);
    report.add_at_most(prefix + "classification", static_cast<double>(census.conflicts), 0.0);
}

}  // namespace

VerificationReport run_suite(const Problem& problem, const SuiteOptions& options) {
    VerificationReport report;
    const double scale = load_scale(problem) * (1.0 + domain_max(problem));
    report.add_at_most("load_balance", std::abs(check_load_balance(problem)), 1e-10 * scale);

    if (const auto* annulus = std::get_if<AnnulusProblem>(&problem); annulus && !annulus->has_default_loads()) {
        // no statically admissible stress in closed form for these loads
        report.add("static_stress", 1.0, 0.0, false);
        return report;
    }

    auto grid = std::make_shared<const RadialGrid>(
        make_radial_grid(domain_min(problem), domain_max(problem), options.nodes));
    pointwise_checks(problem, *grid, report);

    int constructed = 0;
    double primal[4] = {0.0, 0.0, 0.0, 0.0};
    bool have[4] = {false, false, false, false};
    for (int b = 1; b <= 3; ++b) {
        try {
            const SolutionBranch branch = solve_branch(problem, BranchMap::single(grid->r_min(), grid->r_max(), b), grid);
            ++constructed;
            branch_checks(problem, branch, b, options, report, primal[b]);
            have[b] = true;
        } catch (const RegimeError&) {
            if (b == 1) report.add("branch1.construct", 0.0, 1.0, false);
        } catch (const Error&) {
            report.add("branch" + std::to_string(b) + ".construct", 0.0, 1.0, false);
        }
    }
    report.add("branches_constructed", constructed, 1.0, constructed >= 1);

    if (have[1] && (have[2] || have[3])) {
        double others = std::numeric_limits<double>::infinity();
        if (have[2]) others = std::min(others, primal[2]);
        if (have[3]) others = std::min(others, primal[3]);
        report.add_at_most("energy_ordering", primal[1] - others, 1e-12 * std::max(1.0, std::abs(others)));
    }
    return report;
}

}  // namespace canodual
