#include "canodual/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "canodual/error.hpp"

namespace canodual {

namespace {

constexpr double kInnerRelTol = 1e-13;

double span_tol(double a, double b) { return 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace

BranchMap::BranchMap(std::vector<BranchSegment> segments) : segments_(std::move(segments)) {
    if (segments_.empty()) throw InvalidArgument("branch map needs at least one segment");
    for (std::size_t k = 0; k < segments_.size(); ++k) {
        const auto& s = segments_[k];
        if (s.branch < 1 || s.branch > 3) throw InvalidArgument("branch label must be 1, 2 or 3");
        if (!(s.from < s.to)) throw InvalidArgument("branch segment must have from < to");
        if (k > 0 && std::abs(segments_[k - 1].to - s.from) > span_tol(s.from, s.to)) {
            throw InvalidArgument("branch segments must be contiguous and non-overlapping");
        }
    }
}

BranchMap BranchMap::single(double from, double to, int branch) {
    return BranchMap({{from, to, branch}});
}

std::size_t BranchMap::segment_index(double r) const {
    for (std::size_t k = 0; k + 1 < segments_.size(); ++k) {
        if (r < segments_[k].to) return k;
    }
    return segments_.size() - 1;
}

std::vector<double> BranchMap::interior_boundaries() const {
    std::vector<double> out;
    for (std::size_t k = 0; k + 1 < segments_.size(); ++k) out.push_back(segments_[k].to);
    return out;
}

bool BranchMap::is_pure() const {
    return std::all_of(segments_.begin(), segments_.end(),
                       [&](const BranchSegment& s) { return s.branch == segments_.front().branch; });
}

BranchMap branch_map_from_json(std::string_view text) {
    using nlohmann::json;
    try {
        const json doc = json::parse(text);
        if (!doc.is_object() || !doc.contains("segments") || !doc.at("segments").is_array()) {
            throw InvalidArgument("branch map needs a 'segments' array");
        }
        for (const auto& [key, value] : doc.items()) {
            if (key != "segments") throw InvalidArgument("unknown field in branch map: " + key);
        }
        std::vector<BranchSegment> segments;
        for (const auto& s : doc.at("segments")) {
            for (const auto& [key, value] : s.items()) {
                if (key != "from" && key != "to" && key != "branch") {
                    throw InvalidArgument("unknown field in branch segment: " + key);
                }
            }
            segments.push_back({s.at("from").get<double>(), s.at("to").get<double>(), s.at("branch").get<int>()});
        }
        return BranchMap(std::move(segments));
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("malformed branch map: ") + e.what());
    }
}

BranchMap branch_map_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open branch map: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return branch_map_from_json(buffer.str());
}

std::string branch_map_to_json(const BranchMap& map) {
    nlohmann::json segments = nlohmann::json::array();
    for (const auto& s : map.segments()) {
        segments.push_back({{"from", s.from}, {"to", s.to}, {"branch", s.branch}});
    }
    return nlohmann::json{{"segments", segments}}.dump();
}

std::string_view to_string(TrialityLabel label) {
    switch (label) {
        case TrialityLabel::GlobalMinCandidate: return "GlobalMinCandidate";
        case TrialityLabel::LocalMin: return "LocalMin";
        case TrialityLabel::LocalMax: return "LocalMax";
        case TrialityLabel::Indefinite1DMin: return "Indefinite1DMin";
    }
    return "?";
}

namespace {

struct NodeData {
    std::vector<double> zeta;
    std::vector<double> slope;
    std::vector<Regime> regimes;
};

NodeData solve_nodes(const Problem& problem, const BranchMap& map, const RadialGrid& grid) {
    const Material& m = material_of(problem);
    NodeData data;
    for (double r : grid.nodes()) {
        const int label = map.branch_at(r);
        const StressState stress = stress_at(problem, r);
        const RootSet roots = solve_dae(StressSample(stress.sigma_sq), m);
        const auto root = roots.branch(label);
        if (!root) {
            throw RegimeError("branch " + std::to_string(label) + " has no root at r = " + std::to_string(r) +
                              " (|sigma|^2 above the three-root threshold)");
        }
        if (!(std::abs(*root) >= 1e-12 * m.nu() * m.lambda())) {
            throw SingularError("branch " + std::to_string(label) + " is singular at r = " + std::to_string(r));
        }
        data.zeta.push_back(*root);
        data.slope.push_back(stress.sigma_r / *root);
        data.regimes.push_back(roots.regime);
    }
    return data;
}

std::vector<double> merged_breaks(const RadialGrid& grid, const BranchMap& map) {
    std::vector<double> breaks(grid.nodes().begin(), grid.nodes().end());
    for (double b : map.interior_boundaries()) {
        const std::size_t i = grid.cell_of(b);
        const double tol = span_tol(grid[i], grid[i + 1]);
        if (std::abs(b - grid[i]) > tol && std::abs(b - grid[i + 1]) > tol) breaks.push_back(b);
    }
    std::sort(breaks.begin(), breaks.end());
    return breaks;
}

std::shared_ptr<const RadialGrid> require_grid(std::shared_ptr<const RadialGrid> grid) {
    if (!grid) throw InvalidArgument("solve_branch needs a grid");
    return grid;
}

void check_grid(const Problem& problem, const BranchMap& map, const RadialGrid& grid) {
    const double lo = domain_min(problem);
    const double hi = domain_max(problem);
    if (grid.r_min() < lo - span_tol(lo, hi) || grid.r_max() > hi + span_tol(lo, hi)) {
        throw DomainError("solve_branch: grid leaves the problem domain");
    }
    const double tol = span_tol(grid.r_min(), grid.r_max());
    if (std::abs(map.from() - grid.r_min()) > tol || std::abs(map.to() - grid.r_max()) > tol) {
        throw DomainError("solve_branch: branch map does not span the grid");
    }
}

}  // namespace

SolutionBranch::SolutionBranch(Problem problem, BranchMap map, std::shared_ptr<const RadialGrid> grid,
                               double offset)
    : problem_(std::move(problem)),
      map_(std::move(map)),
      grid_(require_grid(std::move(grid))),
      zeta_(grid_, std::vector<double>(grid_->size())),
      u_(grid_, std::vector<double>(grid_->size())),
      u_prime_(grid_, std::vector<double>(grid_->size())) {
    check_grid(problem_, map_, *grid_);
    NodeData data = solve_nodes(problem_, map_, *grid_);
    zeta_.values = std::move(data.zeta);
    u_prime_.values = std::move(data.slope);
    regimes_ = std::move(data.regimes);

    breaks_ = merged_breaks(*grid_, map_);
    u_breaks_.assign(breaks_.size(), offset);
    for (std::size_t k = 0; k + 1 < breaks_.size(); ++k) {
        const int label = map_.branch_at(0.5 * (breaks_[k] + breaks_[k + 1]));
        auto slope = [&](double r) { return stress_at(problem_, r).sigma_r / zeta_for(r, label); };
        u_breaks_[k + 1] = u_breaks_[k] + integrate_adaptive(slope, breaks_[k], breaks_[k + 1], kInnerRelTol).value;
    }
    std::size_t k = 0;
    for (std::size_t i = 0; i < grid_->size(); ++i) {
        while (breaks_[k] < (*grid_)[i]) ++k;
        u_.values[i] = u_breaks_[k];
    }
}

double SolutionBranch::zeta_for(double r, int branch) const {
    const Material& m = material_of(problem_);
    const auto root = solve_dae(StressSample(stress_at(problem_, r).sigma_sq), m).branch(branch);
    if (!root) throw RegimeError("branch " + std::to_string(branch) + " has no root at r = " + std::to_string(r));
    if (!(std::abs(*root) >= 1e-12 * m.nu() * m.lambda())) {
        throw SingularError("branch " + std::to_string(branch) + " is singular at r = " + std::to_string(r));
    }
    return *root;
}

double SolutionBranch::zeta_at(double r) const { return zeta_for(r, map_.branch_at(r)); }

double SolutionBranch::slope_at(double r) const { return stress_at(problem_, r).sigma_r / zeta_at(r); }

double SolutionBranch::slope_left_of(double r) const {
    const std::size_t k = map_.segment_index(r);
    const int label = (k > 0 && std::abs(r - map_.segments()[k].from) <= span_tol(r, r))
                          ? map_.segments()[k - 1].branch
                          : map_.segments()[k].branch;
    return stress_at(problem_, r).sigma_r / zeta_for(r, label);
}

double SolutionBranch::slope_right_of(double r) const { return slope_at(r); }

double SolutionBranch::u_from_break(std::size_t k, double r) const {
    if (r == breaks_[k]) return u_breaks_[k];
    const int label = map_.branch_at(0.5 * (breaks_[k] + r));
    auto slope = [&](double s) { return stress_at(problem_, s).sigma_r / zeta_for(s, label); };
    return u_breaks_[k] + integrate_adaptive(slope, breaks_[k], r, kInnerRelTol).value;
}

double SolutionBranch::u_at(double r) const {
    if (r < breaks_.front() - span_tol(r, r) || r > breaks_.back() + span_tol(r, r)) {
        throw DomainError("u_at: r outside the branch grid");
    }
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), r);
    std::size_t k = it == breaks_.begin() ? 0 : static_cast<std::size_t>(it - breaks_.begin()) - 1;
    if (k + 1 == breaks_.size()) return u_breaks_.back();
    return u_from_break(k, r);
}

FieldProfile SolutionBranch::profile() const {
    return {[this](double r) { return u_at(r); }, [this](double r) { return slope_at(r); }, breaks_};
}

ScalarProfile SolutionBranch::zeta_profile() const {
    return {[this](double r) { return zeta_at(r); }, breaks_};
}

SolutionBranch solve_branch(const Problem& problem, const BranchMap& map,
                            std::shared_ptr<const RadialGrid> grid, double offset) {
    return SolutionBranch(problem, map, std::move(grid), offset);
}

std::size_t branch_prefix_length(const Problem& problem, const RadialGrid& grid, int branch) {
    const Material& m = material_of(problem);
    std::size_t count = 0;
    for (double r : grid.nodes()) {
        const auto root = solve_dae(StressSample(stress_at(problem, r).sigma_sq), m).branch(branch);
        if (!root || !(std::abs(*root) >= 1e-12 * m.nu() * m.lambda())) break;
        ++count;
    }
    return count;
}

namespace {

/// rho range of the segment x = const, y in [y0, y1] (or the transposed case).
std::pair<double, double> leg_radius_range(double fixed, double a, double b) {
    const double lo_abs = (a <= 0.0 && b >= 0.0) || (b <= 0.0 && a >= 0.0)
                              ? 0.0
                              : std::min(std::abs(a), std::abs(b));
    const double hi_abs = std::max(std::abs(a), std::abs(b));
    return {std::hypot(fixed, lo_abs), std::hypot(fixed, hi_abs)};
}

double signed_integral(const std::function<double(double)>& f, double a, double b, double rel_tol) {
    if (a == b) return 0.0;
    if (a < b) return integrate_adaptive(f, a, b, rel_tol).value;
    return -integrate_adaptive(f, b, a, rel_tol).value;
}

/// Throws SingularError if zeta has a zero in [lo, hi]; sign changes are
/// bisected so a jump between branches is told apart from a genuine zero.
void check_zeta_nonvanishing(const RadialFlux& flux, double lo, double hi) {
    constexpr int samples = 64;
    double prev_r = lo;
    double prev_z = flux.zeta(lo);
    double scale = std::abs(prev_z);
    auto singular = [](double r) {
        return SingularError("path_integral: zeta vanishes at rho = " + std::to_string(r));
    };
    if (!(std::abs(prev_z) >= flux.zeta_floor)) throw singular(lo);
    for (int k = 1; k <= samples && hi > lo; ++k) {
        const double r = lo + (hi - lo) * k / samples;
        const double z = flux.zeta(r);
        scale = std::max(scale, std::abs(z));
        if (!(std::abs(z) >= flux.zeta_floor)) throw singular(r);
        if ((z > 0.0) != (prev_z > 0.0)) {
            double a = prev_r, b = r, za = prev_z;
            for (int it = 0; it < 200 && b - a > 4.0 * std::numeric_limits<double>::epsilon() * b; ++it) {
                const double m = 0.5 * (a + b);
                const double zm = flux.zeta(m);
                if ((zm > 0.0) == (za > 0.0)) {
                    a = m;
                    za = zm;
                } else {
                    b = m;
                }
            }
            const double near = std::min(std::abs(flux.zeta(a)), std::abs(flux.zeta(b)));
            if (near < std::max(flux.zeta_floor, 1e-9 * scale)) throw singular(0.5 * (a + b));
        }
        prev_r = r;
        prev_z = z;
    }
}

}  // namespace

double path_integral(const RadialFlux& flux, Point2 start, Point2 end, double rel_tol) {
    const auto [x0, y0] = start;
    const auto [x1, y1] = end;
    const double tol = span_tol(flux.r_min, flux.r_max);
    for (const auto& [lo, hi] : {leg_radius_range(x0, y0, y1), leg_radius_range(y1, x0, x1)}) {
        if (lo < flux.r_min - tol || hi > flux.r_max + tol) {
            throw DomainError("path_integral: path leaves the annulus");
        }
        check_zeta_nonvanishing(flux, lo, hi);
    }
    auto ratio = [&](double rho) {
        const double z = flux.zeta(rho);
        if (!(std::abs(z) >= flux.zeta_floor)) {
            throw SingularError("path_integral: zeta vanishes at rho = " + std::to_string(rho));
        }
        return flux.sigma_r(rho) / (z * rho);
    };
    auto vertical = [&](double y) { return ratio(std::hypot(x0, y)) * y; };
    auto horizontal = [&](double x) { return ratio(std::hypot(x, y1)) * x; };
    return signed_integral(vertical, y0, y1, rel_tol) + signed_integral(horizontal, x0, x1, rel_tol);
}

double path_integral_u(const AnnulusProblem& problem, const SolutionBranch& branch, Point2 start,
                       Point2 end) {
    const Material& m = problem.material;
    RadialFlux flux{[&](double rho) { return annulus_stress(problem, rho).sigma_r; },
                    [&](double rho) { return branch.zeta_at(rho); },
                    branch.grid()->r_min(),
                    branch.grid()->r_max(),
                    1e-12 * m.nu() * m.lambda()};
    return path_integral(flux, start, end);
}

double fd_curl(const VectorField2D& field, double rho, double theta, double step, double r_lo,
               double r_hi) {
    auto polar = [&](double r, double t) {
        const double c = std::cos(t);
        const double s = std::sin(t);
        const Point2 v = field(r * c, r * s);
        return std::array<double, 2>{v[0] * c + v[1] * s, -v[0] * s + v[1] * c};
    };
    // d/drho of rho * V_theta; one-sided three-point stencils near the radial ends
    auto circulation = [&](double r) { return r * polar(r, theta)[1]; };
    double d_rho = 0.0;
    if (rho - step >= r_lo && rho + step <= r_hi) {
        d_rho = (circulation(rho + step) - circulation(rho - step)) / (2.0 * step);
    } else if (rho + 2.0 * step <= r_hi) {
        d_rho = (-3.0 * circulation(rho) + 4.0 * circulation(rho + step) - circulation(rho + 2.0 * step)) /
                (2.0 * step);
    } else {
        d_rho = (3.0 * circulation(rho) - 4.0 * circulation(rho - step) + circulation(rho - 2.0 * step)) /
                (2.0 * step);
    }
    const double dt = step / rho;
    const double d_theta = (polar(rho, theta + dt)[0] - polar(rho, theta - dt)[0]) / (2.0 * dt);
    return std::abs(d_rho - d_theta) / rho;
}

double curl_residual(const VectorField2D& field, double r_lo, double r_hi, const CurlLattice& lattice) {
    const std::size_t nr = std::max<std::size_t>(lattice.radial, 2);
    double worst = 0.0;
    for (std::size_t i = 0; i < nr; ++i) {
        const double rho = r_lo + (r_hi - r_lo) * static_cast<double>(i) / static_cast<double>(nr - 1);
        for (std::size_t j = 0; j < lattice.angular; ++j) {
            const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(lattice.angular);
            worst = std::max(worst, fd_curl(field, rho, theta, lattice.step, r_lo, r_hi));
        }
    }
    return worst;
}

VectorField2D sigma_over_zeta(const SolutionBranch& branch) {
    return [&branch](double x, double y) {
        const double rho = std::hypot(x, y);
        const double ratio = stress_at(branch.problem(), rho).sigma_r / (branch.zeta_at(rho) * rho);
        return Point2{ratio * x, ratio * y};
    };
}

double compatibility_residual(const AnnulusProblem&, const SolutionBranch& branch, const CurlLattice& lattice) {
    return curl_residual(sigma_over_zeta(branch), branch.grid()->r_min(), branch.grid()->r_max(), lattice);
}

std::vector<bool> region_S_mask(const VectorField2D& field, const RadialGrid& grid, double tol,
                                const CurlLattice& lattice) {
    std::vector<bool> mask(grid.size(), true);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t j = 0; j < lattice.angular && mask[i]; ++j) {
            const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(lattice.angular);
            if (!(fd_curl(field, grid[i], theta, lattice.step, grid.r_min(), grid.r_max()) <= tol)) mask[i] = false;
        }
    }
    return mask;
}

std::vector<bool> region_S_mask(const AnnulusProblem&, const SolutionBranch& branch, double tol,
                                const CurlLattice& lattice) {
    return region_S_mask(sigma_over_zeta(branch), *branch.grid(), tol, lattice);
}

double PdeResidual::max() const {
    double worst = traction;
    for (double v : per_segment) worst = std::max(worst, v);
    return worst;
}

PdeResidual pde_residual_detail(const Problem& problem, const RadialField& u_prime, const BranchMap& map) {
    const RadialGrid& grid = *u_prime.grid;
    if (!grid.is_uniform()) throw InvalidArgument("pde_residual needs a uniform grid");
    const Material& m = material_of(problem);
    const bool radial = dimension_of(problem) == 2;
    const double h = (grid.r_max() - grid.r_min()) / static_cast<double>(grid.size() - 1);

    std::vector<double> flux(grid.size());
    std::vector<double> weighted(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double s = u_prime.values[i];
        flux[i] = m.nu() * (0.5 * s * s - m.lambda()) * s;
        weighted[i] = radial ? grid[i] * flux[i] : flux[i];
    }

    PdeResidual result;
    const std::size_t nseg = map.segments().size();
    result.per_segment.assign(nseg, 0.0);
    std::vector<std::size_t> owner(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) owner[i] = map.segment_index(grid[i]);

    for (std::size_t k = 0; k < nseg; ++k) {
        const auto begin = std::find(owner.begin(), owner.end(), k);
        if (begin == owner.end()) continue;
        const std::size_t first = static_cast<std::size_t>(begin - owner.begin());
        std::size_t last = first;
        while (last + 1 < grid.size() && owner[last + 1] == k) ++last;
        if (last < first + 4) continue;  // too few nodes for a five-point stencil
        const std::size_t lo = k > 0 ? first + 2 : first;
        const std::size_t hi = k + 1 < nseg ? last - 2 : last;
        for (std::size_t i = lo; i <= hi; ++i) {
            const double d = derivative5(weighted, h, i, first, last);
            const double div = radial ? d / grid[i] : d;
            result.per_segment[k] = std::max(result.per_segment[k], std::abs(div + source_at(problem, grid[i])));
        }
    }

    const double tol = span_tol(grid.r_min(), grid.r_max());
    for (const TractionEnd& end : traction_ends(problem)) {
        std::size_t idx = grid.size();
        if (std::abs(end.r - grid.r_min()) <= tol) idx = 0;
        if (std::abs(end.r - grid.r_max()) <= tol) idx = grid.size() - 1;
        if (idx == grid.size()) continue;
        result.traction = std::max(result.traction, std::abs(flux[idx] * end.normal - end.traction));
    }
    return result;
}

double pde_residual(const Problem& problem, const SolutionBranch& branch) {
    return pde_residual_detail(problem, branch.u_prime(), branch.branch_map()).max();
}

double constitutive_residual(const RadialField& zeta, const RadialField& u_prime, const Material& m) {
    if (zeta.values.size() != u_prime.values.size()) throw DomainError("constitutive_residual: grid mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < zeta.values.size(); ++i) {
        const double s = u_prime.values[i];
        worst = std::max(worst, std::abs(0.5 * s * s - (zeta.values[i] / m.nu() + m.lambda())));
    }
    return worst;
}

double constitutive_residual(const SolutionBranch& branch, const Material& material) {
    return constitutive_residual(branch.zeta(), branch.u_prime(), material);
}

}  // namespace canodual
