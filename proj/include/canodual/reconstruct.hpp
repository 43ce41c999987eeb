#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "canodual/dae.hpp"
#include "canodual/energy.hpp"
#include "canodual/numerics.hpp"
#include "canodual/problems.hpp"

namespace canodual {

struct BranchSegment {
    double from = 0.0;
    double to = 0.0;
    int branch = 1;
};

/// Piecewise assignment of root branches to consecutive sub-intervals.
///
/// Segments are half-open [from, to) except the last one, which is closed.
class BranchMap {
public:
    /// Throws InvalidArgument unless the segments are contiguous, non-empty
    /// and labelled 1, 2 or 3.
    explicit BranchMap(std::vector<BranchSegment> segments);

    static BranchMap single(double from, double to, int branch);

    [[nodiscard]] const std::vector<BranchSegment>& segments() const { return segments_; }
    [[nodiscard]] double from() const { return segments_.front().from; }
    [[nodiscard]] double to() const { return segments_.back().to; }
    [[nodiscard]] std::size_t segment_index(double r) const;
    [[nodiscard]] int branch_at(double r) const { return segments_[segment_index(r)].branch; }
    /// Segment boundaries strictly inside (from, to).
    [[nodiscard]] std::vector<double> interior_boundaries() const;
    [[nodiscard]] bool is_pure() const;

private:
    std::vector<BranchSegment> segments_;
};

/// {"segments":[{"from":0.5,"to":0.9,"branch":1},...]}
BranchMap branch_map_from_json(std::string_view text);
BranchMap branch_map_from_file(const std::string& path);
std::string branch_map_to_json(const BranchMap& map);

enum class TrialityLabel { GlobalMinCandidate, LocalMin, LocalMax, Indefinite1DMin };

std::string_view to_string(TrialityLabel label);

/// A critical point reconstructed from one choice of dual root per segment.
///
/// Nodal fields are stored on the grid; the pointwise evaluators re-solve the
/// dual equation, so quantities between nodes are exact rather than
/// interpolated. u is normalised to u(r_min) = offset.
class SolutionBranch {
public:
    SolutionBranch(Problem problem, BranchMap map, std::shared_ptr<const RadialGrid> grid,
                   double offset);

    [[nodiscard]] const Problem& problem() const { return problem_; }
    [[nodiscard]] const BranchMap& branch_map() const { return map_; }
    [[nodiscard]] const std::shared_ptr<const RadialGrid>& grid() const { return grid_; }
    [[nodiscard]] const RadialField& zeta() const { return zeta_; }
    [[nodiscard]] const RadialField& u() const { return u_; }
    [[nodiscard]] const RadialField& u_prime() const { return u_prime_; }
    [[nodiscard]] const std::vector<Regime>& regimes() const { return regimes_; }

    [[nodiscard]] double zeta_at(double r) const;
    [[nodiscard]] double slope_at(double r) const;
    [[nodiscard]] double u_at(double r) const;
    /// One-sided slopes at a segment boundary.
    [[nodiscard]] double slope_left_of(double r) const;
    [[nodiscard]] double slope_right_of(double r) const;

    /// Grid nodes merged with interior segment boundaries.
    [[nodiscard]] const std::vector<double>& breakpoints() const { return breaks_; }

    [[nodiscard]] FieldProfile profile() const;
    [[nodiscard]] ScalarProfile zeta_profile() const;

    /// Per-segment triality labels; empty until classified.
    std::vector<TrialityLabel> classification;

private:
    double zeta_for(double r, int branch) const;
    double u_from_break(std::size_t k, double r) const;

    Problem problem_;
    BranchMap map_;
    std::shared_ptr<const RadialGrid> grid_;
    std::vector<double> breaks_;
    std::vector<double> u_breaks_;
    std::vector<Regime> regimes_;
    RadialField zeta_;
    RadialField u_;
    RadialField u_prime_;
};

/// Builds a branch on `grid` (which must lie inside the problem domain and be
/// spanned by the map). Throws RegimeError naming the radius where a requested
/// root is missing and SingularError where |zeta| < 1e-12 nu lambda.
SolutionBranch solve_branch(const Problem& problem, const BranchMap& map,
                            std::shared_ptr<const RadialGrid> grid, double offset = 0.0);

/// Number of leading grid nodes at which `branch` has a usable root.
std::size_t branch_prefix_length(const Problem& problem, const RadialGrid& grid, int branch);

using Point2 = std::array<double, 2>;

/// Radial vector field sigma/zeta = (sigma_r/zeta)(x, y)/rho on r_min <= rho <= r_max.
struct RadialFlux {
    std::function<double(double)> sigma_r;
    std::function<double(double)> zeta;
    double r_min = 0.0;
    double r_max = 0.0;
    /// |zeta| below this is singular.
    double zeta_floor = 0.0;
};

/// Line integral of sigma/zeta along the two-leg path (x0,y0) -> (x0,y1) -> (x1,y1).
/// Throws DomainError if a leg leaves the closed annulus, SingularError on vanishing zeta.
double path_integral(const RadialFlux& flux, Point2 start, Point2 end, double rel_tol = 1e-12);

/// u(end) - u(start) along the two-leg path through the branch's field.
double path_integral_u(const AnnulusProblem& problem, const SolutionBranch& branch, Point2 start,
                       Point2 end);

using VectorField2D = std::function<Point2(double x, double y)>;

struct CurlLattice {
    std::size_t radial = 64;
    std::size_t angular = 32;
    double step = 1e-4;
};

/// Finite-difference curl |d_x V_y - d_y V_x| evaluated with a polar
/// stencil at lattice point (rho, theta). rho must lie in [r_lo, r_hi];
/// radial differences turn one-sided at the ends.
double fd_curl(const VectorField2D& field, double rho, double theta, double step, double r_lo,
               double r_hi);

/// Max FD curl over `lattice.radial` radii evenly spread over [r_lo, r_hi] and
/// `lattice.angular` angles.
double curl_residual(const VectorField2D& field, double r_lo, double r_hi, const CurlLattice& lattice);

/// Compatibility of sigma/zeta for an annulus branch.
double compatibility_residual(const AnnulusProblem& problem, const SolutionBranch& branch,
                              const CurlLattice& lattice = {});

/// Per grid node: true when the FD curl at every lattice angle is <= tol.
std::vector<bool> region_S_mask(const VectorField2D& field, const RadialGrid& grid, double tol,
                                const CurlLattice& lattice = {});
std::vector<bool> region_S_mask(const AnnulusProblem& problem, const SolutionBranch& branch, double tol,
                                const CurlLattice& lattice = {});

VectorField2D sigma_over_zeta(const SolutionBranch& branch);

struct PdeResidual {
    /// Max interior equilibrium residual per segment.
    std::vector<double> per_segment;
    /// Max traction residual over the traction ends covered by the grid.
    double traction = 0.0;

    [[nodiscard]] double max() const;
};

/// Equilibrium residual (1/r) d(r q)/dr + f (annulus) or dq/dx + f (bar), with
/// flux q = nu(u'^2/2 - lambda) u', by fourth-order differences on a uniform grid.
/// Two nodes on each side of an interior segment boundary are skipped.
PdeResidual pde_residual_detail(const Problem& problem, const RadialField& u_prime,
                                const BranchMap& map);
double pde_residual(const Problem& problem, const SolutionBranch& branch);

/// max over nodes of |u'^2/2 - (zeta/nu + lambda)|.
double constitutive_residual(const RadialField& zeta, const RadialField& u_prime,
                             const Material& material);
double constitutive_residual(const SolutionBranch& branch, const Material& material);

}  // namespace canodual
