#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "canodual/dae.hpp"

namespace canodual {

/// Open annulus R1 < r < R2 with source f = r and tractions on both circles.
///
/// Equilibrium is div(sigma) + f = 0 with traction sigma.n = t on the
/// boundary. The default tractions t_inner = R1^2/3, t_outer = -R2^2/3
/// balance the source exactly and admit sigma = (-r x/3, -r y/3).
struct AnnulusProblem {
    double r1 = 0.5;
    double r2 = 1.277;
    Material material{1.0, 1.0};
    double t_inner;
    double t_outer;

    AnnulusProblem(double r1, double r2, Material material);
    AnnulusProblem(double r1, double r2, Material material, double t_inner, double t_outer);

    /// True when both tractions match their balanced defaults.
    [[nodiscard]] bool has_default_loads() const;
};

enum class BarSourceKind { Zero, Constant };

struct BarSource {
    BarSourceKind kind = BarSourceKind::Zero;
    double value = 0.0;

    [[nodiscard]] double at(double /*x*/) const { return kind == BarSourceKind::Zero ? 0.0 : value; }
};

/// Bar on [0, L], clamped u(0) = 0 on the left, traction t_right at x = L.
struct Bar1DProblem {
    double length = 1.0;
    Material material{1.0, 1.0};
    BarSource source;
    double t_right = 0.0;

    Bar1DProblem(double length, Material material, BarSource source, double t_right);
};

using Problem = std::variant<AnnulusProblem, Bar1DProblem>;

/// Radial stress component and |sigma|^2 at one point.
struct StressState {
    double sigma_r = 0.0;
    double sigma_sq = 0.0;
};

/// Statically admissible stress of the annulus. Throws DomainError outside
/// [R1, R2] and InvalidArgument when the tractions are not the defaults.
StressState annulus_stress(const AnnulusProblem& problem, double r);

/// sigma(x) = t_right + integral_x^L f. Throws DomainError outside [0, L].
StressState bar1d_stress(const Bar1DProblem& problem, double x);

/// integral of f over the domain plus integral of t over the traction boundary.
/// Zero for a solvable pure-traction problem; bars return 0 by convention.
double check_load_balance(const Problem& problem);

// Uniform accessors over the two problem kinds.
const Material& material_of(const Problem& problem);
double domain_min(const Problem& problem);
double domain_max(const Problem& problem);
/// Spatial dimension: 2 for the annulus, 1 for the bar.
int dimension_of(const Problem& problem);
/// Radial volume weight: 2 pi r for the annulus, 1 for the bar.
double measure_weight(const Problem& problem, double r);
double source_at(const Problem& problem, double r);
StressState stress_at(const Problem& problem, double r);
/// Annulus only: no Dirichlet part of the boundary.
bool is_pure_traction(const Problem& problem);

/// Contribution of the traction boundary: integral of t u over Gamma_t, given
/// the field values at the two ends of the radial interval.
double boundary_work(const Problem& problem, double u_at_min, double u_at_max);

/// One traction end: coordinate, outward normal sign and prescribed traction.
struct TractionEnd {
    double r;
    double normal;
    double traction;
};

/// The traction ends of the problem (both circles, or x = L for the bar).
std::vector<TractionEnd> traction_ends(const Problem& problem);

/// max(1, max |f|, max |t|); scale for residual thresholds.
double load_scale(const Problem& problem);

/// Parses {"type":"annulus","r1":..,"r2":..,"nu":..,"lambda":..} or
/// {"type":"bar1d","length":..,"nu":..,"lambda":..,"source":"zero"|"constant",
/// "t_right":..}. Unknown fields throw InvalidArgument.
Problem problem_from_json(std::string_view text);
Problem problem_from_file(const std::string& path);
std::string problem_to_json(const Problem& problem);

}  // namespace canodual
