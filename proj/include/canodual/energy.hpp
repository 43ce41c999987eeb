#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "canodual/dae.hpp"
#include "canodual/numerics.hpp"
#include "canodual/problems.hpp"

namespace canodual {

/// xi = |grad u|^2 / 2, the canonical strain measure.
class CanonicalStrain {
public:
    explicit CanonicalStrain(double xi);
    [[nodiscard]] double xi() const { return xi_; }

private:
    double xi_;
};

/// Nodal values on a shared grid.
struct RadialField {
    std::shared_ptr<const RadialGrid> grid;
    std::vector<double> values;

    /// Throws InvalidArgument on a null grid, size mismatch or non-finite values.
    RadialField(std::shared_ptr<const RadialGrid> grid, std::vector<double> values);
};

/// A primal field given pointwise: value and radial slope, smooth between
/// consecutive breakpoints. breaks.front() and breaks.back() are the domain ends.
struct FieldProfile {
    std::function<double(double)> value;
    std::function<double(double)> slope;
    std::vector<double> breaks;
};

/// A dual field zeta(r), smooth between consecutive breakpoints.
struct ScalarProfile {
    std::function<double(double)> value;
    std::vector<double> breaks;
};

struct EnergyReport {
    double primal = 0.0;
    double dual = 0.0;
    double gap = 0.0;
    double quad_error_estimate = 0.0;
};

/// (nu/2)(grad_sq/2 - lambda)^2.
double double_well_W(double grad_sq, const Material& material);

/// nu (|y|^2/2 - lambda) y.
std::vector<double> stress_from_gradient(std::span<const double> grad, const Material& material);

struct LegendrePair {
    double U = 0.0;
    double zeta = 0.0;
    double Ustar = 0.0;
};

/// U(xi) = (nu/2)(xi - lambda)^2, zeta = U'(xi), U*(zeta) = zeta^2/(2 nu) + lambda zeta.
LegendrePair legendre_pair(const CanonicalStrain& xi, const Material& material);

/// Complementary energy zeta^2/(2 nu) + lambda zeta.
double complementary_U(double zeta, const Material& material);

// Total potential: integral of W(grad u) - f u over the domain minus the
// traction work. Annulus volume element is 2 pi r dr.
QuadratureResult primal_energy(const Problem& problem, const FieldProfile& u,
                               double rel_tol = kDefaultRelTol);
/// Nodal overload; u is interpolated by cubic Hermite from (u, u') at the nodes.
double primal_energy(const Problem& problem, const RadialField& u, const RadialField& u_prime);

/// P(u + eps phi) - P(u), assembled as one integral so the O(1) parts cancel
/// analytically instead of in floating point.
QuadratureResult primal_energy_increment(const Problem& problem, const FieldProfile& u,
                                         const FieldProfile& phi, double eps,
                                         double rel_tol = kDefaultRelTol);

// Pure complementary energy -1/2 integral (|sigma|^2/zeta + 2 lambda zeta + zeta^2/nu),
// with sigma the problem's statically admissible stress. Throws SingularError
// wherever |zeta| < 1e-12 nu lambda.
QuadratureResult dual_energy(const Problem& problem, const ScalarProfile& zeta,
                             double rel_tol = kDefaultRelTol);
/// Nodal overload; zeta is interpolated linearly.
double dual_energy(const Problem& problem, const RadialField& zeta);

/// Total complementary energy Xi(u, zeta).
QuadratureResult total_complementary_Xi(const Problem& problem, const FieldProfile& u,
                                        const ScalarProfile& zeta,
                                        double rel_tol = kDefaultRelTol);
double total_complementary_Xi(const Problem& problem, const RadialField& u,
                              const RadialField& u_prime, const RadialField& zeta);

/// Pointwise coefficient 3 zeta/nu + 2 lambda of the primal second variation
/// along radial perturbations: d2P = nu * integral coeff * (phi')^2.
double second_variation_primal_coeff(double zeta, const Material& material);

/// Integrand -(|sigma|^2/zeta^3 + 1/nu) of the dual second variation.
double second_variation_dual_integrand(double zeta, const StressSample& sample,
                                       const Material& material);

/// Profile of nodal data: cubic Hermite value, its derivative as slope.
FieldProfile hermite_profile(const RadialField& u, const RadialField& u_prime);
ScalarProfile linear_profile(const RadialField& values);

}  // namespace canodual
