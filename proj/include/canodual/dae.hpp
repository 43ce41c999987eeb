#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string_view>

namespace canodual {

/// Material constants of the double-well W(y) = (nu/2)(|y|^2/2 - lambda)^2.
class Material {
public:
    /// Throws InvalidArgument unless nu > 0 and lambda > 0.
    Material(double nu, double lambda);

    [[nodiscard]] double nu() const { return nu_; }
    [[nodiscard]] double lambda() const { return lambda_; }

    bool operator==(const Material&) const = default;

private:
    double nu_;
    double lambda_;
};

/// Squared stress magnitude |sigma|^2 at one material point.
class StressSample {
public:
    /// Throws InvalidArgument for negative or non-finite input.
    explicit StressSample(double sigma_sq);

    [[nodiscard]] double sigma_sq() const { return sigma_sq_; }

private:
    double sigma_sq_;
};

enum class Regime { ZeroStress, ThreeReal, Boundary, OneReal };

std::string_view to_string(Regime regime);

/// Real roots of the dual algebraic equation at one point, ordered
/// zeta1 >= 0 >= zeta2 >= -2 nu lambda / 3 >= zeta3 >= -nu lambda.
struct RootSet {
    Regime regime = Regime::OneReal;
    std::optional<double> zeta1;
    std::optional<double> zeta2;
    std::optional<double> zeta3;
    /// Trigonometric angle in [0, pi/3]; absent in the one-root regime.
    std::optional<double> theta;

    /// Root of branch 1, 2 or 3 (absent when the branch does not exist here).
    [[nodiscard]] std::optional<double> branch(int label) const;
    [[nodiscard]] int count() const;
};

inline constexpr double kDefaultRegimeTol = 1e-12;

/// |sigma|^2 at which the two negative roots merge: 8 lambda^3 nu^2 / 27.
double sigma_threshold(const Material& material);

Regime classify_regime(const StressSample& sample, const Material& material,
                       double tol = kDefaultRegimeTol);

/// The three roots of 2 zeta^2 (lambda + zeta/nu) = |sigma|^2 in Cardano's
/// complex form, evaluated with complex arithmetic throughout.
std::array<std::complex<double>, 3> cardano_roots(const StressSample& sample,
                                                  const Material& material);

/// Trigonometric form of the three real roots. Valid for
/// 0 <= |sigma|^2 <= threshold (boundary inclusive up to a relative 1e-12);
/// throws RegimeError above it.
RootSet trig_roots(const StressSample& sample, const Material& material);

/// All real roots, ordered and labelled by branch.
///
/// One-root regime uses Cardano and keeps the root with a negligible imaginary
/// part; the three-root, boundary and zero-stress regimes use the
/// trigonometric form. Inside the relative band |s - threshold| <= tol *
/// threshold the exact double root is returned.
RootSet solve_dae(const StressSample& sample, const Material& material,
                  double tol = kDefaultRegimeTol);

/// Signed residual |sigma|^2 - 2 zeta^2 (lambda + zeta/nu).
double dae_residual(double zeta, const StressSample& sample, const Material& material);

}  // namespace canodual
