#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace canodual {

inline constexpr int kDefaultQuadratureOrder = 8;
inline constexpr double kDefaultRelTol = 1e-10;
inline constexpr std::size_t kDefaultGridNodes = 512;

/// Strictly increasing nodes spanning [r_min, r_max].
///
/// Used both for the annulus radius and for the bar coordinate x.
class RadialGrid {
public:
    /// Validates the node sequence; throws InvalidArgument on fewer than two
    /// nodes or non-increasing values.
    explicit RadialGrid(std::vector<double> nodes);

    [[nodiscard]] double r_min() const { return nodes_.front(); }
    [[nodiscard]] double r_max() const { return nodes_.back(); }
    [[nodiscard]] std::size_t size() const { return nodes_.size(); }
    [[nodiscard]] std::span<const double> nodes() const { return nodes_; }
    [[nodiscard]] double operator[](std::size_t i) const { return nodes_[i]; }

    /// Index i of the cell [nodes[i], nodes[i+1]] containing r (clamped to the ends).
    [[nodiscard]] std::size_t cell_of(double r) const;

    /// True when all spacings agree to 1e-9 relative.
    [[nodiscard]] bool is_uniform() const;

    bool operator==(const RadialGrid&) const = default;

private:
    std::vector<double> nodes_;
};

/// Uniform grid with both endpoints included; throws InvalidArgument when
/// n < 2 or r_min >= r_max.
RadialGrid make_radial_grid(double r_min, double r_max, std::size_t n = kDefaultGridNodes);

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Rule of the given order, computed by Newton iteration on P_n and cached.
const GaussRule& gauss_legendre(int order = kDefaultQuadratureOrder);

/// Fixed composite rule: `panels` equal panels, `order` points each.
double integrate_composite(const std::function<double(double)>& f, double a, double b,
                           std::size_t panels, int order = kDefaultQuadratureOrder);

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t panels = 0;
};

/// Composite Gauss-Legendre with panel doubling.
///
/// Starts from `initial_panels` and doubles until two successive values differ
/// by at most rel_tol times the integral of |f| (which reduces to the plain
/// relative criterion for one-signed integrands and stays meaningful for
/// integrals that cancel to zero). Throws ConvergenceError after 20 doublings.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double rel_tol = kDefaultRelTol,
                                    std::size_t initial_panels = 1,
                                    int order = kDefaultQuadratureOrder);

/// Sum of integrate_adaptive over consecutive pieces [breaks[k], breaks[k+1]].
/// Integrands may jump at the breakpoints.
QuadratureResult integrate_pieces(const std::function<double(double)>& f,
                                  std::span<const double> breaks,
                                  double rel_tol = kDefaultRelTol,
                                  int order = kDefaultQuadratureOrder);

/// Central difference (f(x+h) - f(x-h)) / 2h.
double finite_diff(const std::function<double(double)>& f, double x, double h);

/// Fourth-order first derivative of uniformly spaced samples at index i.
///
/// Uses the centred five-point stencil when i-2..i+2 lie in [lo, hi], and the
/// matching one-sided five-point stencils otherwise. Requires hi - lo >= 4.
double derivative5(std::span<const double> values, double h, std::size_t i,
                   std::size_t lo, std::size_t hi);

}  // namespace canodual
