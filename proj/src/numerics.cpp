#include "canodual/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "canodual/error.hpp"

namespace canodual {

RadialGrid::RadialGrid(std::vector<double> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.size() < 2) {
        throw InvalidArgument("radial grid needs at least two nodes");
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!std::isfinite(nodes_[i])) {
            throw InvalidArgument("radial grid node is not finite");
        }
        if (i > 0 && !(nodes_[i] > nodes_[i - 1])) {
            throw InvalidArgument("radial grid nodes must be strictly increasing");
        }
    }
}

std::size_t RadialGrid::cell_of(double r) const {
    if (r <= nodes_.front()) return 0;
    if (r >= nodes_.back()) return nodes_.size() - 2;
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), r);
    return static_cast<std::size_t>(it - nodes_.begin()) - 1;
}

bool RadialGrid::is_uniform() const {
    const double h = (r_max() - r_min()) / static_cast<double>(nodes_.size() - 1);
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
        if (std::abs((nodes_[i] - nodes_[i - 1]) - h) > 1e-9 * h) return false;
    }
    return true;
}

RadialGrid make_radial_grid(double r_min, double r_max, std::size_t n) {
    if (n < 2) throw InvalidArgument("grid needs n >= 2 nodes");
    if (!(r_min < r_max)) throw InvalidArgument("grid needs r_min < r_max");
    std::vector<double> nodes(n);
    const double h = (r_max - r_min) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) nodes[i] = r_min + h * static_cast<double>(i);
    nodes.back() = r_max;
    return RadialGrid(std::move(nodes));
}

namespace {

GaussRule compute_rule(int order) {
    GaussRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const int half = (order + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= order; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            if (order == 1) p0 = 1.0;
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // recompute the derivative at the converged node for the weight
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= order; ++k) {
            const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = pk;
        }
        dp = order * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[order - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[order - 1 - i] = w;
    }
    return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
    if (order < 2) throw InvalidArgument("Gauss-Legendre order must be >= 2");
    static std::mutex mutex;
    static std::map<int, GaussRule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, compute_rule(order)).first;
    return it->second;
}

namespace {

struct PanelSums {
    double value = 0.0;
    double magnitude = 0.0;
};

PanelSums composite_sums(const std::function<double(double)>& f, double a, double b,
                         std::size_t panels, const GaussRule& rule) {
    PanelSums sums;
    const double width = (b - a) / static_cast<double>(panels);
    const double half = 0.5 * width;
    for (std::size_t p = 0; p < panels; ++p) {
        const double left = a + width * static_cast<double>(p);
        const double mid = left + half;
        double panel = 0.0;
        double panel_abs = 0.0;
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
            const double fx = f(mid + half * rule.nodes[k]);
            panel += rule.weights[k] * fx;
            panel_abs += rule.weights[k] * std::abs(fx);
        }
        sums.value += half * panel;
        sums.magnitude += half * panel_abs;
    }
    return sums;
}

}  // namespace

double integrate_composite(const std::function<double(double)>& f, double a, double b,
                           std::size_t panels, int order) {
    if (panels == 0) throw InvalidArgument("composite rule needs at least one panel");
    return composite_sums(f, a, b, panels, gauss_legendre(order)).value;
}

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double rel_tol, std::size_t initial_panels, int order) {
    if (!(a < b)) throw InvalidArgument("integrate_adaptive needs a < b");
    if (!(rel_tol > 0.0)) throw InvalidArgument("integrate_adaptive needs rel_tol > 0");
    const GaussRule& rule = gauss_legendre(order);
    std::size_t panels = std::max<std::size_t>(initial_panels, 1);
    PanelSums previous = composite_sums(f, a, b, panels, rule);
    for (int doubling = 0; doubling < 20; ++doubling) {
        panels *= 2;
        const PanelSums current = composite_sums(f, a, b, panels, rule);
        const double diff = std::abs(current.value - previous.value);
        if (diff <= rel_tol * current.magnitude) {
            return {current.value, diff, panels};
        }
        previous = current;
    }
    throw ConvergenceError("integrate_adaptive did not converge after 20 panel doublings");
}

QuadratureResult integrate_pieces(const std::function<double(double)>& f,
                                  std::span<const double> breaks, double rel_tol, int order) {
    QuadratureResult total;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        if (!(breaks[k] < breaks[k + 1])) continue;
        const QuadratureResult piece = integrate_adaptive(f, breaks[k], breaks[k + 1], rel_tol, 1, order);
        total.value += piece.value;
        total.error_estimate += piece.error_estimate;
        total.panels += piece.panels;
    }
    return total;
}

double finite_diff(const std::function<double(double)>& f, double x, double h) {
    if (!(h > 0.0)) throw InvalidArgument("finite_diff needs h > 0");
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

double derivative5(std::span<const double> v, double h, std::size_t i, std::size_t lo,
                   std::size_t hi) {
    if (hi < lo + 4 || i < lo || i > hi) {
        throw InvalidArgument("derivative5 needs at least five samples around the index");
    }
    const double d = 12.0 * h;
    if (i >= lo + 2 && i + 2 <= hi) {
        return (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]) / d;
    }
    if (i == lo) {
        return (-25.0 * v[i] + 48.0 * v[i + 1] - 36.0 * v[i + 2] + 16.0 * v[i + 3] - 3.0 * v[i + 4]) / d;
    }
    if (i == lo + 1) {
        return (-3.0 * v[i - 1] - 10.0 * v[i] + 18.0 * v[i + 1] - 6.0 * v[i + 2] + v[i + 3]) / d;
    }
    if (i == hi) {
        return (25.0 * v[i] - 48.0 * v[i - 1] + 36.0 * v[i - 2] - 16.0 * v[i - 3] + 3.0 * v[i - 4]) / d;
    }
    return (3.0 * v[i + 1] + 10.0 * v[i] - 18.0 * v[i - 1] + 6.0 * v[i - 2] - v[i - 3]) / d;
}

}  // namespace canodual
