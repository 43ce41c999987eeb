#include "canodual/energy.hpp"

#include <algorithm>
#include <cmath>

#include "canodual/error.hpp"

namespace canodual {

CanonicalStrain::CanonicalStrain(double xi) : xi_(xi) {
    if (!(xi >= 0.0) || !std::isfinite(xi)) throw InvalidArgument("canonical strain needs xi >= 0");
}

RadialField::RadialField(std::shared_ptr<const RadialGrid> grid_, std::vector<double> values_)
    : grid(std::move(grid_)), values(std::move(values_)) {
    if (!grid) throw InvalidArgument("radial field needs a grid");
    if (values.size() != grid->size()) throw InvalidArgument("radial field size does not match its grid");
    for (double v : values) {
        if (!std::isfinite(v)) throw InvalidArgument("radial field value is not finite");
    }
}

double double_well_W(double grad_sq, const Material& m) {
    const double d = 0.5 * grad_sq - m.lambda();
    return 0.5 * m.nu() * d * d;
}

std::vector<double> stress_from_gradient(std::span<const double> grad, const Material& m) {
    double norm_sq = 0.0;
    for (double g : grad) norm_sq += g * g;
    const double factor = m.nu() * (0.5 * norm_sq - m.lambda());
    std::vector<double> out(grad.begin(), grad.end());
    for (double& g : out) g *= factor;
    return out;
}

double complementary_U(double zeta, const Material& m) {
    return zeta * zeta / (2.0 * m.nu()) + m.lambda() * zeta;
}

LegendrePair legendre_pair(const CanonicalStrain& strain, const Material& m) {
    const double d = strain.xi() - m.lambda();
    LegendrePair pair;
    pair.U = 0.5 * m.nu() * d * d;
    pair.zeta = m.nu() * d;
    pair.Ustar = complementary_U(pair.zeta, m);
    return pair;
}

namespace {

void check_span(const Problem& problem, std::span<const double> breaks) {
    if (breaks.size() < 2) throw DomainError("energy: profile needs at least two breakpoints");
    const double lo = domain_min(problem);
    const double hi = domain_max(problem);
    const double tol = 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
    if (std::abs(breaks.front() - lo) > tol || std::abs(breaks.back() - hi) > tol) {
        throw DomainError("energy: field does not span the problem domain");
    }
}

void check_same_grid(const RadialField& a, const RadialField& b) {
    if (a.grid != b.grid && !(*a.grid == *b.grid)) throw DomainError("energy: fields live on different grids");
}

double checked_zeta(double zeta, const Material& m) {
    if (!(std::abs(zeta) >= 1e-12 * m.nu() * m.lambda())) {
        throw SingularError("dual energy: zeta vanishes (|zeta| < 1e-12 nu lambda)");
    }
    return zeta;
}

std::vector<double> nodes_of(const RadialField& f) {
    return {f.grid->nodes().begin(), f.grid->nodes().end()};
}

}  // namespace

QuadratureResult primal_energy(const Problem& problem, const FieldProfile& u, double rel_tol) {
    check_span(problem, u.breaks);
    const Material& m = material_of(problem);
    auto integrand = [&](double r) {
        const double slope = u.slope(r);
        return (double_well_W(slope * slope, m) - source_at(problem, r) * u.value(r)) *
               measure_weight(problem, r);
    };
    QuadratureResult result = integrate_pieces(integrand, u.breaks, rel_tol);
    result.value -= boundary_work(problem, u.value(u.breaks.front()), u.value(u.breaks.back()));
    return result;
}

double primal_energy(const Problem& problem, const RadialField& u, const RadialField& u_prime) {
    check_same_grid(u, u_prime);
    return primal_energy(problem, hermite_profile(u, u_prime)).value;
}

QuadratureResult primal_energy_increment(const Problem& problem, const FieldProfile& u,
                                         const FieldProfile& phi, double eps, double rel_tol) {
    check_span(problem, u.breaks);
    std::vector<double> breaks = u.breaks;
    breaks.insert(breaks.end(), phi.breaks.begin(), phi.breaks.end());
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    const Material& m = material_of(problem);
    auto integrand = [&](double r) {
        const double s0 = u.slope(r);
        const double dphi = eps * phi.slope(r);
        // W(s0 + dphi) - W(s0) = (nu/2) da (2 a0 + da), a = s^2/2 - lambda
        const double a0 = 0.5 * s0 * s0 - m.lambda();
        const double da = dphi * (s0 + 0.5 * dphi);
        const double dW = 0.5 * m.nu() * da * (2.0 * a0 + da);
        return (dW - eps * source_at(problem, r) * phi.value(r)) * measure_weight(problem, r);
    };
    QuadratureResult result = integrate_pieces(integrand, breaks, rel_tol);
    result.value -= eps * boundary_work(problem, phi.value(breaks.front()), phi.value(breaks.back()));
    return result;
}

QuadratureResult dual_energy(const Problem& problem, const ScalarProfile& zeta, double rel_tol) {
    check_span(problem, zeta.breaks);
    const Material& m = material_of(problem);
    auto integrand = [&](double r) {
        const double z = checked_zeta(zeta.value(r), m);
        const double s = stress_at(problem, r).sigma_sq;
        return -0.5 * (s / z + 2.0 * m.lambda() * z + z * z / m.nu()) * measure_weight(problem, r);
    };
    return integrate_pieces(integrand, zeta.breaks, rel_tol);
}

double dual_energy(const Problem& problem, const RadialField& zeta) {
    const Material& m = material_of(problem);
    for (double z : zeta.values) checked_zeta(z, m);
    return dual_energy(problem, linear_profile(zeta)).value;
}

QuadratureResult total_complementary_Xi(const Problem& problem, const FieldProfile& u,
                                        const ScalarProfile& zeta, double rel_tol) {
    check_span(problem, u.breaks);
    std::vector<double> breaks = u.breaks;
    breaks.insert(breaks.end(), zeta.breaks.begin(), zeta.breaks.end());
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    const Material& m = material_of(problem);
    auto integrand = [&](double r) {
        const double slope = u.slope(r);
        const double z = zeta.value(r);
        return (0.5 * slope * slope * z - complementary_U(z, m) - source_at(problem, r) * u.value(r)) *
               measure_weight(problem, r);
    };
    QuadratureResult result = integrate_pieces(integrand, breaks, rel_tol);
    result.value -= boundary_work(problem, u.value(breaks.front()), u.value(breaks.back()));
    return result;
}

double total_complementary_Xi(const Problem& problem, const RadialField& u,
                              const RadialField& u_prime, const RadialField& zeta) {
    check_same_grid(u, u_prime);
    check_same_grid(u, zeta);
    return total_complementary_Xi(problem, hermite_profile(u, u_prime), linear_profile(zeta)).value;
}

double second_variation_primal_coeff(double zeta, const Material& m) {
    return 3.0 * zeta / m.nu() + 2.0 * m.lambda();
}

double second_variation_dual_integrand(double zeta, const StressSample& sample, const Material& m) {
    if (zeta == 0.0) throw SingularError("dual second variation is singular at zeta = 0");
    return -(sample.sigma_sq() / (zeta * zeta * zeta) + 1.0 / m.nu());
}

FieldProfile hermite_profile(const RadialField& u, const RadialField& u_prime) {
    check_same_grid(u, u_prime);
    auto grid = u.grid;
    auto values = u.values;
    auto slopes = u_prime.values;
    auto cell = [grid](double r, double& t, double& h) {
        const std::size_t i = grid->cell_of(r);
        h = (*grid)[i + 1] - (*grid)[i];
        t = (r - (*grid)[i]) / h;
        return i;
    };
    FieldProfile profile;
    profile.value = [=](double r) {
        double t = 0.0;
        double h = 0.0;
        const std::size_t i = cell(r, t, h);
        const double t2 = t * t;
        const double t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * values[i] + (t3 - 2 * t2 + t) * h * slopes[i] +
               (-2 * t3 + 3 * t2) * values[i + 1] + (t3 - t2) * h * slopes[i + 1];
    };
    profile.slope = [=](double r) {
        double t = 0.0;
        double h = 0.0;
        const std::size_t i = cell(r, t, h);
        const double t2 = t * t;
        return ((6 * t2 - 6 * t) * values[i] + (6 * t2 - 6 * t) * -values[i + 1]) / h +
               (3 * t2 - 4 * t + 1) * slopes[i] + (3 * t2 - 2 * t) * slopes[i + 1];
    };
    profile.breaks = nodes_of(u);
    return profile;
}

ScalarProfile linear_profile(const RadialField& field) {
    auto grid = field.grid;
    auto values = field.values;
    ScalarProfile profile;
    profile.value = [=](double r) {
        const std::size_t i = grid->cell_of(r);
        const double t = (r - (*grid)[i]) / ((*grid)[i + 1] - (*grid)[i]);
        return (1.0 - t) * values[i] + t * values[i + 1];
    };
    profile.breaks = nodes_of(field);
    return profile;
}

}  // namespace canodual
