#include "canodual/dae.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "canodual/error.hpp"

namespace canodual {

Material::Material(double nu, double lambda) : nu_(nu), lambda_(lambda) {
    if (!(nu > 0.0) || !std::isfinite(nu)) throw InvalidArgument("material needs nu > 0");
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidArgument("material needs lambda > 0");
}

StressSample::StressSample(double sigma_sq) : sigma_sq_(sigma_sq) {
    if (!(sigma_sq >= 0.0) || !std::isfinite(sigma_sq)) {
        throw InvalidArgument("stress sample needs a finite sigma_sq >= 0");
    }
}

std::string_view to_string(Regime regime) {
    switch (regime) {
        case Regime::ZeroStress: return "ZeroStress";
        case Regime::ThreeReal: return "ThreeReal";
        case Regime::Boundary: return "Boundary";
        case Regime::OneReal: return "OneReal";
    }
    return "?";
}

std::optional<double> RootSet::branch(int label) const {
    switch (label) {
        case 1: return zeta1;
        case 2: return zeta2;
        case 3: return zeta3;
        default: throw InvalidArgument("branch label must be 1, 2 or 3");
    }
}

int RootSet::count() const {
    return static_cast<int>(zeta1.has_value()) + static_cast<int>(zeta2.has_value()) +
           static_cast<int>(zeta3.has_value());
}

double sigma_threshold(const Material& m) {
    const double l = m.lambda();
    return 8.0 * l * l * l * m.nu() * m.nu() / 27.0;
}

Regime classify_regime(const StressSample& sample, const Material& material, double tol) {
    const double threshold = sigma_threshold(material);
    const double s = sample.sigma_sq();
    if (s <= tol * threshold) return Regime::ZeroStress;
    if (std::abs(s - threshold) <= tol * threshold) return Regime::Boundary;
    return s > threshold ? Regime::OneReal : Regime::ThreeReal;
}

std::array<std::complex<double>, 3> cardano_roots(const StressSample& sample,
                                                  const Material& material) {
    using cplx = std::complex<double>;
    const double nu = material.nu();
    const double lam = material.lambda();
    const double s = sample.sigma_sq();
    const double nl = nu * lam;
    const double cbrt2 = std::cbrt(2.0);
    const double cbrt4 = std::cbrt(4.0);
    const double sqrt3 = std::numbers::sqrt3;

    const cplx disc(-8.0 * nu * nu * nu * nu * lam * lam * lam * s + 27.0 * nu * nu * s * s, 0.0);
    const cplx inner = cplx(-4.0 * nl * nl * nl + 27.0 * nu * s, 0.0) + 3.0 * sqrt3 * std::sqrt(disc);
    const cplx omega = std::pow(inner, 1.0 / 3.0);

    const cplx a = nl * nl / omega;
    const cplx minus(1.0, -sqrt3);
    const cplx plus(1.0, sqrt3);

    const cplx z1 = (-nl + cbrt4 * a + omega / cbrt4) / 3.0;
    const cplx z2 = -nl / 3.0 - minus * a / (3.0 * cbrt2) - plus * omega / (6.0 * cbrt4);
    const cplx z3 = -nl / 3.0 - plus * a / (3.0 * cbrt2) - minus * omega / (6.0 * cbrt4);
    return {z1, z2, z3};
}

namespace {

void clamp_to_bands(RootSet& roots, double nl) {
    roots.zeta1 = std::max(*roots.zeta1, 0.0);
    roots.zeta2 = std::clamp(*roots.zeta2, -2.0 * nl / 3.0, 0.0);
    roots.zeta3 = std::clamp(*roots.zeta3, -nl, -2.0 * nl / 3.0);
}

}  // namespace

RootSet trig_roots(const StressSample& sample, const Material& material) {
    const double threshold = sigma_threshold(material);
    const double s = sample.sigma_sq();
    if (s > threshold * (1.0 + kDefaultRegimeTol)) {
        throw RegimeError("trig_roots: sigma_sq above the three-root threshold");
    }
    const double nu = material.nu();
    const double lam = material.lambda();
    const double nl = nu * lam;
    const double arg = std::clamp(27.0 * s / (4.0 * nu * nu * lam * lam * lam) - 1.0, -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    const double c = std::cos(theta);
    const double sn = std::numbers::sqrt3 * std::sin(theta);

    RootSet roots;
    roots.regime = classify_regime(sample, material);
    if (roots.regime == Regime::OneReal) roots.regime = Regime::Boundary;
    roots.theta = theta;
    roots.zeta1 = nl / 3.0 * (2.0 * c - 1.0);
    roots.zeta2 = -nl / 3.0 * (1.0 + c - sn);
    roots.zeta3 = -nl / 3.0 * (1.0 + c + sn);
    clamp_to_bands(roots, nl);
    return roots;
}

RootSet solve_dae(const StressSample& sample, const Material& material, double tol) {
    const Regime regime = classify_regime(sample, material, tol);
    const double nl = material.nu() * material.lambda();

    if (regime == Regime::Boundary) {
        RootSet roots;
        roots.regime = Regime::Boundary;
        roots.theta = 0.0;
        roots.zeta1 = nl / 3.0;
        roots.zeta2 = -2.0 * nl / 3.0;
        roots.zeta3 = -2.0 * nl / 3.0;
        return roots;
    }
    if (regime != Regime::OneReal) {
        RootSet roots = trig_roots(sample, material);
        roots.regime = regime;
        return roots;
    }

    const auto candidates = cardano_roots(sample, material);
    const std::complex<double>* best = nullptr;
    for (const auto& z : candidates) {
        const bool real = std::abs(z.imag()) <= 1e-8 * (1.0 + std::abs(z.real()));
        if (real && (best == nullptr || z.real() > best->real())) best = &z;
    }
    if (best == nullptr) {
        best = &*std::min_element(candidates.begin(), candidates.end(),
                                  [](const auto& x, const auto& y) {
                                      return std::abs(x.imag()) < std::abs(y.imag());
                                  });
    }
    RootSet roots;
    roots.regime = Regime::OneReal;
    roots.zeta1 = best->real();
    return roots;
}

double dae_residual(double zeta, const StressSample& sample, const Material& material) {
    return sample.sigma_sq() - 2.0 * zeta * zeta * (material.lambda() + zeta / material.nu());
}

}  // namespace canodual
