#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <random>

#include "canodual/dae.hpp"
#include "canodual/error.hpp"

using namespace canodual;

namespace {

const Material unit{1.0, 1.0};

RootSet roots_at(double s, const Material& m = unit) { return solve_dae(StressSample(s), m); }

}  // namespace

TEST_CASE("annulus roots at r = 2, 1, 0.5 to six digits") {
    const RootSet a = roots_at(16.0 / 9.0);
    CHECK(a.regime == Regime::OneReal);
    CHECK(a.count() == 1);
    CHECK(std::abs(*a.zeta1 - 0.719078) < 5e-6);

    const RootSet b = roots_at(1.0 / 9.0);
    CHECK(b.count() == 3);
    CHECK(std::abs(*b.zeta1 - 0.213928) < 5e-6);
    CHECK(std::abs(*b.zeta2 + 0.277249) < 5e-6);
    CHECK(std::abs(*b.zeta3 + 0.936679) < 5e-6);

    const RootSet c = roots_at(0.0625 / 9.0);
    CHECK(std::abs(*c.zeta1 - 0.0573064) < 5e-6);
    CHECK(std::abs(*c.zeta2 + 0.0608031) < 5e-6);
    CHECK(std::abs(*c.zeta3 + 0.996503) < 5e-6);
}

TEST_CASE("roots match 30-digit reference values") {
    struct Case {
        double s;
        std::array<double, 3> z;
    };
    const Case cases[] = {
        {1.0 / 9.0, {0.213927842484309, -0.277248532739658, -0.936679309744651}},
        {0.0625 / 9.0, {0.0573064255337282, -0.0608030578801244, -0.996503367653604}},
        {1.0 / 16.0, {0.163860595387458, -0.197311029760202, -0.966549565627256}},
    };
    for (const auto& c : cases) {
        const RootSet r = roots_at(c.s);
        CHECK(std::abs(*r.zeta1 - c.z[0]) < 1e-13);
        CHECK(std::abs(*r.zeta2 - c.z[1]) < 1e-13);
        CHECK(std::abs(*r.zeta3 - c.z[2]) < 1e-13);
    }
    CHECK(std::abs(*roots_at(16.0 / 9.0).zeta1 - 0.719077925672506) < 1e-13);
}

TEST_CASE("cardano form at |sigma|^2 = 16/9 has one real and a conjugate pair") {
    const auto z = cardano_roots(StressSample(16.0 / 9.0), unit);
    int real = 0;
    for (const auto& w : z) {
        if (std::abs(w.imag()) < 1e-9) {
            ++real;
            CHECK(w.real() == doctest::Approx(0.719077925672506).epsilon(1e-12));
        } else {
            CHECK(w.real() == doctest::Approx(-0.859538962836253).epsilon(1e-12));
            CHECK(std::abs(w.imag()) == doctest::Approx(0.705226034848656).epsilon(1e-12));
        }
    }
    CHECK(real == 1);
}

TEST_CASE("threshold and regimes") {
    CHECK(std::abs(sigma_threshold(unit) - 8.0 / 27.0) < 1e-15);
    CHECK(sigma_threshold(Material(2.0, 0.5)) == doctest::Approx(8.0 * 0.125 * 4.0 / 27.0));
    CHECK(classify_regime(StressSample(0.0), unit) == Regime::ZeroStress);
    CHECK(classify_regime(StressSample(0.1), unit) == Regime::ThreeReal);
    CHECK(classify_regime(StressSample(8.0 / 27.0), unit) == Regime::Boundary);
    CHECK(classify_regime(StressSample(0.3), unit) == Regime::OneReal);
}

TEST_CASE("zero stress gives the well bottoms") {
    const RootSet r = roots_at(0.0);
    CHECK(r.regime == Regime::ZeroStress);
    CHECK(std::abs(*r.zeta1) < 1e-15);
    CHECK(std::abs(*r.zeta2) < 1e-15);
    CHECK(*r.zeta3 == doctest::Approx(-1.0));
}

TEST_CASE("boundary returns the exact double root") {
    const Material m(1.5, 2.0);
    const RootSet r = solve_dae(StressSample(sigma_threshold(m)), m);
    CHECK(r.regime == Regime::Boundary);
    CHECK(*r.zeta1 == doctest::Approx(1.0));
    CHECK(*r.zeta2 == doctest::Approx(-2.0));
    CHECK(*r.zeta3 == doctest::Approx(-2.0));
    CHECK(*r.theta == 0.0);
}

TEST_CASE("invalid inputs") {
    CHECK_THROWS_AS(Material(0.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(Material(1.0, -1.0), InvalidArgument);
    CHECK_THROWS_AS(StressSample(-1e-3), InvalidArgument);
    CHECK_THROWS_AS(StressSample(std::nan("")), InvalidArgument);
    CHECK_THROWS_AS(trig_roots(StressSample(0.5), unit), RegimeError);
    CHECK_THROWS_AS((void)roots_at(0.1).branch(4), InvalidArgument);
    CHECK_FALSE(roots_at(1.0).branch(2).has_value());
}

TEST_CASE("cardano and trigonometric forms agree in the three-root regime") {
    std::mt19937_64 rng(7);
    for (const Material& m : {unit, Material(0.7, 1.9), Material(3.0, 0.4)}) {
        const double th = sigma_threshold(m);
        std::uniform_real_distribution<double> dist(1e-9 * th, th * (1 - 1e-9));
        for (int k = 0; k < 2000; ++k) {
            const StressSample s(dist(rng));
            const RootSet t = trig_roots(s, m);
            auto c = cardano_roots(s, m);
            std::array<double, 3> re{c[0].real(), c[1].real(), c[2].real()};
            std::sort(re.begin(), re.end(), std::greater<>());
            const double scale = m.nu() * m.lambda();
            CHECK(std::abs(re[0] - *t.zeta1) <= 1e-10 * scale);
            CHECK(std::abs(re[1] - *t.zeta2) <= 1e-10 * scale);
            CHECK(std::abs(re[2] - *t.zeta3) <= 1e-10 * scale);
        }
    }
}

TEST_CASE("every returned root solves the cubic and respects the ordering") {
    std::mt19937_64 rng(11);
    for (const Material& m : {unit, Material(0.25, 3.0), Material(4.0, 0.5)}) {
        const double th = sigma_threshold(m);
        const double nl = m.nu() * m.lambda();
        std::uniform_real_distribution<double> dist(0.0, 5.0 * th);
        for (int k = 0; k < 3000; ++k) {
            const StressSample s(dist(rng));
            const RootSet r = solve_dae(s, m);
            const double tol = 1e-12 * std::max(1.0, s.sigma_sq()) * std::max(1.0, nl * nl * m.lambda());
            for (int b = 1; b <= 3; ++b) {
                if (auto z = r.branch(b)) CHECK(std::abs(dae_residual(*z, s, m)) <= tol);
            }
            CHECK(*r.zeta1 >= 0.0);
            if (r.count() == 3) {
                CHECK(*r.zeta2 <= 0.0);
                CHECK(*r.zeta2 >= -2.0 * nl / 3.0);
                CHECK(*r.zeta3 <= -2.0 * nl / 3.0);
                CHECK(*r.zeta3 >= -nl);
            } else {
                CHECK(s.sigma_sq() > th);
            }
        }
    }
}

TEST_CASE("branch 1 increases with stress across the threshold") {
    double prev = -1.0;
    for (int k = 0; k <= 400; ++k) {
        const double s = 2.0 * k / 400.0;
        const double z = *roots_at(s).zeta1;
        CHECK(z > prev);
        prev = z;
    }
}

TEST_CASE("roots are continuous across the threshold") {
    const double th = sigma_threshold(unit);
    const double below = *roots_at(th * (1 - 1e-9)).zeta1;
    const double at = *roots_at(th).zeta1;
    const double above = *roots_at(th * (1 + 1e-9)).zeta1;
    CHECK(std::abs(below - at) < 1e-8);
    CHECK(std::abs(above - at) < 1e-8);
}
