// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "canodual/dae.hpp"
#include "canodual/energy.hpp"
#include "canodual/error.hpp"
#include "canodual/io.hpp"
#include "canodual/reconstruct.hpp"
#include "canodual/verify.hpp"

using namespace canodual;

namespace {

using Clock = std::chrono::steady_clock;

const Material unit{1.0, 1.0};
const AnnulusProblem annulus{0.5, 1.277, unit};

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::shared_ptr<const RadialGrid> default_grid(const Problem& p) {
    return std::make_shared<const RadialGrid>(make_radial_grid(domain_min(p), domain_max(p), 512));
}

SolutionBranch pure(const Problem& p, int b) {
    return solve_branch(p, BranchMap::single(domain_min(p), domain_max(p), b), default_grid(p));
}

std::vector<double> three_root_samples() {
    std::mt19937_64 rng(20150801);
    const double th = sigma_threshold(unit);
    std::vector<double> s(10000);
    for (auto& v : s) {
        do {
            v = th * std::generate_canonical<double, 53>(rng);
        } while (v <= 0.0 || v >= th);
    }
    return s;
}

Outcome root_regression() {
    const auto t0 = Clock::now();
    const RootSet a = solve_dae(StressSample(16.0 / 9.0), unit);
    const RootSet b = solve_dae(StressSample(1.0 / 9.0), unit);
    const RootSet c = solve_dae(StressSample(0.0625 / 9.0), unit);
    const double elapsed = seconds_since(t0);
    double err = std::abs(*a.zeta1 - 0.719078);
    err = std::max({err, std::abs(*b.zeta1 - 0.213928), std::abs(*b.zeta2 + 0.277249), std::abs(*b.zeta3 + 0.936679)});
    err = std::max({err, std::abs(*c.zeta1 - 0.0573064), std::abs(*c.zeta2 + 0.0608031), std::abs(*c.zeta3 + 0.996503)});
    const bool counts = a.count() == 1 && b.count() == 3 && c.count() == 3;
    return {counts && err <= 5e-6 && elapsed < 1e-3,
            "max error " + fmt("%.2e", err) + ", " + fmt("%.1f", elapsed * 1e6) + " us"};
}

Outcome regime_threshold() {
    const double th_err = std::abs(sigma_threshold(unit) - 8.0 / 27.0);
    // first radius of a wide annulus where the three-root regime ends
    const AnnulusProblem wide(0.5, 2.0, unit);
    auto three = [&](double r) {
        return classify_regime(StressSample(annulus_stress(wide, r).sigma_sq), unit) != Regime::OneReal;
    };
    double lo = 0.5, hi = 2.0;
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
        const double mid = 0.5 * (lo + hi);
        (three(mid) ? lo : hi) = mid;
    }
    const double gap = std::abs(lo - 1.277);
    return {th_err <= 1e-15 && gap <= 1e-3,
            "threshold error " + fmt("%.1e", th_err) + ", boundary radius " + fmt("%.12f", lo) + " vs 1.277"};
}

Outcome cardano_vs_trig() {
    const auto samples = three_root_samples();
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (double s : samples) {
        const StressSample sample(s);
        const RootSet t = trig_roots(sample, unit);
        const auto c = cardano_roots(sample, unit);
        std::array<double, 3> re{c[0].real(), c[1].real(), c[2].real()};
        std::sort(re.begin(), re.end(), std::greater<>());
        worst = std::max({worst, std::abs(re[0] - *t.zeta1), std::abs(re[1] - *t.zeta2), std::abs(re[2] - *t.zeta3)});
    }
    const double elapsed = seconds_since(t0);
    return {worst <= 1e-10 && elapsed < 1.0,
            "max difference " + fmt("%.2e", worst) + " over 10000 samples, " + fmt("%.3f", elapsed) + " s"};
}

Outcome dae_residuals() {
    double worst = 0.0;
    for (double s : three_root_samples()) {
        const StressSample sample(s);
        const RootSet r = solve_dae(sample, unit);
        for (int b = 1; b <= 3; ++b) {
            if (auto z = r.branch(b)) worst = std::max(worst, std::abs(dae_residual(*z, sample, unit)) / std::max(1.0, s));
        }
    }
    return {worst <= 1e-12, "max normalised residual " + fmt("%.2e", worst)};
}

Outcome ordering() {
    const SweepTable t = build_sweep(annulus, 512);
    std::size_t violations = 0;
    std::size_t present = 0;
    for (const auto& row : t.rows) {
        const auto& z = row.zeta;
        if (!z[0] || *z[0] < 0.0) ++violations;
        if (z[1]) {
            ++present;
            if (!(*z[1] <= 0.0 && *z[1] >= -2.0 / 3.0)) ++violations;
        }
        if (z[2]) {
            ++present;
            if (!(*z[2] <= -2.0 / 3.0 && *z[2] >= -1.0 && (!z[1] || *z[2] <= *z[1]))) ++violations;
        }
    }
    return {violations == 0 && t.rows.size() == 512,
            std::to_string(t.rows.size()) + " nodes, " + std::to_string(present + t.rows.size()) + " roots, " +
                std::to_string(violations) + " violations"};
}

Outcome bar_closed_form() {
    const Problem bar = Bar1DProblem(1.0, unit, BarSource{}, 2.0);
    const EnergyReport e = duality_gap(bar, pure(bar, 1));
    const bool ok = std::abs(e.gap) <= 1e-12 && std::abs(e.primal + 3.5) <= 1e-12 && std::abs(e.dual + 3.5) <= 1e-12;
    return {ok, "P = " + fmt("%.15f", e.primal) + ", Pd = " + fmt("%.15f", e.dual) + ", gap " + fmt("%.1e", e.gap)};
}

Outcome annulus_gap() {
    const auto t0 = Clock::now();
    bool ok = true;
    std::string detail;
    for (int b = 1; b <= 3; ++b) {
        const EnergyReport e = duality_gap(annulus, pure(annulus, b), 1e-10);
        const double rel = std::abs(e.gap) / std::abs(e.dual);
        ok = ok && rel <= 1e-6;
        detail += "b" + std::to_string(b) + " Pd=" + fmt("%.10f", e.dual) + " rel gap " + fmt("%.1e", rel) + "; ";
    }
    const double elapsed = seconds_since(t0);
    return {ok && elapsed < 5.0, detail + fmt("%.2f", elapsed) + " s"};
}

Outcome constitutive() {
    double worst = 0.0;
    std::size_t count = 0;
    for (int b = 1; b <= 3; ++b) {
        worst = std::max(worst, constitutive_residual(pure(annulus, b), unit));
        ++count;
    }
    const SolutionBranch mixed = solve_branch(annulus, BranchMap({{0.5, 0.9, 1}, {0.9, 1.277, 2}}), default_grid(annulus));
    worst = std::max(worst, constitutive_residual(mixed, unit));
    ++count;
    for (double t : {2.0, 0.25}) {
        const Problem bar = Bar1DProblem(1.0, unit, BarSource{}, t);
        for (int b = 1; b <= 3; ++b) {
            if (branch_prefix_length(bar, *default_grid(bar), b) < 512) continue;
            worst = std::max(worst, constitutive_residual(pure(bar, b), unit));
            ++count;
        }
    }
    return {worst <= 1e-12, std::to_string(count) + " branches, max residual " + fmt("%.2e", worst)};
}

Outcome triality_signs() {
    std::size_t conflicts = 0;
    std::size_t nodes = 0;
    for (int b = 1; b <= 3; ++b) {
        const SolutionBranch s = pure(annulus, b);
        const RadialGrid& g = *s.grid();
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double z = s.zeta().values[i];
            const StressSample sample(annulus_stress(annulus, g[i]).sigma_sq);
            const double coeff = second_variation_primal_coeff(z, unit);
            const double dual = second_variation_dual_integrand(z, sample, unit);
            ++nodes;
            if (b == 3 ? coeff >= 0.0 : coeff <= 0.0) ++conflicts;
            if (b != 2 && dual >= 0.0) ++conflicts;
            if (b == 2 && z > -std::cbrt(sample.sigma_sq() * unit.nu()) && dual <= 0.0) ++conflicts;
        }
        conflicts += triality_sign_census(s).conflicts;
    }
    std::vector<TrialityLabel> labels;
    try {
        for (int b = 1; b <= 3; ++b) labels.push_back(classify_branch(pure(annulus, b), 2).at(0));
    } catch (const ClassificationConflict&) {
        ++conflicts;
    }
    const bool labels_ok = labels.size() == 3 &&
                           (labels[0] == TrialityLabel::GlobalMinCandidate || labels[0] == TrialityLabel::LocalMin) &&
                           labels[1] == TrialityLabel::Indefinite1DMin && labels[2] == TrialityLabel::LocalMax;
    std::string names;
    for (auto l : labels) names += std::string(to_string(l)) + " ";
    return {conflicts == 0 && labels_ok,
            std::to_string(nodes) + " nodes, " + std::to_string(conflicts) + " conflicts, labels " + names};
}

Outcome perturbations() {
    const auto t0 = Clock::now();
    const auto r1 = perturbation_probe(annulus, pure(annulus, 1), 100, 1e-3, 20150801);
    const auto r3 = perturbation_probe(annulus, pure(annulus, 3), 100, 1e-3, 20150801);
    const Problem bar = Bar1DProblem(1.0, unit, BarSource{}, 0.25);
    const auto r2 = perturbation_probe(bar, pure(bar, 2), 100, 1e-3, 20150801);
    const double elapsed = seconds_since(t0);
    const bool ok = r1.min_delta >= -1e-10 && r3.max_delta <= 1e-10 && r2.min_delta >= -1e-10 && elapsed < 10.0;
    return {ok, "b1 min " + fmt("%.3e", r1.min_delta) + ", b3 max " + fmt("%.3e", r3.max_delta) + ", bar b2 min " +
                    fmt("%.3e", r2.min_delta) + ", " + fmt("%.2f", elapsed) + " s"};
}

Outcome shift_invariance() {
    double worst_ratio = 0.0;
    for (int b = 1; b <= 3; ++b) {
        const SolutionBranch s = pure(annulus, b);
        const FieldProfile u = s.profile();
        const double base = primal_energy(annulus, u).value;
        for (double c : {1.0, -1.0, 10.0, -10.0}) {
            FieldProfile shifted = u;
            shifted.value = [&u, c](double r) { return u.value(r) + c; };
            worst_ratio = std::max(worst_ratio, std::abs(primal_energy(annulus, shifted).value - base) / std::abs(base));
        }
    }
    return {worst_ratio <= 1e-10, "max |P(u+c) - P(u)|/|P| " + fmt("%.2e", worst_ratio)};
}

Outcome path_independence() {
    std::mt19937_64 rng(20150801);
    std::uniform_real_distribution<double> radius(0.5, 1.277);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    double worst_path = 0.0;
    double worst_curl = 0.0;
    for (int b = 1; b <= 3; ++b) {
        const SolutionBranch s = pure(annulus, b);
        int pairs = 0;
        std::mt19937_64 local = rng;
        while (pairs < 20) {
            const double ra = radius(local), ta = angle(local), rb = radius(local), tb = angle(local);
            const Point2 a{ra * std::cos(ta), ra * std::sin(ta)};
            const Point2 e{rb * std::cos(tb), rb * std::sin(tb)};
            double along = 0.0;
            try {
                along = path_integral_u(annulus, s, a, e);
            } catch (const DomainError&) {
                continue;  // the L-shaped path would cross the hole or the outside
            }
            worst_path = std::max(worst_path, std::abs(along - (s.u_at(rb) - s.u_at(ra))));
            ++pairs;
        }
        worst_curl = std::max(worst_curl, compatibility_residual(annulus, s));
    }
    return {worst_path <= 1e-8 && worst_curl <= 1e-8,
            "60 pairs, max path mismatch " + fmt("%.2e", worst_path) + ", max curl " + fmt("%.2e", worst_curl)};
}

Outcome nonsmooth() {
    const BranchMap map({{0.5, 0.9, 1}, {0.9, 1.277, 2}});
    const SolutionBranch s = solve_branch(annulus, map, default_grid(annulus));
    const double jump_u = std::abs(s.u_at(std::nextafter(0.9, 0.0)) - s.u_at(0.9));
    const double jump_du = std::abs(s.slope_right_of(0.9) - s.slope_left_of(0.9));
    const PdeResidual res = pde_residual_detail(annulus, s.u_prime(), map);
    const double seg = *std::max_element(res.per_segment.begin(), res.per_segment.end());
    return {jump_u <= 1e-10 && jump_du > 1e-2 && seg <= 1e-6 && res.per_segment.size() == 2,
            "u jump " + fmt("%.1e", jump_u) + ", u' jump " + fmt("%.4f", jump_du) + ", segment residual " +
                fmt("%.2e", seg)};
}

int run(const std::string& cmd) {
    const int status = std::system((cmd + " > /dev/null 2>&1").c_str());
    return status == -1 ? -1 : WEXITSTATUS(status);
}

Outcome end_to_end() {
    const std::string cli = CANODUAL_CLI;
    const std::string cfg = std::string(CANODUAL_SOURCE_DIR) + "/configs/";
    const auto dir = std::filesystem::temp_directory_path() / "canodual_acceptance";
    std::filesystem::create_directories(dir);
    const std::string good = (dir / "good.json").string();
    const std::string bad = (dir / "bad.json").string();

    const int good_exit = run(cli + " verify --config " + cfg + "annulus.json --report " + good);
    const int bad_exit = run(cli + " verify --config " + cfg + "annulus_corrupted.json --report " + bad);

    bool all_pass = false;
    bool balance_fails = false;
    std::size_t checks = 0;
    try {
        const auto g = nlohmann::json::parse(read_file(good));
        all_pass = g.at("overall").get<bool>();
        for (const auto& c : g.at("checks")) {
            all_pass = all_pass && c.at("pass").get<bool>();
            ++checks;
        }
        const auto b = nlohmann::json::parse(read_file(bad));
        for (const auto& c : b.at("checks")) {
            if (c.at("name") == "load_balance") balance_fails = !c.at("pass").get<bool>();
        }
    } catch (const std::exception& e) {
        return {false, e.what()};
    }
    return {good_exit == 0 && all_pass && bad_exit != 0 && balance_fails,
            "default exit " + std::to_string(good_exit) + " (" + std::to_string(checks) + " checks), corrupted exit " +
                std::to_string(bad_exit) + (balance_fails ? ", load_balance fails" : ", load_balance passes")};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"root regression", root_regression},
        {"regime threshold", regime_threshold},
        {"Cardano and trigonometric roots agree", cardano_vs_trig},
        {"cubic residual", dae_residuals},
        {"root ordering on the annulus sweep", ordering},
        {"zero duality gap, bar closed form", bar_closed_form},
        {"zero duality gap, annulus quadrature", annulus_gap},
        {"constitutive identity", constitutive},
        {"triality signs and labels", triality_signs},
        {"perturbation probes", perturbations},
        {"shift invariance", shift_invariance},
        {"path independence and compatibility", path_independence},
        {"nonsmooth mixed-branch solution", nonsmooth},
        {"end-to-end verify", end_to_end},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%s [%2zu] %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(), o.detail.c_str());
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
