#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <limits>
#include <memory>
#include <random>

#include "canodual/error.hpp"
#include "canodual/verify.hpp"

using namespace canodual;

namespace {

const Material unit{1.0, 1.0};
const AnnulusProblem annulus{0.5, 1.277, unit};

SolutionBranch pure(const Problem& p, int b, std::size_t n = 512) {
    auto grid = std::make_shared<const RadialGrid>(make_radial_grid(domain_min(p), domain_max(p), n));
    return solve_branch(p, BranchMap::single(domain_min(p), domain_max(p), b), grid);
}

}  // namespace

TEST_CASE("report bookkeeping and json") {
    VerificationReport r;
    r.add_at_most("a", 1e-13, 1e-12);
    CHECK(r.overall);
    r.add_at_most("b", std::numeric_limits<double>::quiet_NaN(), 1.0);
    CHECK_FALSE(r.overall);
    REQUIRE(r.find("a") != nullptr);
    CHECK(r.find("a")->pass);
    CHECK_FALSE(r.find("b")->pass);
    CHECK(r.find("c") == nullptr);

    const auto doc = nlohmann::json::parse(report_to_json(r));
    CHECK(doc.at("overall") == false);
    CHECK(doc.at("checks").size() == 2);
    CHECK(doc.at("checks")[1].at("value").is_null());
    CHECK(doc.at("checks")[0].at("name") == "a");
}

TEST_CASE("triality labels") {
    const Problem a = annulus;
    CHECK(classify_branch(pure(a, 1), 2) == std::vector{TrialityLabel::LocalMin});
    CHECK(classify_branch(pure(a, 2), 2) == std::vector{TrialityLabel::Indefinite1DMin});
    CHECK(classify_branch(pure(a, 3), 2) == std::vector{TrialityLabel::LocalMax});
    for (int b = 1; b <= 3; ++b) {
        const SignCensus c = triality_sign_census(pure(a, b));
        CHECK(c.nodes == 512);
        CHECK(c.conflicts == 0);
    }

    const Problem strong = Bar1DProblem(1.0, unit, BarSource{}, 2.0);
    CHECK(classify_branch(pure(strong, 1, 64), 1) == std::vector{TrialityLabel::GlobalMinCandidate});
    const Problem weak = Bar1DProblem(1.0, unit, BarSource{}, 0.25);
    CHECK(classify_branch(pure(weak, 2, 64), 1) == std::vector{TrialityLabel::LocalMin});

    const BranchMap mixed({{0.5, 0.9, 1}, {0.9, 1.277, 3}});
    auto grid = std::make_shared<const RadialGrid>(make_radial_grid(0.5, 1.277, 256));
    const auto labels = classify_branch(solve_branch(a, mixed, grid), 2);
    CHECK(labels == std::vector{TrialityLabel::LocalMin, TrialityLabel::LocalMax});
}

TEST_CASE("duality gap on the bar closed form") {
    const Problem bar = Bar1DProblem(1.0, unit, BarSource{}, 2.0);
    const EnergyReport e = duality_gap(bar, pure(bar, 1, 64));
    CHECK(std::abs(e.primal + 3.5) < 1e-12);
    CHECK(std::abs(e.dual + 3.5) < 1e-12);
    CHECK(std::abs(e.gap) <= 1e-12);
}

TEST_CASE("stationarity probe separates critical from non-critical fields") {
    const Problem bar = Bar1DProblem(1.0, unit, BarSource{}, 2.0);
    CHECK(stationarity_probe(bar, pure(bar, 1, 64)) < 1e-7);
    const FieldProfile wrong{[](double x) { return 1.5 * x; }, [](double) { return 1.5; }, {0.0, 1.0}};
    CHECK(stationarity_probe(bar, wrong, 4) > 0.1);
    CHECK(stationarity_directions(bar, 4).size() == 5);
}

TEST_CASE("random perturbations are normalised and reproducible") {
    std::mt19937_64 a(42), b(42);
    const FieldProfile p = random_perturbation(annulus, a);
    const FieldProfile q = random_perturbation(annulus, b);
    CHECK(p.value(0.5) == 0.0);
    CHECK(p.value(1.0) == q.value(1.0));
    const double norm = integrate_adaptive(
                            [&](double r) { return measure_weight(annulus, r) * p.slope(r) * p.slope(r); }, 0.5, 1.277, 1e-13)
                            .value;
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-10));
    const FieldProfile next = random_perturbation(annulus, a);
    CHECK(next.value(1.0) != p.value(1.0));
}

TEST_CASE("perturbation probes follow the triality labels") {
    const auto r1 = perturbation_probe(annulus, pure(annulus, 1));
    CHECK(r1.min_delta >= -1e-10);
    const auto r3 = perturbation_probe(annulus, pure(annulus, 3));
    CHECK(r3.max_delta <= 1e-10);
    const Problem weak = Bar1DProblem(1.0, unit, BarSource{}, 0.25);
    const auto r2 = perturbation_probe(weak, pure(weak, 2));
    CHECK(r2.min_delta >= -1e-10);
    // deterministic for a fixed seed
    const auto again = perturbation_probe(weak, pure(weak, 2));
    CHECK(again.min_delta == r2.min_delta);
}

TEST_CASE("suite on balanced and unbalanced problems") {
    const VerificationReport good = run_suite(Bar1DProblem(1.0, unit, BarSource{}, 0.25));
    CHECK(good.overall);
    CHECK(good.find("branch2.perturbation_min") != nullptr);
    CHECK(good.find("branch3.perturbation_max") != nullptr);

    const VerificationReport bad = run_suite(AnnulusProblem(0.5, 1.277, unit, 0.25 / 3.0, -1.277 * 1.277 / 3.0 + 0.1));
    CHECK_FALSE(bad.overall);
    REQUIRE(bad.find("load_balance") != nullptr);
    CHECK_FALSE(bad.find("load_balance")->pass);
}

TEST_CASE("suite records branches that cannot be built") {
    // beyond the threshold radius only branch 1 exists
    SuiteOptions small;
    small.nodes = 128;
    small.trials = 10;
    const VerificationReport r = run_suite(AnnulusProblem(0.5, 1.6, unit), small);
    REQUIRE(r.find("branches_constructed") != nullptr);
    CHECK(r.find("branches_constructed")->value == 1.0);
    CHECK(r.find("branch1.duality_gap")->pass);
    CHECK(r.find("branch2.duality_gap") == nullptr);
}
