#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "canodual/energy.hpp"
#include "canodual/problems.hpp"
#include "canodual/reconstruct.hpp"

namespace canodual {

struct Check {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

struct VerificationReport {
    std::vector<Check> checks;
    bool overall = true;

    /// Appends a check and folds it into `overall`.
    void add(std::string name, double value, double threshold, bool pass);
    /// Appends a check passing when value <= threshold.
    void add_at_most(std::string name, double value, double threshold);

    [[nodiscard]] const Check* find(const std::string& name) const;
};

/// {"checks":[{"name":..,"value":..,"threshold":..,"pass":..}],"overall":..}
std::string report_to_json(const VerificationReport& report);

/// Sign pattern found at the nodes of one segment.
struct SignCensus {
    std::size_t nodes = 0;
    std::size_t conflicts = 0;
};

/// Triality label per segment.
///
/// Branch 1 maps to GlobalMinCandidate when every node of the segment is in
/// the one-root regime and to LocalMin otherwise; branch 3 to LocalMax;
/// branch 2 to LocalMin in one dimension and Indefinite1DMin in two. Each
/// label is checked against the pointwise signs of the primal coefficient
/// 3 zeta/nu + 2 lambda and the dual integrand; nodes on the regime boundary
/// (where both degenerate) are skipped. Throws ClassificationConflict on any
/// disagreement.
std::vector<TrialityLabel> classify_branch(const SolutionBranch& branch, int dimension);

/// Number of nodes whose second-variation signs contradict the segment label.
SignCensus triality_sign_census(const SolutionBranch& branch);

/// Primal and dual energies of the branch and their difference.
EnergyReport duality_gap(const Problem& problem, const SolutionBranch& branch,
                         double rel_tol = kDefaultRelTol);

/// Test functions xi^k, k = 1..directions+1, with xi = (r - r_min)/(r_max - r_min).
std::vector<FieldProfile> stationarity_directions(const Problem& problem, int directions);

/// max_k |dP/d eps (u + eps phi_k)| at eps = 0 by central differences with
/// step 1e-6 * max(1, max |u|).
double stationarity_probe(const Problem& problem, const FieldProfile& u, int directions);
double stationarity_probe(const Problem& problem, const SolutionBranch& branch, int directions = 4);

struct PerturbationRange {
    double min_delta = 0.0;
    double max_delta = 0.0;
};

/// Random radial polynomial perturbation phi = sum_{k=1..4} a_k xi^k with
/// a_k uniform in [-1, 1] drawn from mt19937_64(seed) (top 53 bits of each
/// draw), scaled so the integral of (phi')^2 over the domain measure is 1.
FieldProfile random_perturbation(const Problem& problem, std::mt19937_64& rng);

/// Extremes of P(u + eps phi) - P(u) over `trials` random perturbations.
PerturbationRange perturbation_probe(const Problem& problem, const FieldProfile& u, int trials,
                                     double eps, std::uint64_t seed);
PerturbationRange perturbation_probe(const Problem& problem, const SolutionBranch& branch,
                                     int trials = 100, double eps = 1e-3, std::uint64_t seed = 20150801);

struct SuiteOptions {
    std::size_t nodes = kDefaultGridNodes;
    int directions = 4;
    int trials = 100;
    double eps = 1e-3;
    std::uint64_t seed = 20150801;
};

/// Runs every applicable check for every constructible pure branch; failures
/// are recorded, never thrown.
VerificationReport run_suite(const Problem& problem, const SuiteOptions& options = {});

}  // namespace canodual
