#include "canodual/problems.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "canodual/error.hpp"

namespace canodual {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool close(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }

}  // namespace

AnnulusProblem::AnnulusProblem(double r1_, double r2_, Material material_)
    : AnnulusProblem(r1_, r2_, material_, r1_ * r1_ / 3.0, -r2_ * r2_ / 3.0) {}

AnnulusProblem::AnnulusProblem(double r1_, double r2_, Material material_, double t_inner_,
                               double t_outer_)
    : r1(r1_), r2(r2_), material(material_), t_inner(t_inner_), t_outer(t_outer_) {
    if (!(r1 > 0.0) || !(r2 > r1) || !std::isfinite(r2)) {
        throw InvalidArgument("annulus needs 0 < R1 < R2");
    }
}

bool AnnulusProblem::has_default_loads() const {
    return close(t_inner, r1 * r1 / 3.0) && close(t_outer, -r2 * r2 / 3.0);
}

Bar1DProblem::Bar1DProblem(double length_, Material material_, BarSource source_, double t_right_)
    : length(length_), material(material_), source(source_), t_right(t_right_) {
    if (!(length > 0.0) || !std::isfinite(length)) throw InvalidArgument("bar needs length > 0");
    if (!std::isfinite(t_right) || !std::isfinite(source.value)) {
        throw InvalidArgument("bar loads must be finite");
    }
}

StressState annulus_stress(const AnnulusProblem& p, double r) {
    // tolerate rounding in radii reconstructed from Cartesian points
    if (r < p.r1 * (1.0 - 1e-12) || r > p.r2 * (1.0 + 1e-12)) {
        throw DomainError("annulus_stress: radius " + std::to_string(r) + " outside [R1, R2]");
    }
    if (!p.has_default_loads()) {
        throw InvalidArgument("annulus_stress: only the balanced default tractions admit the closed-form stress");
    }
    const double sigma_r = -r * r / 3.0;
    return {sigma_r, sigma_r * sigma_r};
}

StressState bar1d_stress(const Bar1DProblem& p, double x) {
    if (x < -1e-12 * p.length || x > p.length * (1.0 + 1e-12)) {
        throw DomainError("bar1d_stress: x = " + std::to_string(x) + " outside [0, L]");
    }
    double sigma = p.t_right;
    if (p.source.kind == BarSourceKind::Constant) sigma += p.source.value * (p.length - x);
    return {sigma, sigma * sigma};
}

double check_load_balance(const Problem& problem) {
    return std::visit(overloaded{
                          [](const AnnulusProblem& p) {
                              const double body = kTwoPi * (p.r2 * p.r2 * p.r2 - p.r1 * p.r1 * p.r1) / 3.0;
                              const double boundary = kTwoPi * (p.t_inner * p.r1 + p.t_outer * p.r2);
                              return body + boundary;
                          },
                          [](const Bar1DProblem&) { return 0.0; },
                      },
                      problem);
}

const Material& material_of(const Problem& problem) {
    return std::visit([](const auto& p) -> const Material& { return p.material; }, problem);
}

double domain_min(const Problem& problem) {
    return std::visit(overloaded{[](const AnnulusProblem& p) { return p.r1; },
                                 [](const Bar1DProblem&) { return 0.0; }},
                      problem);
}

double domain_max(const Problem& problem) {
    return std::visit(overloaded{[](const AnnulusProblem& p) { return p.r2; },
                                 [](const Bar1DProblem& p) { return p.length; }},
                      problem);
}

int dimension_of(const Problem& problem) {
    return std::holds_alternative<AnnulusProblem>(problem) ? 2 : 1;
}

double measure_weight(const Problem& problem, double r) {
    return std::holds_alternative<AnnulusProblem>(problem) ? kTwoPi * r : 1.0;
}

double source_at(const Problem& problem, double r) {
    return std::visit(overloaded{[r](const AnnulusProblem&) { return r; },
                                 [r](const Bar1DProblem& p) { return p.source.at(r); }},
                      problem);
}

StressState stress_at(const Problem& problem, double r) {
    return std::visit(overloaded{[r](const AnnulusProblem& p) { return annulus_stress(p, r); },
                                 [r](const Bar1DProblem& p) { return bar1d_stress(p, r); }},
                      problem);
}

bool is_pure_traction(const Problem& problem) {
    return std::holds_alternative<AnnulusProblem>(problem);
}

double boundary_work(const Problem& problem, double u_at_min, double u_at_max) {
    return std::visit(overloaded{
                          [&](const AnnulusProblem& p) {
                              return kTwoPi * (p.t_inner * u_at_min * p.r1 + p.t_outer * u_at_max * p.r2);
                          },
                          [&](const Bar1DProblem& p) { return p.t_right * u_at_max; },
                      },
                      problem);
}

std::vector<TractionEnd> traction_ends(const Problem& problem) {
    return std::visit(overloaded{
                          [](const AnnulusProblem& p) {
                              return std::vector<TractionEnd>{{p.r1, -1.0, p.t_inner}, {p.r2, 1.0, p.t_outer}};
                          },
                          [](const Bar1DProblem& p) {
                              return std::vector<TractionEnd>{{p.length, 1.0, p.t_right}};
                          },
                      },
                      problem);
}

double load_scale(const Problem& problem) {
    return std::visit(overloaded{
                          [](const AnnulusProblem& p) {
                              return std::max({1.0, p.r2, std::abs(p.t_inner), std::abs(p.t_outer)});
                          },
                          [](const Bar1DProblem& p) {
                              return std::max({1.0, std::abs(p.source.at(0.0)), std::abs(p.t_right)});
                          },
                      },
                      problem);
}

namespace {

using nlohmann::json;

void reject_unknown(const json& doc, const std::set<std::string>& allowed) {
    for (const auto& [key, value] : doc.items()) {
        if (!allowed.contains(key)) throw InvalidArgument("unknown field in problem config: " + key);
    }
}

double number_or(const json& doc, const char* key, double fallback) {
    if (!doc.contains(key)) return fallback;
    const auto& v = doc.at(key);
    if (!v.is_number()) throw InvalidArgument(std::string("field '") + key + "' must be a number");
    return v.get<double>();
}

}  // namespace

Problem problem_from_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidArgument(std::string("problem config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("type") || !doc.at("type").is_string()) {
        throw InvalidArgument("problem config needs a string field 'type'");
    }
    const auto type = doc.at("type").get<std::string>();
    const Material material(number_or(doc, "nu", 1.0), number_or(doc, "lambda", 1.0));
    if (type == "annulus") {
        reject_unknown(doc, {"type", "r1", "r2", "nu", "lambda", "t_inner", "t_outer"});
        const double r1 = number_or(doc, "r1", 0.5);
        const double r2 = number_or(doc, "r2", 1.277);
        return AnnulusProblem(r1, r2, material, number_or(doc, "t_inner", r1 * r1 / 3.0),
                              number_or(doc, "t_outer", -r2 * r2 / 3.0));
    }
    if (type == "bar1d") {
        reject_unknown(doc, {"type", "length", "nu", "lambda", "source", "source_value", "t_right"});
        BarSource source;
        if (doc.contains("source") && !doc.at("source").is_string()) {
            throw InvalidArgument("field 'source' must be a string");
        }
        const std::string kind = doc.contains("source") ? doc.at("source").get<std::string>() : "zero";
        if (kind == "zero") {
            if (doc.contains("source_value")) throw InvalidArgument("source 'zero' takes no source_value");
        } else if (kind == "constant") {
            source = {BarSourceKind::Constant, number_or(doc, "source_value", 0.0)};
        } else {
            throw InvalidArgument("unknown bar source preset: " + kind);
        }
        return Bar1DProblem(number_or(doc, "length", 1.0), material, source, number_or(doc, "t_right", 0.0));
    }
    throw InvalidArgument("unknown problem type: " + type);
}

Problem problem_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open problem config: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return problem_from_json(buffer.str());
}

std::string problem_to_json(const Problem& problem) {
    json doc = std::visit(
        overloaded{
            [](const AnnulusProblem& p) {
                return json{{"type", "annulus"}, {"r1", p.r1}, {"r2", p.r2}, {"nu", p.material.nu()},
                            {"lambda", p.material.lambda()}, {"t_inner", p.t_inner}, {"t_outer", p.t_outer}};
            },
            [](const Bar1DProblem& p) {
                json d{{"type", "bar1d"}, {"length", p.length}, {"nu", p.material.nu()},
                       {"lambda", p.material.lambda()}, {"t_right", p.t_right}};
                if (p.source.kind == BarSourceKind::Zero) {
                    d["source"] = "zero";
                } else {
                    d["source"] = "constant";
                    d["source_value"] = p.source.value;
                }
                return d;
            },
        },
        problem);
    return doc.dump();
}

}  // namespace canodual
