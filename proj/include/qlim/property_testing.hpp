#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "qlim/combinatorics.hpp"
#include "qlim/graph.hpp"
#include "qlim/rng.hpp"

namespace qlim {

using ParameterEvaluator = std::function<double(const NormalizedGraph&)>;

struct TestableParameter {
    std::string name;
    ParameterEvaluator evaluator;
    std::optional<double> lipschitz;  // modulus with respect to the W□ metric
    double spot_check_tolerance = 0.0;
};

// Rejects evaluators that change under relabeling or isolated-vertex padding on random
// graphs (difference above `tolerance`).
TestableParameter register_parameter(std::string name, ParameterEvaluator evaluator,
                                     std::optional<double> lipschitz, double tolerance = 1e-12);

// ‖G1‖² + ‖Gᵀ1‖² of the normalized graph.
double hub_statistic(const WeightedDigraph& g);
inline constexpr double kHubLipschitz = 16.0;

// W□(M_G, M) ≥ hub_statistic(G) / kHubLipschitz for every hub-free grapheur M.
double hub_lower_bound(const WeightedDigraph& g);
TestableParameter hub_statistic_parameter();

double q2(const WeightedDigraph& q);

enum class Q2Mode { Exact, MonteCarlo };

struct Q2Report {
    double hub_statistic = 0.0;
    double expectation = 0.0;  // E q2(ρ(F_{2,n})G)
    double se = 0.0;           // zero in exact mode
    double abs_error = 0.0;
    std::uint64_t evaluations = 0;
};

Q2Report q2_identity_check(const NormalizedGraph& g, Q2Mode mode, Rng& rng, std::size_t samples = 100000,
                           const Limits& limits = {});

namespace serial {
double q2_expectation_exact(const NormalizedGraph& g);
}  // namespace serial

// ⌈(L(174 + √ln(ε^{-1/2}))/ε)²⌉
std::uint64_t required_edges(double epsilon, double lipschitz);

struct Certificate {
    std::uint64_t seed = 0;
    std::uint64_t k_edges = 0;
    std::string log_base = "natural";
    std::optional<double> lipschitz;
    std::optional<double> epsilon;
    std::optional<std::uint64_t> required;
    bool guarantee = false;           // k_edges >= required
    double sampling_failure = 0.0;    // tail probability e^{-2 ε̃²} = ε of the sampling step
    double estimation_tolerance = 0.0;  // ε
    double confidence = 0.0;          // 1 - ε
    double sampling_tail = 0.0;       // ε̃ = √ln(ε^{-1/2})
};

struct ParameterTest {
    double estimate = 0.0;
    Certificate certificate;
};

ParameterTest test_parameter_by_edge_sampling(const WeightedDigraph& g, const TestableParameter& param,
                                              std::uint64_t k_edges, std::uint64_t seed,
                                              std::optional<double> epsilon = std::nullopt);

inline constexpr std::size_t kDensityParameterBudget = 20000;

// t_Q(H;·) estimated with a fixed Monte Carlo budget and seed; L = k²‖H‖_∞.
TestableParameter register_quotient_density_parameter(const Multigraph& h,
                                                      std::size_t budget = kDensityParameterBudget,
                                                      std::uint64_t seed = 0x5EEDULL);

}  // namespace qlim
