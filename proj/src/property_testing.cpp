#include "qlim/property_testing.hpp"

#include <cmath>

#include "qlim/edge_sampling.hpp"
#include "qlim/errors.hpp"
#include "qlim/summation.hpp"

namespace qlim {

namespace {

constexpr std::size_t kSpotChecks = 3;
constexpr std::size_t kSpotCheckVertices = 5;
constexpr std::size_t kSpotCheckPadding = 3;

double q2_raw(double g11, double g12, double g21, double g22) {
    const double a = g11 + g12 - g21 - g22;
    const double b = g11 + g21 - g12 - g22;
    return a * a + b * b;
}

}  // namespace

TestableParameter register_parameter(std::string name, ParameterEvaluator evaluator, std::optional<double> lipschitz,
                                     double tolerance) {
    if (lipschitz && !(*lipschitz > 0.0)) throw InvalidArgument("Lipschitz modulus must be positive");
    Rng rng(splitmix64(std::hash<std::string>{}(name)));
    for (std::size_t c = 0; c < kSpotChecks; ++c) {
        std::vector<double> w(kSpotCheckVertices * kSpotCheckVertices);
        for (double& x : w) x = uniform01(rng) < 0.5 ? 0.0 : uniform01(rng);
        w[1] += 1.0;
        const NormalizedGraph g = normalize(WeightedDigraph(kSpotCheckVertices, w));
        const double base = evaluator(g);
        const double permuted = evaluator(permute(g, random_permutation(kSpotCheckVertices, rng)));
        const double padded = evaluator(NormalizedGraph(pad_isolated(g, kSpotCheckPadding)));
        if (std::abs(base - permuted) > tolerance || std::abs(base - padded) > tolerance) {
            throw InvalidArgument("parameter '" + name + "' is not invariant under relabeling and padding");
        }
    }
    return {std::move(name), std::move(evaluator), lipschitz, tolerance};
}

double hub_statistic(const WeightedDigraph& g) {
    const double total = g.total_weight();
    if (total <= 0.0) throw ZeroGraph();
    const auto rows = g.row_sums();
    const auto cols = g.col_sums();
    CompensatedSum s;
    for (double r : rows) s.add((r / total) * (r / total));
    for (double c : cols) s.add((c / total) * (c / total));
    return s.value();
}

// q2 is 4-Lipschitz in ℓ1 on the 2×2 simplex (gradient entries ±4(G11−G22), ±4(G12−G21)), and
// W1 between 2×2 grid quotients is at most 4·W□, so the hub statistic is 16-Lipschitz in W□.
double hub_lower_bound(const WeightedDigraph& g) { return hub_statistic(g) / kHubLipschitz; }

TestableParameter hub_statistic_parameter() {
    return register_parameter("hub_statistic", [](const NormalizedGraph& g) { return hub_statistic(g); },
                              kHubLipschitz);
}

double q2(const WeightedDigraph& q) {
    if (q.size() != 2) throw DimensionMismatch("q2 takes a 2x2 graph");
    return q2_raw(q(0, 0), q(0, 1), q(1, 0), q(1, 1));
}

Q2Report q2_identity_check(const NormalizedGraph& g, Q2Mode mode, Rng& rng, std::size_t samples,
                           const Limits& limits) {
    Q2Report r;
    r.hub_statistic = hub_statistic(g);
    const std::size_t n = g.size();
    const auto entries = g.entries();
    if (mode == Q2Mode::Exact) {
        if (n >= 63 || (std::uint64_t{1} << n) > limits.enumeration_cap)
            throw BudgetExceeded("q2_identity_check: 2^n exceeds the enumeration cap");
        const std::uint64_t maps = std::uint64_t{1} << n;
        const double sum = blocked_sum(maps, [&](std::uint64_t begin, std::uint64_t end, CompensatedSum& acc) {
            for (std::uint64_t f = begin; f < end; ++f) {
                double q[4] = {0.0, 0.0, 0.0, 0.0};
                for (const Entry& e : entries) q[((f >> e.row) & 1U) * 2 + ((f >> e.col) & 1U)] += e.weight;
                acc.add(q2_raw(q[0], q[1], q[2], q[3]));
            }
        });
        r.expectation = sum / static_cast<double>(maps);
        r.evaluations = maps;
    } else {
        const MeanSe est = [&] {
            std::vector<double> values(samples);
            for (std::size_t s = 0; s < samples; ++s) {
                const WeightedDigraph q = quotient(static_cast<const WeightedDigraph&>(g), random_partition_map(n, 2, rng));
                values[s] = q2(q);
            }
            return mean_se(values);
        }();
        r.expectation = est.mean;
        r.se = est.se;
        r.evaluations = samples;
    }
    r.abs_error = std::abs(r.expectation - r.hub_statistic);
    return r;
}

namespace serial {

double q2_expectation_exact(const NormalizedGraph& g) {
    const std::size_t n = g.size();
    std::vector<std::uint32_t> images(n, 0);
    double total = 0.0;
    const std::uint64_t maps = std::uint64_t{1} << n;
    for (std::uint64_t f = 0; f < maps; ++f) {
        for (std::size_t v = 0; v < n; ++v) images[v] = static_cast<std::uint32_t>((f >> v) & 1U);
        total += q2(quotient(static_cast<const WeightedDigraph&>(g), PartitionMap(2, images)));
    }
    return total / static_cast<double>(maps);
}

}  // namespace serial

std::uint64_t required_edges(double epsilon, double lipschitz) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidEpsilon("epsilon must lie in (0,1)");
    if (!(lipschitz > 0.0) || !std::isfinite(lipschitz)) throw InvalidArgument("Lipschitz modulus must be positive");
    const double base = (174.0 + std::sqrt(std::log(std::pow(epsilon, -0.5)))) / epsilon;
    return static_cast<std::uint64_t>(std::ceil((lipschitz * lipschitz) * (base * base)));
}

ParameterTest test_parameter_by_edge_sampling(const WeightedDigraph& g, const TestableParameter& param,
                                              std::uint64_t k_edges, std::uint64_t seed,
                                              std::optional<double> epsilon) {
    if (k_edges == 0) throw InvalidArgument("k_edges must be positive");
    Rng rng(seed);
    const EdgeSample sample = sample_edges_from_graph(g, static_cast<std::size_t>(k_edges), rng);
    ParameterTest out;
    out.estimate = param.evaluator(sample.graph);
    Certificate& c = out.certificate;
    c.seed = seed;
    c.k_edges = k_edges;
    c.lipschitz = param.lipschitz;
    if (epsilon) {
        if (!(*epsilon > 0.0 && *epsilon < 1.0)) throw InvalidEpsilon("epsilon must lie in (0,1)");
        c.epsilon = epsilon;
        c.sampling_tail = std::sqrt(std::log(std::pow(*epsilon, -0.5)));
        c.sampling_failure = std::exp(-2.0 * c.sampling_tail * c.sampling_tail);
        c.estimation_tolerance = *epsilon;
        c.confidence = 1.0 - *epsilon;
        if (param.lipschitz) {
            c.required = required_edges(*epsilon, *param.lipschitz);
            c.guarantee = k_edges >= *c.required;
        }
    }
    return out;
}

TestableParameter register_quotient_density_parameter(const Multigraph& h, std::size_t budget, std::uint64_t seed) {
    if (budget < 2) throw InvalidArgument("density budget must be at least 2");
    const double k = static_cast<double>(h.size());
    const double lipschitz = k * k * static_cast<double>(h.max_count());
    ParameterEvaluator eval = [h, budget, seed](const NormalizedGraph& g) {
        Rng rng(seed);
        return quotient_density_mc(h, g, budget, rng).mean;
    };
    // Two independent estimates of a [0,1]-valued mean differ by far less than this.
    const double tolerance = 8.0 * 0.5 / std::sqrt(static_cast<double>(budget));
    return register_parameter("t_Q" + h.to_string(), std::move(eval), lipschitz, tolerance);
}

}  // namespace qlim
