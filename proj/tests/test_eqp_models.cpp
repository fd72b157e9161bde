#include <doctest.h>

#include <cmath>
#include <map>

#include "oracles.hpp"
#include "qlim/eqp_models.hpp"
#include "qlim/errors.hpp"
#include "qlim/metrics.hpp"

using namespace qlim;

namespace {

const Grapheur& mixed_grapheur() {
    static const Grapheur m =
        Grapheur::from_parameters({{0.2, 0.1}, {0.0, 0.15}}, {0.1, 0.0}, {0.0, 0.1}, 0.25, 0.1);
    return m;
}

}  // namespace

TEST_CASE("equipartition composed with a uniform map is uniform") {
    for (std::size_t m = 1; m <= 5; ++m)
        for (std::size_t k = 1; k <= 2; ++k)
            for (std::size_t n = 1; n <= 2; ++n) {
                const PartitionMap d = equipartition_map(k, n * k);
                std::map<std::vector<std::uint32_t>, double> law;
                const double total = std::pow(static_cast<double>(n * k), static_cast<double>(m));
                oracle::for_each_map(m, n * k, [&](const std::vector<std::uint32_t>& f) {
                    law[compose(d, PartitionMap(n * k, f)).images()] += 1.0 / total;
                });
                CHECK(law.size() == static_cast<std::size_t>(std::pow(k, m)));
                for (const auto& [img, p] : law) CHECK(p == doctest::Approx(std::pow(k, -static_cast<double>(m))).epsilon(1e-12));
            }
}

TEST_CASE("moment patterns and z scores") {
    CHECK(moment_patterns(1).size() == 2);
    CHECK(moment_patterns(2).size() == 4 + 10);
    CHECK(two_sample_z(1.0, 0.0, 1.0, 0.0) == 0.0);
    CHECK(std::isinf(two_sample_z(1.0, 0.0, 2.0, 0.0)));
    CHECK(two_sample_z(1.0, 0.3, 0.5, 0.4) == doctest::Approx(1.0));
}

TEST_CASE("equipartition consistency") {
    Rng rng(61);
    const EqpReport trivial = check_equipartition_consistency(mixed_grapheur(), 1, 3, 100, rng);
    CHECK(trivial.max_abs_z == 0.0);

    const NormalizedGraph g = oracle::random_graph(4, rng);
    const EqpReport graph = check_equipartition_consistency(from_graph(g), 2, 2, 10000, rng);
    CHECK(graph.max_abs_z <= 4.0);
    CHECK(graph.moments.size() == 2 * moment_patterns(2).size());

    const EqpReport mixed = check_equipartition_consistency(mixed_grapheur(), 2, 3, 10000, rng);
    CHECK(mixed.max_abs_z <= 4.0);

    const EqpReport control = check_equipartition_consistency(independent_rows_model(), 2, 3, 10000, rng);
    CHECK(control.max_abs_z > 10.0);
}

TEST_CASE("nested quotient sequences") {
    Rng rng(62);
    const Grapheur edge = from_graph(NormalizedGraph::from_rows({{0, 1}, {0, 0}}));
    // Collision frequency at k = 4 is 1/4.
    int collisions = 0;
    const int reps = 8000;
    for (int t = 0; t < reps; ++t) {
        const auto seq = nested_quotient_sequence(edge, {4}, rng);
        collisions += seq[0].trace() == 1.0;
    }
    CHECK(std::abs(collisions - reps / 4.0) <= 4.0 * std::sqrt(reps * 0.25 * 0.75));

    for (const auto& q : nested_quotient_sequence(Grapheur::uniform(1.0, 0.0), {2, 5, 9}, rng))
        for (double x : q.to_dense()) CHECK(x == doctest::Approx(1.0 / (q.size() * q.size())).epsilon(1e-14));

    Rng a(7), b(7);
    const auto s1 = nested_quotient_sequence(mixed_grapheur(), {2, 4, 8, 16}, a);
    const auto s2 = nested_quotient_sequence(mixed_grapheur(), {2, 4, 8, 16}, b);
    for (std::size_t i = 0; i < s1.size(); ++i) CHECK(s1[i] == s2[i]);

    const Grapheur atomic = Grapheur::from_parameters({{0.3, 0.2, 0.0}, {0.0, 0.1, 0.15}, {0.25, 0.0, 0.0}}, {}, {}, 0.0, 0.0);
    int close = 0;
    for (int t = 0; t < 20; ++t) {
        const auto seq = nested_quotient_sequence(atomic, {64}, rng);
        close += parameter_distance(estimate_grapheur(seq[0], 0.05, 0.05), atomic.canonicalize()) <= 0.05;
    }
    // Failure needs two of three locations in one of 64 cells.
    CHECK(close >= 17);
}

TEST_CASE("independent sampling divergence") {
    Rng rng(63);
    int hits = 0;
    const int reps = 10000;
    for (int t = 0; t < reps; ++t) {
        const DivergenceReport r = independent_sampling_divergence_demo(2, rng);
        hits += static_cast<int>(r.collisions) - 1;  // k = 1 always collides
    }
    CHECK(std::abs(hits - reps / 2.0) <= 4.0 * std::sqrt(reps * 0.25));

    const DivergenceReport big = independent_sampling_divergence_demo(1000, rng);
    CHECK(big.expected == doctest::Approx(oracle::harmonic(1000)).epsilon(1e-12));
    CHECK(big.within_3sigma);
    CHECK(big.realization_discrepancy >= 0.25);
    CHECK(big.collisions == big.collision_ks.size());
    CHECK_THROWS_AS(independent_sampling_divergence_demo(1, rng), InvalidArgument);
}

TEST_CASE("mean matrix form") {
    Rng rng(64);
    for (const Grapheur& m : {mixed_grapheur(), from_graph(oracle::random_graph(4, rng)), Grapheur::uniform(0.6, 0.4)}) {
        const MeanMatrixReport r = mean_matrix_check(grapheur_model(m), 3, 20000, rng);
        CHECK(r.passed);
    }
    const MeanMatrixReport diag = mean_matrix_check(grapheur_model(Grapheur::uniform(0.0, 1.0)), 3, 2000, rng);
    CHECK(diag.theta == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(diag.passed);

    // Non-exchangeable control: all mass on the first row.
    const ModelSampler first_row = [](std::size_t k, Rng& r) {
        std::vector<double> w(k * k, 0.0);
        w[uniform_index(r, k)] = 1.0;
        return NormalizedGraph(WeightedDigraph(k, w));
    };
    CHECK_FALSE(mean_matrix_check(first_row, 3, 2000, rng).passed);
}

TEST_CASE("expected rectangle mass") {
    const Grapheur edge = from_graph(NormalizedGraph::from_rows({{0, 1}, {0, 0}}));
    CHECK(expected_rect_mass(edge, 0, 0.5, 0.5, 1) == doctest::Approx(0.25));
    CHECK(expected_rect_mass(Grapheur::uniform(0.0, 1.0), 0, 0.5, 0.5, 1) == doctest::Approx(0.0));
    CHECK(expected_rect_mass(Grapheur::uniform(0.0, 1.0), 0, 0.5, 0, 1) == doctest::Approx(0.5));
}
