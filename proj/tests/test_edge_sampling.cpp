#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qlim/edge_sampling.hpp"
#include "qlim/errors.hpp"
#include "qlim/metrics.hpp"

using namespace qlim;

namespace {

double max_weight(const NormalizedGraph& g) {
    double m = 0.0;
    g.for_each_nonzero([&](std::size_t, std::size_t, double w) { m = std::max(m, w); });
    return m;
}

}  // namespace

TEST_CASE("sampling edges of a graph") {
    Rng rng(41);
    const NormalizedGraph e = NormalizedGraph::from_rows({{0, 1}, {0, 0}});
    for (std::size_t n : {1, 5, 100}) {
        const EdgeSample s = sample_edges_from_graph(e, n, rng);
        CHECK(s.graph.size() == 2);
        CHECK(s.graph(0, 1) == 1.0);
        CHECK(s.edges.size() == n);
        CHECK(s.origin == std::vector<std::size_t>{0, 1});
    }
    const NormalizedGraph two = NormalizedGraph::from_rows({{0, 0.5}, {0.5, 0}});
    const std::size_t n = 10000;
    const EdgeSample s = sample_edges_from_graph(two, n, rng);
    std::size_t first = 0;
    for (const auto& x : s.edges) first += x.i == 0;
    CHECK(std::abs(static_cast<double>(first) - n / 2.0) <= 3.0 * std::sqrt(n / 4.0));
    CHECK(std::abs(s.graph.total_weight() - 1.0) <= 1e-12);
    CHECK_THROWS_AS(sample_edges_from_graph(WeightedDigraph(3), 5, rng), ZeroGraph);
    CHECK_THROWS_AS(sample_edges_from_graph(two, 0, rng), InvalidArgument);

    Rng a(9), b(9);
    CHECK(sample_edges_from_graph(two, 50, a).graph == sample_edges_from_graph(two, 50, b).graph);
}

TEST_CASE("sampling edges of a grapheur") {
    Rng rng(42);
    const EdgeSample diag = sample_edges_from_grapheur(Grapheur::uniform(0.0, 1.0), 20, rng);
    CHECK(diag.graph.size() == 20);
    for (std::size_t i = 0; i < 20; ++i) CHECK(diag.graph(i, i) == doctest::Approx(0.05).epsilon(1e-15));
    for (const auto& x : diag.edges) {
        CHECK(x.component == EdgeComponent::Diagonal);
        CHECK(x.x == x.y);
    }
    const EdgeSample one = sample_edges_from_grapheur(Grapheur::from_parameters({{1.0}}, {}, {}, 0.0, 0.0), 30, rng);
    CHECK(one.graph.size() == 1);
    CHECK(one.graph(0, 0) == 1.0);
}

TEST_CASE("graph grapheur sampling has the law of graph sampling") {
    Rng rng(43);
    const NormalizedGraph g = oracle::random_graph(5, rng, 0.5);
    const Grapheur m = from_graph(g);
    std::vector<double> va, vb, ma, mb;
    for (int t = 0; t < 10000; ++t) {
        const EdgeSample a = sample_edges_from_graph(g, 6, rng);
        const EdgeSample b = sample_edges_from_grapheur(m, 6, rng);
        va.push_back(static_cast<double>(a.graph.size()));
        vb.push_back(static_cast<double>(b.graph.size()));
        ma.push_back(max_weight(a.graph));
        mb.push_back(max_weight(b.graph));
    }
    const MeanSe xa = mean_se(va), xb = mean_se(vb), ya = mean_se(ma), yb = mean_se(mb);
    CHECK(std::abs(xa.mean - xb.mean) <= 4.0 * std::hypot(xa.se, xb.se));
    CHECK(std::abs(ya.mean - yb.mean) <= 4.0 * std::hypot(ya.se, yb.se));
}

TEST_CASE("sampled graph moments match edge-multiset enumeration") {
    // Two edges of weight ¼ and ¾; with 3 draws the sampled graph is determined by the
    // count c of the first edge, c ~ Binomial(3, ¼).
    const NormalizedGraph g = NormalizedGraph::from_rows({{0, 0.25}, {0.75, 0}});
    Rng rng(44);
    const Multigraph h = Multigraph::path(2);
    double exact = 0.0;
    const double binom[4] = {1, 3, 3, 1};
    for (int c = 0; c <= 3; ++c) {
        const double p = binom[c] * std::pow(0.25, c) * std::pow(0.75, 3 - c);
        const NormalizedGraph s = NormalizedGraph::from_rows({{0, c / 3.0}, {(3 - c) / 3.0, 0}});
        exact += p * quotient_density_exact(h, s);
    }
    std::vector<double> vals;
    for (int t = 0; t < 20000; ++t) vals.push_back(quotient_density_exact(h, sample_edges_from_graph(g, 3, rng).graph));
    const MeanSe ms = mean_se(vals);
    CHECK(std::abs(ms.mean - exact) <= 4.0 * ms.se);
}

TEST_CASE("component frequencies") {
    Rng rng(45);
    const Grapheur m = Grapheur::from_parameters({{0.2, 0.1}, {0.0, 0.1}}, {0.1, 0.05}, {0.05, 0.1}, 0.2, 0.1);
    const std::size_t n = 50000;
    const EdgeSample s = sample_edges_from_grapheur(m, n, rng);
    std::vector<double> counts(5, 0.0);
    for (const auto& e : s.edges) counts[static_cast<std::size_t>(e.component)] += 1.0;
    const double expected[5] = {0.4, 0.15, 0.15, 0.2, 0.1};
    for (std::size_t c = 0; c < 5; ++c) {
        const double sd = std::sqrt(n * expected[c] * (1.0 - expected[c]));
        CHECK(std::abs(counts[c] - n * expected[c]) <= 3.0 * sd);
    }
    CHECK(s.graph.size() <= 2 * n);
    CHECK(std::abs(s.graph.total_weight() - 1.0) <= 1e-12);
}

TEST_CASE("coupled discrepancy trials") {
    Rng rng(46);
    const Grapheur atom = Grapheur::from_parameters({{1.0}}, {}, {}, 0.0, 0.0);
    CHECK(coupled_rect_discrepancy_trial(atom, 1, rng) == 0.0);
    CHECK_THROWS_AS(coupled_rect_discrepancy_trial(Grapheur::uniform(1.0, 0.0), 4, rng), UnsupportedContinuousComponent);

    // Two atoms of mass ½: the discrepancy is |c/n − ½| with c ~ Binomial(n, ½).
    const Grapheur two = Grapheur::from_parameters({{0, 0.5}, {0.5, 0}}, {}, {}, 0.0, 0.0);
    const std::size_t n = 20;
    double exact = 0.0;
    double coef = 1.0;
    for (std::size_t c = 0; c <= n; ++c) {
        exact += coef * std::pow(0.5, n) * std::abs(static_cast<double>(c) / n - 0.5);
        coef = coef * static_cast<double>(n - c) / static_cast<double>(c + 1);
    }
    std::vector<double> vals;
    for (int t = 0; t < 5000; ++t) vals.push_back(coupled_rect_discrepancy_trial(two, n, rng));
    const MeanSe ms = mean_se(vals);
    CHECK(std::abs(ms.mean - exact) <= 4.0 * ms.se);
}

TEST_CASE("discrepancy concentration") {
    Rng rng(47);
    const Grapheur m = Grapheur::from_parameters({{0.2, 0.1, 0.0}, {0.0, 0.3, 0.1}, {0.2, 0.0, 0.1}}, {}, {}, 0.0, 0.0);
    const auto rows = discrepancy_experiment(m, {16, 64, 100, 256}, 400, rng);
    REQUIRE(rows.size() == 4);
    for (const auto& r : rows) {
        CHECK(r.mean <= r.bound);
        CHECK(r.bound == doctest::Approx(174.0 / std::sqrt(static_cast<double>(r.n))));
        CHECK(r.values.size() == 400);
    }
    const DiscrepancyRow& r100 = rows[2];
    for (double eps : {1.0, 1.5}) {
        double above = 0.0;
        for (double v : r100.values) above += v > r100.mean + eps / std::sqrt(100.0);
        CHECK(above / 400.0 <= std::exp(-2.0 * eps * eps) + 0.05);
    }
    CHECK(rows[0].mean > rows[3].mean);
}

TEST_CASE("Szemeredi approximants") {
    CHECK(szemeredi_edge_count(1.0) == 30276);
    CHECK(szemeredi_edge_count(0.5) == 121104);
    CHECK_THROWS_AS(szemeredi_edge_count(0.0), InvalidEpsilon);
    CHECK_THROWS_AS(szemeredi_edge_count(1.5), InvalidEpsilon);
    Rng rng(48);
    const Grapheur edge = from_graph(NormalizedGraph::from_rows({{0, 1}, {0, 0}}));
    const SzemerediApproximant se = szemeredi_approximant(edge, 0.9, 2, rng);
    CHECK(se.discrepancy == 0.0);
    CHECK(se.graph.size() == 2);
    for (int t = 0; t < 5; ++t) {
        std::vector<std::vector<double>> e(3, std::vector<double>(3));
        for (auto& row : e)
            for (double& x : row) x = uniform01(rng);
        double total = 0.0;
        for (auto& row : e)
            for (double x : row) total += x;
        for (auto& row : e)
            for (double& x : row) x /= total;
        const Grapheur m = Grapheur::from_parameters(e, {}, {}, 0.0, 0.0);
        const SzemerediApproximant a = szemeredi_approximant(m, 0.5, 2, rng);
        CHECK(a.discrepancy <= 0.5);
        CHECK(a.edges == 121104);
    }
}
