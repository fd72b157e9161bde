#include <doctest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "qlim/combinatorics.hpp"
#include "qlim/errors.hpp"

using namespace qlim;

namespace {

// Isomorphism classes by brute force: every count matrix on k ≤ 2m vertices without
// isolated vertices, keyed by the minimum over all permutations.
std::size_t brute_class_count(std::size_t m) {
    std::set<std::vector<std::uint32_t>> keys;
    for (std::size_t k = 1; k <= 2 * m; ++k) {
        std::vector<std::uint32_t> counts(k * k, 0);
        // Distribute m edges over k² cells as a multiset of cells.
        std::vector<std::size_t> cells(m, 0);
        while (true) {
            bool sorted = std::is_sorted(cells.begin(), cells.end());
            if (sorted) {
                std::fill(counts.begin(), counts.end(), 0U);
                for (auto c : cells) ++counts[c];
                bool isolated = false;
                for (std::size_t v = 0; v < k && !isolated; ++v) {
                    bool touched = false;
                    for (std::size_t u = 0; u < k; ++u) touched |= counts[v * k + u] > 0 || counts[u * k + v] > 0;
                    isolated = !touched;
                }
                if (!isolated) {
                    std::vector<std::size_t> p(k);
                    std::iota(p.begin(), p.end(), std::size_t{0});
                    std::vector<std::uint32_t> best;
                    do {
                        std::vector<std::uint32_t> c(k * k);
                        for (std::size_t i = 0; i < k; ++i)
                            for (std::size_t j = 0; j < k; ++j) c[i * k + j] = counts[p[i] * k + p[j]];
                        if (best.empty() || c < best) best = c;
                    } while (std::next_permutation(p.begin(), p.end()));
                    best.insert(best.begin(), static_cast<std::uint32_t>(k));
                    keys.insert(best);
                }
            }
            std::size_t d = 0;
            for (; d < m; ++d) {
                if (++cells[d] < k * k) break;
                cells[d] = 0;
            }
            if (d == m) break;
        }
    }
    return keys.size();
}

Multigraph random_relabel(const Multigraph& h, Rng& rng) {
    const auto p = random_permutation(h.size(), rng);
    std::vector<std::uint32_t> c(h.counts().size());
    for (std::size_t i = 0; i < h.size(); ++i)
        for (std::size_t j = 0; j < h.size(); ++j) c[p[i] * h.size() + p[j]] = h(i, j);
    return Multigraph(h.size(), c);
}

}  // namespace

TEST_CASE("multigraph invariants") {
    CHECK_THROWS_AS(Multigraph(2, {1, 0, 0, 0}), InvalidArgument);  // vertex 1 isolated
    CHECK_THROWS_AS(Multigraph(1, {0}), InvalidArgument);
    CHECK_THROWS_AS(Multigraph(2, {1, 0, 0}), DimensionMismatch);
    CHECK(Multigraph::star_out(3).edge_count() == 3);
    CHECK(Multigraph::path(2).size() == 3);
    CHECK(Multigraph::complete2().is_simple_undirected());
    CHECK(parse_pattern_name("star-in:2") == Multigraph::star_in(2));
    CHECK(parse_pattern_name("K2") == Multigraph::complete2());
    CHECK_THROWS_AS(parse_pattern_name("bogus"), InvalidArgument);
}

TEST_CASE("class enumeration matches brute force") {
    for (std::size_t m = 1; m <= 3; ++m) {
        const auto classes = multigraph_classes(m);
        CHECK(classes.size() == brute_class_count(m));
        for (const auto& c : classes) CHECK(c.edge_count() == m);
    }
}

TEST_CASE("automorphisms and canonical form") {
    Rng rng(11);
    for (std::size_t m = 1; m <= 3; ++m)
        for (const Multigraph& h : multigraph_classes(m)) {
            CHECK(h.automorphism_count() == oracle::automorphisms(h));
            const Multigraph r = random_relabel(h, rng);
            CHECK(r.canonical() == h.canonical());
            CHECK(r.isomorphic_to(h));
        }
    CHECK(Multigraph::star_out(3).automorphism_count() == 6);
    CHECK(Multigraph::complete2().automorphism_count() == 2);
}

TEST_CASE("hom and inj examples") {
    const WeightedDigraph e = WeightedDigraph::from_rows({{0, 1}, {0, 0}});
    CHECK(hom_number(Multigraph::edge(), e) == 1.0);
    CHECK(inj_number(Multigraph::edge(), e) == 1.0);
    const WeightedDigraph half_identity = WeightedDigraph::from_rows({{0.5, 0}, {0, 0.5}});
    CHECK(inj_number(Multigraph::loop(), half_identity) == 1.0);
    CHECK(inj_number(Multigraph::path(3), e) == 0.0);  // k > n

    // Uniform graph: hom = n^k / n^{2‖H‖₁}.
    for (std::size_t n : {2, 3, 5}) {
        const NormalizedGraph u = normalize(WeightedDigraph(n, std::vector<double>(n * n, 1.0)));
        for (const Multigraph& h : {Multigraph::edge(), Multigraph::path(2), Multigraph::star_out(3)}) {
            const double expected = std::pow(n, static_cast<double>(h.size())) / std::pow(n, 2.0 * static_cast<double>(h.edge_count()));
            CHECK(hom_number(h, u) == doctest::Approx(expected).epsilon(1e-12));
        }
    }

    // Out-star on e₁𝟙ᵀ/n: every leaf sums a full row, so the value is 1 at each n.
    for (std::size_t n : {4, 16, 64}) {
        std::vector<double> w(n * n, 0.0);
        for (std::size_t j = 0; j < n; ++j) w[j] = 1.0 / static_cast<double>(n);
        CHECK(hom_number(Multigraph::star_out(2), WeightedDigraph(n, w)) == doctest::Approx(1.0).epsilon(1e-12));
    }

    Limits tiny;
    tiny.enumeration_cap = 10;
    CHECK_THROWS_AS(hom_number(Multigraph::path(3), WeightedDigraph(4), tiny), BudgetExceeded);
}

TEST_CASE("hom and inj against the enumeration oracle") {
    Rng rng(12);
    for (std::size_t m = 1; m <= 3; ++m)
        for (const Multigraph& h : multigraph_classes(m))
            for (std::size_t n = 1; n <= 4; ++n) {
                const NormalizedGraph g = oracle::random_graph(n, rng);
                CHECK(std::abs(hom_number(h, g) - oracle::hom(h, g, false)) <= 1e-13);
                CHECK(std::abs(inj_number(h, g) - oracle::hom(h, g, true)) <= 1e-13);
            }
}

TEST_CASE("hom is multiplicative over disjoint unions") {
    Rng rng(13);
    const NormalizedGraph g = oracle::random_graph(5, rng);
    const Multigraph a = Multigraph::path(2);
    const Multigraph b = Multigraph::loop();
    CHECK(hom_number(Multigraph::disjoint_union(a, b), g) ==
          doctest::Approx(hom_number(a, g) * hom_number(b, g)).epsilon(1e-12));
}

TEST_CASE("quotient density examples") {
    const NormalizedGraph e = NormalizedGraph::from_rows({{0, 1}, {0, 0}});
    CHECK(quotient_density_exact(Multigraph::edge(), e) == doctest::Approx(0.25).epsilon(1e-15));
    Rng rng(14);
    const NormalizedGraph g = oracle::random_graph(6, rng);
    CHECK(quotient_density_exact(Multigraph::loop(), g) == doctest::Approx(1.0).epsilon(1e-14));
    const MeanSe loop = quotient_density_mc(Multigraph::loop(), g, 100, rng);
    CHECK(loop.mean == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(loop.se <= 1e-12);

    const MeanSe mc = quotient_density_mc(Multigraph::edge(), e, 100000, rng);
    CHECK(std::abs(mc.mean - 0.25) <= 3.0 * mc.se);

    // Uniform graph tends to k^{−2‖H‖₁}.
    const Multigraph h = Multigraph::path(2);
    const double limit = std::pow(3.0, -4.0);
    double prev_gap = 1.0;
    for (std::size_t n : {4, 8, 12}) {
        const NormalizedGraph u = normalize(WeightedDigraph(n, std::vector<double>(n * n, 1.0)));
        const double gap = std::abs(quotient_density_exact(h, u) - limit);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
}

TEST_CASE("quotient density matches the literal oracle") {
    Rng rng(15);
    for (std::size_t m = 1; m <= 2; ++m)
        for (const Multigraph& h : multigraph_classes(m))
            for (std::size_t n = 1; n <= 5; ++n) {
                const NormalizedGraph g = oracle::random_graph(n, rng);
                CHECK(std::abs(quotient_density_exact(h, g) - oracle::quotient_density(h, g)) <= 1e-14);
            }
}

TEST_CASE("Monte Carlo density is consistent with the exact value") {
    Rng rng(16);
    const NormalizedGraph g = oracle::random_graph(7, rng);
    const Multigraph h = Multigraph::path(2);
    const double exact = quotient_density_exact(h, g);
    int inside = 0;
    for (int t = 0; t < 100; ++t) {
        const MeanSe mc = quotient_density_mc(h, g, 2000, rng);
        inside += std::abs(mc.mean - exact) <= 4.0 * mc.se;
    }
    CHECK(inside >= 99);
}

TEST_CASE("surjection counts and poset structure") {
    for (std::size_t m = 1; m <= 3; ++m) {
        const auto classes = multigraph_classes(m);
        for (const Multigraph& h : classes) {
            const auto refs = refinements(h);
            bool has_self = false;
            bool has_disjoint_edges = false;
            for (const auto& r : refs) {
                CHECK(r.graph.edge_count() == h.edge_count());
                CHECK(r.graph.size() >= h.size());
                CHECK(r.count == oracle::surjections(r.graph, h));
                has_self |= r.graph.isomorphic_to(h);
                has_disjoint_edges |= r.graph.size() == 2 * m;
                if (r.graph.isomorphic_to(h)) CHECK(r.count == h.automorphism_count());
            }
            CHECK(has_self);
            CHECK(has_disjoint_edges);
            // Every class with R_{K,H} > 0 appears.
            std::size_t positive = 0;
            for (const Multigraph& k : classes) positive += oracle::surjections(k, h) > 0;
            CHECK(positive == refs.size());

            const auto coars = coarsenings(h);
            bool has_bouquet = false;
            for (const auto& c : coars) {
                CHECK(c.count == oracle::surjections(h, c.graph));
                has_bouquet |= c.graph.size() == 1;
            }
            CHECK(has_bouquet);
        }
    }
    const Multigraph bouquet = Multigraph::from_rows({{2}});
    const auto only = coarsenings(bouquet);
    REQUIRE(only.size() == 1);
    CHECK(only[0].graph == bouquet);

    // Two disjoint directed edges coarsen to the 2-edge poset.
    const auto two = coarsenings(Multigraph::disjoint_union(Multigraph::edge(), Multigraph::edge()));
    auto contains = [&](const Multigraph& x) {
        for (const auto& c : two)
            if (c.graph.isomorphic_to(x)) return true;
        return false;
    };
    CHECK(contains(Multigraph::path(2)));
    CHECK(contains(Multigraph::from_rows({{0, 1}, {1, 0}})));
    CHECK(contains(Multigraph::from_rows({{0, 2}, {0, 0}})));
    CHECK(contains(bouquet));
    CHECK(contains(Multigraph::star_out(2)));
    CHECK(contains(Multigraph::star_in(2)));

    const auto dbl = refinements(Multigraph::from_rows({{0, 2}, {0, 0}}));
    bool found = false;
    for (const auto& r : dbl) found |= r.graph.size() == 4;
    CHECK(found);

    Limits cap;
    cap.poset_edge_cap = 2;
    CHECK_THROWS_AS(refinements(Multigraph::path(3), cap), BudgetExceeded);
}

TEST_CASE("conversion algebra") {
    const NormalizedGraph e = NormalizedGraph::from_rows({{0, 1}, {0, 0}});
    CHECK(tq_from_inj(Multigraph::edge(), e) == doctest::Approx(0.25).epsilon(1e-14));
    Rng rng(17);
    const NormalizedGraph g = oracle::random_graph(4, rng);
    CHECK(tq_from_inj(Multigraph::loop(), g) == doctest::Approx(1.0).epsilon(1e-14));

    // One edge: hom = inj(edge) + inj(loop) on I₂/2.
    const NormalizedGraph id = NormalizedGraph::from_rows({{0.5, 0}, {0, 0.5}});
    CHECK(hom_from_inj(Multigraph::edge(), id) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(inj_number(Multigraph::edge(), id) + inj_number(Multigraph::loop(), id) == 1.0);

    for (std::size_t m = 1; m <= 3; ++m)
        for (const Multigraph& h : multigraph_classes(m)) {
            const auto refs = refinements(h);
            for (int t = 0; t < 5; ++t) {
                const NormalizedGraph x = oracle::random_graph(1 + uniform_index(rng, 4), rng);
                CHECK(std::abs(tq_from_inj(h, refs, x) - oracle::quotient_density(h, x)) <= 1e-10);
                CHECK(std::abs(hom_from_inj(h, x) - oracle::hom(h, x, false)) <= 1e-10);
                CHECK(std::abs(inj_from_tq(h, x) - oracle::hom(h, x, true)) <= 1e-9);
            }
        }
}

TEST_CASE("isomorphism invariance") {
    Rng rng(18);
    for (int t = 0; t < 10; ++t) {
        const NormalizedGraph g = oracle::random_graph(5, rng);
        const NormalizedGraph pg(permute(g, random_permutation(5, rng)));
        for (const Multigraph& h : multigraph_classes(2)) {
            const Multigraph rh = random_relabel(h, rng);
            CHECK(hom_number(rh, pg) == doctest::Approx(hom_number(h, g)).epsilon(1e-12));
            CHECK(quotient_density_exact(rh, pg) == doctest::Approx(quotient_density_exact(h, g)).epsilon(1e-12));
            CHECK(tq_from_inj(rh, pg) == doctest::Approx(tq_from_inj(h, g)).epsilon(1e-12));
        }
    }
}

TEST_CASE("normalized homomorphism on simple graphs") {
    auto complete = [](std::size_t n) {
        std::vector<double> w(n * n, 1.0);
        for (std::size_t i = 0; i < n; ++i) w[i * n + i] = 0.0;
        return WeightedDigraph(n, w);
    };
    const Multigraph k2 = Multigraph::complete2();
    Rng rng(19);
    for (int t = 0; t < 10; ++t) {
        const std::size_t n = 3 + uniform_index(rng, 5);
        std::vector<double> w(n * n, 0.0);
        w[1] = w[n] = 1.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (uniform01(rng) < 0.5) w[i * n + j] = w[j * n + i] = 1.0;
        const WeightedDigraph s(n, w);
        CHECK(normalized_hom_simple(k2, s) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(normalized_hom_simple(Multigraph::disjoint_union(k2, k2), s) == doctest::Approx(1.0).epsilon(1e-14));
    }
    const Multigraph p3 = Multigraph::from_rows({{0, 1, 0}, {1, 0, 1}, {0, 1, 0}});
    double prev = 2.0;
    for (std::size_t n : {4, 8, 16, 32}) {
        const double v = normalized_hom_simple(p3, complete(n));
        CHECK(v < prev);
        prev = v;
    }
    CHECK(prev < 0.05);
    CHECK_THROWS_AS(normalized_hom_simple(Multigraph::edge(), complete(3)), NotSimple);
    CHECK_THROWS_AS(normalized_hom_simple(k2, WeightedDigraph::from_rows({{0, 1}, {0, 0}})), NotSimple);
}
