#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qlim/graph.hpp"
#include "qlim/rng.hpp"
#include "qlim/summation.hpp"

namespace qlim {

// Enumeration limits. Exceeding one raises BudgetExceeded.
struct Limits {
    std::uint64_t enumeration_cap = 100'000'000;  // maps or monomials per enumeration
    std::size_t poset_edge_cap = 4;               // edges for refinement-poset operations
};

// Pattern multigraph: k×k nonnegative integer counts, at least one edge, no isolated vertex.
class Multigraph {
public:
    Multigraph(std::size_t k, std::vector<std::uint32_t> counts);
    static Multigraph from_rows(const std::vector<std::vector<std::uint32_t>>& rows);

    static Multigraph edge();
    static Multigraph loop();
    static Multigraph star_out(std::size_t leaves);
    static Multigraph star_in(std::size_t leaves);
    static Multigraph complete2();  // undirected K2 as the symmetric pair of directed edges
    static Multigraph path(std::size_t edges);  // directed path
    static Multigraph disjoint_union(const Multigraph& a, const Multigraph& b);

    std::size_t size() const { return k_; }
    std::uint32_t operator()(std::size_t i, std::size_t j) const { return counts_[i * k_ + j]; }
    const std::vector<std::uint32_t>& counts() const { return counts_; }
    std::uint64_t edge_count() const;
    std::uint32_t max_count() const;
    double factorial_product() const;  // Π_{i,j} H_ij!
    bool is_simple_undirected() const;

    // Canonical representative of the isomorphism class.
    Multigraph canonical() const;
    std::vector<std::uint32_t> canonical_key() const;
    std::uint64_t automorphism_count() const;
    bool isomorphic_to(const Multigraph& other) const;

    bool operator==(const Multigraph& other) const { return k_ == other.k_ && counts_ == other.counts_; }
    std::string to_string() const;

private:
    std::size_t k_;
    std::vector<std::uint32_t> counts_;
};

// Value of the monomial Π Q_ij^{H_ij} on a k×k matrix stored row-major.
double monomial(const std::vector<std::uint32_t>& pattern, const std::vector<double>& q);
double monomial(const Multigraph& h, const WeightedDigraph& q);

double hom_number(const Multigraph& h, const WeightedDigraph& g, const Limits& limits = {});
double inj_number(const Multigraph& h, const WeightedDigraph& g, const Limits& limits = {});
// Density over all k^n maps [n] -> [k], k = |V(H)|.
double quotient_density_exact(const Multigraph& h, const NormalizedGraph& g, const Limits& limits = {});
MeanSe quotient_density_mc(const Multigraph& h, const NormalizedGraph& g, std::size_t samples, Rng& rng);

// Single-threaded reference kernels, kept for cross-checking the parallel ones.
namespace serial {
double hom_number(const Multigraph& h, const WeightedDigraph& g);
double quotient_density_exact(const Multigraph& h, const NormalizedGraph& g);
}  // namespace serial

struct RelatedPattern {
    Multigraph graph;
    std::uint64_t count;  // R_{K,H} for refinements, R_{H,K} for coarsenings
};

// Number of surjections f: V(K) -> V(H) with ρ(f)K = H.
std::uint64_t surjection_count(const Multigraph& k, const Multigraph& h);
// All isomorphism classes with exactly `edges` edges, canonical form.
std::vector<Multigraph> multigraph_classes(std::size_t edges, const Limits& limits = {});
std::vector<RelatedPattern> coarsenings(const Multigraph& h);
std::vector<RelatedPattern> refinements(const Multigraph& h, const Limits& limits = {});

// Coefficient of inj(K;G) in the expansion of t_Q(H;G); zero unless K refines H.
double tq_inj_coefficient(const Multigraph& h, const Multigraph& k, std::uint64_t r_kh);

double tq_from_inj(const Multigraph& h, const WeightedDigraph& g, const Limits& limits = {});
// Same, with the refinement list precomputed by refinements(h).
double tq_from_inj(const Multigraph& h, const std::vector<RelatedPattern>& refinement_list,
                   const WeightedDigraph& g, const Limits& limits = {});
double hom_from_inj(const Multigraph& h, const WeightedDigraph& g, const Limits& limits = {});

using DensityOracle = std::function<double(const Multigraph&)>;
// Solves the triangular system t_Q(A) = Σ_{B ≤_R A} c(A,B) inj(B) over the refinements of h.
double inj_from_tq(const Multigraph& h, const DensityOracle& tq, const Limits& limits = {});
double inj_from_tq(const Multigraph& h, const NormalizedGraph& g, const Limits& limits = {});

// hom(H;G) / (1ᵀG1)^{|E(H)|} for simple undirected H and G; 1ᵀG1 = 2|E(G)|.
double normalized_hom_simple(const Multigraph& h, const WeightedDigraph& g, const Limits& limits = {});

// Named shortcuts: edge, loop, K2, star-out:m, star-in:m, path:m.
Multigraph parse_pattern_name(const std::string& name);

}  // namespace qlim
