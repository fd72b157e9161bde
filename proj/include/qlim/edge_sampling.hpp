#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qlim/grapheur.hpp"
#include "qlim/graph.hpp"
#include "qlim/rng.hpp"

namespace qlim {

enum class EdgeComponent { Atom, Row, Col, Uniform, Diagonal };

const char* to_string(EdgeComponent c);

struct SampledEdge {
    double x = 0.0;
    double y = 0.0;
    std::size_t source = 0;  // vertex of EdgeSample::graph
    std::size_t target = 0;
    EdgeComponent component = EdgeComponent::Atom;
    std::size_t i = 0;  // grapheur index (atom/row), or graph vertex for graph samples
    std::size_t j = 0;  // grapheur index (atom/col), or graph vertex for graph samples
};

struct EdgeSample {
    std::vector<SampledEdge> edges;
    NormalizedGraph graph;  // vertices in first-appearance order, weights = multiplicity / n
    std::vector<std::size_t> origin;  // graph samples: original vertex of each sampled vertex
};

EdgeSample sample_edges_from_graph(const WeightedDigraph& g, std::size_t n, Rng& rng);
EdgeSample sample_edges_from_grapheur(const Grapheur& m, std::size_t n, Rng& rng);

// sup-rectangle distance between one realization μ and the empirical measure of n iid points of μ.
// grid == 0 requires an atomic grapheur.
double coupled_rect_discrepancy_trial(const Grapheur& m, std::size_t n, Rng& rng, std::size_t grid = 0);

// ⌈(174/ε)²⌉
std::uint64_t szemeredi_edge_count(double epsilon);

struct SzemerediApproximant {
    NormalizedGraph graph;
    double discrepancy = 0.0;
    std::uint64_t edges = 0;
};

SzemerediApproximant szemeredi_approximant(const Grapheur& m, double epsilon, std::size_t trials, Rng& rng,
                                           std::size_t grid = 0);

struct DiscrepancyRow {
    std::size_t n = 0;
    double mean = 0.0;
    double std = 0.0;
    double bound = 0.0;  // 174 / sqrt(n)
    std::vector<double> values;
};

std::vector<DiscrepancyRow> discrepancy_experiment(const Grapheur& m, const std::vector<std::size_t>& ns,
                                                   std::size_t trials, Rng& rng, std::size_t grid = 0);

}  // namespace qlim
