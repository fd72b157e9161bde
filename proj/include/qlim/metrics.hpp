#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "qlim/grapheur.hpp"
#include "qlim/measure.hpp"
#include "qlim/rng.hpp"
#include "qlim/summation.hpp"

namespace qlim {

inline constexpr std::size_t kRectDiscrepancyCap = 5000;
inline constexpr std::size_t kTransportCap = 1000;

// sup over closed axis-aligned rectangles R of |μ1(R) − μ2(R)|.
double rect_discrepancy(const AtomicMeasure2D& mu1, const AtomicMeasure2D& mu2,
                        std::size_t cap = kRectDiscrepancyCap);

namespace serial {
double rect_discrepancy(const AtomicMeasure2D& mu1, const AtomicMeasure2D& mu2,
                        std::size_t cap = kRectDiscrepancyCap);
}  // namespace serial

// Minimum-cost perfect matching on a square cost matrix (row-major). Returns the total cost.
double assignment_cost(const std::vector<double>& cost, std::size_t n);

double l1_distance(const WeightedDigraph& a, const WeightedDigraph& b);

using GraphSampler = std::function<NormalizedGraph(Rng&)>;

struct W1Estimate {
    double estimate = 0.0;
    double se = 0.0;
};

// Empirical W1 between two laws of k×k graphs with entrywise ℓ1 ground cost.
W1Estimate w1_random_graphs(const GraphSampler& a, const GraphSampler& b, std::size_t k, std::size_t n_samples,
                            Rng& rng);

struct BracketDiagnostic {
    std::size_t k = 0;
    double w1 = 0.0;
    double se = 0.0;
    double self_a = 0.0;  // W1 between two independent clouds of the first law
    double self_b = 0.0;
    double lower = 0.0;
    double upper = 0.0;
};

struct DistanceBracket {
    double lower = 0.0;
    double upper = 2.0;
    std::vector<BracketDiagnostic> per_k;
};

DistanceBracket w_square_bracket(const Grapheur& m1, const Grapheur& m2, const std::vector<std::size_t>& ks,
                                 std::size_t n_samples, Rng& rng);

// Location-sharing coupling: index i of both grapheurs uses the same T_i.
// grid == 0 requires atomic grapheurs.
MeanSe w_square_upper_coupled(const Grapheur& m1, const Grapheur& m2, std::size_t n_trials, Rng& rng,
                              std::size_t grid = 0);

}  // namespace qlim
