#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qlim/grapheur.hpp"
#include "qlim/graph.hpp"
#include "qlim/rng.hpp"

namespace qlim {

// Random graph model: draws a normalized graph on `size` vertices.
using ModelSampler = std::function<NormalizedGraph(std::size_t size, Rng& rng)>;

ModelSampler grapheur_model(const Grapheur& m);
// Each row carries mass 1/size on one uniformly chosen column, independently across rows.
ModelSampler independent_rows_model();

// All k×k count matrices with total between 1 and max_degree, as moment patterns.
std::vector<std::vector<std::uint32_t>> moment_patterns(std::size_t k, std::uint32_t max_degree = 2);

// (m1 − m2) / √(se1² + se2²). Zero when |m1 − m2| ≤ 1e-12; infinite for other differences with zero SE.
double two_sample_z(double m1, double se1, double m2, double se2);

struct MomentComparison {
    std::vector<std::uint32_t> pattern;
    std::string map;  // "canonical" or "random"
    double direct_mean = 0.0;
    double direct_se = 0.0;
    double quotient_mean = 0.0;
    double quotient_se = 0.0;
    double z = 0.0;
};

struct EqpReport {
    std::size_t k = 0;
    std::size_t n = 0;
    std::size_t samples = 0;
    double max_abs_z = 0.0;
    std::vector<MomentComparison> moments;
};

EqpReport check_equipartition_consistency(const ModelSampler& model, std::size_t k, std::size_t n,
                                          std::size_t n_samples, Rng& rng);
EqpReport check_equipartition_consistency(const Grapheur& m, std::size_t k, std::size_t n, std::size_t n_samples,
                                          Rng& rng);

// One location draw shared by every k.
std::vector<NormalizedGraph> nested_quotient_sequence(const Grapheur& m, const std::vector<std::size_t>& ks, Rng& rng);

// E M(R) for R = [x0,x1]×[y0,y1] from the mean form θ′λ² + (1−θ′)λ_D.
double expected_rect_mass(const Grapheur& m, double x0, double x1, double y0, double y1);

struct DivergenceReport {
    std::size_t k_max = 0;
    std::vector<std::size_t> collision_ks;  // k with both atoms in one cell
    std::size_t collisions = 0;
    double expected = 0.0;  // Σ_{k≤k_max} 1/k
    double sd = 0.0;        // √Σ (1/k)(1 − 1/k)
    double z = 0.0;
    bool within_3sigma = false;
    double mean_gap = 0.0;                  // |E M_diag(R) − E M(R)| with R = [0,½]×[½,1]
    double realization_discrepancy = 0.0;   // rect discrepancy, collided vs split realization
};

DivergenceReport independent_sampling_divergence_demo(std::size_t k_max, Rng& rng);

struct MeanMatrixReport {
    std::size_t k = 0;
    std::size_t k_other = 0;
    double theta = 0.0;
    double theta_other = 0.0;
    double theta_z = 0.0;
    double max_offdiag_z = 0.0;
    double max_diag_z = 0.0;
    bool passed = false;
};

// Checks constant off-diagonal and diagonal means at k, and a k-independent θ against k + 1.
MeanMatrixReport mean_matrix_check(const ModelSampler& model, std::size_t k, std::size_t n_samples, Rng& rng);

}  // namespace qlim
