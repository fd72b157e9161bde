#pragma once

#include <cstddef>
#include <vector>

#include "qlim/combinatorics.hpp"
#include "qlim/graph.hpp"
#include "qlim/measure.hpp"
#include "qlim/rng.hpp"
#include "qlim/summation.hpp"

namespace qlim {

// Finite truncation of (E, sigma, varsigma, theta, vartheta) with unit total mass.
// E is stored square (m×m) because rows and columns share the location sequence.
class Grapheur {
public:
    static constexpr double kMassTolerance = 1e-9;
    static constexpr double kDefaultFloor = 1e-9;
    static constexpr double kEqualityTolerance = 1e-9;

    // Validates and pads to square; mass drift up to kMassTolerance is renormalized. No reordering.
    static Grapheur from_parameters(const std::vector<std::vector<double>>& e, std::vector<double> sigma,
                                    std::vector<double> varsigma, double theta, double vartheta);
    static Grapheur uniform(double theta, double vartheta);

    // Moves mass below `floor` into theta, drops empty indices, sorts indices by
    // (out-mass, in-mass, sigma, varsigma, E_ii) descending. Small tie groups are
    // resolved by maximizing E row-major.
    Grapheur canonicalize(double floor = kDefaultFloor) const;

    std::size_t size() const { return m_; }
    double e(std::size_t i, std::size_t j) const { return e_[i * m_ + j]; }
    double sigma(std::size_t i) const { return sigma_[i]; }
    double varsigma(std::size_t i) const { return varsigma_[i]; }
    double theta() const { return theta_; }
    double vartheta() const { return vartheta_; }
    const std::vector<double>& edge_weights() const { return e_; }
    const std::vector<double>& sigmas() const { return sigma_; }
    const std::vector<double>& varsigmas() const { return varsigma_; }

    double out_mass(std::size_t i) const;  // row sum of E plus sigma_i
    double in_mass(std::size_t i) const;   // column sum of E plus varsigma_i
    double continuous_mass() const;        // sigma + varsigma + theta + vartheta
    bool is_atomic() const { return continuous_mass() == 0.0; }
    std::vector<std::vector<double>> e_rows() const;

private:
    Grapheur() = default;
    std::size_t m_ = 0;
    std::vector<double> e_;
    std::vector<double> sigma_;
    std::vector<double> varsigma_;
    double theta_ = 0.0;
    double vartheta_ = 0.0;
};

// ℓ∞ distance between parameters after canonicalization, minimized over index
// matchings when the dimension is at most 7.
double parameter_distance(const Grapheur& a, const Grapheur& b);
bool approx_equal(const Grapheur& a, const Grapheur& b, double tol = Grapheur::kEqualityTolerance);

Grapheur from_graph(const NormalizedGraph& g);

struct MeasureRealization {
    Grapheur grapheur;
    std::vector<double> locations;  // T_i for each index, pairwise distinct
};

// iid uniform points of [0,1), redrawn until pairwise distinct.
std::vector<double> sample_locations(std::size_t count, Rng& rng);
MeasureRealization sample_realization(const Grapheur& m, Rng& rng);
// Atoms of the realization. grid == 0 requires an atomic grapheur; grid > 0 spreads the
// continuous components over cell centres of a grid×grid lattice.
AtomicMeasure2D realization_measure(const MeasureRealization& r, std::size_t grid = 0);

NormalizedGraph grid_quotient_from_locations(const Grapheur& m, const std::vector<double>& locations, std::size_t k);
NormalizedGraph grid_quotient_sample(const Grapheur& m, std::size_t k, Rng& rng);
WeightedDigraph grid_quotient_mean(const Grapheur& m, std::size_t k);

// Monte Carlo estimate with k = |V(H)|.
MeanSe grapheur_density(const Grapheur& m, const Multigraph& h, std::size_t samples, Rng& rng);
// Exact expectation by enumerating the k^m cell assignments of the indices.
double grapheur_density_exact(const Grapheur& m, const Multigraph& h, const Limits& limits = {});

NormalizedGraph approx_sequence(const Grapheur& m, std::size_t n);
Grapheur estimate_grapheur(const NormalizedGraph& g, double edge_threshold, double degree_threshold);

bool hub_free(const Grapheur& m);
double hub_statistic_limit(const Grapheur& m);

// Samples of <G2, G_k[M]> with k = |V(G2)|; M must be symmetric with vartheta = 0.
std::vector<double> pair_with_step_graphon(const Grapheur& m, const WeightedDigraph& g2, std::size_t samples,
                                           Rng& rng);

}  // namespace qlim
