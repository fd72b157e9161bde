#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qlim/rng.hpp"

namespace qlim {

struct Entry {
    std::size_t row = 0;
    std::size_t col = 0;
    double weight = 0.0;
};

// Nonnegative n×n weight matrix. Dense row-major storage up to kDenseLimit vertices,
// sorted coordinate list above. Both layouts answer the same queries.
class WeightedDigraph {
public:
    static constexpr std::size_t kDenseLimit = 4096;

    explicit WeightedDigraph(std::size_t n);
    WeightedDigraph(std::size_t n, std::vector<double> row_major);
    static WeightedDigraph from_rows(const std::vector<std::vector<double>>& rows);
    // Duplicate coordinates are summed.
    static WeightedDigraph from_entries(std::size_t n, std::vector<Entry> entries);

    std::size_t size() const { return n_; }
    bool is_dense() const { return !dense_.empty() || n_ == 0; }
    double operator()(std::size_t i, std::size_t j) const;

    double total_weight() const;
    double trace() const;
    std::vector<double> row_sums() const;
    std::vector<double> col_sums() const;
    std::size_t nonzero_count() const;
    std::vector<Entry> entries() const;
    std::vector<std::vector<double>> to_rows() const;
    // Row-major n*n copy; BudgetExceeded for sparse graphs beyond kDenseLimit.
    std::vector<double> to_dense() const;

    template <class F>
    void for_each_nonzero(F&& f) const {
        if (!dense_.empty()) {
            for (std::size_t i = 0; i < n_; ++i) {
                const double* row = dense_.data() + i * n_;
                for (std::size_t j = 0; j < n_; ++j) {
                    if (row[j] != 0.0) f(i, j, row[j]);
                }
            }
        } else {
            for (const Entry& e : sparse_) f(e.row, e.col, e.weight);
        }
    }

    bool operator==(const WeightedDigraph& other) const;

private:
    WeightedDigraph() = default;
    void validate() const;

    std::size_t n_ = 0;
    std::vector<double> dense_;
    std::vector<Entry> sparse_;  // sorted by (row, col), no zeros
};

// Entries sum to 1 within 1e-12. Inputs that drift by at most 1e-9 are renormalized.
class NormalizedGraph : public WeightedDigraph {
public:
    static constexpr double kTolerance = 1e-12;
    static constexpr double kRenormalizeLimit = 1e-9;

    explicit NormalizedGraph(WeightedDigraph g);
    static NormalizedGraph from_rows(const std::vector<std::vector<double>>& rows);

private:
    static WeightedDigraph checked(WeightedDigraph g);
};

NormalizedGraph normalize(const WeightedDigraph& g);

// Map [n] -> [k]; images are 0-based.
class PartitionMap {
public:
    PartitionMap(std::size_t k, std::vector<std::uint32_t> images);

    std::size_t domain_size() const { return images_.size(); }
    std::size_t codomain_size() const { return k_; }
    std::uint32_t operator()(std::size_t i) const { return images_[i]; }
    const std::vector<std::uint32_t>& images() const { return images_; }
    std::vector<std::size_t> fiber_sizes() const;
    bool is_surjective() const;

private:
    std::size_t k_;
    std::vector<std::uint32_t> images_;
};

// g ∘ f
PartitionMap compose(const PartitionMap& g, const PartitionMap& f);

WeightedDigraph quotient(const WeightedDigraph& g, const PartitionMap& f);
NormalizedGraph quotient(const NormalizedGraph& g, const PartitionMap& f);

PartitionMap random_partition_map(std::size_t n, std::size_t k, Rng& rng);
// Contiguous blocks of size N/k.
PartitionMap equipartition_map(std::size_t k, std::size_t N);
// Uniformly random map with all fibers of size N/k.
PartitionMap random_equipartition_map(std::size_t k, std::size_t N, Rng& rng);

// perm[i] is the new label of vertex i: (πG)(perm[i], perm[j]) = G(i, j).
WeightedDigraph permute(const WeightedDigraph& g, const std::vector<std::size_t>& perm);
NormalizedGraph permute(const NormalizedGraph& g, const std::vector<std::size_t>& perm);
std::vector<std::size_t> random_permutation(std::size_t n, Rng& rng);

WeightedDigraph symmetrize(const WeightedDigraph& g);
WeightedDigraph transpose(const WeightedDigraph& g);

struct StrippedGraph {
    WeightedDigraph graph;
    std::vector<std::size_t> kept;  // original 0-based indices, increasing
};
// Removes vertices with zero row sum, zero column sum and zero self-loop.
StrippedGraph strip_isolated(const WeightedDigraph& g);
WeightedDigraph pad_isolated(const WeightedDigraph& g, std::size_t extra);

}  // namespace qlim
