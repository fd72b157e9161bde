#include "qlim/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qlim/errors.hpp"
#include "qlim/summation.hpp"

namespace qlim {

namespace {

void check_weight(double w) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
        throw InvalidArgument("edge weights must be finite and nonnegative");
    }
}

}  // namespace

WeightedDigraph::WeightedDigraph(std::size_t n) : n_(n) {
    if (n == 0) throw InvalidArgument("graph needs at least one vertex");
    if (n <= kDenseLimit) dense_.assign(n * n, 0.0);
}

WeightedDigraph::WeightedDigraph(std::size_t n, std::vector<double> row_major) : n_(n) {
    if (n == 0) throw InvalidArgument("graph needs at least one vertex");
    if (row_major.size() != n * n) throw DimensionMismatch("weights must have n*n entries");
    for (double w : row_major) check_weight(w);
    if (n <= kDenseLimit) {
        dense_ = std::move(row_major);
    } else {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (row_major[i * n + j] != 0.0) sparse_.push_back({i, j, row_major[i * n + j]});
    }
}

WeightedDigraph WeightedDigraph::from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t n = rows.size();
    std::vector<double> flat;
    flat.reserve(n * n);
    for (const auto& r : rows) {
        if (r.size() != n) throw DimensionMismatch("adjacency matrix must be square");
        flat.insert(flat.end(), r.begin(), r.end());
    }
    return WeightedDigraph(n, std::move(flat));
}

WeightedDigraph WeightedDigraph::from_entries(std::size_t n, std::vector<Entry> entries) {
    if (n == 0) throw InvalidArgument("graph needs at least one vertex");
    for (const Entry& e : entries) {
        if (e.row >= n || e.col >= n) throw DimensionMismatch("entry index out of range");
        check_weight(e.weight);
    }
    WeightedDigraph g;
    g.n_ = n;
    if (n <= kDenseLimit) {
        g.dense_.assign(n * n, 0.0);
        for (const Entry& e : entries) g.dense_[e.row * n + e.col] += e.weight;
        return g;
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    for (const Entry& e : entries) {
        if (!g.sparse_.empty() && g.sparse_.back().row == e.row && g.sparse_.back().col == e.col) {
            g.sparse_.back().weight += e.weight;
        } else {
            g.sparse_.push_back(e);
        }
    }
    std::erase_if(g.sparse_, [](const Entry& e) { return e.weight == 0.0; });
    return g;
}

double WeightedDigraph::operator()(std::size_t i, std::size_t j) const {
    if (!dense_.empty()) return dense_[i * n_ + j];
    auto it = std::lower_bound(sparse_.begin(), sparse_.end(), std::make_pair(i, j),
                               [](const Entry& e, const std::pair<std::size_t, std::size_t>& key) {
                                   return e.row != key.first ? e.row < key.first : e.col < key.second;
                               });
    if (it != sparse_.end() && it->row == i && it->col == j) return it->weight;
    return 0.0;
}

double WeightedDigraph::total_weight() const {
    CompensatedSum s;
    for_each_nonzero([&](std::size_t, std::size_t, double w) { s.add(w); });
    return s.value();
}

double WeightedDigraph::trace() const {
    CompensatedSum s;
    for_each_nonzero([&](std::size_t i, std::size_t j, double w) {
        if (i == j) s.add(w);
    });
    return s.value();
}

std::vector<double> WeightedDigraph::row_sums() const {
    std::vector<double> r(n_, 0.0);
    for_each_nonzero([&](std::size_t i, std::size_t, double w) { r[i] += w; });
    return r;
}

std::vector<double> WeightedDigraph::col_sums() const {
    std::vector<double> c(n_, 0.0);
    for_each_nonzero([&](std::size_t, std::size_t j, double w) { c[j] += w; });
    return c;
}

std::size_t WeightedDigraph::nonzero_count() const {
    std::size_t count = 0;
    for_each_nonzero([&](std::size_t, std::size_t, double) { ++count; });
    return count;
}

std::vector<Entry> WeightedDigraph::entries() const {
    std::vector<Entry> out;
    for_each_nonzero([&](std::size_t i, std::size_t j, double w) { out.push_back({i, j, w}); });
    return out;
}

std::vector<double> WeightedDigraph::to_dense() const {
    if (!dense_.empty()) return dense_;
    if (n_ > kDenseLimit) throw BudgetExceeded("graph too large for a dense copy");
    std::vector<double> out(n_ * n_, 0.0);
    for (const Entry& e : sparse_) out[e.row * n_ + e.col] = e.weight;
    return out;
}

std::vector<std::vector<double>> WeightedDigraph::to_rows() const {
    const std::vector<double> flat = to_dense();
    std::vector<std::vector<double>> rows(n_);
    for (std::size_t i = 0; i < n_; ++i)
        rows[i].assign(flat.begin() + static_cast<std::ptrdiff_t>(i * n_),
                       flat.begin() + static_cast<std::ptrdiff_t>((i + 1) * n_));
    return rows;
}

bool WeightedDigraph::operator==(const WeightedDigraph& other) const {
    if (n_ != other.n_) return false;
    const auto a = entries();
    const auto b = other.entries();
    if (a.size() != b.size()) return false;
    for (std::size_t t = 0; t < a.size(); ++t) {
        if (a[t].row != b[t].row || a[t].col != b[t].col || a[t].weight != b[t].weight) return false;
    }
    return true;
}

WeightedDigraph NormalizedGraph::checked(WeightedDigraph g) {
    const double total = g.total_weight();
    const double drift = std::abs(total - 1.0);
    if (drift <= kTolerance) return g;
    if (drift > kRenormalizeLimit) {
        throw InvalidArgument("graph is not normalized (total weight " + std::to_string(total) + ")");
    }
    auto entries = g.entries();
    for (Entry& e : entries) e.weight /= total;
    return WeightedDigraph::from_entries(g.size(), std::move(entries));
}

NormalizedGraph::NormalizedGraph(WeightedDigraph g) : WeightedDigraph(checked(std::move(g))) {}

NormalizedGraph NormalizedGraph::from_rows(const std::vector<std::vector<double>>& rows) {
    return NormalizedGraph(WeightedDigraph::from_rows(rows));
}

NormalizedGraph normalize(const WeightedDigraph& g) {
    const double total = g.total_weight();
    if (total <= 0.0) throw ZeroGraph();
    auto entries = g.entries();
    for (Entry& e : entries) e.weight /= total;
    return NormalizedGraph(WeightedDigraph::from_entries(g.size(), std::move(entries)));
}

PartitionMap::PartitionMap(std::size_t k, std::vector<std::uint32_t> images)
    : k_(k), images_(std::move(images)) {
    if (k == 0) throw InvalidArgument("partition map needs k >= 1");
    if (images_.empty()) throw InvalidArgument("partition map needs n >= 1");
    for (std::uint32_t v : images_)
        if (v >= k) throw InvalidArgument("partition map image out of range");
}

std::vector<std::size_t> PartitionMap::fiber_sizes() const {
    std::vector<std::size_t> sizes(k_, 0);
    for (std::uint32_t v : images_) ++sizes[v];
    return sizes;
}

bool PartitionMap::is_surjective() const {
    for (std::size_t s : fiber_sizes())
        if (s == 0) return false;
    return true;
}

PartitionMap compose(const PartitionMap& g, const PartitionMap& f) {
    if (f.codomain_size() != g.domain_size()) throw DimensionMismatch("maps are not composable");
    std::vector<std::uint32_t> images(f.domain_size());
    for (std::size_t i = 0; i < images.size(); ++i) images[i] = g(f(i));
    return PartitionMap(g.codomain_size(), std::move(images));
}

WeightedDigraph quotient(const WeightedDigraph& g, const PartitionMap& f) {
    if (f.domain_size() != g.size()) throw DimensionMismatch("partition map domain differs from graph size");
    const std::size_t k = f.codomain_size();
    if (k <= WeightedDigraph::kDenseLimit) {
        std::vector<double> out(k * k, 0.0);
        g.for_each_nonzero([&](std::size_t i, std::size_t j, double w) { out[f(i) * k + f(j)] += w; });
        return WeightedDigraph(k, std::move(out));
    }
    std::vector<Entry> out;
    g.for_each_nonzero([&](std::size_t i, std::size_t j, double w) { out.push_back({f(i), f(j), w}); });
    return WeightedDigraph::from_entries(k, std::move(out));
}

NormalizedGraph quotient(const NormalizedGraph& g, const PartitionMap& f) {
    return NormalizedGraph(quotient(static_cast<const WeightedDigraph&>(g), f));
}

PartitionMap random_partition_map(std::size_t n, std::size_t k, Rng& rng) {
    if (n == 0 || k == 0) throw InvalidArgument("random_partition_map needs n, k >= 1");
    std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(k - 1));
    std::vector<std::uint32_t> images(n);
    for (auto& v : images) v = pick(rng);
    return PartitionMap(k, std::move(images));
}

PartitionMap equipartition_map(std::size_t k, std::size_t N) {
    if (k == 0 || N == 0) throw InvalidArgument("equipartition_map needs k, N >= 1");
    if (N % k != 0) throw NotDivisible(k, N);
    const std::size_t block = N / k;
    std::vector<std::uint32_t> images(N);
    for (std::size_t i = 0; i < N; ++i) images[i] = static_cast<std::uint32_t>(i / block);
    return PartitionMap(k, std::move(images));
}

PartitionMap random_equipartition_map(std::size_t k, std::size_t N, Rng& rng) {
    PartitionMap canonical = equipartition_map(k, N);
    std::vector<std::uint32_t> images = canonical.images();
    std::shuffle(images.begin(), images.end(), rng);
    return PartitionMap(k, std::move(images));
}

std::vector<std::size_t> random_permutation(std::size_t n, Rng& rng) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    return perm;
}

WeightedDigraph permute(const WeightedDigraph& g, const std::vector<std::size_t>& perm) {
    const std::size_t n = g.size();
    if (perm.size() != n) throw DimensionMismatch("permutation length differs from graph size");
    std::vector<bool> seen(n, false);
    for (std::size_t p : perm) {
        if (p >= n || seen[p]) throw InvalidArgument("not a permutation");
        seen[p] = true;
    }
    std::vector<Entry> out;
    g.for_each_nonzero([&](std::size_t i, std::size_t j, double w) { out.push_back({perm[i], perm[j], w}); });
    return WeightedDigraph::from_entries(n, std::move(out));
}

NormalizedGraph permute(const NormalizedGraph& g, const std::vector<std::size_t>& perm) {
    return NormalizedGraph(permute(static_cast<const WeightedDigraph&>(g), perm));
}

WeightedDigraph symmetrize(const WeightedDigraph& g) {
    std::vector<Entry> out;
    g.for_each_nonzero([&](std::size_t i, std::size_t j, double w) {
        out.push_back({i, j, 0.5 * w});
        out.push_back({j, i, 0.5 * w});
    });
    return WeightedDigraph::from_entries(g.size(), std::move(out));
}

WeightedDigraph transpose(const WeightedDigraph& g) {
    std::vector<Entry> out;
    g.for_each_nonzero([&](std::size_t i, std::size_t j, double w) { out.push_back({j, i, w}); });
    return WeightedDigraph::from_entries(g.size(), std::move(out));
}

StrippedGraph strip_isolated(const WeightedDigraph& g) {
    const std::size_t n = g.size();
    std::vector<bool> touched(n, false);
    g.for_each_nonzero([&](std::size_t i, std::size_t j, double) {
        touched[i] = true;
        touched[j] = true;
    });
    std::vector<std::size_t> kept;
    std::vector<std::size_t> relabel(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (touched[i]) {
            relabel[i] = kept.size();
            kept.push_back(i);
        }
    }
    if (kept.empty()) throw ZeroGraph();
    std::vector<Entry> out;
    g.for_each_nonzero([&](std::size_t i, std::size_t j, double w) { out.push_back({relabel[i], relabel[j], w}); });
    return {WeightedDigraph::from_entries(kept.size(), std::move(out)), std::move(kept)};
}

WeightedDigraph pad_isolated(const WeightedDigraph& g, std::size_t extra) {
    return WeightedDigraph::from_entries(g.size() + extra, g.entries());
}

}  // namespace qlim
