#include "qlim/combinatorics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>

#include "qlim/errors.hpp"

namespace qlim {

namespace {

// base^exp, saturating at cap + 1.
std::uint64_t saturating_power(std::uint64_t base, std::uint64_t exp, std::uint64_t cap) {
    std::uint64_t r = 1;
    for (std::uint64_t t = 0; t < exp; ++t) {
        if (base != 0 && r > (cap + 1) / base) return cap + 1;
        r *= base;
        if (r > cap) return cap + 1;
    }
    return r;
}

std::uint64_t saturating_falling(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
    std::uint64_t r = 1;
    for (std::uint64_t t = 0; t < k; ++t) {
        const std::uint64_t f = n - t;
        if (f != 0 && r > (cap + 1) / f) return cap + 1;
        r *= f;
        if (r > cap) return cap + 1;
    }
    return r;
}

double int_power(double x, std::uint32_t c) {
    double r = 1.0;
    for (std::uint32_t t = 0; t < c; ++t) r *= x;
    return r;
}

struct PatternEdge {
    std::size_t i;
    std::size_t j;
    std::uint32_t count;
};

std::vector<PatternEdge> pattern_edges(const Multigraph& h) {
    std::vector<PatternEdge> out;
    for (std::size_t i = 0; i < h.size(); ++i)
        for (std::size_t j = 0; j < h.size(); ++j)
            if (h(i, j) > 0) out.push_back({i, j, h(i, j)});
    return out;
}

struct Canon {
    std::vector<std::uint32_t> counts;
    std::uint64_t automorphisms = 0;
};

// Minimizes row-major counts over orderings that sort vertices by (out, in, loops).
// Orderings reaching the minimum differ by automorphisms, so their number is |Aut|.
Canon canonicalize(std::size_t k, const std::vector<std::uint32_t>& counts) {
    using Inv = std::tuple<std::uint64_t, std::uint64_t, std::uint32_t>;
    std::vector<Inv> inv(k);
    for (std::size_t i = 0; i < k; ++i) {
        std::uint64_t out = 0;
        std::uint64_t in = 0;
        for (std::size_t j = 0; j < k; ++j) {
            out += counts[i * k + j];
            in += counts[j * k + i];
        }
        inv[i] = {out, in, counts[i * k + i]};
    }
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return inv[a] < inv[b]; });

    std::vector<std::pair<std::size_t, std::size_t>> cells;  // [begin, end)
    for (std::size_t s = 0; s < k;) {
        std::size_t e = s + 1;
        while (e < k && inv[order[e]] == inv[order[s]]) ++e;
        cells.push_back({s, e});
        s = e;
    }
    for (auto [b, e] : cells) std::sort(order.begin() + static_cast<std::ptrdiff_t>(b), order.begin() + static_cast<std::ptrdiff_t>(e));

    Canon best;
    std::vector<std::uint32_t> candidate(k * k);
    while (true) {
        for (std::size_t p = 0; p < k; ++p)
            for (std::size_t q = 0; q < k; ++q) candidate[p * k + q] = counts[order[p] * k + order[q]];
        if (best.automorphisms == 0 || candidate < best.counts) {
            best.counts = candidate;
            best.automorphisms = 1;
        } else if (candidate == best.counts) {
            ++best.automorphisms;
        }
        // Odometer over per-cell permutations.
        std::size_t c = 0;
        for (; c < cells.size(); ++c) {
            auto first = order.begin() + static_cast<std::ptrdiff_t>(cells[c].first);
            auto last = order.begin() + static_cast<std::ptrdiff_t>(cells[c].second);
            if (std::next_permutation(first, last)) break;  // wraps to sorted on false
        }
        if (c == cells.size()) break;
    }
    return best;
}

// Calls visit(a, blocks) for every set partition of [n], given as a restricted growth string.
template <class Visit>
void for_each_set_partition(std::size_t n, Visit&& visit) {
    std::vector<std::uint32_t> a(n, 0);
    while (true) {
        std::uint32_t blocks = 0;
        for (std::uint32_t v : a) blocks = std::max(blocks, v + 1);
        visit(a, static_cast<std::size_t>(blocks));
        std::size_t i = n;
        bool advanced = false;
        while (i > 1 && !advanced) {
            --i;
            std::uint32_t prefix_max = 0;
            for (std::size_t t = 0; t < i; ++t) prefix_max = std::max(prefix_max, a[t]);
            if (a[i] <= prefix_max) {
                ++a[i];
                for (std::size_t t = i + 1; t < n; ++t) a[t] = 0;
                advanced = true;
            }
        }
        if (!advanced) return;
    }
}

}  // namespace

// ---- Multigraph ----------------------------------------------------------

Multigraph::Multigraph(std::size_t k, std::vector<std::uint32_t> counts) : k_(k), counts_(std::move(counts)) {
    if (k == 0) throw InvalidArgument("multigraph needs at least one vertex");
    if (counts_.size() != k * k) throw DimensionMismatch("multigraph counts must be k*k");
    if (edge_count() == 0) throw InvalidArgument("multigraph needs at least one edge");
    for (std::size_t i = 0; i < k; ++i) {
        bool touched = false;
        for (std::size_t j = 0; j < k && !touched; ++j) touched = counts_[i * k + j] > 0 || counts_[j * k + i] > 0;
        if (!touched) throw InvalidArgument("multigraph has an isolated vertex");
    }
}

Multigraph Multigraph::from_rows(const std::vector<std::vector<std::uint32_t>>& rows) {
    std::vector<std::uint32_t> flat;
    for (const auto& r : rows) {
        if (r.size() != rows.size()) throw DimensionMismatch("multigraph counts must be square");
        flat.insert(flat.end(), r.begin(), r.end());
    }
    return Multigraph(rows.size(), std::move(flat));
}

Multigraph Multigraph::edge() { return Multigraph(2, {0, 1, 0, 0}); }
Multigraph Multigraph::loop() { return Multigraph(1, {1}); }
Multigraph Multigraph::complete2() { return Multigraph(2, {0, 1, 1, 0}); }

Multigraph Multigraph::star_out(std::size_t leaves) {
    if (leaves == 0) throw InvalidArgument("star needs at least one leaf");
    const std::size_t k = leaves + 1;
    std::vector<std::uint32_t> c(k * k, 0);
    for (std::size_t j = 1; j < k; ++j) c[j] = 1;
    return Multigraph(k, std::move(c));
}

Multigraph Multigraph::star_in(std::size_t leaves) {
    if (leaves == 0) throw InvalidArgument("star needs at least one leaf");
    const std::size_t k = leaves + 1;
    std::vector<std::uint32_t> c(k * k, 0);
    for (std::size_t i = 1; i < k; ++i) c[i * k] = 1;
    return Multigraph(k, std::move(c));
}

Multigraph Multigraph::path(std::size_t edges) {
    if (edges == 0) throw InvalidArgument("path needs at least one edge");
    const std::size_t k = edges + 1;
    std::vector<std::uint32_t> c(k * k, 0);
    for (std::size_t i = 0; i + 1 < k; ++i) c[i * k + i + 1] = 1;
    return Multigraph(k, std::move(c));
}

Multigraph Multigraph::disjoint_union(const Multigraph& a, const Multigraph& b) {
    const std::size_t k = a.k_ + b.k_;
    std::vector<std::uint32_t> c(k * k, 0);
    for (std::size_t i = 0; i < a.k_; ++i)
        for (std::size_t j = 0; j < a.k_; ++j) c[i * k + j] = a(i, j);
    for (std::size_t i = 0; i < b.k_; ++i)
        for (std::size_t j = 0; j < b.k_; ++j) c[(a.k_ + i) * k + a.k_ + j] = b(i, j);
    return Multigraph(k, std::move(c));
}

std::uint64_t Multigraph::edge_count() const {
    std::uint64_t s = 0;
    for (std::uint32_t c : counts_) s += c;
    return s;
}

std::uint32_t Multigraph::max_count() const { return *std::max_element(counts_.begin(), counts_.end()); }

double Multigraph::factorial_product() const {
    double r = 1.0;
    for (std::uint32_t c : counts_) r *= std::tgamma(static_cast<double>(c) + 1.0);
    return r;
}

bool Multigraph::is_simple_undirected() const {
    for (std::size_t i = 0; i < k_; ++i) {
        if (counts_[i * k_ + i] != 0) return false;
        for (std::size_t j = 0; j < k_; ++j) {
            if (counts_[i * k_ + j] > 1 || counts_[i * k_ + j] != counts_[j * k_ + i]) return false;
        }
    }
    return true;
}

Multigraph Multigraph::canonical() const { return Multigraph(k_, canonicalize(k_, counts_).counts); }

std::vector<std::uint32_t> Multigraph::canonical_key() const {
    std::vector<std::uint32_t> key{static_cast<std::uint32_t>(k_)};
    const auto c = canonicalize(k_, counts_).counts;
    key.insert(key.end(), c.begin(), c.end());
    return key;
}

std::uint64_t Multigraph::automorphism_count() const { return canonicalize(k_, counts_).automorphisms; }

bool Multigraph::isomorphic_to(const Multigraph& other) const {
    return k_ == other.k_ && edge_count() == other.edge_count() && canonical_key() == other.canonical_key();
}

std::string Multigraph::to_string() const {
    std::ostringstream os;
    os << "{\"k\":" << k_ << ",\"counts\":[";
    for (std::size_t i = 0; i < k_; ++i) {
        os << (i ? ",[" : "[");
        for (std::size_t j = 0; j < k_; ++j) os << (j ? "," : "") << counts_[i * k_ + j];
        os << "]";
    }
    os << "]}";
    return os.str();
}

// ---- monomials and enumeration kernels --------------------------------------

double monomial(const std::vector<std::uint32_t>& pattern, const std::vector<double>& q) {
    if (pattern.size() != q.size()) throw DimensionMismatch("pattern and matrix sizes differ");
    double r = 1.0;
    for (std::size_t t = 0; t < q.size(); ++t) {
        if (pattern[t] != 0) r *= int_power(q[t], pattern[t]);
    }
    return r;
}

double monomial(const Multigraph& h, const WeightedDigraph& q) {
    if (h.size() != q.size()) throw DimensionMismatch("pattern and matrix sizes differ");
    return monomial(h.counts(), q.to_dense());
}

double hom_number(const Multigraph& h, const WeightedDigraph& g, const Limits& limits) {
    const std::uint64_t n = g.size();
    const std::uint64_t k = h.size();
    const std::uint64_t maps = saturating_power(n, k, limits.enumeration_cap);
    if (maps > limits.enumeration_cap) throw BudgetExceeded("hom_number: n^k exceeds the enumeration cap");
    const auto edges = pattern_edges(h);
    return blocked_sum(maps, [&](std::uint64_t begin, std::uint64_t end, CompensatedSum& acc) {
        std::vector<std::size_t> f(k, 0);
        std::uint64_t x = begin;
        for (std::size_t d = 0; d < k; ++d) {
            f[d] = static_cast<std::size_t>(x % n);
            x /= n;
        }
        for (std::uint64_t idx = begin; idx < end; ++idx) {
            double term = 1.0;
            for (const PatternEdge& e : edges) {
                term *= int_power(g(f[e.i], f[e.j]), e.count);
                if (term == 0.0) break;
            }
            acc.add(term);
            for (std::size_t d = 0; d < k; ++d) {
                if (++f[d] < n) break;
                f[d] = 0;
            }
        }
    });
}

double inj_number(const Multigraph& h, const WeightedDigraph& g, const Limits& limits) {
    const std::size_t n = g.size();
    const std::size_t k = h.size();
    if (k > n) return 0.0;
    if (saturating_falling(n, k, limits.enumeration_cap) > limits.enumeration_cap)
        throw BudgetExceeded("inj_number: injective map count exceeds the enumeration cap");

    // back[t]: pattern edges between vertex t and earlier vertices (and its loops).
    std::vector<std::vector<PatternEdge>> back(k);
    for (const PatternEdge& e : pattern_edges(h)) back[std::max(e.i, e.j)].push_back(e);

    std::vector<double> by_first(n, 0.0);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t first = 0; first < static_cast<std::int64_t>(n); ++first) {
        std::vector<std::size_t> f(k, 0);
        std::vector<char> used(n, 0);
        CompensatedSum acc;
        auto factor = [&](std::size_t t) {
            double r = 1.0;
            for (const PatternEdge& e : back[t]) r *= int_power(g(f[e.i], f[e.j]), e.count);
            return r;
        };
        auto recurse = [&](auto&& self, std::size_t t, double partial) -> void {
            if (t == k) {
                acc.add(partial);
                return;
            }
            for (std::size_t v = 0; v < n; ++v) {
                if (used[v]) continue;
                f[t] = v;
                const double p = partial * factor(t);
                if (p == 0.0) continue;
                used[v] = 1;
                self(self, t + 1, p);
                used[v] = 0;
            }
        };
        f[0] = static_cast<std::size_t>(first);
        const double p0 = factor(0);
        if (p0 != 0.0) {
            used[f[0]] = 1;
            recurse(recurse, 1, p0);
        }
        by_first[static_cast<std::size_t>(first)] = acc.value();
    }
    CompensatedSum total;
    for (double v : by_first) total.add(v);
    return total.value();
}

double quotient_density_exact(const Multigraph& h, const NormalizedGraph& g, const Limits& limits) {
    const std::uint64_t n = g.size();
    const std::uint64_t k = h.size();
    const std::uint64_t maps = saturating_power(k, n, limits.enumeration_cap);
    if (maps > limits.enumeration_cap) throw BudgetExceeded("quotient_density_exact: k^n exceeds the enumeration cap");
    const auto entries = g.entries();
    const auto& pattern = h.counts();
    const double sum = blocked_sum(maps, [&](std::uint64_t begin, std::uint64_t end, CompensatedSum& acc) {
        std::vector<std::size_t> f(n, 0);
        std::uint64_t x = begin;
        for (std::size_t d = 0; d < n; ++d) {
            f[d] = static_cast<std::size_t>(x % k);
            x /= k;
        }
        std::vector<double> q(k * k);
        for (std::uint64_t idx = begin; idx < end; ++idx) {
            std::fill(q.begin(), q.end(), 0.0);
            for (const Entry& e : entries) q[f[e.row] * k + f[e.col]] += e.weight;
            acc.add(monomial(pattern, q));
            for (std::size_t d = 0; d < n; ++d) {
                if (++f[d] < k) break;
                f[d] = 0;
            }
        }
    });
    return sum / static_cast<double>(maps);
}

MeanSe quotient_density_mc(const Multigraph& h, const NormalizedGraph& g, std::size_t samples, Rng& rng) {
    if (samples < 2) throw InvalidArgument("quotient_density_mc needs at least 2 samples");
    const std::size_t n = g.size();
    const std::size_t k = h.size();
    const auto entries = g.entries();
    const auto& pattern = h.counts();
    const std::uint64_t base = rng();
    constexpr std::size_t kBlock = 1024;
    const std::size_t blocks = (samples + kBlock - 1) / kBlock;
    std::vector<double> values(samples);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) {
        Rng local = substream(base, static_cast<std::uint64_t>(b));
        std::uniform_int_distribution<std::size_t> pick(0, k - 1);
        std::vector<std::size_t> f(n);
        std::vector<double> q(k * k);
        const std::size_t begin = static_cast<std::size_t>(b) * kBlock;
        const std::size_t end = std::min(samples, begin + kBlock);
        for (std::size_t s = begin; s < end; ++s) {
            for (auto& v : f) v = pick(local);
            std::fill(q.begin(), q.end(), 0.0);
            for (const Entry& e : entries) q[f[e.row] * k + f[e.col]] += e.weight;
            values[s] = monomial(pattern, q);
        }
    }
    return mean_se(values);
}

namespace serial {

double hom_number(const Multigraph& h, const WeightedDigraph& g) {
    const std::size_t n = g.size();
    const std::size_t k = h.size();
    std::vector<std::size_t> f(k, 0);
    double total = 0.0;
    auto recurse = [&](auto&& self, std::size_t t) -> void {
        if (t == k) {
            double term = 1.0;
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < k; ++j) term *= std::pow(g(f[i], f[j]), static_cast<double>(h(i, j)));
            total += term;
            return;
        }
        for (std::size_t v = 0; v < n; ++v) {
            f[t] = v;
            self(self, t + 1);
        }
    };
    recurse(recurse, 0);
    return total;
}

double quotient_density_exact(const Multigraph& h, const NormalizedGraph& g) {
    const std::size_t n = g.size();
    const std::size_t k = h.size();
    std::vector<std::uint32_t> images(n, 0);
    double total = 0.0;
    double maps = 0.0;
    auto recurse = [&](auto&& self, std::size_t t) -> void {
        if (t == n) {
            const WeightedDigraph q = qlim::quotient(static_cast<const WeightedDigraph&>(g), PartitionMap(k, images));
            total += monomial(h, q);
            maps += 1.0;
            return;
        }
        for (std::uint32_t v = 0; v < k; ++v) {
            images[t] = v;
            self(self, t + 1);
        }
    };
    recurse(recurse, 0);
    return total / maps;
}

}  // namespace serial

// ---- refinement poset -----------------------------------------------------------

std::uint64_t surjection_count(const Multigraph& kg, const Multigraph& h) {
    if (kg.edge_count() != h.edge_count() || kg.size() < h.size()) return 0;
    const std::size_t kv = kg.size();
    const std::size_t hv = h.size();
    std::vector<std::size_t> f(kv, 0);
    std::vector<std::uint32_t> q(hv * hv, 0);
    std::vector<std::size_t> hits(hv, 0);
    std::size_t distinct = 0;
    std::uint64_t count = 0;

    auto recurse = [&](auto&& self, std::size_t t) -> void {
        if (t == kv) {
            if (distinct == hv) ++count;  // q <= h entrywise with equal totals means q == h
            return;
        }
        for (std::size_t a = 0; a < hv; ++a) {
            f[t] = a;
            bool ok = true;
            std::vector<std::pair<std::size_t, std::uint32_t>> added;
            for (std::size_t s = 0; s <= t && ok; ++s) {
                const std::uint32_t out = kg(t, s);
                const std::uint32_t in = (s == t) ? 0 : kg(s, t);
                if (out) {
                    const std::size_t idx = a * hv + f[s];
                    q[idx] += out;
                    added.push_back({idx, out});
                    if (q[idx] > h(a, f[s])) ok = false;
                }
                if (in && ok) {
                    const std::size_t idx = f[s] * hv + a;
                    q[idx] += in;
                    added.push_back({idx, in});
                    if (q[idx] > h(f[s], a)) ok = false;
                }
            }
            if (ok) {
                if (hits[a]++ == 0) ++distinct;
                if (hv - distinct <= kv - t - 1) self(self, t + 1);
                if (--hits[a] == 0) --distinct;
            }
            for (auto [idx, c] : added) q[idx] -= c;
        }
    };
    recurse(recurse, 0);
    return count;
}

std::vector<Multigraph> multigraph_classes(std::size_t edges, const Limits& limits) {
    if (edges == 0) throw InvalidArgument("pattern classes need at least one edge");
    if (edges > limits.poset_edge_cap) throw BudgetExceeded("edge count exceeds the refinement-poset cap");
    std::map<std::vector<std::uint32_t>, Multigraph> classes;
    for_each_set_partition(2 * edges, [&](const std::vector<std::uint32_t>& a, std::size_t blocks) {
        std::vector<std::uint32_t> c(blocks * blocks, 0);
        for (std::size_t e = 0; e < edges; ++e) ++c[a[2 * e] * blocks + a[2 * e + 1]];
        Multigraph g(blocks, std::move(c));
        auto key = g.canonical_key();
        if (!classes.count(key)) classes.emplace(std::move(key), g.canonical());
    });
    std::vector<Multigraph> out;
    for (auto& [key, g] : classes) out.push_back(g);
    return out;
}

std::vector<RelatedPattern> coarsenings(const Multigraph& h) {
    std::map<std::vector<std::uint32_t>, Multigraph> classes;
    const std::size_t k = h.size();
    for_each_set_partition(k, [&](const std::vector<std::uint32_t>& a, std::size_t blocks) {
        std::vector<std::uint32_t> c(blocks * blocks, 0);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) c[a[i] * blocks + a[j]] += h(i, j);
        Multigraph g(blocks, std::move(c));
        auto key = g.canonical_key();
        if (!classes.count(key)) classes.emplace(std::move(key), g.canonical());
    });
    std::vector<RelatedPattern> out;
    for (auto& [key, g] : classes) out.push_back({g, surjection_count(h, g)});
    return out;
}

std::vector<RelatedPattern> refinements(const Multigraph& h, const Limits& limits) {
    std::vector<RelatedPattern> out;
    for (const Multigraph& kg : multigraph_classes(h.edge_count(), limits)) {
        if (kg.size() < h.size()) continue;
        const std::uint64_t r = surjection_count(kg, h);
        if (r > 0) out.push_back({kg, r});
    }
    return out;
}

double tq_inj_coefficient(const Multigraph& h, const Multigraph& kg, std::uint64_t r_kh) {
    const double vh = static_cast<double>(h.size());
    const double vk = static_cast<double>(kg.size());
    // Expanding the labeled density gives no 1/|Aut(H)| factor: each labeled copy of K in G pairs
    // with R_{K,H} surjections onto the fixed labeling of H.
    return std::pow(vh, -vk) * (h.factorial_product() / kg.factorial_product()) * static_cast<double>(r_kh) /
           static_cast<double>(kg.automorphism_count());
}

double tq_from_inj(const Multigraph& h, const std::vector<RelatedPattern>& refinement_list, const WeightedDigraph& g,
                   const Limits& limits) {
    CompensatedSum s;
    for (const RelatedPattern& r : refinement_list) {
        if (r.graph.size() > g.size()) continue;  // inj vanishes
        s.add(tq_inj_coefficient(h, r.graph, r.count) * inj_number(r.graph, g, limits));
    }
    return s.value();
}

double tq_from_inj(const Multigraph& h, const WeightedDigraph& g, const Limits& limits) {
    return tq_from_inj(h, refinements(h, limits), g, limits);
}

double hom_from_inj(const Multigraph& h, const WeightedDigraph& g, const Limits& limits) {
    CompensatedSum s;
    for (const RelatedPattern& c : coarsenings(h)) {
        s.add(static_cast<double>(c.count) / static_cast<double>(c.graph.automorphism_count()) *
              inj_number(c.graph, g, limits));
    }
    return s.value();
}

double inj_from_tq(const Multigraph& h, const DensityOracle& tq, const Limits& limits) {
    std::vector<RelatedPattern> down = refinements(h, limits);
    // Strict refinements have strictly more vertices; solve from the largest down.
    std::stable_sort(down.begin(), down.end(),
                     [](const RelatedPattern& a, const RelatedPattern& b) { return a.graph.size() > b.graph.size(); });
    std::vector<double> inj(down.size(), 0.0);
    for (std::size_t a = 0; a < down.size(); ++a) {
        const Multigraph& ga = down[a].graph;
        CompensatedSum rhs;
        rhs.add(tq(ga));
        for (std::size_t b = 0; b < a; ++b) {
            const Multigraph& gb = down[b].graph;
            if (gb.size() <= ga.size()) continue;
            const std::uint64_t r = surjection_count(gb, ga);
            if (r > 0) rhs.add(-tq_inj_coefficient(ga, gb, r) * inj[b]);
        }
        inj[a] = rhs.value() / tq_inj_coefficient(ga, ga, ga.automorphism_count());
    }
    const auto key = h.canonical_key();
    for (std::size_t a = 0; a < down.size(); ++a)
        if (down[a].graph.canonical_key() == key) return inj[a];
    throw InvariantViolation("pattern missing from its own refinement list");
}

double inj_from_tq(const Multigraph& h, const NormalizedGraph& g, const Limits& limits) {
    return inj_from_tq(h, [&](const Multigraph& p) { return quotient_density_exact(p, g, limits); }, limits);
}

double normalized_hom_simple(const Multigraph& h, const WeightedDigraph& g, const Limits& limits) {
    if (!h.is_simple_undirected()) throw NotSimple("pattern is not a simple undirected graph");
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g(i, i) != 0.0) throw NotSimple("graph has a self-loop");
    }
    bool bad = false;
    g.for_each_nonzero([&](std::size_t i, std::size_t j, double w) {
        if (w != 1.0 || g(j, i) != 1.0) bad = true;
    });
    if (bad) throw NotSimple("graph is not a symmetric 0/1 matrix");
    const double two_e = g.total_weight();
    if (two_e <= 0.0) throw NotSimple("graph has no edges");
    const double edges_h = static_cast<double>(h.edge_count()) / 2.0;
    return hom_number(h, g, limits) / std::pow(two_e, edges_h);
}

Multigraph parse_pattern_name(const std::string& name) {
    auto suffix = [&](const std::string& prefix) -> std::size_t {
        const std::string rest = name.substr(prefix.size());
        std::size_t pos = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(rest, &pos);
        } catch (const std::exception&) {
            throw InvalidArgument("bad pattern size in '" + name + "'");
        }
        if (pos != rest.size() || v == 0) throw InvalidArgument("bad pattern size in '" + name + "'");
        return static_cast<std::size_t>(v);
    };
    if (name == "edge") return Multigraph::edge();
    if (name == "loop") return Multigraph::loop();
    if (name == "K2") return Multigraph::complete2();
    if (name.rfind("star-out:", 0) == 0) return Multigraph::star_out(suffix("star-out:"));
    if (name.rfind("star-in:", 0) == 0) return Multigraph::star_in(suffix("star-in:"));
    if (name.rfind("path:", 0) == 0) return Multigraph::path(suffix("path:"));
    throw InvalidArgument("unknown pattern '" + name + "'");
}

}  // namespace qlim
