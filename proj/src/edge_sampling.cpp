#include "qlim/edge_sampling.hpp"

#include <cmath>
#include <exception>
#include <map>
#include <random>
#include <unordered_map>

#include "qlim/errors.hpp"
#include "qlim/metrics.hpp"
#include "qlim/summation.hpp"

namespace qlim {

const char* to_string(EdgeComponent c) {
    switch (c) {
        case EdgeComponent::Atom: return "atom";
        case EdgeComponent::Row: return "row";
        case EdgeComponent::Col: return "col";
        case EdgeComponent::Uniform: return "uniform";
        case EdgeComponent::Diagonal: return "diagonal";
    }
    return "unknown";
}

namespace {

// Relabels endpoint keys in first-appearance order and accumulates multiplicities.
class SampleGraphBuilder {
public:
    std::size_t vertex(std::uint64_t key) {
        auto [it, inserted] = ids_.emplace(key, keys_.size());
        if (inserted) keys_.push_back(key);
        return it->second;
    }
    void add(std::size_t s, std::size_t t) { ++counts_[{s, t}]; }
    const std::vector<std::uint64_t>& keys() const { return keys_; }

    NormalizedGraph build(std::size_t n) const {
        std::vector<Entry> entries;
        entries.reserve(counts_.size());
        for (const auto& [st, c] : counts_)
            entries.push_back({st.first, st.second, static_cast<double>(c) / static_cast<double>(n)});
        return NormalizedGraph(WeightedDigraph::from_entries(keys_.size(), std::move(entries)));
    }

private:
    std::unordered_map<std::uint64_t, std::size_t> ids_;
    std::vector<std::uint64_t> keys_;
    std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> counts_;
};

}  // namespace

EdgeSample sample_edges_from_graph(const WeightedDigraph& g, std::size_t n, Rng& rng) {
    if (n == 0) throw InvalidArgument("edge sample size must be positive");
    const std::vector<Entry> entries = g.entries();
    if (entries.empty()) throw ZeroGraph();
    std::vector<double> weights(entries.size());
    for (std::size_t t = 0; t < entries.size(); ++t) weights[t] = entries[t].weight;
    std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
    Rng location_stream(rng());

    SampleGraphBuilder builder;
    std::vector<double> location;
    auto locate = [&](std::size_t v) {
        const std::size_t id = builder.vertex(v);
        if (id == location.size()) location.push_back(uniform01(location_stream));
        return id;
    };
    EdgeSample out{{}, NormalizedGraph(WeightedDigraph(1, {1.0})), {}};
    out.edges.reserve(n);
    for (std::size_t d = 0; d < n; ++d) {
        const Entry& e = entries[pick(rng)];
        const std::size_t s = locate(e.row);
        const std::size_t t = locate(e.col);
        builder.add(s, t);
        out.edges.push_back({location[s], location[t], s, t, EdgeComponent::Atom, e.row, e.col});
    }
    out.graph = builder.build(n);
    for (std::uint64_t key : builder.keys()) out.origin.push_back(static_cast<std::size_t>(key));
    return out;
}

EdgeSample sample_edges_from_grapheur(const Grapheur& m, std::size_t n, Rng& rng) {
    if (n == 0) throw InvalidArgument("edge sample size must be positive");
    const std::size_t dim = m.size();
    const std::vector<double> t = sample_locations(dim, rng);

    struct Choice {
        EdgeComponent component;
        std::size_t i;
        std::size_t j;
    };
    std::vector<Choice> choices;
    std::vector<double> weights;
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
            if (m.e(i, j) > 0.0) {
                choices.push_back({EdgeComponent::Atom, i, j});
                weights.push_back(m.e(i, j));
            }
    for (std::size_t i = 0; i < dim; ++i) {
        if (m.sigma(i) > 0.0) {
            choices.push_back({EdgeComponent::Row, i, 0});
            weights.push_back(m.sigma(i));
        }
        if (m.varsigma(i) > 0.0) {
            choices.push_back({EdgeComponent::Col, 0, i});
            weights.push_back(m.varsigma(i));
        }
    }
    if (m.theta() > 0.0) {
        choices.push_back({EdgeComponent::Uniform, 0, 0});
        weights.push_back(m.theta());
    }
    if (m.vartheta() > 0.0) {
        choices.push_back({EdgeComponent::Diagonal, 0, 0});
        weights.push_back(m.vartheta());
    }
    std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());

    // Atom vertices use their index as key; minted vertices use keys from dim upward.
    SampleGraphBuilder builder;
    std::uint64_t fresh = dim;
    std::vector<double> location;
    auto atom_vertex = [&](std::size_t i) {
        const std::size_t id = builder.vertex(i);
        if (id == location.size()) location.push_back(t[i]);
        return id;
    };
    auto fresh_vertex = [&]() {
        const std::size_t id = builder.vertex(fresh++);
        location.push_back(uniform01(rng));
        return id;
    };
    EdgeSample out{{}, NormalizedGraph(WeightedDigraph(1, {1.0})), {}};
    out.edges.reserve(n);
    for (std::size_t d = 0; d < n; ++d) {
        const Choice& c = choices[pick(rng)];
        std::size_t s = 0;
        std::size_t r = 0;
        switch (c.component) {
            case EdgeComponent::Atom:
                s = atom_vertex(c.i);
                r = atom_vertex(c.j);
                break;
            case EdgeComponent::Row:
                s = atom_vertex(c.i);
                r = fresh_vertex();
                break;
            case EdgeComponent::Col:
                s = fresh_vertex();
                r = atom_vertex(c.j);
                break;
            case EdgeComponent::Uniform:
                s = fresh_vertex();
                r = fresh_vertex();
                break;
            case EdgeComponent::Diagonal:
                s = fresh_vertex();
                r = s;
                break;
        }
        builder.add(s, r);
        out.edges.push_back({location[s], location[r], s, r, c.component, c.i, c.j});
    }
    out.graph = builder.build(n);
    for (std::uint64_t key : builder.keys()) out.origin.push_back(static_cast<std::size_t>(key));
    return out;
}

namespace {

struct EmpiricalTrial {
    double discrepancy = 0.0;
    AtomicMeasure2D empirical;
};

EmpiricalTrial empirical_trial(const Grapheur& m, std::size_t n, Rng& rng, std::size_t grid) {
    const AtomicMeasure2D mu = realization_measure(sample_realization(m, rng), grid);
    std::vector<double> weights;
    for (const Atom& a : mu.atoms()) weights.push_back(a.w);
    std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
    std::vector<std::uint64_t> counts(weights.size(), 0);
    for (std::size_t d = 0; d < n; ++d) ++counts[pick(rng)];
    std::vector<Atom> atoms;
    for (std::size_t a = 0; a < counts.size(); ++a)
        if (counts[a] > 0)
            atoms.push_back({mu.atoms()[a].x, mu.atoms()[a].y, static_cast<double>(counts[a]) / static_cast<double>(n)});
    AtomicMeasure2D empirical(std::move(atoms));
    const double d = rect_discrepancy(mu, empirical);
    return {d, std::move(empirical)};
}

}  // namespace

double coupled_rect_discrepancy_trial(const Grapheur& m, std::size_t n, Rng& rng, std::size_t grid) {
    if (n == 0) throw InvalidArgument("edge sample size must be positive");
    if (grid == 0 && !m.is_atomic()) throw UnsupportedContinuousComponent();
    return empirical_trial(m, n, rng, grid).discrepancy;
}

std::uint64_t szemeredi_edge_count(double epsilon) {
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw InvalidEpsilon("epsilon must lie in (0,1]");
    const double base = 174.0 / epsilon;
    return static_cast<std::uint64_t>(std::ceil(base * base));
}

SzemerediApproximant szemeredi_approximant(const Grapheur& m, double epsilon, std::size_t trials, Rng& rng,
                                           std::size_t grid) {
    if (trials == 0) throw InvalidArgument("szemeredi_approximant needs at least one trial");
    if (grid == 0 && !m.is_atomic()) throw UnsupportedContinuousComponent();
    const std::uint64_t k = szemeredi_edge_count(epsilon);
    SzemerediApproximant best{NormalizedGraph(WeightedDigraph(1, {1.0})), 2.0, k};
    bool have = false;
    for (std::size_t t = 0; t < trials; ++t) {
        EmpiricalTrial trial = empirical_trial(m, static_cast<std::size_t>(k), rng, grid);
        if (have && trial.discrepancy >= best.discrepancy) continue;
        // Vertices are the distinct atom coordinates, in first-appearance order.
        std::map<double, std::size_t> ids;
        std::vector<Entry> entries;
        auto id = [&](double c) { return ids.emplace(c, ids.size()).first->second; };
        for (const Atom& a : trial.empirical.atoms()) {
            const std::size_t s = id(a.x);
            const std::size_t r = id(a.y);
            entries.push_back({s, r, a.w});
        }
        best.graph = NormalizedGraph(WeightedDigraph::from_entries(ids.size(), std::move(entries)));
        best.discrepancy = trial.discrepancy;
        have = true;
    }
    return best;
}

std::vector<DiscrepancyRow> discrepancy_experiment(const Grapheur& m, const std::vector<std::size_t>& ns,
                                                   std::size_t trials, Rng& rng, std::size_t grid) {
    if (trials < 2) throw InvalidArgument("discrepancy_experiment needs at least 2 trials");
    if (grid == 0 && !m.is_atomic()) throw UnsupportedContinuousComponent();
    std::vector<DiscrepancyRow> rows;
    for (std::size_t n : ns) {
        if (n == 0) throw InvalidArgument("edge sample size must be positive");
        const std::uint64_t base = rng();
        DiscrepancyRow row;
        row.n = n;
        row.values.assign(trials, 0.0);
        std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
        for (std::int64_t t = 0; t < static_cast<std::int64_t>(trials); ++t) {
            try {
                Rng local = substream(base, static_cast<std::uint64_t>(t));
                row.values[static_cast<std::size_t>(t)] = coupled_rect_discrepancy_trial(m, n, local, grid);
            } catch (...) {
#pragma omp critical
                if (!failure) failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);
        const MeanSe ms = mean_se(row.values);
        row.mean = ms.mean;
        row.std = ms.se * std::sqrt(static_cast<double>(trials));
        row.bound = 174.0 / std::sqrt(static_cast<double>(n));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace qlim
