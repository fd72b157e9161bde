#include "qlim/grapheur.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "qlim/errors.hpp"

namespace qlim {

namespace {

void check_parameter(double x) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw InvalidArgument("grapheur parameters must be finite and nonnegative");
}

constexpr std::uint64_t kTieBruteForceLimit = 40320;

std::size_t cell_of(double t, std::size_t k) {
    return std::min(k - 1, static_cast<std::size_t>(t * static_cast<double>(k)));
}

}  // namespace

Grapheur Grapheur::from_parameters(const std::vector<std::vector<double>>& e, std::vector<double> sigma,
                                   std::vector<double> varsigma, double theta, double vartheta) {
    const std::size_t r = e.size();
    std::size_t c = 0;
    for (const auto& row : e) c = std::max(c, row.size());
    for (const auto& row : e)
        if (row.size() != c) throw DimensionMismatch("E rows must have equal length");
    const std::size_t m = std::max({r, c, sigma.size(), varsigma.size()});

    Grapheur g;
    g.m_ = m;
    g.e_.assign(m * m, 0.0);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) g.e_[i * m + j] = e[i][j];
    sigma.resize(m, 0.0);
    varsigma.resize(m, 0.0);
    g.sigma_ = std::move(sigma);
    g.varsigma_ = std::move(varsigma);
    g.theta_ = theta;
    g.vartheta_ = vartheta;

    CompensatedSum total;
    for (double x : g.e_) check_parameter(x), total.add(x);
    for (double x : g.sigma_) check_parameter(x), total.add(x);
    for (double x : g.varsigma_) check_parameter(x), total.add(x);
    check_parameter(theta);
    check_parameter(vartheta);
    total.add(theta);
    total.add(vartheta);
    const double mass = total.value();
    if (std::abs(mass - 1.0) > kMassTolerance) {
        throw InvalidArgument("grapheur parameters must sum to 1 (got " + std::to_string(mass) + ")");
    }
    if (mass != 1.0) {
        for (double& x : g.e_) x /= mass;
        for (double& x : g.sigma_) x /= mass;
        for (double& x : g.varsigma_) x /= mass;
        g.theta_ /= mass;
        g.vartheta_ /= mass;
    }
    return g;
}

Grapheur Grapheur::uniform(double theta, double vartheta) { return from_parameters({}, {}, {}, theta, vartheta); }

double Grapheur::out_mass(std::size_t i) const {
    double s = sigma_[i];
    for (std::size_t j = 0; j < m_; ++j) s += e_[i * m_ + j];
    return s;
}

double Grapheur::in_mass(std::size_t i) const {
    double s = varsigma_[i];
    for (std::size_t j = 0; j < m_; ++j) s += e_[j * m_ + i];
    return s;
}

double Grapheur::continuous_mass() const {
    double s = theta_ + vartheta_;
    for (double x : sigma_) s += x;
    for (double x : varsigma_) s += x;
    return s;
}

std::vector<std::vector<double>> Grapheur::e_rows() const {
    std::vector<std::vector<double>> rows(m_, std::vector<double>(m_));
    for (std::size_t i = 0; i < m_; ++i)
        for (std::size_t j = 0; j < m_; ++j) rows[i][j] = e_[i * m_ + j];
    return rows;
}

Grapheur Grapheur::canonicalize(double floor) const {
    std::vector<double> e = e_;
    std::vector<double> s = sigma_;
    std::vector<double> vs = varsigma_;
    double theta = theta_;
    auto sweep = [&](double& x) {
        if (x > 0.0 && x < floor) {
            theta += x;
            x = 0.0;
        }
    };
    for (double& x : e) sweep(x);
    for (double& x : s) sweep(x);
    for (double& x : vs) sweep(x);

    const std::size_t m = m_;
    std::vector<std::size_t> alive;
    for (std::size_t i = 0; i < m; ++i) {
        bool used = s[i] > 0.0 || vs[i] > 0.0;
        for (std::size_t j = 0; j < m && !used; ++j) used = e[i * m + j] > 0.0 || e[j * m + i] > 0.0;
        if (used) alive.push_back(i);
    }

    using Key = std::tuple<double, double, double, double, double>;
    auto key = [&](std::size_t i) {
        double out = s[i];
        double in = vs[i];
        for (std::size_t j = 0; j < m; ++j) {
            out += e[i * m + j];
            in += e[j * m + i];
        }
        return Key{out, in, s[i], vs[i], e[i * m + i]};
    };
    std::vector<Key> keys(m);
    for (std::size_t i : alive) keys[i] = key(i);
    std::stable_sort(alive.begin(), alive.end(), [&](std::size_t a, std::size_t b) { return keys[a] > keys[b]; });

    std::vector<std::pair<std::size_t, std::size_t>> ties;
    std::uint64_t perms = 1;
    for (std::size_t a = 0; a < alive.size();) {
        std::size_t b = a + 1;
        while (b < alive.size() && keys[alive[b]] == keys[alive[a]]) ++b;
        if (b - a > 1) {
            ties.push_back({a, b});
            for (std::size_t t = 2; t <= b - a && perms <= kTieBruteForceLimit; ++t) perms *= t;
        }
        a = b;
    }
    const std::size_t mm = alive.size();
    auto flatten = [&](const std::vector<std::size_t>& order) {
        std::vector<double> out(mm * mm);
        for (std::size_t p = 0; p < mm; ++p)
            for (std::size_t q = 0; q < mm; ++q) out[p * mm + q] = e[order[p] * m + order[q]];
        return out;
    };
    if (!ties.empty() && perms <= kTieBruteForceLimit) {
        for (auto [a, b] : ties) std::sort(alive.begin() + static_cast<std::ptrdiff_t>(a), alive.begin() + static_cast<std::ptrdiff_t>(b));
        std::vector<std::size_t> best = alive;
        std::vector<double> best_e = flatten(alive);
        while (true) {
            std::size_t t = 0;
            for (; t < ties.size(); ++t) {
                if (std::next_permutation(alive.begin() + static_cast<std::ptrdiff_t>(ties[t].first),
                                          alive.begin() + static_cast<std::ptrdiff_t>(ties[t].second)))
                    break;
            }
            if (t == ties.size()) break;
            auto cand = flatten(alive);
            if (cand > best_e) {
                best_e = std::move(cand);
                best = alive;
            }
        }
        alive = best;
    }

    Grapheur g;
    g.m_ = mm;
    g.e_ = flatten(alive);
    g.sigma_.resize(mm);
    g.varsigma_.resize(mm);
    for (std::size_t p = 0; p < mm; ++p) {
        g.sigma_[p] = s[alive[p]];
        g.varsigma_[p] = vs[alive[p]];
    }
    g.theta_ = theta;
    g.vartheta_ = vartheta_;
    return g;
}

double parameter_distance(const Grapheur& a0, const Grapheur& b0) {
    const Grapheur a = a0.canonicalize();
    const Grapheur b = b0.canonicalize();
    const std::size_t m = std::max(a.size(), b.size());
    auto pad = [m](const Grapheur& g, std::vector<double>& e, std::vector<double>& s, std::vector<double>& vs) {
        e.assign(m * m, 0.0);
        s.assign(m, 0.0);
        vs.assign(m, 0.0);
        for (std::size_t i = 0; i < g.size(); ++i) {
            s[i] = g.sigma(i);
            vs[i] = g.varsigma(i);
            for (std::size_t j = 0; j < g.size(); ++j) e[i * m + j] = g.e(i, j);
        }
    };
    std::vector<double> ea, sa, va, eb, sb, vb;
    pad(a, ea, sa, va);
    pad(b, eb, sb, vb);
    const double scalar = std::max(std::abs(a.theta() - b.theta()), std::abs(a.vartheta() - b.vartheta()));
    auto matched = [&](const std::vector<std::size_t>& p) {
        double d = scalar;
        for (std::size_t i = 0; i < m; ++i) {
            d = std::max({d, std::abs(sa[i] - sb[p[i]]), std::abs(va[i] - vb[p[i]])});
            for (std::size_t j = 0; j < m; ++j) d = std::max(d, std::abs(ea[i * m + j] - eb[p[i] * m + p[j]]));
        }
        return d;
    };
    std::vector<std::size_t> p(m);
    std::iota(p.begin(), p.end(), std::size_t{0});
    double best = matched(p);
    if (m <= 7) {
        while (std::next_permutation(p.begin(), p.end())) best = std::min(best, matched(p));
    }
    return best;
}

bool approx_equal(const Grapheur& a, const Grapheur& b, double tol) { return parameter_distance(a, b) <= tol; }

Grapheur from_graph(const NormalizedGraph& g) {
    const StrippedGraph s = strip_isolated(g);
    if (s.graph.size() > WeightedDigraph::kDenseLimit)
        throw BudgetExceeded("from_graph: too many non-isolated vertices for a dense grapheur");
    return Grapheur::from_parameters(s.graph.to_rows(), {}, {}, 0.0, 0.0).canonicalize();
}

std::vector<double> sample_locations(std::size_t count, Rng& rng) {
    std::vector<double> t(count);
    while (true) {
        for (double& x : t) x = uniform01(rng);
        std::vector<double> sorted = t;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end()) break;
    }
    return t;
}

MeasureRealization sample_realization(const Grapheur& m, Rng& rng) { return {m, sample_locations(m.size(), rng)}; }

AtomicMeasure2D realization_measure(const MeasureRealization& r, std::size_t grid) {
    const Grapheur& m = r.grapheur;
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j)
            if (m.e(i, j) > 0.0) atoms.push_back({r.locations[i], r.locations[j], m.e(i, j)});
    if (m.continuous_mass() > 0.0) {
        if (grid == 0) throw UnsupportedContinuousComponent();
        const double g = static_cast<double>(grid);
        auto centre = [g](std::size_t b) { return (static_cast<double>(b) + 0.5) / g; };
        for (std::size_t i = 0; i < m.size(); ++i) {
            for (std::size_t b = 0; b < grid; ++b) {
                if (m.sigma(i) > 0.0) atoms.push_back({r.locations[i], centre(b), m.sigma(i) / g});
                if (m.varsigma(i) > 0.0) atoms.push_back({centre(b), r.locations[i], m.varsigma(i) / g});
            }
        }
        for (std::size_t a = 0; a < grid; ++a) {
            if (m.vartheta() > 0.0) atoms.push_back({centre(a), centre(a), m.vartheta() / g});
            if (m.theta() > 0.0)
                for (std::size_t b = 0; b < grid; ++b) atoms.push_back({centre(a), centre(b), m.theta() / (g * g)});
        }
    }
    return AtomicMeasure2D(std::move(atoms));
}

namespace {

std::vector<double> grid_quotient_from_cells(const Grapheur& m, const std::vector<std::size_t>& cells, std::size_t k) {
    const double kd = static_cast<double>(k);
    std::vector<double> q(k * k, m.theta() / (kd * kd));
    for (std::size_t a = 0; a < k; ++a) q[a * k + a] += m.vartheta() / kd;
    for (std::size_t i = 0; i < m.size(); ++i) {
        const std::size_t ci = cells[i];
        for (std::size_t j = 0; j < m.size(); ++j) {
            const double w = m.e(i, j);
            if (w != 0.0) q[ci * k + cells[j]] += w;
        }
        if (m.sigma(i) != 0.0)
            for (std::size_t b = 0; b < k; ++b) q[ci * k + b] += m.sigma(i) / kd;
        if (m.varsigma(i) != 0.0)
            for (std::size_t a = 0; a < k; ++a) q[a * k + ci] += m.varsigma(i) / kd;
    }
    return q;
}

}  // namespace

NormalizedGraph grid_quotient_from_locations(const Grapheur& m, const std::vector<double>& locations, std::size_t k) {
    if (k == 0) throw InvalidArgument("grid quotient needs k >= 1");
    if (locations.size() != m.size()) throw DimensionMismatch("one location per grapheur index required");
    std::vector<std::size_t> cells(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) cells[i] = cell_of(locations[i], k);
    return NormalizedGraph(WeightedDigraph(k, grid_quotient_from_cells(m, cells, k)));
}

NormalizedGraph grid_quotient_sample(const Grapheur& m, std::size_t k, Rng& rng) {
    const MeasureRealization r = sample_realization(m, rng);
    return grid_quotient_from_locations(m, r.locations, k);
}

WeightedDigraph grid_quotient_mean(const Grapheur& m, std::size_t k) {
    if (k == 0) throw InvalidArgument("grid quotient needs k >= 1");
    double diag_atoms = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) diag_atoms += m.e(i, i);
    const double theta_prime = 1.0 - m.vartheta() - diag_atoms;
    const double kd = static_cast<double>(k);
    std::vector<double> q(k * k, theta_prime / (kd * kd));
    for (std::size_t a = 0; a < k; ++a) q[a * k + a] += (1.0 - theta_prime) / kd;
    return WeightedDigraph(k, std::move(q));
}

MeanSe grapheur_density(const Grapheur& m, const Multigraph& h, std::size_t samples, Rng& rng) {
    if (samples < 2) throw InvalidArgument("grapheur_density needs at least 2 samples");
    const std::size_t k = h.size();
    const std::uint64_t base = rng();
    constexpr std::size_t kBlock = 1024;
    const std::size_t blocks = (samples + kBlock - 1) / kBlock;
    std::vector<double> values(samples);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) {
        Rng local = substream(base, static_cast<std::uint64_t>(b));
        const std::size_t begin = static_cast<std::size_t>(b) * kBlock;
        const std::size_t end = std::min(samples, begin + kBlock);
        std::vector<std::size_t> cells(m.size());
        for (std::size_t s = begin; s < end; ++s) {
            const MeasureRealization r = sample_realization(m, local);
            for (std::size_t i = 0; i < m.size(); ++i) cells[i] = cell_of(r.locations[i], k);
            values[s] = monomial(h.counts(), grid_quotient_from_cells(m, cells, k));
        }
    }
    return mean_se(values);
}

double grapheur_density_exact(const Grapheur& m, const Multigraph& h, const Limits& limits) {
    const std::size_t k = h.size();
    const std::size_t n = m.size();
    std::uint64_t count = 1;
    for (std::size_t t = 0; t < n; ++t) {
        count *= k;
        if (count > limits.enumeration_cap) throw BudgetExceeded("grapheur_density_exact: k^m exceeds the cap");
    }
    const double sum = blocked_sum(count, [&](std::uint64_t begin, std::uint64_t end, CompensatedSum& acc) {
        std::vector<std::size_t> cells(n, 0);
        std::uint64_t x = begin;
        for (std::size_t d = 0; d < n; ++d) {
            cells[d] = static_cast<std::size_t>(x % k);
            x /= k;
        }
        for (std::uint64_t idx = begin; idx < end; ++idx) {
            acc.add(monomial(h.counts(), grid_quotient_from_cells(m, cells, k)));
            for (std::size_t d = 0; d < n; ++d) {
                if (++cells[d] < k) break;
                cells[d] = 0;
            }
        }
    });
    return sum / static_cast<double>(count);
}

NormalizedGraph approx_sequence(const Grapheur& m, std::size_t n) {
    if (n == 0 || n < m.size()) throw InvalidArgument("approx_sequence needs n >= grapheur dimension and n >= 1");
    const double nd = static_cast<double>(n);
    std::vector<double> g(n * n, m.theta() / (nd * nd));
    for (std::size_t i = 0; i < n; ++i) g[i * n + i] += m.vartheta() / nd;
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < m.size(); ++j) g[i * n + j] += m.e(i, j);
        for (std::size_t j = 0; j < n; ++j) {
            g[i * n + j] += m.sigma(i) / nd;
            g[j * n + i] += m.varsigma(i) / nd;
        }
    }
    CompensatedSum s;
    for (double x : g) s.add(x);
    const double total = s.value();
    for (double& x : g) x /= total;
    return NormalizedGraph(WeightedDigraph(n, std::move(g)));
}

Grapheur estimate_grapheur(const NormalizedGraph& g, double tau_e, double tau_d) {
    if (!(tau_e > 0.0 && tau_e < 1.0) || !(tau_d > 0.0 && tau_d < 1.0))
        throw InvalidArgument("thresholds must lie in (0,1)");
    const std::size_t n = g.size();
    std::vector<Entry> atoms;
    std::vector<double> rows(n, 0.0);
    std::vector<double> cols(n, 0.0);
    g.for_each_nonzero([&](std::size_t i, std::size_t j, double w) {
        if (w >= tau_e) {
            atoms.push_back({i, j, w});
        } else {
            rows[i] += w;
            cols[j] += w;
        }
    });
    std::vector<double> sig(n, 0.0);
    std::vector<double> vsig(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i] >= tau_d) sig[i] = rows[i];
        if (cols[i] >= tau_d) vsig[i] = cols[i];
    }
    CompensatedSum overlap;
    CompensatedSum diag;
    g.for_each_nonzero([&](std::size_t i, std::size_t j, double w) {
        if (w >= tau_e) return;
        if (sig[i] > 0.0 && vsig[j] > 0.0) overlap.add(w);
        if (i == j && sig[i] == 0.0 && vsig[i] == 0.0) diag.add(w);
    });

    std::vector<std::size_t> hub_index(n, n);
    std::vector<std::size_t> hubs;
    auto mark = [&](std::size_t i) {
        if (hub_index[i] == n) {
            hub_index[i] = hubs.size();
            hubs.push_back(i);
        }
    };
    for (const Entry& a : atoms) {
        mark(a.row);
        mark(a.col);
    }
    for (std::size_t i = 0; i < n; ++i)
        if (sig[i] > 0.0 || vsig[i] > 0.0) mark(i);
    if (hubs.size() > WeightedDigraph::kDenseLimit) throw BudgetExceeded("estimate_grapheur: too many hub indices");

    const std::size_t m = hubs.size();
    std::vector<std::vector<double>> e(m, std::vector<double>(m, 0.0));
    CompensatedSum used;
    for (const Entry& a : atoms) {
        e[hub_index[a.row]][hub_index[a.col]] = a.weight;
        used.add(a.weight);
    }
    std::vector<double> s(m, 0.0);
    std::vector<double> vs(m, 0.0);
    for (std::size_t p = 0; p < m; ++p) {
        s[p] = sig[hubs[p]];
        vs[p] = vsig[hubs[p]];
        used.add(s[p]);
        used.add(vs[p]);
    }
    used.add(-overlap.value());
    const double vartheta = std::max(0.0, diag.value());
    used.add(vartheta);
    const double theta = std::clamp(1.0 - used.value(), 0.0, 1.0);

    // Renormalize to unit mass.
    CompensatedSum total;
    for (const auto& row : e)
        for (double x : row) total.add(x);
    for (std::size_t p = 0; p < m; ++p) {
        total.add(s[p]);
        total.add(vs[p]);
    }
    total.add(theta);
    total.add(vartheta);
    const double t = total.value();
    for (auto& row : e)
        for (double& x : row) x /= t;
    for (std::size_t p = 0; p < m; ++p) {
        s[p] /= t;
        vs[p] /= t;
    }
    return Grapheur::from_parameters(e, s, vs, theta / t, vartheta / t).canonicalize();
}

bool hub_free(const Grapheur& m) {
    for (double x : m.edge_weights())
        if (x != 0.0) return false;
    for (std::size_t i = 0; i < m.size(); ++i)
        if (m.sigma(i) != 0.0 || m.varsigma(i) != 0.0) return false;
    return true;
}

double hub_statistic_limit(const Grapheur& m) {
    CompensatedSum s;
    for (std::size_t i = 0; i < m.size(); ++i) {
        const double out = m.out_mass(i);
        const double in = m.in_mass(i);
        s.add(out * out);
        s.add(in * in);
    }
    return s.value();
}

std::vector<double> pair_with_step_graphon(const Grapheur& m, const WeightedDigraph& g2, std::size_t samples,
                                           Rng& rng) {
    constexpr double tol = 1e-12;
    if (m.vartheta() > tol) throw NotSymmetricGrapheur("vartheta must vanish");
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m.e(i, i) > tol) throw NotSymmetricGrapheur("E must have a zero diagonal");
        if (std::abs(m.sigma(i) - m.varsigma(i)) > tol) throw NotSymmetricGrapheur("sigma must equal varsigma");
        for (std::size_t j = 0; j < m.size(); ++j)
            if (std::abs(m.e(i, j) - m.e(j, i)) > tol) throw NotSymmetricGrapheur("E must be symmetric");
    }
    const std::size_t k = g2.size();
    for (std::size_t i = 0; i < k; ++i) {
        if (g2(i, i) != 0.0) throw NotSimple("step graph has a self-loop");
        for (std::size_t j = 0; j < k; ++j) {
            const double w = g2(i, j);
            if ((w != 0.0 && w != 1.0) || w != g2(j, i)) throw NotSimple("step graph is not simple");
        }
    }
    const std::vector<double> weights = g2.to_dense();
    const std::uint64_t base = rng();
    std::vector<double> out(samples);
    constexpr std::size_t kBlock = 1024;
    const std::size_t blocks = (samples + kBlock - 1) / kBlock;
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) {
        Rng local = substream(base, static_cast<std::uint64_t>(b));
        const std::size_t begin = static_cast<std::size_t>(b) * kBlock;
        const std::size_t end = std::min(samples, begin + kBlock);
        std::vector<std::size_t> cells(m.size());
        for (std::size_t s = begin; s < end; ++s) {
            const MeasureRealization r = sample_realization(m, local);
            for (std::size_t i = 0; i < m.size(); ++i) cells[i] = cell_of(r.locations[i], k);
            const std::vector<double> q = grid_quotient_from_cells(m, cells, k);
            double v = 0.0;
            for (std::size_t t = 0; t < q.size(); ++t) v += weights[t] * q[t];
            out[s] = v;
        }
    }
    return out;
}

}  // namespace qlim
