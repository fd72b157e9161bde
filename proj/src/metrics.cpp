#include "qlim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include "qlim/errors.hpp"

namespace qlim {

namespace {

struct SignedGrid {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> w;  // rows × cols, μ1 − μ2 on compressed coordinates
};

SignedGrid compress(const AtomicMeasure2D& mu1, const AtomicMeasure2D& mu2, std::size_t cap) {
    if (mu1.size() + mu2.size() > cap) throw BudgetExceeded("rect_discrepancy: atom count exceeds the cap");
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto* mu : {&mu1, &mu2})
        for (const Atom& a : mu->atoms()) {
            xs.push_back(a.x);
            ys.push_back(a.y);
        }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    SignedGrid g;
    g.rows = xs.size();
    g.cols = ys.size();
    g.w.assign(g.rows * g.cols, 0.0);
    auto place = [&](const AtomicMeasure2D& mu, double sign) {
        for (const Atom& a : mu.atoms()) {
            const auto r = static_cast<std::size_t>(std::lower_bound(xs.begin(), xs.end(), a.x) - xs.begin());
            const auto c = static_cast<std::size_t>(std::lower_bound(ys.begin(), ys.end(), a.y) - ys.begin());
            g.w[r * g.cols + c] += sign * a.w;
        }
    };
    place(mu1, 1.0);
    place(mu2, -1.0);
    return g;
}

// Best |sum| over rectangles whose first compressed row is `top`.
double scan_from_row(const SignedGrid& g, std::size_t top) {
    std::vector<double> col(g.cols, 0.0);
    double best = 0.0;
    for (std::size_t bottom = top; bottom < g.rows; ++bottom) {
        const double* row = g.w.data() + bottom * g.cols;
        for (std::size_t c = 0; c < g.cols; ++c) col[c] += row[c];
        double run_max = 0.0;
        double run_min = 0.0;
        for (std::size_t c = 0; c < g.cols; ++c) {
            run_max = std::max(run_max + col[c], col[c]);
            run_min = std::min(run_min + col[c], col[c]);
            best = std::max({best, run_max, -run_min});
        }
    }
    return best;
}

}  // namespace

double rect_discrepancy(const AtomicMeasure2D& mu1, const AtomicMeasure2D& mu2, std::size_t cap) {
    const SignedGrid g = compress(mu1, mu2, cap);
    double best = 0.0;
#pragma omp parallel for schedule(dynamic, 1) reduction(max : best)
    for (std::int64_t top = 0; top < static_cast<std::int64_t>(g.rows); ++top) {
        best = std::max(best, scan_from_row(g, static_cast<std::size_t>(top)));
    }
    return best;
}

namespace serial {

double rect_discrepancy(const AtomicMeasure2D& mu1, const AtomicMeasure2D& mu2, std::size_t cap) {
    const SignedGrid g = compress(mu1, mu2, cap);
    double best = 0.0;
    for (std::size_t top = 0; top < g.rows; ++top) best = std::max(best, scan_from_row(g, top));
    return best;
}

}  // namespace serial

double assignment_cost(const std::vector<double>& cost, std::size_t n) {
    if (cost.size() != n * n) throw DimensionMismatch("cost matrix must be n*n");
    if (n == 0) return 0.0;
    if (n > kTransportCap) throw BudgetExceeded("assignment problem exceeds the transport cap");
    // Shortest augmenting paths with potentials; rows and columns are 1-based inside.
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    std::vector<char> used(n + 1);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    CompensatedSum total;
    for (std::size_t j = 1; j <= n; ++j) total.add(cost[(p[j] - 1) * n + (j - 1)]);
    return total.value();
}

double l1_distance(const WeightedDigraph& a, const WeightedDigraph& b) {
    if (a.size() != b.size()) throw DimensionMismatch("graphs differ in size");
    const auto da = a.to_dense();
    const auto db = b.to_dense();
    CompensatedSum s;
    for (std::size_t t = 0; t < da.size(); ++t) s.add(std::abs(da[t] - db[t]));
    return s.value();
}

namespace {

std::vector<std::vector<double>> draw_cloud(const GraphSampler& sampler, std::size_t k, std::size_t count,
                                            std::uint64_t base) {
    std::vector<std::vector<double>> cloud(count);
#pragma omp parallel for schedule(static)
    for (std::int64_t s = 0; s < static_cast<std::int64_t>(count); ++s) {
        Rng local = substream(base, static_cast<std::uint64_t>(s));
        cloud[static_cast<std::size_t>(s)] = sampler(local).to_dense();
    }
    for (const auto& g : cloud)
        if (g.size() != k * k) throw DimensionMismatch("sampler produced a graph of the wrong size");
    return cloud;
}

double cloud_w1(const std::vector<std::vector<double>>& a, std::size_t a0, const std::vector<std::vector<double>>& b,
                std::size_t b0, std::size_t count) {
    std::vector<double> cost(count * count);
    for (std::size_t i = 0; i < count; ++i)
        for (std::size_t j = 0; j < count; ++j) {
            double d = 0.0;
            const auto& x = a[a0 + i];
            const auto& y = b[b0 + j];
            for (std::size_t t = 0; t < x.size(); ++t) d += std::abs(x[t] - y[t]);
            cost[i * count + j] = d;
        }
    return assignment_cost(cost, count) / static_cast<double>(count);
}

constexpr std::size_t kBatches = 5;

W1Estimate cloud_estimate(const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b) {
    const std::size_t n = a.size();
    W1Estimate r;
    r.estimate = cloud_w1(a, 0, b, 0, n);
    const std::size_t size = n / kBatches;
    std::vector<double> batch(kBatches, 0.0);
#pragma omp parallel for schedule(static)
    for (std::int64_t t = 0; t < static_cast<std::int64_t>(kBatches); ++t) {
        const std::size_t off = static_cast<std::size_t>(t) * size;
        batch[static_cast<std::size_t>(t)] = cloud_w1(a, off, b, off, size);
    }
    r.se = mean_se(batch).se;
    return r;
}

}  // namespace

W1Estimate w1_random_graphs(const GraphSampler& a, const GraphSampler& b, std::size_t k, std::size_t n_samples,
                            Rng& rng) {
    if (n_samples < 10) throw InvalidArgument("w1_random_graphs needs at least 10 samples");
    if (n_samples > kTransportCap) throw BudgetExceeded("w1_random_graphs: sample count exceeds the transport cap");
    const std::uint64_t base_a = rng();
    const std::uint64_t base_b = rng();
    return cloud_estimate(draw_cloud(a, k, n_samples, base_a), draw_cloud(b, k, n_samples, base_b));
}

DistanceBracket w_square_bracket(const Grapheur& m1, const Grapheur& m2, const std::vector<std::size_t>& ks,
                                 std::size_t n_samples, Rng& rng) {
    if (ks.empty()) throw InvalidArgument("w_square_bracket needs at least one k");
    if (n_samples < 10) throw InvalidArgument("w_square_bracket needs at least 10 samples");
    if (n_samples > kTransportCap) throw BudgetExceeded("w_square_bracket: sample count exceeds the transport cap");
    DistanceBracket out;
    out.lower = 0.0;
    out.upper = 2.0;
    for (std::size_t k : ks) {
        if (k == 0) throw InvalidArgument("k must be positive");
        const GraphSampler sa = [&](Rng& r) { return grid_quotient_sample(m1, k, r); };
        const GraphSampler sb = [&](Rng& r) { return grid_quotient_sample(m2, k, r); };
        const auto a1 = draw_cloud(sa, k, n_samples, rng());
        const auto a2 = draw_cloud(sa, k, n_samples, rng());
        const auto b1 = draw_cloud(sb, k, n_samples, rng());
        const auto b2 = draw_cloud(sb, k, n_samples, rng());
        const W1Estimate main = cloud_estimate(a1, b1);
        BracketDiagnostic d;
        d.k = k;
        d.w1 = main.estimate;
        d.se = main.se;
        d.self_a = cloud_w1(a1, 0, a2, 0, n_samples);
        d.self_b = cloud_w1(b1, 0, b2, 0, n_samples);
        const double kd = static_cast<double>(k);
        d.lower = std::max(0.0, main.estimate - d.self_a - d.self_b - 2.0 * main.se) / (kd * kd);
        d.upper = std::min(2.0, main.estimate + d.self_a + d.self_b + 4.0 / kd + 2.0 * main.se);
        out.lower = std::max(out.lower, d.lower);
        out.upper = std::min(out.upper, d.upper);
        out.per_k.push_back(d);
    }
    out.lower = std::min(out.lower, out.upper);
    return out;
}

MeanSe w_square_upper_coupled(const Grapheur& m1, const Grapheur& m2, std::size_t n_trials, Rng& rng,
                              std::size_t grid) {
    if (n_trials < 1) throw InvalidArgument("w_square_upper_coupled needs at least one trial");
    if (grid == 0 && (!m1.is_atomic() || !m2.is_atomic())) throw UnsupportedContinuousComponent();
    const std::size_t m = std::max(m1.size(), m2.size());
    const std::uint64_t base = rng();
    std::vector<double> values(n_trials);
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t t = 0; t < static_cast<std::int64_t>(n_trials); ++t) {
        try {
            Rng local = substream(base, static_cast<std::uint64_t>(t));
            const std::vector<double> shared = sample_locations(m, local);
            std::vector<double> t1(shared.begin(), shared.begin() + static_cast<std::ptrdiff_t>(m1.size()));
            std::vector<double> t2(shared.begin(), shared.begin() + static_cast<std::ptrdiff_t>(m2.size()));
            const AtomicMeasure2D mu1 = realization_measure({m1, std::move(t1)}, grid);
            const AtomicMeasure2D mu2 = realization_measure({m2, std::move(t2)}, grid);
            values[static_cast<std::size_t>(t)] = rect_discrepancy(mu1, mu2);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return mean_se(values);
}

}  // namespace qlim
