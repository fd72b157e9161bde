#include "qlim/eqp_models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qlim/combinatorics.hpp"
#include "qlim/errors.hpp"
#include "qlim/measure.hpp"
#include "qlim/metrics.hpp"
#include "qlim/summation.hpp"

namespace qlim {

ModelSampler grapheur_model(const Grapheur& m) {
    return [m](std::size_t size, Rng& rng) { return grid_quotient_sample(m, size, rng); };
}

ModelSampler independent_rows_model() {
    return [](std::size_t size, Rng& rng) {
        std::vector<double> w(size * size, 0.0);
        for (std::size_t i = 0; i < size; ++i) w[i * size + uniform_index(rng, size)] = 1.0 / static_cast<double>(size);
        return NormalizedGraph(WeightedDigraph(size, std::move(w)));
    };
}

std::vector<std::vector<std::uint32_t>> moment_patterns(std::size_t k, std::uint32_t max_degree) {
    std::vector<std::vector<std::uint32_t>> out;
    const std::size_t cells = k * k;
    std::vector<std::uint32_t> p(cells, 0);
    auto recurse = [&](auto&& self, std::size_t from, std::uint32_t degree) -> void {
        if (degree > 0) out.push_back(p);
        if (degree == max_degree) return;
        for (std::size_t c = from; c < cells; ++c) {
            ++p[c];
            self(self, c, degree + 1);
            --p[c];
        }
    };
    recurse(recurse, 0, 0);
    return out;
}

namespace {
constexpr double kZeroDifference = 1e-12;
}  // namespace

double two_sample_z(double m1, double se1, double m2, double se2) {
    const double diff = m1 - m2;
    // Differences at rounding level are not evidence; a deterministic moment can carry an SE of 1e-20.
    if (std::abs(diff) <= kZeroDifference) return 0.0;
    const double se = std::sqrt(se1 * se1 + se2 * se2);
    if (se == 0.0) return std::copysign(std::numeric_limits<double>::infinity(), diff);
    return diff / se;
}

namespace {

std::vector<std::vector<double>> draw_models(const ModelSampler& model, std::size_t size, std::size_t count,
                                             std::uint64_t base) {
    std::vector<std::vector<double>> out(count);
#pragma omp parallel for schedule(static)
    for (std::int64_t s = 0; s < static_cast<std::int64_t>(count); ++s) {
        Rng local = substream(base, static_cast<std::uint64_t>(s));
        out[static_cast<std::size_t>(s)] = model(size, local).to_dense();
    }
    return out;
}

MeanSe moment(const std::vector<std::vector<double>>& draws, const std::vector<std::uint32_t>& pattern) {
    std::vector<double> v(draws.size());
    for (std::size_t s = 0; s < draws.size(); ++s) v[s] = monomial(pattern, draws[s]);
    return mean_se(v);
}

std::vector<double> quotient_dense(const std::vector<double>& g, std::size_t size, const PartitionMap& f) {
    const std::size_t k = f.codomain_size();
    std::vector<double> q(k * k, 0.0);
    for (std::size_t i = 0; i < size; ++i)
        for (std::size_t j = 0; j < size; ++j) q[f(i) * k + f(j)] += g[i * size + j];
    return q;
}

}  // namespace

EqpReport check_equipartition_consistency(const ModelSampler& model, std::size_t k, std::size_t n,
                                          std::size_t n_samples, Rng& rng) {
    if (k == 0 || n == 0) throw InvalidArgument("k and n must be positive");
    if (n_samples < 2) throw InvalidArgument("need at least 2 samples");
    const std::size_t big = n * k;
    const auto direct = draw_models(model, k, n_samples, rng());
    const auto large = draw_models(model, big, n_samples, rng());
    const PartitionMap canonical = equipartition_map(k, big);
    std::vector<std::vector<double>> by_canonical(n_samples);
    std::vector<std::vector<double>> by_random(n_samples);
    const std::uint64_t map_base = rng();
    for (std::size_t s = 0; s < n_samples; ++s) {
        Rng local = substream(map_base, s);
        by_canonical[s] = quotient_dense(large[s], big, canonical);
        by_random[s] = quotient_dense(large[s], big, random_equipartition_map(k, big, local));
    }
    EqpReport report{k, n, n_samples, 0.0, {}};
    for (const auto& pattern : moment_patterns(k)) {
        const MeanSe d = moment(direct, pattern);
        for (const auto& [name, draws] : {std::pair{"canonical", &by_canonical}, std::pair{"random", &by_random}}) {
            const MeanSe q = moment(*draws, pattern);
            MomentComparison c{pattern, name, d.mean, d.se, q.mean, q.se, two_sample_z(q.mean, q.se, d.mean, d.se)};
            report.max_abs_z = std::max(report.max_abs_z, std::abs(c.z));
            report.moments.push_back(std::move(c));
        }
    }
    return report;
}

EqpReport check_equipartition_consistency(const Grapheur& m, std::size_t k, std::size_t n, std::size_t n_samples,
                                          Rng& rng) {
    return check_equipartition_consistency(grapheur_model(m), k, n, n_samples, rng);
}

std::vector<NormalizedGraph> nested_quotient_sequence(const Grapheur& m, const std::vector<std::size_t>& ks, Rng& rng) {
    if (ks.empty()) throw InvalidArgument("nested_quotient_sequence needs at least one k");
    const std::vector<double> locations = sample_locations(m.size(), rng);
    std::vector<NormalizedGraph> out;
    out.reserve(ks.size());
    for (std::size_t k : ks) out.push_back(grid_quotient_from_locations(m, locations, k));
    return out;
}

double expected_rect_mass(const Grapheur& m, double x0, double x1, double y0, double y1) {
    if (!(x0 <= x1 && y0 <= y1)) throw InvalidArgument("empty rectangle bounds");
    double diag_atoms = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) diag_atoms += m.e(i, i);
    const double theta_prime = 1.0 - m.vartheta() - diag_atoms;
    const double area = (x1 - x0) * (y1 - y0);
    const double diagonal = std::max(0.0, std::min(x1, y1) - std::max(x0, y0));
    return theta_prime * area + (1.0 - theta_prime) * diagonal;
}

DivergenceReport independent_sampling_divergence_demo(std::size_t k_max, Rng& rng) {
    if (k_max < 2) throw InvalidArgument("k_max must be at least 2");
    DivergenceReport r;
    r.k_max = k_max;
    double variance = 0.0;
    for (std::size_t k = 1; k <= k_max; ++k) {
        const double kd = static_cast<double>(k);
        const std::vector<double> t = sample_locations(2, rng);
        const auto c1 = std::min(k - 1, static_cast<std::size_t>(t[0] * kd));
        const auto c2 = std::min(k - 1, static_cast<std::size_t>(t[1] * kd));
        if (c1 == c2) r.collision_ks.push_back(k);
        r.expected += 1.0 / kd;
        variance += (1.0 / kd) * (1.0 - 1.0 / kd);
    }
    r.collisions = r.collision_ks.size();
    r.sd = std::sqrt(variance);
    r.z = (static_cast<double>(r.collisions) - r.expected) / r.sd;
    r.within_3sigma = std::abs(r.z) <= 3.0;

    const Grapheur single = Grapheur::from_parameters({{0.0, 1.0}, {0.0, 0.0}}, {}, {}, 0.0, 0.0);
    const Grapheur collided = Grapheur::from_parameters({{1.0}}, {}, {}, 0.0, 0.0);
    r.mean_gap = std::abs(expected_rect_mass(collided, 0.0, 0.5, 0.5, 1.0) -
                          expected_rect_mass(single, 0.0, 0.5, 0.5, 1.0));
    const std::vector<double> t = sample_locations(2, rng);
    const AtomicMeasure2D diag({{t[0], t[0], 1.0}});
    const AtomicMeasure2D split({{t[0], t[1], 1.0}});
    r.realization_discrepancy = rect_discrepancy(diag, split);
    return r;
}

MeanMatrixReport mean_matrix_check(const ModelSampler& model, std::size_t k, std::size_t n_samples, Rng& rng) {
    if (k < 2) throw InvalidArgument("mean_matrix_check needs k >= 2");
    if (n_samples < 2) throw InvalidArgument("need at least 2 samples");
    MeanMatrixReport r;
    r.k = k;
    r.k_other = k + 1;

    struct Summary {
        double theta = 0.0;
        double theta_se = 0.0;
        double offdiag_z = 0.0;
        double diag_z = 0.0;
    };
    auto summarize = [&](std::size_t size) {
        const auto draws = draw_models(model, size, n_samples, rng());
        const double kd = static_cast<double>(size);
        std::vector<double> off_avg(n_samples);
        std::vector<double> diag_avg(n_samples);
        for (std::size_t s = 0; s < n_samples; ++s) {
            double off = 0.0;
            double dg = 0.0;
            for (std::size_t a = 0; a < size; ++a)
                for (std::size_t b = 0; b < size; ++b) (a == b ? dg : off) += draws[s][a * size + b];
            off_avg[s] = off / (kd * kd - kd);
            diag_avg[s] = dg / kd;
        }
        const MeanSe off_pool = mean_se(off_avg);
        const MeanSe diag_pool = mean_se(diag_avg);
        Summary out;
        out.theta = kd * kd * off_pool.mean;
        out.theta_se = kd * kd * off_pool.se;
        std::vector<double> v(n_samples);
        for (std::size_t a = 0; a < size; ++a)
            for (std::size_t b = 0; b < size; ++b) {
                for (std::size_t s = 0; s < n_samples; ++s) v[s] = draws[s][a * size + b];
                const MeanSe e = mean_se(v);
                const MeanSe& pool = (a == b) ? diag_pool : off_pool;
                const double z = std::abs(two_sample_z(e.mean, e.se, pool.mean, 0.0));
                (a == b ? out.diag_z : out.offdiag_z) = std::max(a == b ? out.diag_z : out.offdiag_z, z);
            }
        return out;
    };
    const Summary first = summarize(k);
    const Summary second = summarize(k + 1);
    r.theta = first.theta;
    r.theta_other = second.theta;
    r.theta_z = two_sample_z(first.theta, first.theta_se, second.theta, second.theta_se);
    r.max_offdiag_z = first.offdiag_z;
    r.max_diag_z = first.diag_z;
    r.passed = r.max_offdiag_z <= 3.0 && r.max_diag_z <= 3.0 && std::abs(r.theta_z) <= 3.0;
    return r;
}

}  // namespace qlim
