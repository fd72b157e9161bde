#include <benchmark/benchmark.h>

#include <vector>

#include "qlim/combinatorics.hpp"
#include "qlim/metrics.hpp"
#include "qlim/property_testing.hpp"

using namespace qlim;

namespace {

NormalizedGraph make_graph(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> w(n * n, 0.0);
    for (double& x : w) x = uniform01(rng) < 0.3 ? 0.0 : uniform01(rng);
    w[0] += 0.5;
    return normalize(WeightedDigraph(n, std::move(w)));
}

AtomicMeasure2D make_measure(std::size_t atoms, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Atom> a;
    a.reserve(atoms);
    for (std::size_t i = 0; i < atoms; ++i)
        a.push_back({uniform01(rng), uniform01(rng), 1.0 / static_cast<double>(atoms)});
    return AtomicMeasure2D(a);
}

// Args: graph size n. Pattern has 3 vertices, so 3^n maps are visited.
void BM_QuotientDensity_Parallel(benchmark::State& state) {
    const NormalizedGraph g = make_graph(static_cast<std::size_t>(state.range(0)), 1);
    const Multigraph h = Multigraph::path(2);
    for (auto _ : state) benchmark::DoNotOptimize(quotient_density_exact(h, g));
}
void BM_QuotientDensity_Serial(benchmark::State& state) {
    const NormalizedGraph g = make_graph(static_cast<std::size_t>(state.range(0)), 1);
    const Multigraph h = Multigraph::path(2);
    for (auto _ : state) benchmark::DoNotOptimize(serial::quotient_density_exact(h, g));
}

void BM_HomNumber_Parallel(benchmark::State& state) {
    const NormalizedGraph g = make_graph(static_cast<std::size_t>(state.range(0)), 2);
    const Multigraph h = Multigraph::path(3);
    for (auto _ : state) benchmark::DoNotOptimize(hom_number(h, g));
}
void BM_HomNumber_Serial(benchmark::State& state) {
    const NormalizedGraph g = make_graph(static_cast<std::size_t>(state.range(0)), 2);
    const Multigraph h = Multigraph::path(3);
    for (auto _ : state) benchmark::DoNotOptimize(serial::hom_number(h, g));
}

// Args: atoms per measure.
void BM_RectDiscrepancy_Parallel(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const AtomicMeasure2D a = make_measure(n, 3), b = make_measure(n, 4);
    for (auto _ : state) benchmark::DoNotOptimize(rect_discrepancy(a, b));
}
void BM_RectDiscrepancy_Serial(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const AtomicMeasure2D a = make_measure(n, 3), b = make_measure(n, 4);
    for (auto _ : state) benchmark::DoNotOptimize(serial::rect_discrepancy(a, b));
}

// Args: graph size n; 2^n subsets.
void BM_Q2Exact_Parallel(benchmark::State& state) {
    const NormalizedGraph g = make_graph(static_cast<std::size_t>(state.range(0)), 5);
    Rng rng(6);
    for (auto _ : state) benchmark::DoNotOptimize(q2_identity_check(g, Q2Mode::Exact, rng).expectation);
}
void BM_Q2Exact_Serial(benchmark::State& state) {
    const NormalizedGraph g = make_graph(static_cast<std::size_t>(state.range(0)), 5);
    for (auto _ : state) benchmark::DoNotOptimize(serial::q2_expectation_exact(g));
}

}  // namespace

BENCHMARK(BM_QuotientDensity_Parallel)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_QuotientDensity_Serial)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HomNumber_Parallel)->Arg(30)->Arg(60)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HomNumber_Serial)->Arg(30)->Arg(60)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RectDiscrepancy_Parallel)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RectDiscrepancy_Serial)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Q2Exact_Parallel)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Q2Exact_Serial)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
