#include "crc/compactify.hpp"
#include "crc/darboux.hpp"
#include "crc/topology.hpp"

#include <benchmark/benchmark.h>

using namespace crc;

namespace {

HolomorphicSystem three_centers() {
    return normalize_from_roots({Complex(0, 0), Complex(1, 1), Complex(2, 2)});
}

void BM_eval_field(benchmark::State& state) {
    HolomorphicSystem s = three_centers();
    double x = 0.3;
    for (auto _ : state) {
        Vec2 f = eval_field(s, x, 0.7);
        benchmark::DoNotOptimize(f);
        x = x < 2.0 ? x + 1e-9 : 0.3;
    }
}
BENCHMARK(BM_eval_field);

void BM_normalize_coeffs(benchmark::State& state) {
    std::vector<Complex> coeffs{Complex(2, 1), Complex(-3, 0.5), Complex(0, -1), Complex(1, 0)};
    for (auto _ : state) {
        HolomorphicSystem s = normalize(coeffs);
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_normalize_coeffs);

void BM_chart_field(benchmark::State& state) {
    ChartAtlas atlas(three_centers());
    double u = -0.4;
    for (auto _ : state) {
        Vec2 f = atlas.field(ChartId::North, u, 0.2);
        benchmark::DoNotOptimize(f);
        u = u < 0.4 ? u + 1e-9 : -0.4;
    }
}
BENCHMARK(BM_chart_field);

void BM_integral_residual(benchmark::State& state) {
    HolomorphicSystem s = three_centers();
    FirstIntegral H = *rational_integral(s, classify_all(s)).integral;
    for (auto _ : state) {
        double r = integral_residual(H, s, 3.0, 0.5);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_integral_residual);

void BM_trace_separatrix(benchmark::State& state) {
    HolomorphicSystem s = three_centers();
    auto saddles = equator_saddles(s);
    for (auto _ : state) {
        Separatrix sep = trace_separatrix(s, saddles[1], true);
        benchmark::DoNotOptimize(sep);
    }
}
BENCHMARK(BM_trace_separatrix);

void BM_full_configuration(benchmark::State& state) {
    HolomorphicSystem s = three_centers();
    for (auto _ : state) {
        auto cfg = separatrix_configuration(s);
        benchmark::DoNotOptimize(cfg);
    }
}
BENCHMARK(BM_full_configuration);

} // namespace

BENCHMARK_MAIN();
