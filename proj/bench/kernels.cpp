#include <benchmark/benchmark.h>

#include <numbers>

#include "sqzdisp/esa_model.hpp"
#include "sqzdisp/overlap_integrals.hpp"
#include "sqzdisp/ring_cavity.hpp"
#include "sqzdisp/shot_noise_oracle.hpp"

using namespace sqzdisp;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) ? Exec::parallel : Exec::serial; }

void label(benchmark::State& state) {
    state.SetLabel(state.range(0) ? "omp x" + std::to_string(thread_count()) : "serial");
}

void BM_ExpandFlipped(benchmark::State& state) {
    const BeamParams beam;
    for (auto _ : state)
        benchmark::DoNotOptimize(expand_flipped(ModeSpec::tem_f0f0(), beam, static_cast<int>(state.range(1)), exec_of(state)));
    label(state);
}
BENCHMARK(BM_ExpandFlipped)->ArgsProduct({{0, 1}, {20, 58}})->Unit(benchmark::kMillisecond);

void BM_RegionOverlap(benchmark::State& state) {
    const BeamParams beam;
    const auto halves = signed_halves(Axis::horizontal);
    for (auto _ : state)
        benchmark::DoNotOptimize(region_overlap(ModeSpec::hg(9, 4), ModeSpec::tem_f0f0(), beam, halves, exec_of(state)));
    label(state);
}
BENCHMARK(BM_RegionOverlap)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_ScanReflection(benchmark::State& state) {
    const auto cfg = CavityConfig::nominal();
    const auto c = closed_form_flipped_expansion(FlipSet::hv(), 58).truncated(29, 29);
    for (auto _ : state)
        benchmark::DoNotOptimize(scan_reflection(cfg, c, 0.0, 2 * std::numbers::pi, 16384, exec_of(state)));
    label(state);
}
BENCHMARK(BM_ScanReflection)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_RampTrace(benchmark::State& state) {
    EsaSettings s;
    s.rbw = 1e3;
    s.vbw = 1e3;
    s.averages = 20;
    s.samples = 1 << 16;
    for (auto _ : state)
        benchmark::DoNotOptimize(generate_ramp_trace(0.52, 3e-10, Ramp{1e-10, 0.0}, s, 8, exec_of(state)));
    label(state);
}
BENCHMARK(BM_RampTrace)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_MonteCarlo(benchmark::State& state) {
    MonteCarloConfig cfg;
    cfg.mean_photons = 1000;
    const auto geom = DetectorGeometry::etx505q();
    for (auto _ : state) benchmark::DoNotOptimize(mc_differential_variance(cfg, geom, 500, exec_of(state)));
    label(state);
}
BENCHMARK(BM_MonteCarlo)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
