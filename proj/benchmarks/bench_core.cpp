#include <benchmark/benchmark.h>

#include "mblab/experiments.hpp"

using namespace mblab;

namespace {

const PhysicalParams kParams(1.0, -0.5, 0.5, 5e-4, 1e-3); // r = 2, resonance
const Pumping kPump(Complex(1.0, 0.0), {{Complex(0.5, 0.0), 3.0}});
const Complex kAe(1.0, 0.0);

void BM_MbeRhs(benchmark::State& state) {
    const PureState x(0.3, -0.2, Complex(0.6, 0.2), Complex(0.5, 0.59160797830996161));
    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mbe_rhs(x, t, kParams, kPump));
        t += 0.01;
    }
}
BENCHMARK(BM_MbeRhs);

void BM_ReducedRhs(benchmark::State& state) {
    const ReducedState y(Complex(0.4, -0.1), Chart::North, Complex(0.3, 0.2));
    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(reduced_rhs(y, t, kParams, kPump));
        t += 0.01;
    }
}
BENCHMARK(BM_ReducedRhs);

void BM_EnvelopeRhs(benchmark::State& state) {
    const EnvelopeState e(Complex(0.4, -0.1), Complex(0.3, 0.2));
    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(envelope_rhs(e, t, kParams, kPump));
        t += 0.01;
    }
}
BENCHMARK(BM_EnvelopeRhs);

void BM_AveragedRhs(benchmark::State& state) {
    const EnvelopeState e(Complex(0.4, -0.1), Complex(0.3, 0.2));
    for (auto _ : state) benchmark::DoNotOptimize(averaged_rhs(e, kParams, kAe));
}
BENCHMARK(BM_AveragedRhs);

void BM_NumericAverage(benchmark::State& state) {
    const EnvelopeState e(Complex(0.4, -0.1), Complex(0.3, 0.2));
    const double T = static_cast<double>(state.range(0)) * 2.0 * M_PI;
    for (auto _ : state)
        benchmark::DoNotOptimize(numeric_average(e, kParams, kPump, T));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_NumericAverage)->Arg(10)->Arg(100)->Arg(1000)->Complexity(benchmark::oN);

void BM_IntegrateFull(benchmark::State& state) {
    const PureState x0(0.3, -0.2, Complex(0.6, 0.2), Complex(0.5, 0.59160797830996161));
    SolverConfig cfg;
    cfg.rel_tol = 1e-10;
    cfg.sample_dt = 1.0;
    cfg.t_end = static_cast<double>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(integrate_full(x0, cfg, kParams, kPump));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_IntegrateFull)->Arg(10)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_IntegrateReduced(benchmark::State& state) {
    const ReducedState y0(Complex(0.4, -0.1), Chart::North, Complex(0.3, 0.2));
    SolverConfig cfg;
    cfg.rel_tol = 1e-10;
    cfg.sample_dt = 1.0;
    cfg.t_end = static_cast<double>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(integrate_reduced(y0, cfg, kParams, kPump));
}
BENCHMARK(BM_IntegrateReduced)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_IntegrateAveraged(benchmark::State& state) {
    const EnvelopeState e0(Complex(0.0, 0.0), Complex(0.5, 0.0));
    SolverConfig cfg;
    cfg.rel_tol = 1e-10;
    cfg.t_end = 10.0 / kParams.p;
    cfg.sample_dt = cfg.t_end / 100.0;
    for (auto _ : state)
        benchmark::DoNotOptimize(integrate_averaged(e0, cfg, kParams, kAe));
}
BENCHMARK(BM_IntegrateAveraged)->Unit(benchmark::kMicrosecond);

void BM_HarmonicStatesWithSpectra(benchmark::State& state) {
    for (auto _ : state) {
        auto states = harmonic_states(kParams.r, kAe, kParams.c);
        for (const auto& h : states)
            benchmark::DoNotOptimize(eigenvalues_harmonic(h, kParams));
        benchmark::DoNotOptimize(states);
    }
}
BENCHMARK(BM_HarmonicStatesWithSpectra);

void BM_KbmOrder(benchmark::State& state) {
    const EnvelopeState domain[2] = {
        {Complex(0.3, 0.1), Complex(0.5, 0.0)},
        {Complex(-0.5, 0.0), Complex(0.0, 0.8)},
    };
    for (auto _ : state)
        benchmark::DoNotOptimize(
            kbm_order(kParams, kPump, 1e-2, std::span<const EnvelopeState>(domain)));
}
BENCHMARK(BM_KbmOrder)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
