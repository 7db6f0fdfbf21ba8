// Microbenchmarks for the hot paths: channel diagonalization, propagator
// steps, zeta quadratures and ensemble realizations.

#include "chainctl/bathspec.hpp"
#include "chainctl/chain.hpp"
#include "chainctl/dynamics.hpp"
#include "chainctl/noise.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace chainctl;

namespace {

void BM_DiagonalizeChannel(benchmark::State& state) {
    const auto spec = chain::ChainSpec::uniform(static_cast<int>(state.range(0)), 1.0);
    for (auto _ : state) {
        auto spectrum = chain::diagonalize_channel(spec);
        benchmark::DoNotOptimize(spectrum.zero_mode_coupling);
    }
}
BENCHMARK(BM_DiagonalizeChannel)->Arg(29)->Arg(99);

void BM_PropagateExact(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto spec = chain::ChainSpec::uniform(n, 1.0);
    const double jz = std::sqrt(2.0 / (n + 1));
    const double T = control::transfer_time_for_amplitude(2, 0.7, jz);
    const auto mod = control::make_power_sine(2, T, jz);
    for (auto _ : state) {
        const auto outcome = dynamics::propagate_exact(spec, mod, nullptr, T);
        benchmark::DoNotOptimize(outcome.amplitude_modulus);
    }
}
BENCHMARK(BM_PropagateExact)->Arg(29);

void BM_ZetaTimeDomain(benchmark::State& state) {
    const auto spec = chain::ChainSpec::uniform(29, 1.0);
    const auto split = chain::split_system_bath(chain::diagonalize_channel(spec));
    const auto spectra = bathspec::BathSpectra::from_split(split);
    const auto plus = bathspec::BathCorrelation::discrete(spectra.plus, bathspec::Parity::plus);
    const auto minus = bathspec::BathCorrelation::discrete(spectra.minus, bathspec::Parity::minus);
    const double jz = std::sqrt(2.0 / 30.0);
    const auto mod = control::make_power_sine(2, 40.0, jz);
    const int grid = static_cast<int>(state.range(0));
    for (auto _ : state) {
        const auto zeta = bathspec::zeta_time_domain(mod, jz, plus, minus, grid);
        benchmark::DoNotOptimize(zeta.value);
    }
}
BENCHMARK(BM_ZetaTimeDomain)->Arg(1024)->Arg(4096);

void BM_FilterFunction(benchmark::State& state) {
    const double jz = std::sqrt(2.0 / 30.0);
    const auto mod = control::make_power_sine(2, 100.0, jz);
    double omega = 0.2;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            bathspec::filter_function(mod, jz, bathspec::Parity::minus, omega));
        omega = omega < 2.0 ? omega + 0.01 : 0.2;
    }
}
BENCHMARK(BM_FilterFunction);

void BM_EnsembleRealization(benchmark::State& state) {
    const auto spec = chain::ChainSpec::uniform(29, 1.0);
    const double jz = std::sqrt(2.0 / 30.0);
    const double T = control::transfer_time_for_amplitude(0, 0.6, jz);
    const auto mod = control::make_power_sine(0, T, jz);
    noise::NoiseProcess process;
    process.strength = 0.05;
    std::uint64_t seed = 0;
    for (auto _ : state) {
        const auto realization = noise::sample_realization(process, 29, seed++);
        const auto outcome = dynamics::propagate_exact(spec, mod, &realization, T);
        benchmark::DoNotOptimize(outcome.amplitude_modulus);
    }
}
BENCHMARK(BM_EnsembleRealization);

} // namespace

BENCHMARK_MAIN();
