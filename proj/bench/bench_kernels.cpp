// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>
#include <random>

#include "bcsys/kernels.hpp"
#include "bcsys/random.hpp"
#include "bcsys/spectral.hpp"

using namespace bcsys;

namespace {

double coeff(std::int64_t n)
{
    return n % 3 == 0 ? -1.0 : 1.0;
}

void BM_dirichlet_sum_serial(benchmark::State & state)
{
    for (auto _ : state)
        benchmark::DoNotOptimize(kernels::serial::dirichlet_sum<double>(state.range(0), 2.0, coeff));
}

void BM_dirichlet_sum_parallel(benchmark::State & state)
{
    for (auto _ : state)
        benchmark::DoNotOptimize(kernels::dirichlet_sum<double>(state.range(0), 2.0, coeff));
}

std::vector<Complex> diagonal(std::int64_t n)
{
    std::vector<Complex> d(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i)
        d[static_cast<std::size_t>(i)] = Complex(std::cos(0.1 * i), std::sin(0.1 * i));
    return d;
}

void BM_diagonal_trace_serial(benchmark::State & state)
{
    auto const d = diagonal(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(kernels::serial::diagonal_trace(d, 2.0));
}

void BM_diagonal_trace_parallel(benchmark::State & state)
{
    auto const d = diagonal(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(kernels::diagonal_trace(d, 2.0));
}

HeckeElement sample_element()
{
    std::mt19937_64 rng(1);
    return random_hecke(rng);
}

void BM_represent_serial(benchmark::State & state)
{
    auto const f = sample_element();
    for (auto _ : state)
        benchmark::DoNotOptimize(serial::represent(f, BasePoint::one(), state.range(0)).matrix.data());
}

void BM_represent_parallel(benchmark::State & state)
{
    auto const f = sample_element();
    for (auto _ : state)
        benchmark::DoNotOptimize(represent(f, BasePoint::one(), state.range(0)).matrix.data());
}

}  // namespace

BENCHMARK(BM_dirichlet_sum_serial)->Arg(100'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_dirichlet_sum_parallel)->Arg(100'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_diagonal_trace_serial)->Arg(1'000'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_diagonal_trace_parallel)->Arg(1'000'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_represent_serial)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_represent_parallel)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
