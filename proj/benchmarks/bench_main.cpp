#include <benchmark/benchmark.h>

#include <numbers>

#include "besov/elliptic.hpp"
#include "besov/fft.hpp"
#include "besov/littlewood_paley.hpp"
#include "besov/multipliers.hpp"
#include "besov/operators.hpp"

using namespace besov;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Grid square(std::size_t n, int dim) {
    return Grid(std::vector<std::size_t>(static_cast<std::size_t>(dim), n),
                std::vector<double>(static_cast<std::size_t>(dim), kTwoPi));
}

void forward_fft(benchmark::State& state) {
    const Grid g = square(static_cast<std::size_t>(state.range(0)), 2);
    const GridFunction f = random_band_limited(g, 4, 2.0, g.nyquist_radius() * 2.0, 1, 0);
    for (auto _ : state) benchmark::DoNotOptimize(forward_transform(f));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.point_count() * 4));
}
BENCHMARK(forward_fft)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMicrosecond);

void weighted_besov_norm(benchmark::State& state) {
    const Grid g = square(static_cast<std::size_t>(state.range(0)), 2);
    const DyadicPartition partition(g);
    const GridFunction f = random_band_limited(g, 4, 2.0, partition.band_radius(), 1, 0);
    BesovParams params;
    params.s = 0.5;
    for (auto _ : state) benchmark::DoNotOptimize(besov_norm(f, params, partition));
}
BENCHMARK(weighted_besov_norm)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void principal_solve(benchmark::State& state) {
    const Grid g = square(static_cast<std::size_t>(state.range(0)), 2);
    const std::size_t d = 8;
    const EllipticProblem problem{EllipticSymbol::separable(2, 2, -1.0),
                                  require_positive(DiagonalScale{1.0, d}.matrix(), 3.0 * std::numbers::pi / 4.0),
                                  {},
                                  cplx(1.0, 0.0),
                                  BesovParams{},
                                  Profile::Cos2};
    const GridFunction f = random_band_limited(g, d, 2.0, DyadicPartition(g).band_radius(), 1, 0);
    for (auto _ : state) benchmark::DoNotOptimize(apply_principal_resolvent(problem, f));
}
BENCHMARK(principal_solve)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
