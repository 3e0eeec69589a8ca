#include <benchmark/benchmark.h>

#include "axiswalk/analytics.hpp"
#include "axiswalk/excursion.hpp"
#include "axiswalk/simulate.hpp"

using namespace axiswalk;

namespace {

constexpr ModelKind kinds[] = {ModelKind::QuarterPlane, ModelKind::CoupledHalfPlane,
                               ModelKind::FullPlane, ModelKind::BackstepQuarter,
                               ModelKind::ReflectedSRWQuarter};

void BM_Step(benchmark::State& state)
{
    const ModelSpec m = make_model(kinds[state.range(0)], 0.25);
    RngStream rng(1, 0);
    LatticeState s{1, 1};
    for (auto _ : state)
    {
        s = step(m, s, rng);
        benchmark::DoNotOptimize(s);
    }
    state.SetLabel(std::string(to_string(m.kind)));
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Step)->DenseRange(0, 4);

// Walk time simulated per second, with and without leaps.
template<Engine E>
void BM_Walk(benchmark::State& state)
{
    const ModelSpec m = make_model(kinds[state.range(0)], 0.25);
    const std::int64_t n = state.range(1);
    std::uint64_t replica = 0;
    for (auto _ : state)
    {
        RngStream rng(2, replica++);
        const auto r = simulate(E, m, {1, 1}, n, rng, [](std::int64_t, LatticeState) {});
        benchmark::DoNotOptimize(r.terminal);
    }
    state.SetLabel(std::string(to_string(m.kind)));
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_Walk<Engine::Step>)->ArgsProduct({{0, 1, 2}, {100'000}});
BENCHMARK(BM_Walk<Engine::Leap>)->ArgsProduct({{0, 1, 2}, {100'000, 10'000'000}});

void BM_FreeLeap(benchmark::State& state)
{
    RngStream rng(3, 0);
    const std::int64_t steps = state.range(0);
    LatticeState s{0, 0};
    for (auto _ : state)
    {
        s = free_leap(s, steps, rng);
        benchmark::DoNotOptimize(s);
    }
    state.SetItemsProcessed(state.iterations() * steps);
}
BENCHMARK(BM_FreeLeap)->Arg(16)->Arg(2048)->Arg(2049)->Arg(1'000'000);

void BM_TrackedWalk(benchmark::State& state)
{
    const ModelSpec m = make_model(ModelKind::QuarterPlane, 0.25);
    const std::int64_t n = state.range(0);
    std::uint64_t replica = 0;
    for (auto _ : state)
    {
        RngStream rng(4, replica++);
        const auto run = summarize_walk(m, {1, 1}, n, rng, Engine::Leap);
        benchmark::DoNotOptimize(run.summary.count_n);
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_TrackedWalk)->Arg(100'000)->Arg(10'000'000);

void BM_RhoMeanExact(benchmark::State& state)
{
    const std::int64_t x = state.range(0);
    for (auto _ : state)
        benchmark::DoNotOptimize(rho_mean_exact(x, 0.3));
}
BENCHMARK(BM_RhoMeanExact)->Arg(10)->Arg(1'000'000);

} // namespace

BENCHMARK_MAIN();
