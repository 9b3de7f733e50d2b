#include <benchmark/benchmark.h>

#include "mqrep/distillation.h"
#include "mqrep/engine.h"
#include "mqrep/harness.h"
#include "mqrep/policies.h"

using namespace mqrep;

namespace {

void BM_RunFn(benchmark::State& state) {
    SimParams p;
    p.n = static_cast<int>(state.range(0));
    p.n_ch = 5;
    p.p_l = 0.3;
    p.m_star = 12;
    std::uint64_t seed = 1;
    std::int64_t steps = 0;
    for (auto _ : state) {
        p.seed = seed++;
        const RunResult r = run(p, PolicyConfig{});
        steps += r.steps;
        benchmark::DoNotOptimize(r.waiting_time);
    }
    state.counters["steps/s"] = benchmark::Counter(static_cast<double>(steps), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_RunFn)->Arg(5)->Arg(7)->Arg(9);

void BM_RunCcMode(benchmark::State& state) {
    SimParams p;
    p.n = 7;
    p.p_l = 0.3;
    p.m_star = 12;
    p.cc_mode = static_cast<CcMode>(state.range(0));
    std::uint64_t seed = 1;
    for (auto _ : state) {
        p.seed = seed++;
        benchmark::DoNotOptimize(run(p, PolicyConfig{}).waiting_time);
    }
}
BENCHMARK(BM_RunCcMode)->DenseRange(0, 2);

void BM_RunDistillSwap(benchmark::State& state) {
    SimParams p;
    p.n = 7;
    p.n_ch = 7;
    p.p_l = 0.6;
    p.m_star = 24;
    p.m0 = 2;
    PolicyConfig pol;
    pol.ordering = DistillOrdering::DistillSwap;
    std::uint64_t seed = 1;
    for (auto _ : state) {
        p.seed = seed++;
        benchmark::DoNotOptimize(run(p, pol).waiting_time);
    }
}
BENCHMARK(BM_RunDistillSwap);

std::vector<LinkView> side(int count, Rng& rng) {
    std::vector<LinkView> v;
    for (int i = 0; i < count; ++i)
        v.push_back({i, 1 + static_cast<int>(uniform_index(rng, 4)), static_cast<Age>(uniform_index(rng, 6)), i});
    return v;
}

void BM_Pairing(benchmark::State& state) {
    Rng rng(7);
    const auto left = side(static_cast<int>(state.range(1)), rng);
    const auto right = side(static_cast<int>(state.range(1)), rng);
    const SwapPolicy pol{static_cast<SwapPolicyKind>(state.range(0)), 0.5};
    PlanContext ctx;
    ctx.m_star = 12;
    for (auto _ : state) benchmark::DoNotOptimize(make_swap_plan(pol, left, right, ctx, rng).pairs.size());
    state.SetLabel(pol.to_string());
}
BENCHMARK(BM_Pairing)
    ->ArgsProduct({{static_cast<long>(SwapPolicyKind::FN), static_cast<long>(SwapPolicyKind::SN),
                    static_cast<long>(SwapPolicyKind::FnOpt), static_cast<long>(SwapPolicyKind::SnOpt)},
                   {4, 6}});

void BM_PumpingClosedForm(benchmark::State& state) {
    double f0 = 0.8;
    for (auto _ : state) benchmark::DoNotOptimize(pumping_closed_form(f0, 50));
}
BENCHMARK(BM_PumpingClosedForm);

void BM_PumpingRecurrence(benchmark::State& state) {
    double f0 = 0.8;
    for (auto _ : state) benchmark::DoNotOptimize(pumping_recurrence(f0, 50));
}
BENCHMARK(BM_PumpingRecurrence);

void BM_Batches(benchmark::State& state) {
    SimParams p;
    p.n = 7;
    p.p_l = 0.4;
    for (auto _ : state) benchmark::DoNotOptimize(run_batches(p, PolicyConfig{}, {2, 50}, 1).mean_of_means_waiting);
}
BENCHMARK(BM_Batches)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
