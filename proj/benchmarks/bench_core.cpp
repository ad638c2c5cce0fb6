#include <benchmark/benchmark.h>

#include "rdts/audit.hpp"
#include "rdts/compression.hpp"
#include "rdts/information.hpp"
#include "rdts/policy.hpp"

using namespace rdts;

static void BM_TsInfoRatio(benchmark::State & state) {
    const auto size = static_cast<std::size_t>(state.range(0));
    auto rng = make_stream(1);
    auto inst = sample_instance(rng, 10, size, size, OutcomeModel::logistic(10.0));
    auto belief = BeliefState::dirichlet(size, rng);
    for (auto _ : state) benchmark::DoNotOptimize(ts_info_ratio(inst, belief));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_TsInfoRatio)->RangeMultiplier(2)->Range(25, 400)->Complexity();

static void BM_PosteriorUpdate(benchmark::State & state) {
    const auto m = static_cast<std::size_t>(state.range(0));
    auto rng = make_stream(2);
    auto inst = sample_instance(rng, 5, 20, m, OutcomeModel::logistic(3.0));
    auto belief = BeliefState::dirichlet(m, rng);
    for (auto _ : state) benchmark::DoNotOptimize(posterior_update_index(belief, inst, 3, 1));
}
BENCHMARK(BM_PosteriorUpdate)->Arg(100)->Arg(1000)->Arg(5000);

static void BM_GreedyPartitionAndRepresentation(benchmark::State & state) {
    auto rng = make_stream(3);
    auto inst = sample_instance(rng, 3, 100, 100, OutcomeModel::linear_binary());
    auto belief = BeliefState::dirichlet(100, rng);
    for (auto _ : state) {
        auto p = build_partition_linear(inst, 0.1);
        benchmark::DoNotOptimize(build_representation(inst, belief, p));
    }
}
BENCHMARK(BM_GreedyPartitionAndRepresentation);

static void BM_SimulateTs(benchmark::State & state) {
    auto rng = make_stream(4);
    auto inst = sample_instance(rng, 3, 30, 30, OutcomeModel::linear_binary());
    SimulationOptions opt;
    opt.threads = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(simulate_ts(inst, BeliefState::uniform(30), 200, 256, 9, opt));
}
BENCHMARK(BM_SimulateTs)->Arg(1)->Arg(4)->UseRealTime();

static void BM_Audit(benchmark::State & state) {
    auto rng = make_stream(5);
    auto inst = sample_instance(rng, 2, 4, 8, OutcomeModel::logistic(4.0));
    auto p = build_partition_glm(inst, 0.1);
    AuditOptions opt;
    opt.runs = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(audit_theorem1_chain(inst, BeliefState::uniform(8), p, 8, 1, opt));
}
BENCHMARK(BM_Audit);

BENCHMARK_MAIN();
