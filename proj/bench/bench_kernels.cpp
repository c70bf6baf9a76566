#include <benchmark/benchmark.h>

#include "execbench/assessor.hpp"
#include "execbench/compatibility.hpp"
#include "execbench/evaluator.hpp"
#include "execbench/footprint.hpp"
#include "execbench/synthlab.hpp"

using namespace execbench;

namespace {

EventLog sample_log(std::size_t leaves, std::size_t traces, std::uint64_t seed) {
    synth::GenConfig gen;
    gen.target_leaves = leaves;
    synth::SimConfig sim;
    sim.n_traces = traces;
    sim.seed = seed;
    return synth::simulate_log(synth::generate_process_tree(seed, gen), sim);
}

void BM_OrderingCountsSerial(benchmark::State& state) {
    const auto idx = extract_variants(sample_log(static_cast<std::size_t>(state.range(0)), 5000, 1));
    for (auto _ : state) benchmark::DoNotOptimize(ordering_counts_serial(idx));
}

void BM_OrderingCountsParallel(benchmark::State& state) {
    const auto idx = extract_variants(sample_log(static_cast<std::size_t>(state.range(0)), 5000, 1));
    for (auto _ : state) benchmark::DoNotOptimize(ordering_counts(idx));
}

struct ScoringInput {
    VariantIndex own, bench;
    std::vector<ProcessChange> changes;
};

ScoringInput scoring_input() {
    eval::ExperimentConfig cfg;
    cfg.sim.n_traces = 1000;
    const auto pair = eval::generate_pair(cfg, 3);
    ScoringInput in{extract_variants(pair.own_log), extract_variants(pair.bench_log), {}};
    const auto fo = build_footprint_matrix(pair.own_log, Thresholds{});
    const auto fb = build_footprint_matrix(pair.bench_log, Thresholds{});
    in.changes = enumerate_changes(build_compatibility_graph(match_activities(fo, fb)), 3).changes;
    return in;
}

void BM_ScoreChangesSerial(benchmark::State& state) {
    const auto in = scoring_input();
    const Assessor a(in.own, in.bench);
    for (auto _ : state) benchmark::DoNotOptimize(score_changes_serial(a, in.changes));
    state.counters["changes"] = static_cast<double>(in.changes.size());
}

void BM_ScoreChangesParallel(benchmark::State& state) {
    const auto in = scoring_input();
    const Assessor a(in.own, in.bench);
    for (auto _ : state) benchmark::DoNotOptimize(score_changes(a, in.changes));
    state.counters["changes"] = static_cast<double>(in.changes.size());
}

void BM_ExperimentSerial(benchmark::State& state) {
    eval::ExperimentConfig cfg;
    cfg.n_pairs = 4;
    cfg.sim.n_traces = 300;
    for (auto _ : state) benchmark::DoNotOptimize(eval::run_experiment_serial(cfg));
}

void BM_ExperimentParallel(benchmark::State& state) {
    eval::ExperimentConfig cfg;
    cfg.n_pairs = 4;
    cfg.sim.n_traces = 300;
    for (auto _ : state) benchmark::DoNotOptimize(eval::run_experiment(cfg));
}

}  // namespace

BENCHMARK(BM_OrderingCountsSerial)->Arg(10)->Arg(40);
BENCHMARK(BM_OrderingCountsParallel)->Arg(10)->Arg(40);
BENCHMARK(BM_ScoreChangesSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScoreChangesParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExperimentSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExperimentParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
