#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "execbench/assessor.hpp"
#include "execbench/matcher.hpp"
#include "execbench/synthlab.hpp"

namespace execbench::eval {

struct PrecisionRecall {
    double precision = 1.0;
    double recall = 1.0;
    std::size_t true_positives = 0;
};

// Pairs are compared by (own, benchmark) == (old, new). An empty prediction
// has precision 1.0; an empty truth has recall 1.0.
PrecisionRecall precision_recall(const std::vector<Match>& predicted, const synth::GroundTruth& truth);

// `n` distinct non-trivial pairs drawn uniformly from own x bench. When `n`
// exceeds the pool the whole pool is returned and `capped` is set. The result
// is sorted by (own, benchmark).
std::vector<Match> random_baseline(const std::vector<Activity>& own, const std::vector<Activity>& bench,
                                   std::size_t n, std::uint64_t seed, bool* capped = nullptr);

struct ExperimentConfig {
    std::size_t n_pairs = 100;
    std::size_t min_leaves = 8;
    std::size_t max_leaves = 15;
    synth::GenConfig gen;  // target_leaves is drawn per pair
    std::size_t min_replacements = 1, max_replacements = 3;
    std::size_t min_insertions = 0, max_insertions = 2;
    std::size_t min_deletions = 0, max_deletions = 2;
    synth::SimConfig sim{500, 0.05, 3, 0, false, "case"};  // seed is derived per pair and log
    Thresholds thresholds;
    std::size_t max_change_size = 3;
    std::uint64_t master_seed = 42;

    void validate() const;
};

struct PairRecord {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    std::string own_tree;
    std::string bench_tree;
    synth::GroundTruth truth;
    std::size_t own_variants = 0;
    std::size_t bench_variants = 0;
    double shared_ratio = 0.0;
    std::size_t technique_matches = 0;
    std::vector<Match> matches;
    double precision = 0.0;
    double recall = 0.0;
    std::size_t true_positives = 0;
    std::size_t technique_changes = 0;
    // Mean feasibility over the pair's enumerated changes; absent when the
    // technique found no match.
    std::optional<double> technique_feasibility;
    std::size_t baseline_matches = 0;
    std::size_t baseline_changes = 0;
    std::optional<double> baseline_feasibility;
    bool baseline_capped = false;
    bool truncated = false;
    std::optional<std::string> error;
};

struct Summary {
    double mean = 0.0;
    double median = 0.0;
    std::size_t count = 0;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<PairRecord> pairs;
    std::size_t failed_pairs = 0;
    std::size_t pairs_without_matches = 0;
    Summary precision;
    Summary recall;
    Summary technique_feasibility;
    Summary baseline_feasibility;
    std::vector<std::string> notes;
};

// Trees, logs and ground truth of pair `index`, all drawn from seeds derived
// from the master seed. Shared by the experiment and the synth command.
struct GeneratedPair {
    std::uint64_t seed = 0;
    synth::ProcessTree own_tree;
    synth::ProcessTree bench_tree;
    synth::GroundTruth truth;
    EventLog own_log;
    EventLog bench_log;
};

GeneratedPair generate_pair(const ExperimentConfig& cfg, std::size_t index);

// Evaluates one generated pair; never throws (failures land in `error`).
PairRecord run_pair(const ExperimentConfig& cfg, std::size_t index);

// Pairs run in parallel with per-pair derived seeds; aggregation follows pair
// index order, so the report does not depend on the schedule.
ExperimentReport run_experiment(const ExperimentConfig& cfg);
ExperimentReport run_experiment_serial(const ExperimentConfig& cfg);

Summary summarize(std::vector<double> values);

}  // namespace execbench::eval
