#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "execbench/compatibility.hpp"
#include "execbench/eventlog.hpp"
#include "execbench/footprint.hpp"
#include "execbench/matcher.hpp"

namespace execbench {

// Variants of the own log that execute at least one own-side activity of
// `change`, in lexicographic order.
std::vector<Variant> affected_variants(const VariantIndex& own, const ProcessChange& change);

// Substitutes every occurrence of each replaced activity simultaneously.
Variant apply_change(const Variant& v, const ProcessChange& change);

// Unit-cost token Levenshtein distance.
std::size_t levenshtein(const Variant& v, const Variant& w);

// 1 - levenshtein(v, w) / max(|v|, |w|)
double edit_similarity(const Variant& v, const Variant& w);

struct WeightedVariant {
    Variant variant;
    std::size_t frequency = 0;
};

struct ClosestMatch {
    Variant variant;
    std::size_t distance = 0;
    double similarity = 0.0;
    // Other candidates at the same minimal distance.
    std::size_t ties = 0;
};

// Candidate at minimal edit distance; ties go to the higher frequency, then
// to the lexicographically smaller variant. Throws DataError when
// `candidates` is empty.
ClosestMatch closest_match(const Variant& modified, std::span<const WeightedVariant> candidates);

// Benchmark variants executing at least one benchmark-side activity of `change`.
std::vector<WeightedVariant> candidate_pool(const VariantIndex& bench, const ProcessChange& change);

// Per affected own variant: how its modification aligns with the benchmark.
struct Alignment {
    Variant original;
    Variant modified;
    Variant closest;
    std::size_t frequency = 0;          // traces of `original` in the own log
    std::size_t closest_frequency = 0;  // traces of `closest` in the benchmark log
    std::size_t distance = 0;
    double similarity = 0.0;
    std::size_t ties = 0;
    // mean performance of `closest` minus mean performance of `original`
    std::optional<double> performance_delta;
};

struct ScoredChange {
    ProcessChange change;
    double feasibility = 0.0;
    std::optional<double> performance_impact;
    std::size_t affected_trace_count = 0;
    std::vector<Alignment> alignments;
};

// Scores changes of one own/benchmark log pair. Activities and variants are
// interned once so repeated scoring only touches integer sequences.
class Assessor {
    using Seq = std::vector<std::uint32_t>;
    struct SeqHash {
        std::size_t operator()(const Seq& s) const noexcept;
    };

public:
    // Closest-match lookups per (modified variant, benchmark activity), reused
    // across changes scored by the same assessor. One cache per thread.
    class Cache {
        friend class Assessor;
        struct Nearest {
            std::size_t distance;
            std::vector<std::size_t> candidates;  // benchmark entries at `distance`
        };
        std::unordered_map<Seq, std::unordered_map<std::uint32_t, Nearest>, SeqHash> entries_;
    };

    Assessor(const VariantIndex& own, const VariantIndex& bench);

    // nullopt when no own variant is affected. Performance impact is filled
    // in when both logs carry mean performance for the variants involved.
    // Without `alignments` only the aggregate scores are filled in.
    std::optional<ScoredChange> score(const ProcessChange& change, Cache* cache = nullptr,
                                      bool alignments = true) const;

    bool has_performance() const noexcept { return own_perf_ && bench_perf_; }

private:
    struct Entry {
        Variant variant;
        Seq seq;
        std::size_t frequency;
        std::optional<double> mean_performance;
        std::vector<std::uint32_t> activities;  // sorted distinct ids
    };
    struct Best {
        std::size_t index = 0;
        std::size_t distance = 0;
        std::size_t ties = 0;
    };

    std::uint32_t intern(const Activity& a);
    std::optional<std::uint32_t> id_of(const Activity& a) const;
    Best pick(std::vector<std::size_t> candidates, std::size_t distance) const;
    Best closest(const Seq& modified, const std::vector<std::size_t>& pool) const;
    Best closest(const Seq& modified, const std::vector<std::uint32_t>& pool_activities, Cache& cache) const;

    std::unordered_map<Activity, std::uint32_t> ids_;
    std::vector<Entry> own_;
    std::vector<Entry> bench_;
    std::unordered_map<Seq, std::size_t, SeqHash> bench_lookup_;
    std::vector<std::vector<std::size_t>> bench_by_activity_;  // activity id -> bench entries
    std::vector<std::vector<std::size_t>> own_by_activity_;    // activity id -> own entries
    bool own_perf_ = false;
    bool bench_perf_ = false;
};

// Frequency-weighted mean edit similarity between modified own variants and
// their closest benchmark variants. Throws DataError for a vacuous change.
double feasibility(const ProcessChange& change, const VariantIndex& own, const VariantIndex& bench);

// Frequency-weighted mean of (mean performance of closest match - mean
// performance of original). Throws DataError if either log lacks performance.
double performance_impact(const ProcessChange& change, const VariantIndex& own, const VariantIndex& bench);

// Scores all changes, dropping vacuous ones; output order follows `changes`.
std::vector<ScoredChange> score_changes(const Assessor& assessor, const std::vector<ProcessChange>& changes);
std::vector<ScoredChange> score_changes_serial(const Assessor& assessor, const std::vector<ProcessChange>& changes);

struct BenchmarkConfig {
    Thresholds thresholds;
    std::size_t max_change_size = 3;
    double min_feasibility = 0.0;
    std::optional<std::size_t> top;
    // nullopt: performance is not assessed.
    std::optional<PerfConfig> perf = PerfConfig{};
};

struct BenchmarkReport {
    BenchmarkConfig config;
    std::vector<Activity> own_alphabet;
    std::vector<Activity> bench_alphabet;
    std::size_t own_traces = 0;
    std::size_t bench_traces = 0;
    MatchSet matches;
    std::size_t enumerated_changes = 0;
    std::size_t vacuous_changes = 0;
    bool truncated = false;
    bool performance_assessed = false;
    // Sorted by performance impact (when assessed) descending, then
    // feasibility descending, then canonical change order.
    std::vector<ScoredChange> changes;
    std::vector<std::string> warnings;
};

// Footprints, matching, change enumeration, feasibility and performance
// assessment, filtering and ranking for one own/benchmark pair.
BenchmarkReport benchmark(const EventLog& own, const EventLog& bench, const BenchmarkConfig& cfg);

}  // namespace execbench
