#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "execbench/eventlog.hpp"

namespace execbench {

enum class Relation : std::uint8_t {
    StrictOrder,         // a -> b
    ReverseStrictOrder,  // a <- b
    Exclusive,           // a # b
    Interleaving,        // a || b
};

std::string_view symbol(Relation r);
Relation mirror(Relation r);

// Trace counts behind the exclusiveness and interleaving scores.
//
// For activities a, b of one log:
//   traces_with(a) = |T_a|
//   both(a, b)     = |T_{a and b}|          (both(a, a) = |T_a|)
//   only(a, b)     = |T_{a and not b}|
//   before(a, b)   = |T_{a | a > b}|        traces where some a precedes some b;
//                                           before(a, a) counts traces where a repeats
class CooccurrenceStats {
public:
    CooccurrenceStats() = default;
    // `alphabet` must be sorted and duplicate-free.
    explicit CooccurrenceStats(std::vector<Activity> alphabet);

    const std::vector<Activity>& alphabet() const noexcept { return alphabet_; }
    std::size_t size() const noexcept { return alphabet_.size(); }

    std::optional<std::size_t> find(std::string_view a) const;
    // Throws LookupError for unknown activities.
    std::size_t index_of(std::string_view a) const;

    std::uint64_t traces_with(std::size_t a) const { return occurs_[a]; }
    std::uint64_t both(std::size_t a, std::size_t b) const { return both_[a * size() + b]; }
    std::uint64_t only(std::size_t a, std::size_t b) const { return occurs_[a] - both(a, b); }
    std::uint64_t before(std::size_t a, std::size_t b) const { return before_[a * size() + b]; }

    // Adds `weight` identical traces with the given activity sequence.
    void add_trace(const Variant& trace, std::uint64_t weight = 1);
    void merge(const CooccurrenceStats& other);

    bool operator==(const CooccurrenceStats&) const = default;

private:
    std::vector<Activity> alphabet_;
    std::vector<std::uint64_t> occurs_;
    std::vector<std::uint64_t> both_;
    std::vector<std::uint64_t> before_;
};

// Counts per variant weighted by its frequency; the parallel version splits
// the variants across OpenMP threads and sums per-thread tallies.
CooccurrenceStats ordering_counts(const VariantIndex& variants);
CooccurrenceStats ordering_counts_serial(const VariantIndex& variants);
CooccurrenceStats ordering_counts(const EventLog& log);

// min(|T_{a and not b}| / |T_a|, |T_{b and not a}| / |T_b|)
double exclusiveness_score(const CooccurrenceStats& stats, std::size_t a, std::size_t b);
double exclusiveness_score(const CooccurrenceStats& stats, std::string_view a, std::string_view b);

// 1 - | |T_{a|a>b}| - |T_{b|b>a}| | / |T_{a and b}|. Throws UndefinedScoreError
// when a and b never co-occur.
double interleaving_score(const CooccurrenceStats& stats, std::size_t a, std::size_t b);
double interleaving_score(const CooccurrenceStats& stats, std::string_view a, std::string_view b);

struct Thresholds {
    double exclusive = 0.9;
    double interleaving = 0.9;

    // Throws ConfigError unless both lie in [0, 1].
    void validate() const;
};

// Pairs that never co-occur are exclusive before any threshold applies. For
// a == b co-occurrence means a repeats within a trace. Otherwise exclusive if
// s_# > exc, interleaving if s_|| > int, else strict order in the majority
// direction (interleaving on an exact tie).
Relation classify_relation(const CooccurrenceStats& stats, std::size_t a, std::size_t b,
                           const Thresholds& th);
Relation classify_relation(const CooccurrenceStats& stats, std::string_view a, std::string_view b,
                           const Thresholds& th);

class FootprintMatrix {
public:
    FootprintMatrix() = default;
    FootprintMatrix(std::vector<Activity> alphabet, std::vector<Relation> cells, Thresholds th);

    const std::vector<Activity>& alphabet() const noexcept { return alphabet_; }
    std::size_t size() const noexcept { return alphabet_.size(); }
    const Thresholds& thresholds() const noexcept { return thresholds_; }

    std::optional<std::size_t> find(std::string_view a) const;

    Relation at(std::size_t a, std::size_t b) const { return cells_[a * size() + b]; }
    // Throws LookupError for unknown activities.
    Relation at(std::string_view a, std::string_view b) const;

    std::span<const Relation> row(std::size_t a) const {
        return {cells_.data() + a * size(), size()};
    }

    bool operator==(const FootprintMatrix& o) const {
        return alphabet_ == o.alphabet_ && cells_ == o.cells_;
    }

private:
    std::vector<Activity> alphabet_;
    std::vector<Relation> cells_;
    Thresholds thresholds_;
};

// Unordered pairs are classified once and mirrored. Throws DataError for an
// empty log.
FootprintMatrix build_footprint_matrix(const CooccurrenceStats& stats, const Thresholds& th);
FootprintMatrix build_footprint_matrix_serial(const CooccurrenceStats& stats, const Thresholds& th);
FootprintMatrix build_footprint_matrix(const EventLog& log, const Thresholds& th);

// CSV dumps: header row and first column are the sorted alphabet.
void write_footprint_csv(std::ostream& out, const FootprintMatrix& m);
// Six decimal places; cells whose score is undefined are left empty.
void write_exclusiveness_csv(std::ostream& out, const CooccurrenceStats& stats);
void write_interleaving_csv(std::ostream& out, const CooccurrenceStats& stats);

}  // namespace execbench
