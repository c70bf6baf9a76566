#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace execbench {

using Activity = std::string;

// Activity sequence of a trace. Many traces can share one variant.
using Variant = std::vector<Activity>;

std::string to_string(const Variant& v);

struct Event {
    std::string case_id;
    Activity activity;
    // Seconds since the Unix epoch (UTC); absent when the log has no time column.
    std::optional<double> timestamp;
    // 0-based data row in the source file; ordering tiebreaker.
    std::size_t row = 0;
};

struct Trace {
    std::string case_id;
    std::vector<Event> events;
    std::optional<double> performance;

    Variant variant() const;
};

// Case-grouped event log. Traces keep first-appearance order; the alphabet is
// the set of all activity names occurring in them.
class EventLog {
public:
    EventLog() = default;

    // Validates the invariants (unique non-empty case ids, non-empty traces,
    // events carrying their trace's case id, non-empty activities).
    explicit EventLog(std::vector<Trace> traces);

    // One trace per sequence, case ids "<prefix>1", "<prefix>2", ... and no
    // timestamps. Intended for tests and synthetic data.
    static EventLog from_variants(const std::vector<Variant>& sequences,
                                  std::string_view prefix = "c");

    const std::vector<Trace>& traces() const noexcept { return traces_; }
    const std::set<Activity>& alphabet() const noexcept { return alphabet_; }
    std::size_t size() const noexcept { return traces_.size(); }
    bool empty() const noexcept { return traces_.empty(); }

    const Trace* find(std::string_view case_id) const;

    // True when every event carries a timestamp (and the log is non-empty).
    bool has_timestamps() const noexcept;

private:
    std::vector<Trace> traces_;
    std::set<Activity> alphabet_;
    std::unordered_map<std::string, std::size_t> by_case_;
};

struct SchemaConfig {
    std::string case_col = "case_id";
    std::string activity_col = "activity";
    std::string time_col = "timestamp";
    std::string perf_col = "performance";
    // When false, a missing time/performance column is not an error: a missing
    // time column means row-order semantics, a missing performance column
    // means no performance values.
    bool time_required = false;
    bool perf_required = false;
};

// Parse a CSV event log with a header row. Events are grouped per case and
// ordered by timestamp with input row order as tiebreaker (row order alone
// when there is no time column).
EventLog parse_event_log(std::istream& source, const SchemaConfig& schema = {});
EventLog parse_event_log_file(const std::string& path, const SchemaConfig& schema = {});

// Inverse of parse_event_log for the default column names. Timestamps are
// written as ISO-8601 UTC, performance is repeated on every row of a case.
void write_event_log(std::ostream& out, const EventLog& log, const SchemaConfig& schema = {});

// Non-fatal observations made at ingestion (e.g. performance values present
// for only some of the cases).
std::vector<std::string> ingestion_warnings(const EventLog& log);

// ISO-8601 date-time to seconds since the epoch. Accepts "YYYY-MM-DD",
// "YYYY-MM-DD[T ]HH:MM[:SS[.fff]]" with optional "Z" or "+HH[:MM]" suffix.
std::optional<double> parse_iso8601(std::string_view text);
std::string format_iso8601(double seconds);

enum class PerfMode { Column, Throughput };
enum class PerfDirection { HigherIsBetter, LowerIsBetter };

struct PerfConfig {
    PerfMode mode = PerfMode::Column;
    // Unset means: higher-is-better for Column, lower-is-better for Throughput.
    std::optional<PerfDirection> direction;

    PerfDirection effective_direction() const;
};

using PerformanceMap = std::map<std::string, double>;

// Case-level performance normalized to higher-is-better. Throughput is the
// last minus the first event timestamp in seconds.
PerformanceMap trace_performance(const EventLog& log, const PerfConfig& perf);

// Copy of `log` whose trace performance values come from `perf`. Cases absent
// from the map end up without a performance value.
EventLog with_performance(const EventLog& log, const PerformanceMap& perf);

struct VariantStats {
    std::size_t frequency = 0;
    std::vector<std::string> trace_ids;
    // Mean over the traces of this variant; present iff all of them carry a
    // performance value.
    std::optional<double> mean_performance;
};

// Distinct activity sequences of a log with their frequencies. Entries are
// kept in lexicographic variant order.
class VariantIndex {
public:
    using Map = std::map<Variant, VariantStats>;

    VariantIndex() = default;
    explicit VariantIndex(Map entries);

    const Map& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    std::size_t trace_count() const noexcept { return trace_count_; }
    const VariantStats* find(const Variant& v) const;

    // True when every entry has a mean performance.
    bool has_performance() const noexcept;

private:
    Map entries_;
    std::size_t trace_count_ = 0;
};

VariantIndex extract_variants(const EventLog& log);

}  // namespace execbench
