#include "execbench/eventlog.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "execbench/csv.hpp"
#include "execbench/errors.hpp"

namespace execbench {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

int days_in_month(int year, int month) {
    static constexpr int days[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    return month == 2 && leap ? 29 : days[month - 1];
}

// Howard Hinnant's days_from_civil.
long long days_from_civil(long long y, unsigned m, unsigned d) {
    y -= m <= 2;
    const long long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long long>(doe) - 719468;
}

void civil_from_days(long long z, long long& y, unsigned& m, unsigned& d) {
    z += 719468;
    const long long era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    y = static_cast<long long>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp < 10 ? mp + 3 : mp - 9;
    y += m <= 2;
}

bool read_digits(std::string_view s, std::size_t& pos, std::size_t n, int& out) {
    if (pos + n > s.size()) return false;
    int v = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const char c = s[pos + i];
        if (c < '0' || c > '9') return false;
        v = v * 10 + (c - '0');
    }
    pos += n;
    out = v;
    return true;
}

std::optional<double> parse_number(std::string_view text) {
    text = trim(text);
    if (text.empty()) return std::nullopt;
    double value = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value)) return std::nullopt;
    return value;
}

std::string shortest(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace

std::string to_string(const Variant& v) {
    std::string out = "<";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += v[i];
    }
    out += ">";
    return out;
}

Variant Trace::variant() const {
    Variant v;
    v.reserve(events.size());
    for (const auto& e : events) v.push_back(e.activity);
    return v;
}

EventLog::EventLog(std::vector<Trace> traces) : traces_(std::move(traces)) {
    by_case_.reserve(traces_.size());
    for (std::size_t i = 0; i < traces_.size(); ++i) {
        const auto& t = traces_[i];
        if (t.case_id.empty()) throw DataError("trace with empty case id");
        if (t.events.empty()) throw DataError("case '" + t.case_id + "' has no events");
        if (!by_case_.emplace(t.case_id, i).second) {
            throw DataError("duplicate case id '" + t.case_id + "'");
        }
        for (const auto& e : t.events) {
            if (e.case_id != t.case_id) {
                throw DataError("event of case '" + e.case_id + "' filed under case '" +
                                t.case_id + "'");
            }
            if (e.activity.empty()) {
                throw DataError("empty activity in case '" + t.case_id + "'");
            }
            alphabet_.insert(e.activity);
        }
    }
}

EventLog EventLog::from_variants(const std::vector<Variant>& sequences, std::string_view prefix) {
    std::vector<Trace> traces;
    traces.reserve(sequences.size());
    std::size_t row = 0;
    for (std::size_t i = 0; i < sequences.size(); ++i) {
        Trace t;
        t.case_id = std::string(prefix) + std::to_string(i + 1);
        for (const auto& a : sequences[i]) t.events.push_back(Event{t.case_id, a, std::nullopt, row++});
        traces.push_back(std::move(t));
    }
    return EventLog(std::move(traces));
}

const Trace* EventLog::find(std::string_view case_id) const {
    auto it = by_case_.find(std::string(case_id));
    return it == by_case_.end() ? nullptr : &traces_[it->second];
}

bool EventLog::has_timestamps() const noexcept {
    if (traces_.empty()) return false;
    for (const auto& t : traces_)
        for (const auto& e : t.events)
            if (!e.timestamp) return false;
    return true;
}

std::optional<double> parse_iso8601(std::string_view text) {
    text = trim(text);
    std::size_t pos = 0;
    int year = 0, month = 0, day = 0;
    if (!read_digits(text, pos, 4, year)) return std::nullopt;
    if (pos >= text.size() || text[pos++] != '-') return std::nullopt;
    if (!read_digits(text, pos, 2, month)) return std::nullopt;
    if (pos >= text.size() || text[pos++] != '-') return std::nullopt;
    if (!read_digits(text, pos, 2, day)) return std::nullopt;
    if (month < 1 || month > 12 || day < 1 || day > days_in_month(year, month)) return std::nullopt;

    double seconds_of_day = 0.0;
    double offset = 0.0;
    if (pos < text.size()) {
        if (text[pos] != 'T' && text[pos] != ' ') return std::nullopt;
        ++pos;
        int hh = 0, mm = 0, ss = 0;
        if (!read_digits(text, pos, 2, hh)) return std::nullopt;
        if (pos >= text.size() || text[pos++] != ':') return std::nullopt;
        if (!read_digits(text, pos, 2, mm)) return std::nullopt;
        double frac = 0.0;
        if (pos < text.size() && text[pos] == ':') {
            ++pos;
            if (!read_digits(text, pos, 2, ss)) return std::nullopt;
            if (pos < text.size() && (text[pos] == '.' || text[pos] == ',')) {
                ++pos;
                double scale = 0.1;
                const std::size_t start = pos;
                while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
                    frac += (text[pos] - '0') * scale;
                    scale /= 10.0;
                    ++pos;
                }
                if (pos == start) return std::nullopt;
            }
        }
        if (hh > 24 || mm > 59 || ss > 60) return std::nullopt;
        seconds_of_day = hh * 3600.0 + mm * 60.0 + ss + frac;
        if (pos < text.size()) {
            if (text[pos] == 'Z') {
                ++pos;
            } else if (text[pos] == '+' || text[pos] == '-') {
                const double sign = text[pos] == '+' ? 1.0 : -1.0;
                ++pos;
                int oh = 0, om = 0;
                if (!read_digits(text, pos, 2, oh)) return std::nullopt;
                if (pos < text.size() && text[pos] == ':') ++pos;
                if (pos < text.size() && !read_digits(text, pos, 2, om)) return std::nullopt;
                offset = sign * (oh * 3600.0 + om * 60.0);
            } else {
                return std::nullopt;
            }
        }
    }
    if (pos != text.size()) return std::nullopt;
    const long long days = days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day));
    return static_cast<double>(days) * 86400.0 + seconds_of_day - offset;
}

std::string format_iso8601(double seconds) {
    const double whole = std::floor(seconds);
    long long secs = static_cast<long long>(whole);
    long long micros = std::llround((seconds - whole) * 1e6);
    if (micros >= 1000000) {
        micros -= 1000000;
        ++secs;
    }
    long long days = secs / 86400;
    long long rem = secs % 86400;
    if (rem < 0) {
        rem += 86400;
        --days;
    }
    long long y = 0;
    unsigned m = 0, d = 0;
    civil_from_days(days, y, m, d);
    char buf[64];
    if (micros == 0) {
        std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ", y, m, d, rem / 3600,
                      (rem % 3600) / 60, rem % 60);
    } else {
        std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02lld:%02lld:%02lld.%06lldZ", y, m, d,
                      rem / 3600, (rem % 3600) / 60, rem % 60, micros);
    }
    return buf;
}

EventLog parse_event_log(std::istream& source, const SchemaConfig& schema) {
    csv::Reader reader(source);
    auto header = reader.next();
    if (!header) throw SchemaError("event log has no header row");

    auto column = [&](const std::string& name) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < header->size(); ++i)
            if (trim((*header)[i]) == name) return i;
        return std::nullopt;
    };
    const auto case_idx = column(schema.case_col);
    if (!case_idx) throw SchemaError("missing case column '" + schema.case_col + "'");
    const auto act_idx = column(schema.activity_col);
    if (!act_idx) throw SchemaError("missing activity column '" + schema.activity_col + "'");
    const auto time_idx = column(schema.time_col);
    if (!time_idx && schema.time_required)
        throw SchemaError("missing timestamp column '" + schema.time_col + "'");
    const auto perf_idx = column(schema.perf_col);
    if (!perf_idx && schema.perf_required)
        throw SchemaError("missing performance column '" + schema.perf_col + "'");

    std::vector<Trace> traces;
    std::unordered_map<std::string, std::size_t> index;
    std::size_t row = 0;
    while (auto record = reader.next()) {
        ++row;
        auto field = [&](std::optional<std::size_t> idx) -> std::string_view {
            if (*idx >= record->size())
                throw RowError(row, "expected at least " + std::to_string(*idx + 1) + " fields, got " +
                                        std::to_string(record->size()));
            return trim((*record)[*idx]);
        };
        Event e;
        e.case_id = std::string(field(case_idx));
        if (e.case_id.empty()) throw RowError(row, "empty case id");
        e.activity = std::string(field(act_idx));
        if (e.activity.empty()) throw RowError(row, "empty activity name");
        e.row = row - 1;
        if (time_idx) {
            const auto text = field(time_idx);
            e.timestamp = parse_iso8601(text);
            if (!e.timestamp) throw RowError(row, "unparseable timestamp '" + std::string(text) + "'");
        }
        std::optional<double> perf;
        if (perf_idx) {
            const auto text = field(perf_idx);
            if (!text.empty()) {
                perf = parse_number(text);
                if (!perf) throw RowError(row, "unparseable performance value '" + std::string(text) + "'");
            }
        }

        auto [it, inserted] = index.emplace(e.case_id, traces.size());
        if (inserted) {
            traces.emplace_back();
            traces.back().case_id = e.case_id;
        }
        Trace& t = traces[it->second];
        if (perf) {
            if (t.performance && *t.performance != *perf) {
                throw DataError("conflicting performance values for case '" + t.case_id + "'");
            }
            t.performance = perf;
        }
        t.events.push_back(std::move(e));
    }

    if (time_idx) {
        for (auto& t : traces) {
            std::stable_sort(t.events.begin(), t.events.end(),
                             [](const Event& a, const Event& b) { return *a.timestamp < *b.timestamp; });
        }
    }
    return EventLog(std::move(traces));
}

EventLog parse_event_log_file(const std::string& path, const SchemaConfig& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    return parse_event_log(in, schema);
}

void write_event_log(std::ostream& out, const EventLog& log, const SchemaConfig& schema) {
    const bool with_time = log.has_timestamps();
    bool with_perf = false;
    for (const auto& t : log.traces()) with_perf = with_perf || t.performance.has_value();

    csv::Row header{schema.case_col, schema.activity_col};
    if (with_time) header.push_back(schema.time_col);
    if (with_perf) header.push_back(schema.perf_col);
    csv::write_row(out, header);
    for (const auto& t : log.traces()) {
        for (const auto& e : t.events) {
            csv::Row row{e.case_id, e.activity};
            if (with_time) row.push_back(format_iso8601(*e.timestamp));
            if (with_perf) row.push_back(t.performance ? shortest(*t.performance) : std::string{});
            csv::write_row(out, row);
        }
    }
}

std::vector<std::string> ingestion_warnings(const EventLog& log) {
    std::vector<std::string> out;
    const auto with_perf = std::count_if(log.traces().begin(), log.traces().end(),
                                         [](const Trace& t) { return t.performance.has_value(); });
    if (with_perf > 0 && static_cast<std::size_t>(with_perf) < log.size()) {
        out.push_back("performance values present for only " + std::to_string(with_perf) + " of " +
                      std::to_string(log.size()) + " cases; variant mean performance is undefined");
    }
    return out;
}

PerfDirection PerfConfig::effective_direction() const {
    if (direction) return *direction;
    return mode == PerfMode::Throughput ? PerfDirection::LowerIsBetter : PerfDirection::HigherIsBetter;
}

PerformanceMap trace_performance(const EventLog& log, const PerfConfig& perf) {
    const double sign = perf.effective_direction() == PerfDirection::LowerIsBetter ? -1.0 : 1.0;
    PerformanceMap out;
    if (perf.mode == PerfMode::Throughput) {
        if (!log.empty() && !log.has_timestamps())
            throw ConfigError("throughput performance requested but the log has no timestamps");
        for (const auto& t : log.traces()) {
            const auto [lo, hi] = std::minmax_element(
                t.events.begin(), t.events.end(),
                [](const Event& a, const Event& b) { return *a.timestamp < *b.timestamp; });
            out.emplace(t.case_id, sign * (*hi->timestamp - *lo->timestamp));
        }
        return out;
    }
    std::vector<std::string> missing;
    for (const auto& t : log.traces()) {
        if (!t.performance) {
            missing.push_back(t.case_id);
            continue;
        }
        out.emplace(t.case_id, sign * *t.performance);
    }
    if (!missing.empty()) {
        std::string list;
        for (std::size_t i = 0; i < missing.size() && i < 10; ++i) {
            if (i) list += ", ";
            list += missing[i];
        }
        if (missing.size() > 10) list += ", ... (" + std::to_string(missing.size()) + " total)";
        throw DataError("performance value missing for cases: " + list);
    }
    return out;
}

EventLog with_performance(const EventLog& log, const PerformanceMap& perf) {
    std::vector<Trace> traces = log.traces();
    for (auto& t : traces) {
        auto it = perf.find(t.case_id);
        t.performance = it == perf.end() ? std::nullopt : std::optional<double>(it->second);
    }
    return EventLog(std::move(traces));
}

VariantIndex::VariantIndex(Map entries) : entries_(std::move(entries)) {
    for (const auto& [v, s] : entries_) trace_count_ += s.frequency;
}

const VariantStats* VariantIndex::find(const Variant& v) const {
    auto it = entries_.find(v);
    return it == entries_.end() ? nullptr : &it->second;
}

bool VariantIndex::has_performance() const noexcept {
    return std::all_of(entries_.begin(), entries_.end(),
                       [](const auto& kv) { return kv.second.mean_performance.has_value(); });
}

VariantIndex extract_variants(const EventLog& log) {
    VariantIndex::Map entries;
    // Accumulated sums, then divided once so the mean does not depend on
    // anything but trace order.
    std::map<Variant, std::pair<double, bool>> perf_sum;
    for (const auto& t : log.traces()) {
        auto v = t.variant();
        auto& s = entries[v];
        ++s.frequency;
        s.trace_ids.push_back(t.case_id);
        auto& [sum, complete] = perf_sum.try_emplace(std::move(v), 0.0, true).first->second;
        if (t.performance)
            sum += *t.performance;
        else
            complete = false;
    }
    for (auto& [v, s] : entries) {
        const auto& [sum, complete] = perf_sum.at(v);
        if (complete) s.mean_performance = sum / static_cast<double>(s.frequency);
    }
    return VariantIndex(std::move(entries));
}

}  // namespace execbench
