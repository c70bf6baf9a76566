#include "execbench/footprint.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <omp.h>

#include "execbench/csv.hpp"
#include "execbench/errors.hpp"

namespace execbench {

std::string_view symbol(Relation r) {
    switch (r) {
        case Relation::StrictOrder: return "->";
        case Relation::ReverseStrictOrder: return "<-";
        case Relation::Exclusive: return "#";
        case Relation::Interleaving: return "||";
    }
    return "?";
}

Relation mirror(Relation r) {
    switch (r) {
        case Relation::StrictOrder: return Relation::ReverseStrictOrder;
        case Relation::ReverseStrictOrder: return Relation::StrictOrder;
        default: return r;
    }
}

CooccurrenceStats::CooccurrenceStats(std::vector<Activity> alphabet)
    : alphabet_(std::move(alphabet)),
      occurs_(alphabet_.size(), 0),
      both_(alphabet_.size() * alphabet_.size(), 0),
      before_(alphabet_.size() * alphabet_.size(), 0) {}

std::optional<std::size_t> CooccurrenceStats::find(std::string_view a) const {
    auto it = std::lower_bound(alphabet_.begin(), alphabet_.end(), a);
    if (it == alphabet_.end() || *it != a) return std::nullopt;
    return static_cast<std::size_t>(it - alphabet_.begin());
}

std::size_t CooccurrenceStats::index_of(std::string_view a) const {
    if (auto i = find(a)) return *i;
    throw LookupError("unknown activity '" + std::string(a) + "'");
}

void CooccurrenceStats::add_trace(const Variant& trace, std::uint64_t weight) {
    // First and last position of every activity present in the trace.
    std::vector<std::pair<std::size_t, std::pair<std::size_t, std::size_t>>> span;
    span.reserve(trace.size());
    for (std::size_t pos = 0; pos < trace.size(); ++pos) {
        const std::size_t id = index_of(trace[pos]);
        auto it = std::find_if(span.begin(), span.end(), [id](const auto& s) { return s.first == id; });
        if (it == span.end())
            span.push_back({id, {pos, pos}});
        else
            it->second.second = pos;
    }
    const std::size_t k = size();
    for (const auto& [a, pa] : span) {
        occurs_[a] += weight;
        for (const auto& [b, pb] : span) {
            both_[a * k + b] += weight;
            // some a precedes some b  <=>  first(a) < last(b)
            if (pa.first < pb.second) before_[a * k + b] += weight;
        }
    }
}

void CooccurrenceStats::merge(const CooccurrenceStats& other) {
    for (std::size_t i = 0; i < occurs_.size(); ++i) occurs_[i] += other.occurs_[i];
    for (std::size_t i = 0; i < both_.size(); ++i) both_[i] += other.both_[i];
    for (std::size_t i = 0; i < before_.size(); ++i) before_[i] += other.before_[i];
}

namespace {

std::vector<Activity> alphabet_of(const VariantIndex& variants) {
    std::set<Activity> all;
    for (const auto& [v, s] : variants.entries()) all.insert(v.begin(), v.end());
    return {all.begin(), all.end()};
}

}  // namespace

CooccurrenceStats ordering_counts_serial(const VariantIndex& variants) {
    CooccurrenceStats stats(alphabet_of(variants));
    for (const auto& [v, s] : variants.entries()) stats.add_trace(v, s.frequency);
    return stats;
}

CooccurrenceStats ordering_counts(const VariantIndex& variants) {
    auto alphabet = alphabet_of(variants);
    std::vector<const std::pair<const Variant, VariantStats>*> items;
    items.reserve(variants.size());
    for (const auto& kv : variants.entries()) items.push_back(&kv);

    CooccurrenceStats total(alphabet);
    const auto n = static_cast<std::ptrdiff_t>(items.size());
#pragma omp parallel if (n > 64)
    {
        CooccurrenceStats local(alphabet);
#pragma omp for schedule(static) nowait
        for (std::ptrdiff_t i = 0; i < n; ++i) local.add_trace(items[i]->first, items[i]->second.frequency);
        // Integer sums: the merge order does not affect the result.
#pragma omp critical(execbench_ordering_counts)
        total.merge(local);
    }
    return total;
}

CooccurrenceStats ordering_counts(const EventLog& log) { return ordering_counts(extract_variants(log)); }

double exclusiveness_score(const CooccurrenceStats& stats, std::size_t a, std::size_t b) {
    const double ta = static_cast<double>(stats.traces_with(a));
    const double tb = static_cast<double>(stats.traces_with(b));
    if (ta == 0 || tb == 0) throw LookupError("activity does not occur in the log");
    return std::min(static_cast<double>(stats.only(a, b)) / ta, static_cast<double>(stats.only(b, a)) / tb);
}

double exclusiveness_score(const CooccurrenceStats& stats, std::string_view a, std::string_view b) {
    return exclusiveness_score(stats, stats.index_of(a), stats.index_of(b));
}

double interleaving_score(const CooccurrenceStats& stats, std::size_t a, std::size_t b) {
    const auto shared = stats.both(a, b);
    if (shared == 0) {
        throw UndefinedScoreError("interleaving score undefined for '" + stats.alphabet()[a] + "' and '" +
                                  stats.alphabet()[b] + "': they never co-occur");
    }
    const auto ab = stats.before(a, b);
    const auto ba = stats.before(b, a);
    const auto diff = ab > ba ? ab - ba : ba - ab;
    return 1.0 - static_cast<double>(diff) / static_cast<double>(shared);
}

double interleaving_score(const CooccurrenceStats& stats, std::string_view a, std::string_view b) {
    return interleaving_score(stats, stats.index_of(a), stats.index_of(b));
}

void Thresholds::validate() const {
    auto check = [](double v, const char* name) {
        if (!(v >= 0.0 && v <= 1.0))
            throw ConfigError(std::string(name) + " threshold must lie in [0, 1]");
    };
    check(exclusive, "exclusiveness");
    check(interleaving, "interleaving");
}

Relation classify_relation(const CooccurrenceStats& stats, std::size_t a, std::size_t b, const Thresholds& th) {
    // An activity co-occurs with itself only when it repeats.
    const auto cooccur = a == b ? stats.before(a, a) : stats.both(a, b);
    if (cooccur == 0) return Relation::Exclusive;
    if (exclusiveness_score(stats, a, b) > th.exclusive) return Relation::Exclusive;
    if (interleaving_score(stats, a, b) > th.interleaving) return Relation::Interleaving;
    const auto ab = stats.before(a, b);
    const auto ba = stats.before(b, a);
    if (ab > ba) return Relation::StrictOrder;
    if (ab < ba) return Relation::ReverseStrictOrder;
    return Relation::Interleaving;
}

Relation classify_relation(const CooccurrenceStats& stats, std::string_view a, std::string_view b,
                           const Thresholds& th) {
    return classify_relation(stats, stats.index_of(a), stats.index_of(b), th);
}

FootprintMatrix::FootprintMatrix(std::vector<Activity> alphabet, std::vector<Relation> cells, Thresholds th)
    : alphabet_(std::move(alphabet)), cells_(std::move(cells)), thresholds_(th) {
    if (cells_.size() != alphabet_.size() * alphabet_.size())
        throw ConfigError("footprint cell count does not match alphabet size");
}

std::optional<std::size_t> FootprintMatrix::find(std::string_view a) const {
    auto it = std::lower_bound(alphabet_.begin(), alphabet_.end(), a);
    if (it == alphabet_.end() || *it != a) return std::nullopt;
    return static_cast<std::size_t>(it - alphabet_.begin());
}

Relation FootprintMatrix::at(std::string_view a, std::string_view b) const {
    const auto i = find(a);
    const auto j = find(b);
    if (!i) throw LookupError("unknown activity '" + std::string(a) + "'");
    if (!j) throw LookupError("unknown activity '" + std::string(b) + "'");
    return at(*i, *j);
}

namespace {

void fill_row(const CooccurrenceStats& stats, const Thresholds& th, std::size_t i, std::vector<Relation>& cells) {
    const std::size_t k = stats.size();
    for (std::size_t j = i; j < k; ++j) {
        const Relation r = classify_relation(stats, i, j, th);
        cells[i * k + j] = r;
        cells[j * k + i] = mirror(r);
    }
}

}  // namespace

FootprintMatrix build_footprint_matrix_serial(const CooccurrenceStats& stats, const Thresholds& th) {
    th.validate();
    if (stats.size() == 0) throw DataError("cannot build a footprint of an empty log");
    std::vector<Relation> cells(stats.size() * stats.size());
    for (std::size_t i = 0; i < stats.size(); ++i) fill_row(stats, th, i, cells);
    return FootprintMatrix(stats.alphabet(), std::move(cells), th);
}

FootprintMatrix build_footprint_matrix(const CooccurrenceStats& stats, const Thresholds& th) {
    th.validate();
    if (stats.size() == 0) throw DataError("cannot build a footprint of an empty log");
    const auto k = static_cast<std::ptrdiff_t>(stats.size());
    std::vector<Relation> cells(stats.size() * stats.size());
    // Row i writes cells (i, j>=i) and their mirrors (j, i); no two rows touch
    // the same cell.
#pragma omp parallel for schedule(dynamic, 4) if (k > 32)
    for (std::ptrdiff_t i = 0; i < k; ++i) fill_row(stats, th, static_cast<std::size_t>(i), cells);
    return FootprintMatrix(stats.alphabet(), std::move(cells), th);
}

FootprintMatrix build_footprint_matrix(const EventLog& log, const Thresholds& th) {
    if (log.empty()) throw DataError("cannot build a footprint of an empty log");
    return build_footprint_matrix(ordering_counts(log), th);
}

void write_footprint_csv(std::ostream& out, const FootprintMatrix& m) {
    csv::Row header{""};
    header.insert(header.end(), m.alphabet().begin(), m.alphabet().end());
    csv::write_row(out, header);
    for (std::size_t i = 0; i < m.size(); ++i) {
        csv::Row row{m.alphabet()[i]};
        for (std::size_t j = 0; j < m.size(); ++j) row.emplace_back(symbol(m.at(i, j)));
        csv::write_row(out, row);
    }
}

namespace {

template <class Score>
void write_score_csv(std::ostream& out, const CooccurrenceStats& stats, Score score) {
    csv::Row header{""};
    header.insert(header.end(), stats.alphabet().begin(), stats.alphabet().end());
    csv::write_row(out, header);
    char buf[32];
    for (std::size_t i = 0; i < stats.size(); ++i) {
        csv::Row row{stats.alphabet()[i]};
        for (std::size_t j = 0; j < stats.size(); ++j) {
            if (auto v = score(i, j)) {
                std::snprintf(buf, sizeof buf, "%.6f", *v);
                row.emplace_back(buf);
            } else {
                row.emplace_back();
            }
        }
        csv::write_row(out, row);
    }
}

}  // namespace

void write_exclusiveness_csv(std::ostream& out, const CooccurrenceStats& stats) {
    write_score_csv(out, stats, [&](std::size_t i, std::size_t j) -> std::optional<double> {
        return exclusiveness_score(stats, i, j);
    });
}

void write_interleaving_csv(std::ostream& out, const CooccurrenceStats& stats) {
    write_score_csv(out, stats, [&](std::size_t i, std::size_t j) -> std::optional<double> {
        if (stats.both(i, j) == 0) return std::nullopt;
        return interleaving_score(stats, i, j);
    });
}

}  // namespace execbench
