#include "execbench/matcher.hpp"

#include <algorithm>

#include <omp.h>

#include "execbench/errors.hpp"

namespace execbench {

std::string to_string(const Match& m) { return m.own + " -> " + m.benchmark; }

bool MatchSet::contains(const Match& m) const { return std::binary_search(matches.begin(), matches.end(), m); }

std::vector<Activity> shared_alphabet(const FootprintMatrix& own, const FootprintMatrix& bench) {
    std::vector<Activity> shared;
    std::set_intersection(own.alphabet().begin(), own.alphabet().end(), bench.alphabet().begin(),
                          bench.alphabet().end(), std::back_inserter(shared));
    return shared;
}

namespace {

struct Columns {
    std::vector<Activity> shared;
    std::vector<std::size_t> own;
    std::vector<std::size_t> bench;
    double ratio = 0.0;
};

Columns shared_columns(const FootprintMatrix& own, const FootprintMatrix& bench) {
    Columns c;
    c.shared = shared_alphabet(own, bench);
    if (c.shared.empty()) throw DataError("logs share no activities; benchmarking not meaningful");
    for (const auto& x : c.shared) {
        c.own.push_back(*own.find(x));
        c.bench.push_back(*bench.find(x));
    }
    const std::size_t uni = own.size() + bench.size() - c.shared.size();
    c.ratio = static_cast<double>(c.shared.size()) / static_cast<double>(uni);
    return c;
}

void match_row(const FootprintMatrix& own, const FootprintMatrix& bench, const Columns& cols, std::size_t a,
               bool keep_trivial, std::vector<Match>& out) {
    const auto row_a = own.row(a);
    for (std::size_t b = 0; b < bench.size(); ++b) {
        if (!keep_trivial && own.alphabet()[a] == bench.alphabet()[b]) continue;
        const auto row_b = bench.row(b);
        bool equal = true;
        for (std::size_t c = 0; c < cols.own.size() && equal; ++c) equal = row_a[cols.own[c]] == row_b[cols.bench[c]];
        if (equal) out.push_back(Match{own.alphabet()[a], bench.alphabet()[b]});
    }
}

}  // namespace

MatchSet match_activities_serial(const FootprintMatrix& own, const FootprintMatrix& bench, bool keep_trivial) {
    const auto cols = shared_columns(own, bench);
    MatchSet result;
    for (std::size_t a = 0; a < own.size(); ++a) match_row(own, bench, cols, a, keep_trivial, result.matches);
    // Both alphabets are sorted, so row-major emission is already (own, benchmark) order.
    result.shared_alphabet = cols.shared;
    result.shared_ratio = cols.ratio;
    return result;
}

MatchSet match_activities(const FootprintMatrix& own, const FootprintMatrix& bench, bool keep_trivial) {
    const auto cols = shared_columns(own, bench);
    std::vector<std::vector<Match>> per_row(own.size());
    const auto n = static_cast<std::ptrdiff_t>(own.size());
#pragma omp parallel for schedule(dynamic, 4) if (n * static_cast<std::ptrdiff_t>(bench.size()) > 4096)
    for (std::ptrdiff_t a = 0; a < n; ++a)
        match_row(own, bench, cols, static_cast<std::size_t>(a), keep_trivial, per_row[a]);

    MatchSet result;
    for (auto& row : per_row) result.matches.insert(result.matches.end(), row.begin(), row.end());
    result.shared_alphabet = cols.shared;
    result.shared_ratio = cols.ratio;
    return result;
}

}  // namespace execbench
