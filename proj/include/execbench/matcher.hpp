#pragma once

#include <compare>
#include <string>
#include <vector>

#include "execbench/footprint.hpp"

namespace execbench {

// Own activity `own` (from the own log) could be replaced by `benchmark`.
struct Match {
    Activity own;
    Activity benchmark;

    auto operator<=>(const Match&) const = default;
};

std::string to_string(const Match& m);

struct MatchSet {
    // Sorted by (own, benchmark), duplicate-free, no trivial matches.
    std::vector<Match> matches;
    // Activities present in both logs, sorted.
    std::vector<Activity> shared_alphabet;
    // |A1 n A2| / |A1 u A2|; low values mean the logs share little behavior.
    double shared_ratio = 0.0;

    std::size_t size() const noexcept { return matches.size(); }
    bool empty() const noexcept { return matches.empty(); }
    bool contains(const Match& m) const;
};

std::vector<Activity> shared_alphabet(const FootprintMatrix& own, const FootprintMatrix& bench);

// (a, b) matches iff row a of `own` and row b of `bench` agree on every
// column of the shared alphabet. Pairs with a == b are dropped unless
// `keep_trivial` is set. Throws DataError when the logs share no activity.
MatchSet match_activities(const FootprintMatrix& own, const FootprintMatrix& bench, bool keep_trivial = false);
MatchSet match_activities_serial(const FootprintMatrix& own, const FootprintMatrix& bench,
                                 bool keep_trivial = false);

}  // namespace execbench
