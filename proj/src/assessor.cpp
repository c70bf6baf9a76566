#include "execbench/assessor.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

#include <omp.h>

#include "execbench/errors.hpp"

namespace execbench {

namespace {

template <class Seq>
std::size_t bounded_levenshtein(const Seq& a, const Seq& b, std::size_t bound) {
    const std::size_t n = a.size(), m = b.size();
    if ((n > m ? n - m : m - n) > bound) return bound + 1;
    std::vector<std::size_t> prev(m + 1), cur(m + 1);
    for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = i;
        std::size_t row_min = cur[0];
        for (std::size_t j = 1; j <= m; ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
            row_min = std::min(row_min, cur[j]);
        }
        if (row_min > bound) return bound + 1;
        std::swap(prev, cur);
    }
    return prev[m];
}

// Edit distance from one fixed sequence to many others. Candidates are first
// checked against length and symbol-count lower bounds; patterns of up to 64
// symbols then use the bit-parallel recurrence of Myers and Hyyro, longer ones
// the banded dynamic program above.
class Probe {
public:
    explicit Probe(const std::vector<std::uint32_t>& pattern) : pattern_(pattern) {
        std::uint32_t top = 0;
        for (auto c : pattern) top = std::max(top, c);
        counts_.assign(top + 1, 0);
        for (auto c : pattern) ++counts_[c];
        if (pattern.size() <= 64) {
            peq_.assign(top + 1, 0);
            for (std::size_t i = 0; i < pattern.size(); ++i) peq_[pattern[i]] |= std::uint64_t{1} << i;
        }
        seen_.assign(top + 1, 0);
    }

    // Exact distance if it is at most `bound`, otherwise some value > bound.
    std::size_t distance(const std::vector<std::uint32_t>& text, std::size_t bound) {
        const std::size_t m = pattern_.size(), n = text.size();
        if ((m > n ? m - n : n - m) > bound) return bound + 1;
        std::size_t shared = 0;
        for (auto c : text)
            if (c < seen_.size() && seen_[c]++ < counts_[c]) ++shared;
        for (auto c : text)
            if (c < seen_.size()) seen_[c] = 0;
        if (std::max(m, n) - shared > bound) return bound + 1;
        if (m == 0) return n;
        if (m > 64) return bounded_levenshtein(pattern_, text, bound);

        const std::uint64_t high = std::uint64_t{1} << (m - 1);
        std::uint64_t pv = ~std::uint64_t{0}, mv = 0;
        std::size_t score = m;
        for (std::size_t j = 0; j < n; ++j) {
            const std::uint64_t eq = text[j] < peq_.size() ? peq_[text[j]] : 0;
            const std::uint64_t xv = eq | mv;
            const std::uint64_t xh = (((eq & pv) + pv) ^ pv) | eq;
            std::uint64_t ph = mv | ~(xh | pv);
            std::uint64_t mh = pv & xh;
            if (ph & high)
                ++score;
            else if (mh & high)
                --score;
            ph = (ph << 1) | 1;
            mh <<= 1;
            pv = mh | ~(xv | ph);
            mv = ph & xv;
            const std::size_t left = n - j - 1;
            if (score > left && score - left > bound) return bound + 1;
        }
        return score;
    }

private:
    const std::vector<std::uint32_t>& pattern_;
    std::vector<std::size_t> counts_;
    std::vector<std::uint64_t> peq_;
    std::vector<std::size_t> seen_;
};

double similarity_of(std::size_t distance, std::size_t len_a, std::size_t len_b) {
    const std::size_t longest = std::max(len_a, len_b);
    if (longest == 0) return 1.0;
    return 1.0 - static_cast<double>(distance) / static_cast<double>(longest);
}

std::vector<Activity> own_side(const ProcessChange& change) {
    std::vector<Activity> out;
    for (const auto& m : change.replacements) out.push_back(m.own);
    return out;
}

bool executes_any(const Variant& v, const std::vector<Activity>& acts) {
    return std::any_of(v.begin(), v.end(),
                       [&](const Activity& a) { return std::find(acts.begin(), acts.end(), a) != acts.end(); });
}

}  // namespace

std::vector<Variant> affected_variants(const VariantIndex& own, const ProcessChange& change) {
    const auto acts = own_side(change);
    std::vector<Variant> out;
    for (const auto& [v, s] : own.entries())
        if (executes_any(v, acts)) out.push_back(v);
    return out;
}

Variant apply_change(const Variant& v, const ProcessChange& change) {
    Variant out = v;
    for (auto& a : out) {
        for (const auto& m : change.replacements) {
            if (a == m.own) {
                a = m.benchmark;
                break;
            }
        }
    }
    return out;
}

std::size_t levenshtein(const Variant& v, const Variant& w) {
    return bounded_levenshtein(v, w, std::numeric_limits<std::size_t>::max() - 1);
}

double edit_similarity(const Variant& v, const Variant& w) { return similarity_of(levenshtein(v, w), v.size(), w.size()); }

ClosestMatch closest_match(const Variant& modified, std::span<const WeightedVariant> candidates) {
    if (candidates.empty()) throw DataError("no benchmark variant to align with " + to_string(modified));
    std::vector<const WeightedVariant*> order;
    for (const auto& c : candidates) order.push_back(&c);
    std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->variant < b->variant; });

    const WeightedVariant* best = nullptr;
    std::size_t best_d = std::numeric_limits<std::size_t>::max() - 1;
    std::size_t ties = 0;
    for (const auto* c : order) {
        const std::size_t d = bounded_levenshtein(modified, c->variant, best_d);
        if (d < best_d || best == nullptr) {
            best = c;
            best_d = d;
            ties = 0;
        } else if (d == best_d) {
            ++ties;
            if (c->frequency > best->frequency) best = c;
        }
    }
    return ClosestMatch{best->variant, best_d, similarity_of(best_d, modified.size(), best->variant.size()), ties};
}

std::vector<WeightedVariant> candidate_pool(const VariantIndex& bench, const ProcessChange& change) {
    std::vector<Activity> acts;
    for (const auto& m : change.replacements) acts.push_back(m.benchmark);
    std::vector<WeightedVariant> out;
    for (const auto& [v, s] : bench.entries())
        if (executes_any(v, acts)) out.push_back(WeightedVariant{v, s.frequency});
    return out;
}

std::size_t Assessor::SeqHash::operator()(const Seq& s) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (auto x : s) {
        h ^= x;
        h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
}

std::uint32_t Assessor::intern(const Activity& a) {
    auto [it, inserted] = ids_.emplace(a, static_cast<std::uint32_t>(ids_.size()));
    return it->second;
}

std::optional<std::uint32_t> Assessor::id_of(const Activity& a) const {
    auto it = ids_.find(a);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

Assessor::Assessor(const VariantIndex& own, const VariantIndex& bench) {
    own_perf_ = own.size() > 0 && own.has_performance();
    bench_perf_ = bench.size() > 0 && bench.has_performance();
    auto load = [this](const VariantIndex& idx, std::vector<Entry>& entries) {
        for (const auto& [v, s] : idx.entries()) {
            Entry e{v, {}, s.frequency, s.mean_performance, {}};
            for (const auto& a : v) e.seq.push_back(intern(a));
            e.activities = e.seq;
            std::sort(e.activities.begin(), e.activities.end());
            e.activities.erase(std::unique(e.activities.begin(), e.activities.end()), e.activities.end());
            entries.push_back(std::move(e));
        }
    };
    load(own, own_);
    load(bench, bench_);
    own_by_activity_.assign(ids_.size(), {});
    bench_by_activity_.assign(ids_.size(), {});
    for (std::size_t i = 0; i < own_.size(); ++i)
        for (auto a : own_[i].activities) own_by_activity_[a].push_back(i);
    for (std::size_t i = 0; i < bench_.size(); ++i) {
        for (auto a : bench_[i].activities) bench_by_activity_[a].push_back(i);
        bench_lookup_.emplace(bench_[i].seq, i);
    }
}

namespace {

// Candidates at the smallest distance seen so far.
struct Nearest {
    std::size_t distance = std::numeric_limits<std::size_t>::max() - 1;
    std::vector<std::size_t> candidates;

    void offer(std::size_t idx, std::size_t d) {
        if (candidates.empty() || d < distance) {
            distance = d;
            candidates.assign(1, idx);
        } else if (d == distance) {
            candidates.push_back(idx);
        }
    }
};

}  // namespace

Assessor::Best Assessor::pick(std::vector<std::size_t> candidates, std::size_t distance) const {
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    // Entries ascend lexicographically, so the first of equal frequency wins.
    std::size_t chosen = candidates.front();
    for (auto idx : candidates)
        if (bench_[idx].frequency > bench_[chosen].frequency) chosen = idx;
    return Best{chosen, distance, candidates.size() - 1};
}

Assessor::Best Assessor::closest(const Seq& modified, const std::vector<std::size_t>& pool) const {
    if (auto it = bench_lookup_.find(modified); it != bench_lookup_.end()) {
        if (std::binary_search(pool.begin(), pool.end(), it->second)) return Best{it->second, 0, 0};
    }
    // Visit candidates by length difference so the bound tightens early.
    std::vector<std::pair<std::size_t, std::size_t>> order;
    order.reserve(pool.size());
    for (auto idx : pool) {
        const std::size_t len = bench_[idx].seq.size();
        order.emplace_back(len > modified.size() ? len - modified.size() : modified.size() - len, idx);
    }
    std::sort(order.begin(), order.end());
    Probe probe(modified);
    Nearest best;
    for (const auto& [gap, idx] : order) {
        if (!best.candidates.empty() && gap > best.distance) break;
        const std::size_t d = probe.distance(bench_[idx].seq, best.distance);
        if (d <= best.distance || best.candidates.empty()) best.offer(idx, d);
    }
    return pick(std::move(best.candidates), best.distance);
}

Assessor::Best Assessor::closest(const Seq& modified, const std::vector<std::uint32_t>& pool_activities,
                                 Cache& cache) const {
    auto& known = cache.entries_[modified];
    std::optional<Probe> probe;
    Nearest best;
    for (auto a : pool_activities) {
        auto it = known.find(a);
        if (it == known.end()) {
            if (!probe) probe.emplace(modified);
            Nearest n;
            for (auto idx : bench_by_activity_[a]) {
                const std::size_t d = probe->distance(bench_[idx].seq, n.distance);
                if (d <= n.distance || n.candidates.empty()) n.offer(idx, d);
            }
            it = known.emplace(a, Cache::Nearest{n.distance, std::move(n.candidates)}).first;
        }
        for (auto idx : it->second.candidates) best.offer(idx, it->second.distance);
    }
    return pick(std::move(best.candidates), best.distance);
}

std::optional<ScoredChange> Assessor::score(const ProcessChange& change, Cache* cache, bool alignments) const {
    // Replacement table over interned ids. Activities unknown to both logs get
    // ids past the interned range; they never match anything.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> subst;
    std::vector<std::size_t> affected;
    std::vector<std::size_t> pool;
    std::vector<std::uint32_t> pool_activities;
    auto next_fresh = static_cast<std::uint32_t>(ids_.size());
    for (const auto& m : change.replacements) {
        const auto own_id = id_of(m.own);
        const auto bench_id = id_of(m.benchmark);
        const std::uint32_t to = bench_id ? *bench_id : next_fresh++;
        if (own_id) {
            subst.emplace_back(*own_id, to);
            const auto& hits = own_by_activity_[*own_id];
            affected.insert(affected.end(), hits.begin(), hits.end());
        }
        if (bench_id) {
            pool_activities.push_back(*bench_id);
            const auto& hits = bench_by_activity_[*bench_id];
            pool.insert(pool.end(), hits.begin(), hits.end());
        }
    }
    std::sort(affected.begin(), affected.end());
    affected.erase(std::unique(affected.begin(), affected.end()), affected.end());
    if (affected.empty()) return std::nullopt;
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    if (pool.empty()) {
        throw DataError("no benchmark variant executes any replacement activity of " + to_string(change));
    }

    const bool with_perf = has_performance();
    ScoredChange out;
    out.change = change;
    double weighted_similarity = 0.0;
    double weighted_delta = 0.0;
    std::size_t weight = 0;
    // Distinct affected variants can collapse onto the same modified variant.
    std::vector<std::pair<Seq, Best>> memo;
    for (auto idx : affected) {
        const Entry& e = own_[idx];
        Seq modified = e.seq;
        for (auto& x : modified) {
            for (const auto& [from, to] : subst) {
                if (x == from) {
                    x = to;
                    break;
                }
            }
        }
        Best best;
        if (cache) {
            best = closest(modified, pool_activities, *cache);
        } else {
            auto hit = std::find_if(memo.begin(), memo.end(), [&](const auto& p) { return p.first == modified; });
            best = hit != memo.end() ? hit->second : closest(modified, pool);
            if (hit == memo.end()) memo.emplace_back(modified, best);
        }

        const Entry& c = bench_[best.index];
        const double similarity = similarity_of(best.distance, modified.size(), c.seq.size());
        weighted_similarity += static_cast<double>(e.frequency) * similarity;
        weight += e.frequency;
        if (with_perf) weighted_delta += static_cast<double>(e.frequency) * (*c.mean_performance - *e.mean_performance);
        if (!alignments) continue;

        Alignment al;
        al.original = e.variant;
        al.modified = apply_change(e.variant, change);
        al.closest = c.variant;
        al.frequency = e.frequency;
        al.closest_frequency = c.frequency;
        al.distance = best.distance;
        al.similarity = similarity;
        al.ties = best.ties;
        if (with_perf) al.performance_delta = *c.mean_performance - *e.mean_performance;
        out.alignments.push_back(std::move(al));
    }
    out.affected_trace_count = weight;
    out.feasibility = weighted_similarity / static_cast<double>(weight);
    if (with_perf) out.performance_impact = weighted_delta / static_cast<double>(weight);
    return out;
}

double feasibility(const ProcessChange& change, const VariantIndex& own, const VariantIndex& bench) {
    auto scored = Assessor(own, bench).score(change);
    if (!scored) throw DataError("no affected variants for change " + to_string(change));
    return scored->feasibility;
}

double performance_impact(const ProcessChange& change, const VariantIndex& own, const VariantIndex& bench) {
    Assessor assessor(own, bench);
    if (!assessor.has_performance()) throw DataError("performance measure required in both logs");
    auto scored = assessor.score(change);
    if (!scored) throw DataError("no affected variants for change " + to_string(change));
    return *scored->performance_impact;
}

std::vector<ScoredChange> score_changes_serial(const Assessor& assessor, const std::vector<ProcessChange>& changes) {
    std::vector<ScoredChange> out;
    for (const auto& c : changes)
        if (auto s = assessor.score(c)) out.push_back(std::move(*s));
    return out;
}

std::vector<ScoredChange> score_changes(const Assessor& assessor, const std::vector<ProcessChange>& changes) {
    std::vector<std::optional<ScoredChange>> slots(changes.size());
    const auto n = static_cast<std::ptrdiff_t>(changes.size());
    std::exception_ptr failure;
#pragma omp parallel if (n > 8)
    {
        Assessor::Cache cache;
#pragma omp for schedule(dynamic, 4)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            try {
                slots[i] = assessor.score(changes[i], &cache);
            } catch (...) {
#pragma omp critical(execbench_score_failure)
                if (!failure) failure = std::current_exception();
            }
        }
    }
    if (failure) std::rethrow_exception(failure);
    std::vector<ScoredChange> out;
    for (auto& s : slots)
        if (s) out.push_back(std::move(*s));
    return out;
}

BenchmarkReport benchmark(const EventLog& own, const EventLog& bench, const BenchmarkConfig& cfg) {
    cfg.thresholds.validate();
    if (cfg.max_change_size == 0) throw ConfigError("maximum change size must be at least 1");
    if (own.empty()) throw DataError("own event log has no traces");
    if (bench.empty()) throw DataError("benchmark event log has no traces");

    BenchmarkReport report;
    report.config = cfg;
    report.own_traces = own.size();
    report.bench_traces = bench.size();
    report.own_alphabet.assign(own.alphabet().begin(), own.alphabet().end());
    report.bench_alphabet.assign(bench.alphabet().begin(), bench.alphabet().end());
    for (const auto& w : ingestion_warnings(own)) report.warnings.push_back("own log: " + w);
    for (const auto& w : ingestion_warnings(bench)) report.warnings.push_back("benchmark log: " + w);

    VariantIndex own_idx, bench_idx;
    bool assess_perf = false;
    if (cfg.perf) {
        auto carries = [](const EventLog& log) {
            return std::any_of(log.traces().begin(), log.traces().end(),
                               [](const Trace& t) { return t.performance.has_value(); });
        };
        if (cfg.perf->mode == PerfMode::Column && !carries(own) && !carries(bench)) {
            report.warnings.push_back("no performance values in either log; performance impact not assessed");
        } else {
            own_idx = extract_variants(with_performance(own, trace_performance(own, *cfg.perf)));
            bench_idx = extract_variants(with_performance(bench, trace_performance(bench, *cfg.perf)));
            assess_perf = true;
        }
    }
    if (!assess_perf) {
        own_idx = extract_variants(own);
        bench_idx = extract_variants(bench);
    }
    report.performance_assessed = assess_perf;

    const auto own_fp = build_footprint_matrix(ordering_counts(own_idx), cfg.thresholds);
    const auto bench_fp = build_footprint_matrix(ordering_counts(bench_idx), cfg.thresholds);
    report.matches = match_activities(own_fp, bench_fp);
    if (report.matches.shared_ratio < 0.5) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "logs share only %zu of %zu activities (ratio %.3f < 0.5); matches may be degenerate",
                      report.matches.shared_alphabet.size(),
                      own_fp.size() + bench_fp.size() - report.matches.shared_alphabet.size(),
                      report.matches.shared_ratio);
        report.warnings.emplace_back(buf);
    }

    const auto graph = build_compatibility_graph(report.matches);
    auto enumeration = enumerate_changes(graph, cfg.max_change_size);
    report.enumerated_changes = enumeration.changes.size();
    report.truncated = enumeration.truncated;
    if (enumeration.truncated) {
        report.warnings.push_back("compatible change sets larger than " + std::to_string(cfg.max_change_size) +
                                  " exist and were not enumerated");
    }

    const Assessor assessor(own_idx, bench_idx);
    auto scored = score_changes(assessor, enumeration.changes);
    report.vacuous_changes = enumeration.changes.size() - scored.size();

    std::erase_if(scored, [&](const ScoredChange& s) { return s.feasibility < cfg.min_feasibility; });
    std::stable_sort(scored.begin(), scored.end(), [&](const ScoredChange& a, const ScoredChange& b) {
        if (assess_perf && *a.performance_impact != *b.performance_impact)
            return *a.performance_impact > *b.performance_impact;
        if (a.feasibility != b.feasibility) return a.feasibility > b.feasibility;
        return canonical_less(a.change, b.change);
    });
    if (cfg.top && scored.size() > *cfg.top) scored.resize(*cfg.top);
    report.changes = std::move(scored);
    return report;
}

}  // namespace execbench
