#include <gtest/gtest.h>

#include <random>

#include "execbench/assessor.hpp"
#include "execbench/errors.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace execbench;
using fixtures::v;

namespace {

ProcessChange change(std::vector<Match> r) { return ProcessChange{std::move(r)}; }

const ProcessChange kDelta1 = change({{"a", "b"}, {"f", "e"}});
const ProcessChange kDelta2 = change({{"a", "b"}});

// Log whose i-th trace runs traces[i].variant with traces[i].performance.
EventLog logged(const std::vector<oracle::LoggedTrace>& traces, std::string_view prefix) {
    std::vector<Variant> seqs;
    for (const auto& t : traces) seqs.push_back(t.variant);
    auto log = EventLog::from_variants(seqs, prefix);
    PerformanceMap perf;
    for (std::size_t i = 0; i < traces.size(); ++i) perf[std::string(prefix) + std::to_string(i + 1)] = traces[i].performance;
    return with_performance(log, perf);
}

std::vector<oracle::LoggedTrace> random_logged(std::mt19937_64& rng, std::size_t max_variants, std::size_t alphabet) {
    const auto variants = oracle::random_traces(rng, 1 + rng() % max_variants, alphabet, 6);
    std::vector<oracle::LoggedTrace> out;
    for (const auto& var : variants) {
        const std::size_t copies = 1 + rng() % 3;
        for (std::size_t k = 0; k < copies; ++k) out.push_back({var, static_cast<double>(rng() % 2000) / 16.0 - 50.0});
    }
    return out;
}

}  // namespace

TEST(EditDistance, Goldens) {
    EXPECT_EQ(levenshtein(v("bdfg"), v("bdeg")), 1u);
    EXPECT_DOUBLE_EQ(edit_similarity(v("bdfg"), v("bdeg")), 0.75);
    EXPECT_DOUBLE_EQ(edit_similarity(v("ab"), v("cd")), 0.0);
    EXPECT_DOUBLE_EQ(edit_similarity(v(""), v("")), 1.0);
    EXPECT_EQ(levenshtein(v(""), v("abc")), 3u);
}

// 1,000 random pairs against the full-matrix DP.
TEST(EditDistanceProperty, MatchesNaiveDp) {
    std::mt19937_64 rng(41);
    for (int round = 0; round < 1000; ++round) {
        const auto p = oracle::random_traces(rng, 2, 2 + rng() % 6, 1 + rng() % 90);
        ASSERT_EQ(levenshtein(p[0], p[1]), oracle::levenshtein(p[0], p[1])) << "round " << round;
        EXPECT_DOUBLE_EQ(edit_similarity(p[0], p[1]), oracle::similarity(p[0], p[1]));
        EXPECT_EQ(levenshtein(p[0], p[1]), levenshtein(p[1], p[0]));
    }
}

TEST(Assessor, AffectedAndApplied) {
    const auto own = extract_variants(fixtures::l1());
    EXPECT_EQ(affected_variants(own, kDelta1), (std::vector<Variant>{v("adeg"), v("adfg"), v("cdfg")}));
    EXPECT_EQ(affected_variants(own, kDelta2), (std::vector<Variant>{v("adeg"), v("adfg")}));
    EXPECT_EQ(apply_change(v("adfg"), kDelta1), v("bdeg"));
    EXPECT_EQ(apply_change(v("cdfg"), kDelta1), v("cdeg"));
    // Simultaneous substitution: a -> c and c -> b do not chain.
    EXPECT_EQ(apply_change(v("acd"), change({{"a", "c"}, {"c", "b"}})), v("cbd"));
}

TEST(Assessor, ClosestMatch) {
    const std::vector<WeightedVariant> pool{{v("bdeg"), 1}};
    const auto c = closest_match(v("bdfg"), pool);
    EXPECT_EQ(c.variant, v("bdeg"));
    EXPECT_DOUBLE_EQ(c.similarity, 0.75);

    const std::vector<WeightedVariant> tied{{v("xa"), 1}, {v("xb"), 5}, {v("xc"), 5}};
    const auto t = closest_match(v("xd"), tied);
    EXPECT_EQ(t.variant, v("xb"));
    EXPECT_EQ(t.ties, 2u);
    EXPECT_THROW(closest_match(v("x"), std::vector<WeightedVariant>{}), DataError);
}

TEST(Assessor, FeasibilityGoldens) {
    const auto own = extract_variants(fixtures::l1());
    const auto bench = extract_variants(fixtures::l2());
    EXPECT_NEAR(feasibility(kDelta1, own, bench), 1.0, 1e-12);
    EXPECT_NEAR(feasibility(kDelta2, own, bench), 0.875, 1e-12);

    const auto weighted = extract_variants(fixtures::weighted({v("adeg"), v("adfg"), v("cdeg"), v("cdfg")}, {3, 1, 1, 1}));
    EXPECT_NEAR(feasibility(kDelta2, weighted, bench), 0.9375, 1e-12);
    EXPECT_THROW(feasibility(change({{"q", "b"}}), own, bench), DataError);
}

TEST(Assessor, PerformanceGoldens) {
    const auto bench = extract_variants(logged({{v("bdeg"), 12}, {v("cdeg"), 7}}, "b"));
    const auto own = extract_variants(logged({{v("adeg"), 10}, {v("adfg"), 8}, {v("cdeg"), 1}, {v("cdfg"), 1}}, "o"));
    EXPECT_NEAR(performance_impact(kDelta2, own, bench), 3.0, 1e-12);

    const auto heavy = extract_variants(logged(
        {{v("adeg"), 10}, {v("adeg"), 10}, {v("adeg"), 10}, {v("adfg"), 8}, {v("cdeg"), 1}, {v("cdfg"), 1}}, "o"));
    EXPECT_NEAR(performance_impact(kDelta2, heavy, bench), 2.5, 1e-12);

    EXPECT_THROW(performance_impact(kDelta2, extract_variants(fixtures::l1()), bench), DataError);
}

TEST(Assessor, ScoreDetails) {
    const Assessor a(extract_variants(fixtures::l1()), extract_variants(fixtures::l2()));
    const auto s = a.score(kDelta2);
    ASSERT_TRUE(s);
    EXPECT_EQ(s->affected_trace_count, 2u);
    ASSERT_EQ(s->alignments.size(), 2u);
    EXPECT_EQ(s->alignments[1].modified, v("bdfg"));
    EXPECT_EQ(s->alignments[1].closest, v("bdeg"));
    EXPECT_EQ(s->alignments[1].distance, 1u);
    EXPECT_FALSE(s->performance_impact);
    EXPECT_FALSE(a.score(change({{"q", "b"}})));
    EXPECT_TRUE(a.score(kDelta2, nullptr, false)->alignments.empty());
}

TEST(Assessor, CachedSerialAndParallelAgree) {
    std::mt19937_64 rng(8);
    for (int round = 0; round < 50; ++round) {
        const auto own = extract_variants(logged(random_logged(rng, 30, 5), "o"));
        const auto bench = extract_variants(logged(random_logged(rng, 30, 5), "b"));
        const Assessor a(own, bench);
        std::set<Activity> targets;
        for (const auto& [var, s] : bench.entries()) targets.insert(var.begin(), var.end());
        std::vector<ProcessChange> changes;
        for (const char* from : {"a", "b", "c"})
            for (const auto& to : targets)
                if (from != to) changes.push_back(change({{from, to}}));
        changes.push_back(change({{"a", *targets.begin()}, {"b", *targets.rbegin()}}));
        Assessor::Cache cache;
        for (const auto& c : changes) {
            const auto plain = a.score(c);
            const auto cached = a.score(c, &cache, false);
            ASSERT_EQ(plain.has_value(), cached.has_value());
            if (!plain) continue;
            EXPECT_EQ(plain->feasibility, cached->feasibility);
            EXPECT_EQ(plain->performance_impact, cached->performance_impact);
        }
        const auto par = score_changes(a, changes);
        const auto ser = score_changes_serial(a, changes);
        ASSERT_EQ(par.size(), ser.size());
        for (std::size_t i = 0; i < par.size(); ++i) {
            EXPECT_EQ(par[i].change, ser[i].change);
            EXPECT_EQ(par[i].feasibility, ser[i].feasibility);
            EXPECT_EQ(par[i].performance_impact, ser[i].performance_impact);
        }
    }
}

// Brute-force per-trace evaluation on 50 random log pairs of at most 20
// variants each.
TEST(AssessorProperty, BruteForceOracle) {
    std::mt19937_64 rng(1234);
    for (int round = 0; round < 50; ++round) {
        const auto own_t = random_logged(rng, 20, 5);
        const auto bench_t = random_logged(rng, 20, 6);
        const auto own = extract_variants(logged(own_t, "o"));
        const auto bench = extract_variants(logged(bench_t, "b"));
        ASSERT_LE(own.size(), 20u);
        ASSERT_LE(bench.size(), 20u);
        std::set<Activity> bench_alpha;
        for (const auto& t : bench_t) bench_alpha.insert(t.variant.begin(), t.variant.end());
        const std::vector<Activity> targets(bench_alpha.begin(), bench_alpha.end());
        const Assessor a(own, bench);

        for (int k = 0; k < 10; ++k) {
            std::vector<std::pair<Activity, Activity>> pairs;
            std::vector<Match> reps;
            std::set<Activity> used;
            const std::size_t size = 1 + rng() % 3;
            for (std::size_t i = 0; i < size; ++i) {
                const Activity from(1, static_cast<char>('a' + rng() % 5));
                const Activity& to = targets[rng() % targets.size()];
                if (from == to || !used.insert(from).second) continue;
                pairs.push_back({from, to});
                reps.push_back({from, to});
            }
            if (reps.empty()) continue;
            std::sort(reps.begin(), reps.end());
            const auto expected = oracle::assess(own_t, bench_t, pairs);
            const auto got = a.score(ProcessChange{reps});
            ASSERT_EQ(expected.has_value(), got.has_value());
            if (!got) continue;
            EXPECT_NEAR(got->feasibility, expected->feasibility, 1e-9);
            ASSERT_TRUE(got->performance_impact);
            EXPECT_NEAR(*got->performance_impact, expected->performance_impact, 1e-9);
            EXPECT_EQ(got->affected_trace_count, expected->affected);
        }
    }
}

TEST(AssessorProperty, DirectionNegation) {
    std::mt19937_64 rng(55);
    for (int round = 0; round < 50; ++round) {
        auto own_t = random_logged(rng, 15, 4);
        auto bench_t = random_logged(rng, 15, 4);
        const auto pos_own = logged(own_t, "o"), pos_bench = logged(bench_t, "b");
        PerfConfig lower{PerfMode::Column, PerfDirection::LowerIsBetter};
        const auto neg_own = with_performance(pos_own, trace_performance(pos_own, lower));
        const auto neg_bench = with_performance(pos_bench, trace_performance(pos_bench, lower));
        const Assessor pos(extract_variants(pos_own), extract_variants(pos_bench));
        if (!pos_bench.alphabet().count("b") || !pos_bench.alphabet().count("c")) continue;
        const Assessor neg(extract_variants(neg_own), extract_variants(neg_bench));
        for (const auto& c : {change({{"a", "b"}}), change({{"a", "c"}, {"b", "d"}})}) {
            const auto p = pos.score(c), n = neg.score(c);
            ASSERT_EQ(p.has_value(), n.has_value());
            if (!p) continue;
            EXPECT_NEAR(*p->performance_impact, -*n->performance_impact, 1e-9);
            EXPECT_EQ(p->feasibility, n->feasibility);
        }
    }
}

TEST(AssessorProperty, FrequencyScaling) {
    std::mt19937_64 rng(66);
    for (int round = 0; round < 50; ++round) {
        const auto own_t = random_logged(rng, 15, 4);
        const auto bench_t = random_logged(rng, 15, 4);
        auto own_x3 = own_t, bench_x3 = bench_t;
        for (int k = 0; k < 2; ++k) {
            own_x3.insert(own_x3.end(), own_t.begin(), own_t.end());
            bench_x3.insert(bench_x3.end(), bench_t.begin(), bench_t.end());
        }
        const auto bench_log = logged(bench_t, "b");
        if (!bench_log.alphabet().count("a") || !bench_log.alphabet().count("b")) continue;
        const Assessor base(extract_variants(logged(own_t, "o")), extract_variants(bench_log));
        const Assessor scaled(extract_variants(logged(own_x3, "o")), extract_variants(logged(bench_x3, "b")));
        for (const auto& c : {change({{"a", "b"}}), change({{"c", "a"}, {"d", "b"}})}) {
            const auto p = base.score(c), q = scaled.score(c);
            ASSERT_EQ(p.has_value(), q.has_value());
            if (!p) continue;
            EXPECT_NEAR(p->feasibility, q->feasibility, 1e-12);
            EXPECT_NEAR(*p->performance_impact, *q->performance_impact, 1e-9);
            EXPECT_EQ(3 * p->affected_trace_count, q->affected_trace_count);
        }
    }
}

TEST(Benchmark, RunningExample) {
    BenchmarkConfig cfg;
    const auto r = benchmark(fixtures::l1(), fixtures::l2(), cfg);
    EXPECT_EQ(r.matches.size(), 4u);
    EXPECT_EQ(r.enumerated_changes, 11u);
    EXPECT_EQ(r.changes.size(), 11u);
    EXPECT_FALSE(r.performance_assessed);
    bool found = false;
    for (const auto& s : r.changes)
        if (s.change == kDelta1) {
            found = true;
            EXPECT_DOUBLE_EQ(s.feasibility, 1.0);
        }
    EXPECT_TRUE(found);
    for (std::size_t i = 1; i < r.changes.size(); ++i) EXPECT_GE(r.changes[i - 1].feasibility, r.changes[i].feasibility);

    cfg.min_feasibility = 0.95;
    for (const auto& s : benchmark(fixtures::l1(), fixtures::l2(), cfg).changes) EXPECT_GE(s.feasibility, 0.95);
    cfg.min_feasibility = 1.1;
    EXPECT_TRUE(benchmark(fixtures::l1(), fixtures::l2(), cfg).changes.empty());
    cfg.min_feasibility = 0.0;
    cfg.top = 2;
    EXPECT_EQ(benchmark(fixtures::l1(), fixtures::l2(), cfg).changes.size(), 2u);
}

TEST(Benchmark, IdenticalLogs) {
    for (const auto& log : {fixtures::l1(), fixtures::l2()}) {
        const auto r = benchmark(log, log, BenchmarkConfig{});
        EXPECT_FALSE(r.performance_assessed);
        for (const auto& s : r.changes) {
            EXPECT_DOUBLE_EQ(s.feasibility, 1.0) << to_string(s.change);
            EXPECT_FALSE(s.performance_impact);
        }
    }
    // With one performance value per variant, identity scoring gives zero impact.
    const auto same = logged({{v("ab"), 4}, {v("ab"), 4}, {v("ba"), 9}}, "c");
    const Assessor a(extract_variants(same), extract_variants(same));
    const auto s = a.score(change({{"a", "a"}}));
    ASSERT_TRUE(s);
    EXPECT_DOUBLE_EQ(s->feasibility, 1.0);
    EXPECT_DOUBLE_EQ(*s->performance_impact, 0.0);
}
