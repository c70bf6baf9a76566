// One PASS/FAIL line per acceptance criterion. Exit status is non-zero when
// any criterion fails.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "execbench/assessor.hpp"
#include "execbench/compatibility.hpp"
#include "execbench/evaluator.hpp"
#include "execbench/footprint.hpp"
#include "execbench/matcher.hpp"
#include "execbench/synthlab.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace execbench;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << id << "  " << name << "  " << detail << std::endl;
    failures += !ok;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x, int digits = 4) {
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(digits);
    s << x;
    return s.str();
}

void running_example_matching() {
    const auto t0 = Clock::now();
    const auto m = match_activities(build_footprint_matrix(fixtures::l1(), Thresholds{}),
                                    build_footprint_matrix(fixtures::l2(), Thresholds{}));
    const double dt = seconds_since(t0);
    const std::vector<Match> expected{{"a", "b"}, {"a", "c"}, {"c", "b"}, {"f", "e"}};
    std::string got;
    for (const auto& x : m.matches) got += "(" + x.own + "," + x.benchmark + ")";
    report(1, "running-example matching", m.matches == expected && dt < 1.0, got + " in " + fmt(dt, 3) + "s");
}

void compatibility_structure() {
    const auto t0 = Clock::now();
    MatchSet ms;
    ms.matches = {{"a", "b"}, {"a", "c"}, {"c", "b"}, {"f", "e"}};
    const auto g = build_compatibility_graph(ms);
    const auto maximal = maximal_changes(g);
    const auto all = enumerate_changes(g, 3);
    const double dt = seconds_since(t0);

    oracle::Adjacency adj(4, std::vector<bool>(4));
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) adj[i][j] = i != j && ms.matches[i].own != ms.matches[j].own;
    std::size_t subsets = 0;
    for (const auto& c : oracle::all_cliques(adj)) subsets += c.size() <= 3;

    const std::vector<ProcessChange> triples{
        ProcessChange{{{"a", "b"}, {"c", "b"}, {"f", "e"}}},
        ProcessChange{{{"a", "c"}, {"c", "b"}, {"f", "e"}}},
    };
    const bool ok = g.edge_count() == 5 && !g.graph().adjacent(0, 1) && maximal == triples &&
                    all.changes.size() == 11 && subsets == 11 && dt < 1.0;
    report(2, "compatibility structure", ok,
           std::to_string(g.edge_count()) + " edges, " + std::to_string(maximal.size()) + " maximal, " +
               std::to_string(all.changes.size()) + " changes (oracle " + std::to_string(subsets) + ")");
}

void feasibility_goldens() {
    const auto own = extract_variants(fixtures::l1());
    const auto bench = extract_variants(fixtures::l2());
    const double d1 = feasibility(ProcessChange{{{"a", "b"}, {"f", "e"}}}, own, bench);
    const double d2 = feasibility(ProcessChange{{{"a", "b"}}}, own, bench);
    report(3, "feasibility goldens", std::abs(d1 - 1.0) <= 1e-12 && std::abs(d2 - 0.875) <= 1e-12,
           "delta1 " + fmt(d1, 12) + ", delta2 " + fmt(d2, 12));
}

void desk_experiment() {
    eval::ExperimentConfig cfg;  // 100 pairs, 500 traces, 1-3 replacements, 0-2 ins/del, noise 0.05, seed 42
    const auto t0 = Clock::now();
    const auto r = eval::run_experiment(cfg);
    const double dt = seconds_since(t0);
    const double gap = r.technique_feasibility.mean - r.baseline_feasibility.mean;
    const bool ok = r.precision.mean >= 0.75 && r.recall.mean >= 0.80 && gap >= 0.15 && dt <= 300.0;
    report(4, "desk-scale experiment", ok,
           "precision " + fmt(r.precision.mean) + " (>= 0.75), recall " + fmt(r.recall.mean) +
               " (>= 0.80), feasibility " + fmt(r.technique_feasibility.mean) + " vs " +
               fmt(r.baseline_feasibility.mean) + " gap " + fmt(gap) + " (>= 0.15), " + fmt(dt, 1) + "s, " +
               std::to_string(r.failed_pairs) + " failed pairs");
}

EventLog logged(const std::vector<oracle::LoggedTrace>& traces, std::string_view prefix) {
    std::vector<Variant> seqs;
    for (const auto& t : traces) seqs.push_back(t.variant);
    PerformanceMap perf;
    for (std::size_t i = 0; i < traces.size(); ++i) perf[std::string(prefix) + std::to_string(i + 1)] = traces[i].performance;
    return with_performance(EventLog::from_variants(seqs, prefix), perf);
}

std::vector<oracle::LoggedTrace> random_logged(std::mt19937_64& rng) {
    const auto variants = oracle::random_traces(rng, 1 + rng() % 20, 5, 6);
    std::vector<oracle::LoggedTrace> out;
    for (const auto& v : variants)
        for (std::size_t k = 0, n = 1 + rng() % 3; k < n; ++k)
            out.push_back({v, static_cast<double>(rng() % 4000) / 32.0});
    return out;
}

void performance_oracle() {
    std::mt19937_64 rng(505);
    std::size_t compared = 0, wrong = 0, invariant_failures = 0;
    double worst = 0.0;
    for (int round = 0; round < 50; ++round) {
        const auto own_t = random_logged(rng), bench_t = random_logged(rng);
        const auto own_log = logged(own_t, "o"), bench_log = logged(bench_t, "b");
        const Assessor a(extract_variants(own_log), extract_variants(bench_log));

        PerfConfig lower{PerfMode::Column, PerfDirection::LowerIsBetter};
        const Assessor negated(extract_variants(with_performance(own_log, trace_performance(own_log, lower))),
                               extract_variants(with_performance(bench_log, trace_performance(bench_log, lower))));
        auto own_x2 = own_t, bench_x2 = bench_t;
        own_x2.insert(own_x2.end(), own_t.begin(), own_t.end());
        bench_x2.insert(bench_x2.end(), bench_t.begin(), bench_t.end());
        const Assessor doubled(extract_variants(logged(own_x2, "o")), extract_variants(logged(bench_x2, "b")));

        std::set<Activity> targets;
        for (const auto& t : bench_t) targets.insert(t.variant.begin(), t.variant.end());
        const std::vector<Activity> to_pick(targets.begin(), targets.end());
        for (int k = 0; k < 10; ++k) {
            std::vector<std::pair<Activity, Activity>> pairs;
            std::vector<Match> reps;
            std::set<Activity> used;
            for (std::size_t i = 0, n = 1 + rng() % 3; i < n; ++i) {
                const Activity from(1, static_cast<char>('a' + rng() % 5));
                const Activity to = to_pick[rng() % to_pick.size()];
                if (from == to || !used.insert(from).second) continue;
                pairs.push_back({from, to});
                reps.push_back({from, to});
            }
            if (reps.empty()) continue;
            std::sort(reps.begin(), reps.end());
            const ProcessChange change{reps};
            const auto expected = oracle::assess(own_t, bench_t, pairs);
            const auto got = a.score(change);
            if (expected.has_value() != got.has_value()) {
                ++wrong;
                continue;
            }
            if (!got) continue;
            ++compared;
            const double err = std::abs(*got->performance_impact - expected->performance_impact);
            worst = std::max(worst, err);
            wrong += err > 1e-9;
            const auto n = negated.score(change), d = doubled.score(change);
            if (!n || std::abs(*n->performance_impact + *got->performance_impact) > 1e-9) ++invariant_failures;
            if (!d || std::abs(*d->performance_impact - *got->performance_impact) > 1e-9) ++invariant_failures;
        }
    }
    report(5, "performance impact oracle", compared > 0 && wrong == 0 && invariant_failures == 0,
           std::to_string(compared) + " changes over 50 log pairs, max error " + fmt(worst, 12) + ", " +
               std::to_string(invariant_failures) + " invariant violations");
}

CooccurrenceStats stats_of(const std::vector<Variant>& traces) {
    return ordering_counts(extract_variants(EventLog::from_variants(traces)));
}

void property_suites() {
    std::mt19937_64 rng(606);
    std::vector<std::string> broken;
    auto check = [&](const std::string& suite, bool ok) {
        if (!ok && (broken.empty() || broken.back() != suite)) broken.push_back(suite);
    };

    for (int round = 0; round < 1000; ++round) {
        const auto traces = oracle::random_traces(rng, 1 + rng() % 8, 2 + rng() % 4, 6);
        const auto s = stats_of(traces);
        const Thresholds th{static_cast<double>(rng() % 11) / 10.0, static_cast<double>(rng() % 11) / 10.0};
        const auto m = build_footprint_matrix(s, th);
        for (std::size_t i = 0; i < s.size(); ++i) {
            check("footprint", m.at(i, i) == Relation::Exclusive || m.at(i, i) == Relation::Interleaving);
            for (std::size_t j = 0; j < s.size(); ++j) {
                check("footprint", m.at(j, i) == mirror(m.at(i, j)));
                const double ex = exclusiveness_score(s, i, j);
                check("score bounds", ex >= 0.0 && ex <= 1.0);
                if (s.both(i, j) > 0) {
                    const double in = interleaving_score(s, i, j);
                    check("score bounds", in >= 0.0 && in <= 1.0);
                }
            }
        }
    }

    for (int round = 0; round < 1000; ++round) {
        const auto m = build_footprint_matrix(EventLog::from_variants(oracle::random_traces(rng, 1 + rng() % 8, 2 + rng() % 5, 7)),
                                              Thresholds{});
        const auto self = match_activities(m, m, true);
        for (const auto& a : m.alphabet()) check("self-match", self.contains({a, a}));
    }

    for (int round = 0; round < 1000; ++round) {
        const auto own = oracle::random_traces(rng, 1 + rng() % 6, 2 + rng() % 4, 6);
        const auto bench = build_footprint_matrix(EventLog::from_variants(oracle::random_traces(rng, 1 + rng() % 6, 2 + rng() % 4, 6)),
                                                  Thresholds{});
        auto extended = own;
        for (auto& t : extended)
            if (rng() % 2) t.insert(t.begin() + static_cast<std::ptrdiff_t>(rng() % (t.size() + 1)), "z");
        const auto own_fp = build_footprint_matrix(EventLog::from_variants(own), Thresholds{});
        if (std::none_of(own_fp.alphabet().begin(), own_fp.alphabet().end(), [&](const Activity& a) { return bench.find(a).has_value(); }))
            continue;
        const auto before = match_activities(own_fp, bench);
        const auto after = match_activities(build_footprint_matrix(EventLog::from_variants(extended), Thresholds{}), bench);
        std::vector<Match> kept;
        for (const auto& x : after.matches)
            if (x.own != "z") kept.push_back(x);
        check("column restriction", kept == before.matches);
    }

    for (int round = 0; round < 1000; ++round) {
        const std::size_t n = rng() % 13;
        const double density = static_cast<double>(rng() % 101) / 100.0;
        oracle::Adjacency adj(n, std::vector<bool>(n));
        Graph g(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (static_cast<double>(rng() % 1000) / 1000.0 < density) {
                    adj[i][j] = adj[j][i] = true;
                    g.add_edge(i, j);
                }
        check("clique oracle", maximal_cliques(g) == oracle::maximal_cliques(adj));
        std::vector<Clique> bounded;
        for (const auto& c : oracle::all_cliques(adj))
            if (c.size() <= 3) bounded.push_back(c);
        check("clique oracle", cliques_up_to(g, 3) == bounded);
    }

    for (int round = 0; round < 1000; ++round) {
        const auto p = oracle::random_traces(rng, 2, 2 + rng() % 6, 1 + rng() % 90);
        check("edit similarity", levenshtein(p[0], p[1]) == oracle::levenshtein(p[0], p[1]) &&
                                     edit_similarity(p[0], p[1]) == oracle::similarity(p[0], p[1]));
    }

    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        synth::GenConfig cfg;
        cfg.target_leaves = 2 + seed % 14;
        const auto t = synth::generate_process_tree(seed, cfg);
        synth::Rng r(synth::derive_seed(seed, 7));
        for (int k = 0; k < 5; ++k) check("play-out conformance", synth::tree_accepts(t, synth::play_out(t, r, 3), 3));
    }

    std::string detail = "6 suites x 1000 cases";
    for (const auto& b : broken) detail += "; broken: " + b;
    report(6, "property suites", broken.empty(), detail);
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(EXECBENCH_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

bool same_tree(const fs::path& a, const fs::path& b) {
    std::size_t files = 0;
    for (const auto& e : fs::recursive_directory_iterator(a)) {
        if (!e.is_regular_file()) continue;
        ++files;
        const auto other = b / fs::relative(e.path(), a);
        if (!fs::exists(other) || slurp(e.path()) != slurp(other)) return false;
    }
    return files > 0;
}

void determinism() {
    const fs::path dir = fs::temp_directory_path() / ("execbench_accept_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    {
        std::ofstream a(dir / "l1.csv"), b(dir / "l2.csv");
        write_event_log(a, fixtures::l1());
        write_event_log(b, fixtures::l2());
    }
    const std::string l1 = (dir / "l1.csv").string(), l2 = (dir / "l2.csv").string();
    std::vector<std::string> differing;
    for (const char* run : {"r1", "r2"}) {
        const fs::path out = dir / run;
        fs::create_directories(out);
        int rc = 0;
        rc |= run_cli("benchmark " + l1 + " " + l2 + " --out " + (out / "bench.json").string());
        rc |= run_cli("benchmark " + l1 + " " + l2 + " --format csv --out " + (out / "bench.csv").string());
        rc |= run_cli("footprint " + l1 + " --out-dir " + (out / "fp").string());
        rc |= run_cli("synth --pairs 5 --traces 200 --seed 42 --with-performance --out-dir " + (out / "synth").string());
        rc |= run_cli("eval --pairs 5 --traces 200 --seed 42 --out " + (out / "eval.json").string());
        if (rc != 0) differing.push_back(std::string(run) + " exit status");
    }
    for (const char* f : {"bench.json", "bench.csv", "eval.json"})
        if (slurp(dir / "r1" / f).empty() || slurp(dir / "r1" / f) != slurp(dir / "r2" / f)) differing.push_back(f);
    for (const char* d : {"fp", "synth"})
        if (!same_tree(dir / "r1" / d, dir / "r2" / d)) differing.push_back(d);
    fs::remove_all(dir);

    std::string detail = "benchmark json/csv, footprint, synth, eval";
    for (const auto& d : differing) detail += "; differs: " + d;
    report(7, "determinism", differing.empty(), detail);
}

}  // namespace

int main() {
    running_example_matching();
    compatibility_structure();
    feasibility_goldens();
    desk_experiment();
    performance_oracle();
    property_suites();
    determinism();
    return failures == 0 ? 0 : 1;
}
