#include "execbench/report.hpp"

#include <charconv>
#include <cstdio>

#include <json.hpp>

#include "execbench/csv.hpp"

namespace execbench {

using nlohmann::ordered_json;

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

namespace {

ordered_json optional_number(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

std::string_view mode_name(PerfMode m) { return m == PerfMode::Throughput ? "throughput" : "column"; }
std::string_view direction_name(PerfDirection d) { return d == PerfDirection::LowerIsBetter ? "lower" : "higher"; }

ordered_json config_json(const BenchmarkConfig& cfg) {
    ordered_json j;
    j["exc"] = cfg.thresholds.exclusive;
    j["int"] = cfg.thresholds.interleaving;
    j["max_change_size"] = cfg.max_change_size;
    j["min_feasibility"] = cfg.min_feasibility;
    j["top"] = cfg.top ? ordered_json(*cfg.top) : ordered_json(nullptr);
    if (cfg.perf) {
        j["perf"] = {{"mode", mode_name(cfg.perf->mode)}, {"direction", direction_name(cfg.perf->effective_direction())}};
    } else {
        j["perf"] = nullptr;
    }
    return j;
}

ordered_json match_json(const Match& m) { return {{"own", m.own}, {"benchmark", m.benchmark}}; }

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

}  // namespace

std::string benchmark_report_json(const BenchmarkReport& report) {
    ordered_json j;
    j["config"] = config_json(report.config);
    j["own"] = {{"traces", report.own_traces}, {"activities", report.own_alphabet}};
    j["benchmark"] = {{"traces", report.bench_traces}, {"activities", report.bench_alphabet}};
    j["shared_alphabet"] = report.matches.shared_alphabet;
    j["shared_ratio"] = report.matches.shared_ratio;
    ordered_json matches = ordered_json::array();
    for (const auto& m : report.matches.matches) matches.push_back(match_json(m));
    j["matches"] = std::move(matches);
    j["enumerated_changes"] = report.enumerated_changes;
    j["vacuous_changes"] = report.vacuous_changes;
    j["truncated"] = report.truncated;
    j["performance_assessed"] = report.performance_assessed;
    j["warnings"] = report.warnings;

    ordered_json changes = ordered_json::array();
    std::size_t rank = 0;
    for (const auto& s : report.changes) {
        ordered_json c;
        c["rank"] = ++rank;
        ordered_json reps = ordered_json::array();
        for (const auto& m : s.change.replacements) reps.push_back(match_json(m));
        c["replacements"] = std::move(reps);
        c["feasibility"] = s.feasibility;
        c["performance_impact"] = optional_number(s.performance_impact);
        c["affected_traces"] = s.affected_trace_count;
        c["transitive"] = s.change.transitive();
        ordered_json alignments = ordered_json::array();
        for (const auto& a : s.alignments) {
            ordered_json al;
            al["variant"] = a.original;
            al["modified"] = a.modified;
            al["closest_match"] = a.closest;
            al["frequency"] = a.frequency;
            al["closest_frequency"] = a.closest_frequency;
            al["distance"] = a.distance;
            al["similarity"] = a.similarity;
            al["ties"] = a.ties;
            al["performance_delta"] = optional_number(a.performance_delta);
            alignments.push_back(std::move(al));
        }
        c["alignments"] = std::move(alignments);
        changes.push_back(std::move(c));
    }
    j["changes"] = std::move(changes);
    return j.dump(2) + "\n";
}

void write_benchmark_csv(std::ostream& out, const BenchmarkReport& report) {
    csv::write_row(out, {"rank", "activities", "replacements", "feasibility", "performance_impact", "affected_traces",
                         "transitive"});
    std::size_t rank = 0;
    for (const auto& s : report.changes) {
        std::vector<std::string> own, bench;
        for (const auto& m : s.change.replacements) {
            own.push_back(m.own);
            bench.push_back(m.benchmark);
        }
        csv::write_row(out, {std::to_string(++rank), join(own, "; "), join(bench, "; "), format_double(s.feasibility),
                             s.performance_impact ? format_double(*s.performance_impact) : std::string{},
                             std::to_string(s.affected_trace_count), s.change.transitive() ? "true" : "false"});
    }
}

void write_benchmark_table(std::ostream& out, const BenchmarkReport& report) {
    std::size_t width = 12;
    for (const auto& s : report.changes)
        for (const auto& m : s.change.replacements) width = std::max(width, to_string(m).size());
    auto pad = [](const std::string& s, std::size_t w) { return s + std::string(w > s.size() ? w - s.size() : 0, ' '); };
    const std::string rule(width + 4 + 27, '-');
    char buf[64];
    out << "Rank  " << pad("Replacements", width) << "  Feasibility  Performance\n" << rule << "\n";
    std::size_t rank = 0;
    for (const auto& s : report.changes) {
        ++rank;
        for (std::size_t i = 0; i < s.change.replacements.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%-4s  ", i == 0 ? std::to_string(rank).c_str() : "");
            out << buf << pad(to_string(s.change.replacements[i]), width);
            if (i == 0) {
                std::snprintf(buf, sizeof buf, "  %11.3f  ", s.feasibility);
                out << buf;
                if (s.performance_impact)
                    std::snprintf(buf, sizeof buf, "%+11.3f", *s.performance_impact);
                else
                    std::snprintf(buf, sizeof buf, "%11s", "n/a");
                out << buf;
            }
            out << "\n";
        }
    }
    out << rule << "\n";
    std::snprintf(buf, sizeof buf, "%zu matches, %zu changes listed\n", report.matches.size(), report.changes.size());
    out << buf;
}

namespace {

ordered_json summary_json(const eval::Summary& s) {
    return {{"mean", s.mean}, {"median", s.median}, {"count", s.count}};
}

ordered_json experiment_config_json(const eval::ExperimentConfig& c) {
    ordered_json j;
    j["pairs"] = c.n_pairs;
    j["master_seed"] = c.master_seed;
    j["leaves"] = {c.min_leaves, c.max_leaves};
    j["operator_weights"] = {{"seq", c.gen.weights.seq},
                             {"xor", c.gen.weights.xor_},
                             {"and", c.gen.weights.and_},
                             {"loop", c.gen.weights.loop}};
    j["max_depth"] = c.gen.max_depth;
    j["max_children"] = c.gen.max_children;
    j["replacements"] = {c.min_replacements, c.max_replacements};
    j["insertions"] = {c.min_insertions, c.max_insertions};
    j["deletions"] = {c.min_deletions, c.max_deletions};
    j["traces_per_log"] = c.sim.n_traces;
    j["noise_probability"] = c.sim.noise_probability;
    j["max_loop_iterations"] = c.sim.max_loop_iterations;
    j["exc"] = c.thresholds.exclusive;
    j["int"] = c.thresholds.interleaving;
    j["max_change_size"] = c.max_change_size;
    return j;
}

}  // namespace

std::string experiment_report_json(const eval::ExperimentReport& report) {
    ordered_json j;
    j["config"] = experiment_config_json(report.config);
    j["generator"] = "block-structured process trees";
    j["notes"] = report.notes;
    j["summary"] = {{"precision", summary_json(report.precision)},
                    {"recall", summary_json(report.recall)},
                    {"technique_feasibility", summary_json(report.technique_feasibility)},
                    {"baseline_feasibility", summary_json(report.baseline_feasibility)},
                    {"failed_pairs", report.failed_pairs},
                    {"pairs_without_matches", report.pairs_without_matches}};
    ordered_json pairs = ordered_json::array();
    for (const auto& p : report.pairs) {
        ordered_json r;
        r["index"] = p.index;
        r["seed"] = p.seed;
        if (p.error) {
            r["error"] = *p.error;
            pairs.push_back(std::move(r));
            continue;
        }
        r["own_tree"] = ordered_json::parse(p.own_tree);
        r["bench_tree"] = ordered_json::parse(p.bench_tree);
        ordered_json reps = ordered_json::array();
        for (const auto& [from, to] : p.truth.replacements) reps.push_back({{"old", from}, {"new", to}});
        r["truth"] = {{"replacements", reps}, {"insertions", p.truth.insertions}, {"deletions", p.truth.deletions}};
        r["own_variants"] = p.own_variants;
        r["bench_variants"] = p.bench_variants;
        r["shared_ratio"] = p.shared_ratio;
        r["technique_matches"] = p.technique_matches;
        ordered_json found = ordered_json::array();
        for (const auto& m : p.matches) found.push_back(to_string(m));
        r["matches"] = std::move(found);
        r["true_positives"] = p.true_positives;
        r["precision"] = p.precision;
        r["recall"] = p.recall;
        r["technique_changes"] = p.technique_changes;
        r["technique_feasibility"] = optional_number(p.technique_feasibility);
        r["baseline_matches"] = p.baseline_matches;
        r["baseline_changes"] = p.baseline_changes;
        r["baseline_feasibility"] = optional_number(p.baseline_feasibility);
        r["baseline_capped"] = p.baseline_capped;
        r["truncated"] = p.truncated;
        pairs.push_back(std::move(r));
    }
    j["pairs"] = std::move(pairs);
    return j.dump(2) + "\n";
}

void write_experiment_table(std::ostream& out, const eval::ExperimentReport& report) {
    char buf[128];
    out << "Aim  Metric             Technique  Baseline\n";
    out << "-------------------------------------------\n";
    std::snprintf(buf, sizeof buf, "(1)  Precision          %9.3f  %8s\n", report.precision.mean, "-");
    out << buf;
    std::snprintf(buf, sizeof buf, "     Recall             %9.3f  %8s\n", report.recall.mean, "-");
    out << buf;
    out << "-------------------------------------------\n";
    std::snprintf(buf, sizeof buf, "(2)  Feasibility Score  %9.3f  %8.3f\n", report.technique_feasibility.mean,
                  report.baseline_feasibility.mean);
    out << buf;
    out << "-------------------------------------------\n";
    std::snprintf(buf, sizeof buf, "pairs: %zu evaluated, %zu failed, %zu without matches\n",
                  report.precision.count, report.failed_pairs, report.pairs_without_matches);
    out << buf;
    std::snprintf(buf, sizeof buf, "median feasibility: technique %.3f, baseline %.3f\n",
                  report.technique_feasibility.median, report.baseline_feasibility.median);
    out << buf;
}

}  // namespace execbench
