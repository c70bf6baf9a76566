#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "execbench/assessor.hpp"
#include "execbench/errors.hpp"
#include "execbench/evaluator.hpp"
#include "execbench/eventlog.hpp"
#include "execbench/footprint.hpp"
#include "execbench/parallel.hpp"
#include "execbench/report.hpp"
#include "execbench/synthlab.hpp"

namespace fs = std::filesystem;
using namespace execbench;

namespace {

struct SchemaOptions {
    SchemaConfig schema;
    std::string perf_mode = "column";
    std::string perf_direction;

    void attach(CLI::App* cmd) {
        cmd->add_option("--case-col", schema.case_col, "case id column")->capture_default_str();
        cmd->add_option("--activity-col", schema.activity_col, "activity column")->capture_default_str();
        cmd->add_option("--time-col", schema.time_col, "timestamp column (ISO-8601)")->capture_default_str();
        cmd->add_option("--perf-col", schema.perf_col, "case performance column")->capture_default_str();
        cmd->add_option("--perf-mode", perf_mode, "performance source")
            ->check(CLI::IsMember({"column", "throughput"}))
            ->capture_default_str();
        cmd->add_option("--perf-direction", perf_direction, "whether higher or lower values are better")
            ->check(CLI::IsMember({"higher", "lower"}));
    }

    PerfConfig perf() const {
        PerfConfig p;
        p.mode = perf_mode == "throughput" ? PerfMode::Throughput : PerfMode::Column;
        if (perf_direction == "higher") p.direction = PerfDirection::HigherIsBetter;
        if (perf_direction == "lower") p.direction = PerfDirection::LowerIsBetter;
        return p;
    }
};

void add_thresholds(CLI::App* cmd, Thresholds& th) {
    cmd->add_option("--exc", th.exclusive, "exclusiveness threshold")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    cmd->add_option("--int", th.interleaving, "interleaving threshold")->check(CLI::Range(0.0, 1.0))->capture_default_str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    out << text;
    if (!out) throw ConfigError("failed writing " + path);
}

void make_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create directory " + dir.string() + ": " + ec.message());
}

void warn(const std::string& w) { std::cerr << "warning: " << w << "\n"; }

int run_benchmark(const std::string& own_path, const std::string& bench_path, const SchemaOptions& opts,
                  const BenchmarkConfig& cfg, const std::string& format, const std::string& out_path) {
    const auto own = parse_event_log_file(own_path, opts.schema);
    const auto bench = parse_event_log_file(bench_path, opts.schema);
    const auto report = benchmark(own, bench, cfg);
    for (const auto& w : report.warnings) warn(w);

    std::ostringstream text;
    if (format == "json")
        text << benchmark_report_json(report);
    else if (format == "csv")
        write_benchmark_csv(text, report);
    else
        write_benchmark_table(text, report);
    if (out_path.empty())
        std::cout << text.str();
    else
        write_text(out_path, text.str());
    return 0;
}

int run_footprint(const std::string& path, const SchemaOptions& opts, const Thresholds& th, const std::string& out_dir) {
    const auto log = parse_event_log_file(path, opts.schema);
    for (const auto& w : ingestion_warnings(log)) warn(w);
    if (log.empty()) throw DataError("event log has no traces");
    const auto stats = ordering_counts(extract_variants(log));
    const auto fp = build_footprint_matrix(stats, th);

    std::ostringstream rel, exc, inter;
    write_footprint_csv(rel, fp);
    write_exclusiveness_csv(exc, stats);
    write_interleaving_csv(inter, stats);
    if (out_dir.empty()) {
        std::cout << rel.str() << "\n" << exc.str() << "\n" << inter.str();
        return 0;
    }
    make_dir(out_dir);
    write_text((fs::path(out_dir) / "footprint.csv").string(), rel.str());
    write_text((fs::path(out_dir) / "exclusiveness.csv").string(), exc.str());
    write_text((fs::path(out_dir) / "interleaving.csv").string(), inter.str());
    return 0;
}

int run_synth(const eval::ExperimentConfig& cfg, const std::string& out_dir) {
    cfg.validate();
    make_dir(out_dir);
    for (std::size_t i = 0; i < cfg.n_pairs; ++i) {
        const auto pair = eval::generate_pair(cfg, i);
        char name[32];
        std::snprintf(name, sizeof name, "pair_%04zu", i);
        const fs::path dir = fs::path(out_dir) / name;
        make_dir(dir);
        nlohmann::ordered_json trees;
        trees["seed"] = pair.seed;
        trees["own"] = nlohmann::ordered_json::parse(synth::to_json(pair.own_tree));
        trees["benchmark"] = nlohmann::ordered_json::parse(synth::to_json(pair.bench_tree));
        write_text((dir / "trees.json").string(), trees.dump(2) + "\n");
        write_text((dir / "ground_truth.json").string(), synth::ground_truth_json(pair.truth) + "\n");
        std::ostringstream own, bench;
        write_event_log(own, pair.own_log);
        write_event_log(bench, pair.bench_log);
        write_text((dir / "own.csv").string(), own.str());
        write_text((dir / "benchmark.csv").string(), bench.str());
    }
    std::cerr << "wrote " << cfg.n_pairs << " pairs to " << out_dir << "\n";
    return 0;
}

int run_eval(const eval::ExperimentConfig& cfg, const std::string& out_path) {
    const auto report = eval::run_experiment(cfg);
    for (const auto& p : report.pairs)
        if (p.error) warn("pair " + std::to_string(p.index) + " failed: " + *p.error);
    if (!out_path.empty()) write_text(out_path, experiment_report_json(report));
    write_experiment_table(std::cout, report);
    return 0;
}

void add_experiment_options(CLI::App* cmd, eval::ExperimentConfig& cfg) {
    cmd->add_option("--pairs", cfg.n_pairs, "number of model pairs")->capture_default_str();
    cmd->add_option("--seed", cfg.master_seed, "master seed")->capture_default_str();
    cmd->add_option("--traces", cfg.sim.n_traces, "traces per log")->capture_default_str();
    cmd->add_option("--noise", cfg.sim.noise_probability, "per-trace noise probability")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--min-leaves", cfg.min_leaves, "smallest model size")->capture_default_str();
    cmd->add_option("--max-leaves", cfg.max_leaves, "largest model size")->capture_default_str();
    cmd->add_option("--max-depth", cfg.gen.max_depth, "operator levels per model")->capture_default_str();
    cmd->add_option("--max-children", cfg.gen.max_children, "children per operator")->capture_default_str();
    cmd->add_option("--min-branch-leaves", cfg.gen.min_branch_leaves, "smallest xor/and branch")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Benchmark process changes of an event log against a benchmark log"};
    app.require_subcommand(1);

    SchemaOptions schema;
    BenchmarkConfig bcfg;
    std::string own_path, bench_path, format = "json", out_path, out_dir;
    std::size_t top = 0;
    bool no_perf = false;

    auto* bench_cmd = app.add_subcommand("benchmark", "rank process changes suggested by a benchmark log");
    bench_cmd->add_option("OWN", own_path, "own event log (CSV)")->required();
    bench_cmd->add_option("BENCH", bench_path, "benchmark event log (CSV)")->required();
    schema.attach(bench_cmd);
    add_thresholds(bench_cmd, bcfg.thresholds);
    bench_cmd->add_option("--max-change-size", bcfg.max_change_size, "largest number of replacements per change")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    bench_cmd->add_option("--min-feasibility", bcfg.min_feasibility, "drop changes below this feasibility")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    bench_cmd->add_option("--top", top, "keep only the n best changes")->check(CLI::PositiveNumber);
    bench_cmd->add_flag("--no-perf", no_perf, "skip performance assessment");
    bench_cmd->add_option("--format", format, "report format")
        ->check(CLI::IsMember({"json", "csv", "table"}))
        ->capture_default_str();
    bench_cmd->add_option("--out", out_path, "write the report here instead of stdout");

    SchemaOptions fp_schema;
    Thresholds fp_th;
    std::string fp_log, fp_dir;
    auto* fp_cmd = app.add_subcommand("footprint", "dump the footprint and score matrices of a log");
    fp_cmd->add_option("LOG", fp_log, "event log (CSV)")->required();
    fp_schema.attach(fp_cmd);
    add_thresholds(fp_cmd, fp_th);
    fp_cmd->add_option("--out-dir", fp_dir, "write footprint.csv, exclusiveness.csv, interleaving.csv here");

    eval::ExperimentConfig synth_cfg;
    synth_cfg.n_pairs = 10;
    std::string synth_dir;
    auto* synth_cmd = app.add_subcommand("synth", "generate model pairs, logs and ground truth");
    add_experiment_options(synth_cmd, synth_cfg);
    synth_cmd->add_flag("--with-performance", synth_cfg.sim.with_performance, "add a synthetic performance column");
    synth_cmd->add_option("--out-dir", synth_dir, "run directory")->required();

    eval::ExperimentConfig eval_cfg;
    std::string eval_out;
    auto* eval_cmd = app.add_subcommand("eval", "run the matching experiment on generated pairs");
    add_experiment_options(eval_cmd, eval_cfg);
    add_thresholds(eval_cmd, eval_cfg.thresholds);
    eval_cmd->add_option("--max-change-size", eval_cfg.max_change_size, "largest change enumerated")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    eval_cmd->add_option("--out", eval_out, "write the JSON report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    configure_threads_from_env();
    try {
        if (*bench_cmd) {
            if (top) bcfg.top = top;
            if (no_perf)
                bcfg.perf.reset();
            else
                bcfg.perf = schema.perf();
            return run_benchmark(own_path, bench_path, schema, bcfg, format, out_path);
        }
        if (*fp_cmd) return run_footprint(fp_log, fp_schema, fp_th, fp_dir);
        if (*synth_cmd) return run_synth(synth_cfg, synth_dir);
        if (*eval_cmd) return run_eval(eval_cfg, eval_out);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
