#include "execbench/evaluator.hpp"

#include <algorithm>

#include <omp.h>

#include "execbench/errors.hpp"

namespace execbench::eval {

namespace {

// Stream ids for seeds derived from a pair seed.
enum Stream : std::uint64_t {
    kTree = 1,
    kShape = 2,
    kMutation = 3,
    kOwnLog = 4,
    kBenchLog = 5,
    kBaseline = 6,
};

std::size_t draw_between(synth::Rng& rng, std::size_t lo, std::size_t hi) {
    return lo + synth::uniform_index(rng, hi - lo + 1);
}

double mean_feasibility(const Assessor& assessor, const std::vector<Match>& matches, std::size_t max_size,
                        std::size_t& n_changes, bool& truncated) {
    const CompatGraph graph(matches);
    auto enumeration = enumerate_changes(graph, max_size);
    truncated = truncated || enumeration.truncated;
    Assessor::Cache cache;
    double sum = 0.0;
    n_changes = 0;
    for (const auto& change : enumeration.changes) {
        if (auto s = assessor.score(change, &cache, false)) {
            sum += s->feasibility;
            ++n_changes;
        }
    }
    return n_changes == 0 ? 0.0 : sum / static_cast<double>(n_changes);
}

}  // namespace

PrecisionRecall precision_recall(const std::vector<Match>& predicted, const synth::GroundTruth& truth) {
    PrecisionRecall pr;
    for (const auto& m : predicted) {
        const auto hit = std::find_if(truth.replacements.begin(), truth.replacements.end(), [&](const auto& r) {
            return r.first == m.own && r.second == m.benchmark;
        });
        if (hit != truth.replacements.end()) ++pr.true_positives;
    }
    if (!predicted.empty())
        pr.precision = static_cast<double>(pr.true_positives) / static_cast<double>(predicted.size());
    if (!truth.replacements.empty())
        pr.recall = static_cast<double>(pr.true_positives) / static_cast<double>(truth.replacements.size());
    return pr;
}

std::vector<Match> random_baseline(const std::vector<Activity>& own, const std::vector<Activity>& bench,
                                   std::size_t n, std::uint64_t seed, bool* capped) {
    std::vector<Match> pool;
    for (const auto& a : own)
        for (const auto& b : bench)
            if (a != b) pool.push_back(Match{a, b});
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    if (capped) *capped = n > pool.size();
    n = std::min(n, pool.size());
    synth::Rng rng(seed);
    for (std::size_t i = 0; i < n; ++i) std::swap(pool[i], pool[i + synth::uniform_index(rng, pool.size() - i)]);
    pool.resize(n);
    std::sort(pool.begin(), pool.end());
    return pool;
}

void ExperimentConfig::validate() const {
    thresholds.validate();
    if (min_leaves < 2 || min_leaves > max_leaves) throw ConfigError("leaf range must satisfy 2 <= min <= max");
    if (min_replacements < 1 || min_replacements > max_replacements)
        throw ConfigError("replacement range must satisfy 1 <= min <= max");
    if (min_insertions > max_insertions) throw ConfigError("insertion range is empty");
    if (min_deletions > max_deletions) throw ConfigError("deletion range is empty");
    if (max_change_size == 0) throw ConfigError("maximum change size must be at least 1");
    if (sim.n_traces == 0) throw ConfigError("traces per log must be at least 1");
    if (!(sim.noise_probability >= 0.0 && sim.noise_probability <= 1.0))
        throw ConfigError("noise probability must lie in [0, 1]");
}

GeneratedPair generate_pair(const ExperimentConfig& cfg, std::size_t index) {
    GeneratedPair pair;
    pair.seed = synth::derive_seed(cfg.master_seed, index);
    synth::Rng shape(synth::derive_seed(pair.seed, kShape));
    synth::GenConfig gen = cfg.gen;
    gen.target_leaves = draw_between(shape, cfg.min_leaves, cfg.max_leaves);
    synth::MutationConfig mut;
    mut.n_replacements = draw_between(shape, cfg.min_replacements, cfg.max_replacements);
    mut.n_insertions = draw_between(shape, cfg.min_insertions, cfg.max_insertions);
    mut.n_deletions = draw_between(shape, cfg.min_deletions, cfg.max_deletions);
    // Leave at least one untouched leaf so the logs keep something in common.
    const std::size_t touchable = gen.target_leaves - 1;
    mut.n_replacements = std::min(mut.n_replacements, touchable);
    mut.n_deletions = std::min(mut.n_deletions, touchable - mut.n_replacements);

    pair.own_tree = synth::generate_process_tree(synth::derive_seed(pair.seed, kTree), gen);
    auto mutation = synth::mutate_tree(pair.own_tree, synth::derive_seed(pair.seed, kMutation), mut);
    pair.bench_tree = std::move(mutation.tree);
    pair.truth = std::move(mutation.truth);

    synth::SimConfig sim = cfg.sim;
    sim.seed = synth::derive_seed(pair.seed, kOwnLog);
    pair.own_log = synth::simulate_log(pair.own_tree, sim);
    sim.seed = synth::derive_seed(pair.seed, kBenchLog);
    pair.bench_log = synth::simulate_log(pair.bench_tree, sim);
    return pair;
}

PairRecord run_pair(const ExperimentConfig& cfg, std::size_t index) {
    PairRecord rec;
    rec.index = index;
    rec.seed = synth::derive_seed(cfg.master_seed, index);
    try {
        const auto pair = generate_pair(cfg, index);
        rec.own_tree = synth::to_json(pair.own_tree);
        rec.bench_tree = synth::to_json(pair.bench_tree);
        rec.truth = pair.truth;
        const auto& own_log = pair.own_log;
        const auto& bench_log = pair.bench_log;

        const auto own_idx = extract_variants(own_log);
        const auto bench_idx = extract_variants(bench_log);
        rec.own_variants = own_idx.size();
        rec.bench_variants = bench_idx.size();

        const auto own_fp = build_footprint_matrix(ordering_counts_serial(own_idx), cfg.thresholds);
        const auto bench_fp = build_footprint_matrix(ordering_counts_serial(bench_idx), cfg.thresholds);
        const auto matches = match_activities_serial(own_fp, bench_fp);
        rec.shared_ratio = matches.shared_ratio;
        rec.technique_matches = matches.size();
        rec.matches = matches.matches;
        const auto pr = precision_recall(matches.matches, rec.truth);
        rec.precision = pr.precision;
        rec.recall = pr.recall;
        rec.true_positives = pr.true_positives;

        if (!matches.empty()) {
            const Assessor assessor(own_idx, bench_idx);
            rec.technique_feasibility =
                mean_feasibility(assessor, matches.matches, cfg.max_change_size, rec.technique_changes, rec.truncated);
            const auto baseline = random_baseline(own_fp.alphabet(), bench_fp.alphabet(), matches.size(),
                                                  synth::derive_seed(rec.seed, kBaseline), &rec.baseline_capped);
            rec.baseline_matches = baseline.size();
            rec.baseline_feasibility =
                mean_feasibility(assessor, baseline, cfg.max_change_size, rec.baseline_changes, rec.truncated);
        }
    } catch (const std::exception& e) {
        rec.error = e.what();
    }
    return rec;
}

Summary summarize(std::vector<double> values) {
    Summary s;
    s.count = values.size();
    if (values.empty()) return s;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    s.median = values.size() % 2 ? values[mid] : (values[mid - 1] + values[mid]) / 2.0;
    return s;
}

namespace {

ExperimentReport aggregate(const ExperimentConfig& cfg, std::vector<PairRecord> pairs) {
    ExperimentReport report;
    report.config = cfg;
    std::vector<double> precision, recall, technique, baseline;
    for (const auto& p : pairs) {
        if (p.error) {
            ++report.failed_pairs;
            continue;
        }
        precision.push_back(p.precision);
        recall.push_back(p.recall);
        if (!p.technique_feasibility) {
            ++report.pairs_without_matches;
            continue;
        }
        technique.push_back(*p.technique_feasibility);
        baseline.push_back(*p.baseline_feasibility);
    }
    report.precision = summarize(std::move(precision));
    report.recall = summarize(std::move(recall));
    report.technique_feasibility = summarize(std::move(technique));
    report.baseline_feasibility = summarize(std::move(baseline));
    report.pairs = std::move(pairs);
    report.notes = {
        "process models are native block-structured trees (seq/xor/and/loop), not PLG models",
        "baseline samples exclude trivial pairs (same activity in both logs)",
        "insertions and deletions are not part of the precision/recall ground truth",
        "feasibility means cover pairs where the technique found at least one match",
    };
    return report;
}

}  // namespace

ExperimentReport run_experiment_serial(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<PairRecord> pairs;
    for (std::size_t i = 0; i < cfg.n_pairs; ++i) pairs.push_back(run_pair(cfg, i));
    return aggregate(cfg, std::move(pairs));
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<PairRecord> pairs(cfg.n_pairs);
    const auto n = static_cast<std::ptrdiff_t>(cfg.n_pairs);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) pairs[i] = run_pair(cfg, static_cast<std::size_t>(i));
    return aggregate(cfg, std::move(pairs));
}

}  // namespace execbench::eval
