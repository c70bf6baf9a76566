#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "execbench/eventlog.hpp"

namespace execbench::synth {

enum class Op { Leaf, Seq, Xor, And, Loop };

std::string_view op_name(Op op);

// Block-structured process model. Operator nodes have at least two children;
// a Loop has exactly two: body, then redo. Leaf labels are unique per tree.
struct ProcessTree {
    Op op = Op::Leaf;
    Activity label;
    std::vector<ProcessTree> children;

    static ProcessTree leaf(Activity name) { return ProcessTree{Op::Leaf, std::move(name), {}}; }
    static ProcessTree node(Op op, std::vector<ProcessTree> children) { return ProcessTree{op, {}, std::move(children)}; }
    static ProcessTree seq(std::vector<ProcessTree> c) { return node(Op::Seq, std::move(c)); }
    static ProcessTree xor_(std::vector<ProcessTree> c) { return node(Op::Xor, std::move(c)); }
    static ProcessTree and_(std::vector<ProcessTree> c) { return node(Op::And, std::move(c)); }
    static ProcessTree loop(ProcessTree body, ProcessTree redo) {
        std::vector<ProcessTree> c;
        c.push_back(std::move(body));
        c.push_back(std::move(redo));
        return node(Op::Loop, std::move(c));
    }

    bool operator==(const ProcessTree&) const = default;
};

// Throws ConfigError when a structural invariant is violated.
void validate(const ProcessTree& t);

// Leaf labels in depth-first order.
std::vector<Activity> leaves(const ProcessTree& t);
std::size_t leaf_count(const ProcessTree& t);

// Compact notation, e.g. "seq(xor(a,c),d,xor(e,f),g)".
std::string to_string(const ProcessTree& t);

// {"op":"seq|xor|and|loop","children":[...]} / {"leaf":"name"}
std::string to_json(const ProcessTree& t);
ProcessTree tree_from_json(std::string_view text);

// SplitMix64 finalizer of (seed, stream); used to derive independent
// per-trace and per-pair RNG streams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

using Rng = std::mt19937_64;

// Portable draws (the std distributions are implementation-defined).
std::size_t uniform_index(Rng& rng, std::size_t n);
double uniform_real(Rng& rng);
bool bernoulli(Rng& rng, double p);

struct OperatorWeights {
    double seq = 0.5;
    double xor_ = 0.25;
    double and_ = 0.15;
    double loop = 0.10;
};

struct GenConfig {
    std::size_t target_leaves = 10;
    OperatorWeights weights;
    // Operator levels; leaves sit below the deepest operator.
    std::size_t max_depth = 4;
    std::size_t max_children = 4;
    // Smallest leaf budget of a Xor/And branch.
    std::size_t min_branch_leaves = 1;
};

// Top-down random construction: pick an operator by weight, split the leaf
// budget among its children, recurse. Leaves are labelled a1, a2, ... in
// depth-first order. Throws ConfigError for unsatisfiable configurations.
ProcessTree generate_process_tree(std::uint64_t seed, const GenConfig& cfg);

struct MutationConfig {
    std::size_t n_replacements = 1;
    std::size_t n_insertions = 0;
    std::size_t n_deletions = 0;
};

struct GroundTruth {
    // (old activity, fresh activity), sorted.
    std::vector<std::pair<Activity, Activity>> replacements;
    std::vector<Activity> insertions;
    std::vector<Activity> deletions;
};

struct Mutation {
    ProcessTree tree;
    GroundTruth truth;
};

// Renames, deletes and inserts leaves. Fresh names never occur in `t`.
// Deleting a leaf collapses operators left with a single child. Throws
// ConfigError if `t` has fewer leaves than replacements plus deletions or
// would lose all of them.
Mutation mutate_tree(const ProcessTree& t, std::uint64_t seed, const MutationConfig& cfg);

std::string ground_truth_json(const GroundTruth& g);

struct SimConfig {
    std::size_t n_traces = 1000;
    double noise_probability = 0.05;
    std::size_t max_loop_iterations = 3;
    std::uint64_t seed = 0;
    // Attach a synthetic per-case performance value (negated activity cost sum).
    bool with_performance = false;
    std::string case_prefix = "case";
};

// One random execution of `t`. And interleaves its children's play-outs by a
// uniformly random merge; Loop repeats (redo, body) with probability 0.5 up to
// max_loop_iterations body executions.
Variant play_out(const ProcessTree& t, Rng& rng, std::size_t max_loop_iterations);

// Independent play-outs (per-trace RNG streams) with strictly increasing
// synthetic timestamps, followed by inject_noise when noise_probability > 0.
EventLog simulate_log(const ProcessTree& t, const SimConfig& sim);

// Each trace independently, with probability p, gets one uniformly chosen
// applicable perturbation: swap two adjacent events, delete one event
// (length >= 2 only), or duplicate one event in place.
EventLog inject_noise(const EventLog& log, std::uint64_t seed, double p);

// Whether `v` is in the play-out language of `t` with loops bounded by
// `max_loop_iterations` body executions.
bool tree_accepts(const ProcessTree& t, const Variant& v, std::size_t max_loop_iterations = 3);

}  // namespace execbench::synth
