#include "execbench/synthlab.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <span>

#include <json.hpp>

#include "execbench/errors.hpp"

namespace execbench::synth {

using nlohmann::json;

namespace {

constexpr double kEpoch2024 = 1704067200.0;  // 2024-01-01T00:00:00Z
constexpr double kEventSpacing = 60.0;
constexpr std::uint64_t kNoiseStream = 0x6e6f697365ull;

void collect_leaves(const ProcessTree& t, std::vector<Activity>& out) {
    if (t.op == Op::Leaf) {
        out.push_back(t.label);
        return;
    }
    for (const auto& c : t.children) collect_leaves(c, out);
}

Op op_from_name(std::string_view name) {
    if (name == "seq") return Op::Seq;
    if (name == "xor") return Op::Xor;
    if (name == "and") return Op::And;
    if (name == "loop") return Op::Loop;
    throw DataError("unknown process tree operator '" + std::string(name) + "'");
}

json tree_json(const ProcessTree& t) {
    if (t.op == Op::Leaf) return json{{"leaf", t.label}};
    json children = json::array();
    for (const auto& c : t.children) children.push_back(tree_json(c));
    return json{{"op", op_name(t.op)}, {"children", std::move(children)}};
}

ProcessTree tree_of(const json& j) {
    if (!j.is_object()) throw DataError("process tree node must be a JSON object");
    if (j.contains("leaf")) return ProcessTree::leaf(j.at("leaf").get<std::string>());
    if (!j.contains("op") || !j.contains("children")) throw DataError("process tree node needs 'leaf' or 'op'+'children'");
    std::vector<ProcessTree> children;
    for (const auto& c : j.at("children")) children.push_back(tree_of(c));
    return ProcessTree::node(op_from_name(j.at("op").get<std::string>()), std::move(children));
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

Trace make_trace(const std::string& case_id, const Variant& v, std::optional<double> start) {
    Trace t;
    t.case_id = case_id;
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::optional<double> ts;
        if (start) ts = *start + kEventSpacing * static_cast<double>(i);
        t.events.push_back(Event{case_id, v[i], ts, 0});
    }
    return t;
}

double synthetic_performance(const Variant& v) {
    double cost = 0.0;
    for (const auto& a : v) cost += 1.0 + static_cast<double>(fnv1a(a) % 10);
    return -cost;
}

}  // namespace

std::string_view op_name(Op op) {
    switch (op) {
        case Op::Leaf: return "leaf";
        case Op::Seq: return "seq";
        case Op::Xor: return "xor";
        case Op::And: return "and";
        case Op::Loop: return "loop";
    }
    return "?";
}

void validate(const ProcessTree& t) {
    std::set<Activity> seen;
    std::function<void(const ProcessTree&)> walk = [&](const ProcessTree& n) {
        if (n.op == Op::Leaf) {
            if (n.label.empty()) throw ConfigError("leaf with empty label");
            if (!n.children.empty()) throw ConfigError("leaf '" + n.label + "' has children");
            if (!seen.insert(n.label).second) throw ConfigError("duplicate leaf label '" + n.label + "'");
            return;
        }
        if (n.op == Op::Loop && n.children.size() != 2)
            throw ConfigError("loop must have exactly a body and a redo child");
        if (n.children.size() < 2) throw ConfigError(std::string(op_name(n.op)) + " node with fewer than two children");
        for (const auto& c : n.children) walk(c);
    };
    walk(t);
}

std::vector<Activity> leaves(const ProcessTree& t) {
    std::vector<Activity> out;
    collect_leaves(t, out);
    return out;
}

std::size_t leaf_count(const ProcessTree& t) {
    if (t.op == Op::Leaf) return 1;
    std::size_t n = 0;
    for (const auto& c : t.children) n += leaf_count(c);
    return n;
}

std::string to_string(const ProcessTree& t) {
    if (t.op == Op::Leaf) return t.label;
    std::string out(op_name(t.op));
    out += "(";
    for (std::size_t i = 0; i < t.children.size(); ++i) {
        if (i) out += ",";
        out += to_string(t.children[i]);
    }
    return out + ")";
}

std::string to_json(const ProcessTree& t) { return tree_json(t).dump(); }

ProcessTree tree_from_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw DataError(std::string("invalid process tree JSON: ") + e.what());
    }
    auto t = tree_of(j);
    validate(t);
    return t;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::size_t uniform_index(Rng& rng, std::size_t n) {
    if (n <= 1) return 0;
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return static_cast<std::size_t>(x % bound);
}

double uniform_real(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

bool bernoulli(Rng& rng, double p) { return uniform_real(rng) < p; }

namespace {

struct Generator {
    Rng rng;
    const GenConfig& cfg;

    Op pick_op(bool allow_loop, bool allow_branching) {
        const double w[4] = {cfg.weights.seq, allow_branching ? cfg.weights.xor_ : 0.0,
                             allow_branching ? cfg.weights.and_ : 0.0, allow_loop ? cfg.weights.loop : 0.0};
        double total = 0.0;
        for (double x : w) total += std::max(0.0, x);
        if (total <= 0.0) throw ConfigError("no operator with positive weight can be placed");
        double r = uniform_real(rng) * total;
        static constexpr Op ops[4] = {Op::Seq, Op::Xor, Op::And, Op::Loop};
        for (int i = 0; i < 4; ++i) {
            const double x = std::max(0.0, w[i]);
            if (r < x) return ops[i];
            r -= x;
        }
        for (int i = 3; i >= 0; --i)
            if (w[i] > 0.0) return ops[i];
        return Op::Seq;
    }

    // Random composition of `budget` into `parts` positive summands.
    std::vector<std::size_t> split(std::size_t budget, std::size_t parts) {
        std::vector<std::size_t> cuts(budget - 1);
        for (std::size_t i = 0; i < cuts.size(); ++i) cuts[i] = i + 1;
        for (std::size_t i = 0; i + 1 < parts; ++i) std::swap(cuts[i], cuts[i + uniform_index(rng, cuts.size() - i)]);
        cuts.resize(parts - 1);
        std::sort(cuts.begin(), cuts.end());
        std::vector<std::size_t> sizes;
        std::size_t prev = 0;
        for (auto c : cuts) {
            sizes.push_back(c - prev);
            prev = c;
        }
        sizes.push_back(budget - prev);
        return sizes;
    }

    // Most leaves a subtree with `depth` operator levels can hold.
    std::size_t capacity(std::size_t depth) const {
        std::size_t cap = 1;
        for (std::size_t i = 0; i < depth && cap < (std::size_t{1} << 40); ++i) cap *= cfg.max_children;
        return cap;
    }

    ProcessTree build(std::size_t budget, std::size_t depth_left) {
        if (budget == 1) return ProcessTree::leaf({});
        const std::size_t child_cap = capacity(depth_left - 1);
        const bool loop_fits = budget - 1 <= child_cap;
        const std::size_t m = std::max<std::size_t>(1, cfg.min_branch_leaves);
        const std::size_t min_arity = std::max<std::size_t>(2, (budget + child_cap - 1) / child_cap);
        const bool branching_fits = child_cap >= m && budget / m >= min_arity;
        const Op op = pick_op(loop_fits, branching_fits);
        std::vector<std::size_t> sizes;
        if (op == Op::Loop) {
            // Short redo parts keep the variant count bounded.
            const std::size_t lo = budget > child_cap ? budget - child_cap : 1;
            const std::size_t hi = std::min({std::size_t{2}, budget - 1, child_cap});
            const std::size_t redo = lo + uniform_index(rng, hi - lo + 1);
            sizes = {budget - redo, redo};
        } else {
            const std::size_t floor = op == Op::Seq ? 1 : m;
            const std::size_t max_arity = std::min(budget / floor, cfg.max_children);
            const std::size_t arity = min_arity + uniform_index(rng, max_arity - min_arity + 1);
            for (int attempt = 0; attempt < 64; ++attempt) {
                sizes = split(budget - arity * (floor - 1), arity);
                for (auto& s : sizes) s += floor - 1;
                if (std::all_of(sizes.begin(), sizes.end(), [&](std::size_t s) { return s <= child_cap; })) break;
                sizes.clear();
            }
            if (sizes.empty()) {
                sizes.assign(arity, budget / arity);
                for (std::size_t i = 0; i < budget % arity; ++i) ++sizes[i];
            }
        }
        std::vector<ProcessTree> children;
        for (auto s : sizes) children.push_back(build(s, depth_left - 1));
        return ProcessTree::node(op, std::move(children));
    }
};

void label_leaves(ProcessTree& t, std::size_t& next) {
    if (t.op == Op::Leaf) {
        t.label = "a" + std::to_string(++next);
        return;
    }
    for (auto& c : t.children) label_leaves(c, next);
}

}  // namespace

ProcessTree generate_process_tree(std::uint64_t seed, const GenConfig& cfg) {
    if (cfg.target_leaves == 0) throw ConfigError("target_leaves must be at least 1");
    if (cfg.max_children < 2) throw ConfigError("max_children must be at least 2");
    Generator gen{Rng(seed), cfg};
    if (cfg.target_leaves > gen.capacity(cfg.max_depth))
        throw ConfigError("max_depth " + std::to_string(cfg.max_depth) + " with at most " +
                          std::to_string(cfg.max_children) + " children cannot hold " +
                          std::to_string(cfg.target_leaves) + " leaves");
    ProcessTree t = gen.build(cfg.target_leaves, cfg.max_depth);
    std::size_t next = 0;
    label_leaves(t, next);
    return t;
}

namespace {

// Removes the leaf labelled `name`; returns false if the whole subtree vanished.
bool remove_leaf(ProcessTree& t, const Activity& name) {
    if (t.op == Op::Leaf) return t.label != name;
    for (auto it = t.children.begin(); it != t.children.end(); ++it) {
        if (!remove_leaf(*it, name)) {
            t.children.erase(it);
            break;
        }
    }
    if (t.children.empty()) return false;
    if (t.children.size() == 1 || (t.op == Op::Loop && t.children.size() != 2)) {
        ProcessTree only = std::move(t.children.front());
        t = std::move(only);
    }
    return true;
}

void rename_leaf(ProcessTree& t, const Activity& from, const Activity& to) {
    if (t.op == Op::Leaf) {
        if (t.label == from) t.label = to;
        return;
    }
    for (auto& c : t.children) rename_leaf(c, from, to);
}

void collect_nodes(ProcessTree& t, std::vector<ProcessTree*>& out) {
    out.push_back(&t);
    for (auto& c : t.children) collect_nodes(c, out);
}

}  // namespace

Mutation mutate_tree(const ProcessTree& t, std::uint64_t seed, const MutationConfig& cfg) {
    validate(t);
    const auto original = leaves(t);
    if (original.size() < cfg.n_replacements + cfg.n_deletions)
        throw ConfigError("tree has " + std::to_string(original.size()) + " leaves, need " +
                          std::to_string(cfg.n_replacements + cfg.n_deletions) + " for replacements and deletions");
    if (cfg.n_replacements == 0 && cfg.n_deletions >= original.size())
        throw ConfigError("deletions would remove every leaf");

    Rng rng(seed);
    std::set<Activity> used(original.begin(), original.end());
    std::size_t fresh_counter = 0;
    auto fresh = [&](char prefix) {
        for (;;) {
            Activity name = std::string(1, prefix) + std::to_string(++fresh_counter);
            if (used.insert(name).second) return name;
        }
    };

    auto chosen = original;
    for (std::size_t i = 0; i < cfg.n_replacements + cfg.n_deletions; ++i)
        std::swap(chosen[i], chosen[i + uniform_index(rng, chosen.size() - i)]);

    Mutation m{t, {}};
    for (std::size_t i = 0; i < cfg.n_replacements; ++i) {
        Activity name = fresh('x');
        rename_leaf(m.tree, chosen[i], name);
        m.truth.replacements.emplace_back(chosen[i], std::move(name));
    }
    for (std::size_t i = cfg.n_replacements; i < cfg.n_replacements + cfg.n_deletions; ++i) {
        remove_leaf(m.tree, chosen[i]);
        m.truth.deletions.push_back(chosen[i]);
    }
    for (std::size_t i = 0; i < cfg.n_insertions; ++i) {
        Activity name = fresh('y');
        std::vector<ProcessTree*> nodes;
        collect_nodes(m.tree, nodes);
        ProcessTree* target = nodes[uniform_index(rng, nodes.size())];
        if (target->op == Op::Seq) {
            const auto pos = uniform_index(rng, target->children.size() + 1);
            target->children.insert(target->children.begin() + static_cast<std::ptrdiff_t>(pos), ProcessTree::leaf(name));
        } else {
            ProcessTree wrapped = std::move(*target);
            std::vector<ProcessTree> kids;
            if (bernoulli(rng, 0.5)) {
                kids.push_back(ProcessTree::leaf(name));
                kids.push_back(std::move(wrapped));
            } else {
                kids.push_back(std::move(wrapped));
                kids.push_back(ProcessTree::leaf(name));
            }
            *target = ProcessTree::seq(std::move(kids));
        }
        m.truth.insertions.push_back(std::move(name));
    }
    std::sort(m.truth.replacements.begin(), m.truth.replacements.end());
    std::sort(m.truth.insertions.begin(), m.truth.insertions.end());
    std::sort(m.truth.deletions.begin(), m.truth.deletions.end());
    validate(m.tree);
    return m;
}

std::string ground_truth_json(const GroundTruth& g) {
    json reps = json::array();
    for (const auto& [from, to] : g.replacements) reps.push_back(json{{"old", from}, {"new", to}});
    return json{{"replacements", reps}, {"insertions", g.insertions}, {"deletions", g.deletions}}.dump(2);
}

namespace {

void play(const ProcessTree& t, Rng& rng, std::size_t max_loop, Variant& out) {
    switch (t.op) {
        case Op::Leaf:
            out.push_back(t.label);
            return;
        case Op::Seq:
            for (const auto& c : t.children) play(c, rng, max_loop, out);
            return;
        case Op::Xor:
            play(t.children[uniform_index(rng, t.children.size())], rng, max_loop, out);
            return;
        case Op::And: {
            std::vector<Variant> parts(t.children.size());
            std::size_t remaining = 0;
            for (std::size_t i = 0; i < t.children.size(); ++i) {
                play(t.children[i], rng, max_loop, parts[i]);
                remaining += parts[i].size();
            }
            // Drawing the next child with probability proportional to its
            // remaining length yields a uniform random interleaving.
            std::vector<std::size_t> cursor(parts.size(), 0);
            while (remaining > 0) {
                std::size_t r = uniform_index(rng, remaining);
                for (std::size_t i = 0; i < parts.size(); ++i) {
                    const std::size_t left = parts[i].size() - cursor[i];
                    if (r < left) {
                        out.push_back(parts[i][cursor[i]++]);
                        break;
                    }
                    r -= left;
                }
                --remaining;
            }
            return;
        }
        case Op::Loop: {
            play(t.children[0], rng, max_loop, out);
            for (std::size_t iter = 1; iter < max_loop && bernoulli(rng, 0.5); ++iter) {
                play(t.children[1], rng, max_loop, out);
                play(t.children[0], rng, max_loop, out);
            }
            return;
        }
    }
}

bool perturb(Variant& v, Rng& rng) {
    // 0 = swap, 1 = delete, 2 = duplicate
    std::vector<int> options;
    if (v.size() >= 2) {
        options.push_back(0);
        options.push_back(1);
    }
    options.push_back(2);
    switch (options[uniform_index(rng, options.size())]) {
        case 0: {
            const auto i = uniform_index(rng, v.size() - 1);
            std::swap(v[i], v[i + 1]);
            break;
        }
        case 1:
            v.erase(v.begin() + static_cast<std::ptrdiff_t>(uniform_index(rng, v.size())));
            break;
        default: {
            const auto i = uniform_index(rng, v.size());
            v.insert(v.begin() + static_cast<std::ptrdiff_t>(i), v[i]);
            break;
        }
    }
    return true;
}

std::string case_name(const std::string& prefix, std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%06zu", i + 1);
    return prefix + buf;
}

}  // namespace

Variant play_out(const ProcessTree& t, Rng& rng, std::size_t max_loop_iterations) {
    Variant out;
    play(t, rng, std::max<std::size_t>(1, max_loop_iterations), out);
    return out;
}

EventLog simulate_log(const ProcessTree& t, const SimConfig& sim) {
    validate(t);
    if (sim.max_loop_iterations < 1) throw ConfigError("max_loop_iterations must be at least 1");
    if (!(sim.noise_probability >= 0.0 && sim.noise_probability <= 1.0))
        throw ConfigError("noise probability must lie in [0, 1]");
    std::vector<Trace> traces(sim.n_traces);
    const auto n = static_cast<std::ptrdiff_t>(sim.n_traces);
#pragma omp parallel for schedule(static) if (n > 256)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        Rng rng(derive_seed(sim.seed, static_cast<std::uint64_t>(i)));
        const auto v = play_out(t, rng, sim.max_loop_iterations);
        traces[i] = make_trace(case_name(sim.case_prefix, static_cast<std::size_t>(i)), v,
                               kEpoch2024 + 3600.0 * static_cast<double>(i));
    }
    EventLog log(std::move(traces));
    if (sim.noise_probability > 0.0) log = inject_noise(log, derive_seed(sim.seed, kNoiseStream), sim.noise_probability);
    if (sim.with_performance) {
        PerformanceMap perf;
        for (const auto& tr : log.traces()) perf.emplace(tr.case_id, synthetic_performance(tr.variant()));
        log = with_performance(log, perf);
    }
    return log;
}

EventLog inject_noise(const EventLog& log, std::uint64_t seed, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("noise probability must lie in [0, 1]");
    std::vector<Trace> out(log.size());
    const auto n = static_cast<std::ptrdiff_t>(log.size());
#pragma omp parallel for schedule(static) if (n > 256)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const Trace& src = log.traces()[i];
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
        if (!bernoulli(rng, p)) {
            out[i] = src;
            continue;
        }
        Variant v = src.variant();
        perturb(v, rng);
        out[i] = make_trace(src.case_id, v, src.events.front().timestamp);
        out[i].performance = src.performance;
    }
    return EventLog(std::move(out));
}

namespace {

class Acceptor {
public:
    Acceptor(const ProcessTree& root, std::size_t max_loop) : max_loop_(max_loop) { index(root); }

    bool accepts(const ProcessTree& t, std::span<const Activity> v) const {
        if (v.empty()) return false;
        const auto& alpha = alphabet_.at(&t);
        switch (t.op) {
            case Op::Leaf:
                return v.size() == 1 && v[0] == t.label;
            case Op::Seq: {
                // Child alphabets are disjoint and children never play out
                // empty, so each child's block is the maximal run of its symbols.
                std::size_t pos = 0;
                for (const auto& c : t.children) {
                    const auto& ca = alphabet_.at(&c);
                    std::size_t end = pos;
                    while (end < v.size() && ca.count(v[end])) ++end;
                    if (end == pos || !accepts(c, v.subspan(pos, end - pos))) return false;
                    pos = end;
                }
                return pos == v.size();
            }
            case Op::Xor: {
                for (const auto& c : t.children) {
                    const auto& ca = alphabet_.at(&c);
                    if (!ca.count(v[0])) continue;
                    for (const auto& a : v)
                        if (!ca.count(a)) return false;
                    return accepts(c, v);
                }
                return false;
            }
            case Op::And: {
                for (const auto& a : v)
                    if (!alpha.count(a)) return false;
                for (const auto& c : t.children) {
                    const auto& ca = alphabet_.at(&c);
                    Variant part;
                    for (const auto& a : v)
                        if (ca.count(a)) part.push_back(a);
                    if (!accepts(c, part)) return false;
                }
                return true;
            }
            case Op::Loop: {
                const auto& body = alphabet_.at(&t.children[0]);
                const auto& redo = alphabet_.at(&t.children[1]);
                std::size_t pos = 0, bodies = 0;
                bool expect_body = true;
                while (pos < v.size()) {
                    const auto& side = expect_body ? body : redo;
                    std::size_t end = pos;
                    while (end < v.size() && side.count(v[end])) ++end;
                    if (end == pos) return false;
                    if (!accepts(expect_body ? t.children[0] : t.children[1], v.subspan(pos, end - pos))) return false;
                    if (expect_body) ++bodies;
                    pos = end;
                    expect_body = !expect_body;
                }
                return !expect_body && bodies <= max_loop_;
            }
        }
        return false;
    }

private:
    const std::set<Activity>& index(const ProcessTree& t) {
        std::set<Activity> alpha;
        if (t.op == Op::Leaf) {
            alpha.insert(t.label);
        } else {
            for (const auto& c : t.children) {
                const auto& ca = index(c);
                alpha.insert(ca.begin(), ca.end());
            }
        }
        return alphabet_[&t] = std::move(alpha);
    }

    std::size_t max_loop_;
    std::map<const ProcessTree*, std::set<Activity>> alphabet_;
};

}  // namespace

bool tree_accepts(const ProcessTree& t, const Variant& v, std::size_t max_loop_iterations) {
    validate(t);
    const Acceptor acceptor(t, std::max<std::size_t>(1, max_loop_iterations));
    return acceptor.accepts(t, v);
}

}  // namespace execbench::synth
