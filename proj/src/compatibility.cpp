#include "execbench/compatibility.hpp"

#include <algorithm>
#include <bit>

#include "execbench/errors.hpp"

namespace execbench {

namespace {

using Bits = std::vector<std::uint64_t>;

std::size_t words_for(std::size_t n) { return (n + 63) / 64; }

bool any(const Bits& b) {
    return std::any_of(b.begin(), b.end(), [](std::uint64_t w) { return w != 0; });
}

std::size_t popcount_and(const Bits& a, const Bits& b) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < a.size(); ++i) n += static_cast<std::size_t>(std::popcount(a[i] & b[i]));
    return n;
}

template <class F>
void for_each_bit(const Bits& b, F&& f) {
    for (std::size_t w = 0; w < b.size(); ++w) {
        std::uint64_t word = b[w];
        while (word) {
            const int bit = std::countr_zero(word);
            f(w * 64 + static_cast<std::size_t>(bit));
            word &= word - 1;
        }
    }
}

bool clique_less(const Clique& a, const Clique& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

void bron_kerbosch(const Graph& g, Clique& r, Bits p, Bits x, std::vector<Clique>& out) {
    if (!any(p)) {
        if (!any(x)) {
            Clique c = r;
            std::sort(c.begin(), c.end());
            out.push_back(std::move(c));
        }
        return;
    }
    // Pivot: the vertex of P u X with most neighbours in P.
    std::size_t pivot = 0;
    std::size_t best = 0;
    bool found = false;
    auto consider = [&](std::size_t u) {
        const std::size_t deg = popcount_and(g.row(u), p);
        if (!found || deg > best) {
            pivot = u;
            best = deg;
            found = true;
        }
    };
    for_each_bit(p, consider);
    for_each_bit(x, consider);

    Bits candidates(p.size());
    for (std::size_t w = 0; w < p.size(); ++w) candidates[w] = p[w] & ~g.row(pivot)[w];
    for_each_bit(candidates, [&](std::size_t v) {
        Bits p2(p.size()), x2(x.size());
        for (std::size_t w = 0; w < p.size(); ++w) {
            p2[w] = p[w] & g.row(v)[w];
            x2[w] = x[w] & g.row(v)[w];
        }
        r.push_back(v);
        bron_kerbosch(g, r, std::move(p2), std::move(x2), out);
        r.pop_back();
        p[v / 64] &= ~(std::uint64_t{1} << (v % 64));
        x[v / 64] |= std::uint64_t{1} << (v % 64);
    });
}

void extend(const Graph& g, Clique& current, const Bits& candidates, std::size_t max_size, bool& truncated,
            std::vector<Clique>& out) {
    out.push_back(current);
    if (current.size() == max_size) {
        if (any(candidates)) truncated = true;
        return;
    }
    for_each_bit(candidates, [&](std::size_t v) {
        // Only neighbours numbered above v, so every clique is built once in ascending order.
        Bits next(candidates.size(), 0);
        for (std::size_t w = 0; w < candidates.size(); ++w) next[w] = candidates[w] & g.row(v)[w];
        for (std::size_t w = 0; w <= v / 64; ++w) {
            if (w < v / 64)
                next[w] = 0;
            else
                next[w] &= ~((std::uint64_t{2} << (v % 64)) - 1);
        }
        current.push_back(v);
        extend(g, current, next, max_size, truncated, out);
        current.pop_back();
    });
}

}  // namespace

Graph::Graph(std::size_t n) : n_(n), adj_(n, Bits(words_for(n), 0)) {}

void Graph::add_edge(std::size_t a, std::size_t b) {
    if (a >= n_ || b >= n_) throw LookupError("graph node out of range");
    if (a == b) throw ConfigError("self-loops are not allowed");
    if (adjacent(a, b)) return;
    adj_[a][b / 64] |= std::uint64_t{1} << (b % 64);
    adj_[b][a / 64] |= std::uint64_t{1} << (a % 64);
    ++edges_;
}

std::vector<Clique> maximal_cliques(const Graph& g) {
    std::vector<Clique> out;
    if (g.size() == 0) return out;
    Bits p(words_for(g.size()), 0);
    for (std::size_t v = 0; v < g.size(); ++v) p[v / 64] |= std::uint64_t{1} << (v % 64);
    Clique r;
    bron_kerbosch(g, r, std::move(p), Bits(words_for(g.size()), 0), out);
    std::sort(out.begin(), out.end(), clique_less);
    return out;
}

std::vector<Clique> cliques_up_to(const Graph& g, std::size_t max_size, bool* truncated) {
    if (max_size == 0) throw ConfigError("maximum change size must be at least 1");
    std::vector<Clique> out;
    bool trunc = false;
    Clique current;
    for (std::size_t v = 0; v < g.size(); ++v) {
        Bits next = g.row(v);
        for (std::size_t w = 0; w <= v / 64; ++w) {
            if (w < v / 64)
                next[w] = 0;
            else
                next[w] &= ~((std::uint64_t{2} << (v % 64)) - 1);
        }
        current.assign(1, v);
        extend(g, current, next, max_size, trunc, out);
    }
    std::sort(out.begin(), out.end(), clique_less);
    if (truncated) *truncated = trunc;
    return out;
}

CompatGraph::CompatGraph(std::vector<Match> matches) : nodes_(std::move(matches)) {
    std::sort(nodes_.begin(), nodes_.end());
    nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
    graph_ = Graph(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        for (std::size_t j = i + 1; j < nodes_.size(); ++j)
            if (nodes_[i].own != nodes_[j].own) graph_.add_edge(i, j);
}

CompatGraph build_compatibility_graph(const MatchSet& matches) { return CompatGraph(matches.matches); }

bool ProcessChange::transitive() const {
    for (const auto& m : replacements)
        for (const auto& n : replacements)
            if (m.benchmark == n.own) return true;
    return false;
}

bool canonical_less(const ProcessChange& a, const ProcessChange& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.replacements < b.replacements;
}

std::string to_string(const ProcessChange& c) {
    std::string out = "{";
    for (std::size_t i = 0; i < c.replacements.size(); ++i) {
        if (i) out += ", ";
        out += to_string(c.replacements[i]);
    }
    return out + "}";
}

namespace {

// Nodes are sorted by (own, benchmark) and clique members ascend, so the
// replacement list comes out sorted and index order equals canonical order.
std::vector<ProcessChange> to_changes(const CompatGraph& g, const std::vector<Clique>& cliques) {
    std::vector<ProcessChange> out;
    out.reserve(cliques.size());
    for (const auto& c : cliques) {
        ProcessChange change;
        for (auto v : c) change.replacements.push_back(g.nodes()[v]);
        out.push_back(std::move(change));
    }
    return out;
}

}  // namespace

ChangeEnumeration enumerate_changes(const CompatGraph& g, std::size_t max_size) {
    ChangeEnumeration result;
    result.changes = to_changes(g, cliques_up_to(g.graph(), max_size, &result.truncated));
    return result;
}

std::vector<ProcessChange> maximal_changes(const CompatGraph& g) { return to_changes(g, maximal_cliques(g.graph())); }

}  // namespace execbench
