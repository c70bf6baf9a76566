#pragma once

#include <cstdint>
#include <vector>

#include "execbench/matcher.hpp"

namespace execbench {

// Simple undirected graph over nodes 0..n-1 with bitset adjacency rows.
class Graph {
public:
    explicit Graph(std::size_t n = 0);

    std::size_t size() const noexcept { return n_; }
    std::size_t edge_count() const noexcept { return edges_; }

    void add_edge(std::size_t a, std::size_t b);
    bool adjacent(std::size_t a, std::size_t b) const {
        return (adj_[a][b / 64] >> (b % 64)) & 1u;
    }
    const std::vector<std::uint64_t>& row(std::size_t a) const { return adj_[a]; }

private:
    std::size_t n_ = 0;
    std::size_t edges_ = 0;
    std::vector<std::vector<std::uint64_t>> adj_;
};

using Clique = std::vector<std::size_t>;

// Inclusion-maximal cliques (Bron-Kerbosch with Tomita pivoting). Each clique
// is sorted ascending; the list is sorted by size, then lexicographically.
std::vector<Clique> maximal_cliques(const Graph& g);

// Every clique with 1..max_size nodes, each generated once by extending
// cliques with higher-numbered common neighbours. `truncated` reports
// whether larger cliques exist. Same ordering as maximal_cliques.
std::vector<Clique> cliques_up_to(const Graph& g, std::size_t max_size, bool* truncated = nullptr);

// Nodes are the matches in (own, benchmark) order; two matches are compatible
// iff their own activities differ. Sharing a benchmark activity is allowed.
class CompatGraph {
public:
    explicit CompatGraph(std::vector<Match> matches);

    const std::vector<Match>& nodes() const noexcept { return nodes_; }
    const Graph& graph() const noexcept { return graph_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    std::size_t edge_count() const noexcept { return graph_.edge_count(); }

private:
    std::vector<Match> nodes_;
    Graph graph_;
};

CompatGraph build_compatibility_graph(const MatchSet& matches);

// A set of pairwise-compatible replacements to implement jointly.
struct ProcessChange {
    // Sorted by (own, benchmark); own activities pairwise distinct.
    std::vector<Match> replacements;

    std::size_t size() const noexcept { return replacements.size(); }

    // Some replacement's benchmark activity is itself replaced by another
    // member, e.g. {a -> c, c -> b}.
    bool transitive() const;

    bool operator==(const ProcessChange&) const = default;
};

// Size first, then lexicographic over the sorted replacement lists.
bool canonical_less(const ProcessChange& a, const ProcessChange& b);

std::string to_string(const ProcessChange& c);

struct ChangeEnumeration {
    std::vector<ProcessChange> changes;
    // Cliques with more than max_size members exist and were not emitted.
    bool truncated = false;
};

ChangeEnumeration enumerate_changes(const CompatGraph& g, std::size_t max_size);
std::vector<ProcessChange> maximal_changes(const CompatGraph& g);

}  // namespace execbench
