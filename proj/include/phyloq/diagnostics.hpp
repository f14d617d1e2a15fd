#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "phyloq/collection.hpp"
#include "phyloq/tree.hpp"

namespace phyloq {

// Arc of the cherry digraph: `label` is a cherry of trees[from], both its
// leaves occur in trees[to], but not as a cherry there.
struct DigraphArc {
    int from = -1;
    int to = -1;
    Cherry label;
    friend bool operator==(const DigraphArc&, const DigraphArc&) = default;
};

// The arc-labelled digraph over a tree collection: every tree contributes two
// arcs, one per chosen cherry, and the two labels are disjoint.
struct CherryDigraph {
    TreeCollection trees;
    std::vector<DigraphArc> arcs;                  // ordered by (from, label)
    std::vector<std::vector<int>> alternatives;    // per arc: all valid targets
};

// A (tree, cherry) pair for which no valid arc target exists.
struct DigraphFailure {
    int tree_index = -1;
    Cherry cherry;
};

struct DigraphBuildResult {
    std::optional<CherryDigraph> digraph;
    std::vector<DigraphFailure> failures;
    bool ok() const { return digraph.has_value(); }
};

// For each member the two lexicographically smallest cherries are chosen; the
// arc target is the member least by canonical string that contains the cherry
// leaves but not as a cherry. Any cherry without a target makes the whole
// construction fail, reported per (tree, cherry).
DigraphBuildResult build_cherry_digraph(const TreeCollection& p);

// A directed cycle all of whose arc labels contain `taxon`. Since the two
// out-arcs of any vertex carry disjoint labels, the taxon-restricted
// subdigraph has outdegree at most 1, so these cycles are vertex-disjoint and
// each arc lies on at most one cycle per label taxon.
struct ColouredCycle {
    std::string taxon;
    std::vector<int> arc_indices;  // in cycle order, starting at the smallest vertex
};
std::vector<ColouredCycle> coloured_cycles(const CherryDigraph& g);

// |E| - |V| + #components of the underlying undirected multigraph.
int cyclomatic_number(int vertex_count, const std::vector<std::pair<int, int>>& edges);
int cyclomatic_number(const CherryDigraph& g);

// Deterministic DOT rendering; vertices labelled by canonical Newick strings.
std::string to_dot(const CherryDigraph& g);

}  // namespace phyloq
