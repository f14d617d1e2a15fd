#pragma once

#include <compare>
#include <string>
#include <vector>

#include "phyloq/common.hpp"

namespace phyloq {

// Taxon labels are plain strings over [A-Za-z0-9_.-]; ordering is
// lexicographic everywhere a tie has to be broken.
bool is_valid_taxon(const std::string& label);

// Undirected edge between two vertices of one PhyloTree, normalized u < v.
// Vertex ids are stable for the lifetime of the owning tree.
struct Edge {
    int u = -1;
    int v = -1;
    Edge() = default;
    Edge(int a, int b) : u(a < b ? a : b), v(a < b ? b : a) {}
    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Two leaves adjacent to the same degree-3 vertex; labels kept sorted.
struct Cherry {
    std::string first;
    std::string second;
    Cherry() = default;
    Cherry(std::string a, std::string b);
    bool contains(const std::string& taxon) const { return taxon == first || taxon == second; }
    friend bool operator==(const Cherry&, const Cherry&) = default;
    friend auto operator<=>(const Cherry&, const Cherry&) = default;
};

// Unrooted phylogenetic tree: connected, acyclic, no degree-2 vertices,
// degree-1 vertices carry unique taxon labels. Immutable after construction.
// Leaf-fixing isomorphism is equality of canonical Newick strings.
class PhyloTree {
public:
    // adjacency[v] lists the neighbours of v; labels[v] is empty for interior
    // vertices. Throws std::invalid_argument on any invariant violation.
    PhyloTree(std::vector<std::vector<int>> adjacency, std::vector<std::string> labels);

    int vertex_count() const { return static_cast<int>(adj_.size()); }
    const std::vector<int>& neighbors(int v) const { return adj_[v]; }
    int degree(int v) const { return static_cast<int>(adj_[v].size()); }
    bool is_leaf(int v) const { return !labels_[v].empty(); }
    bool is_interior(int v) const { return labels_[v].empty(); }
    const std::string& label(int v) const { return labels_[v]; }

    const std::vector<std::string>& leaves() const { return leaves_; }
    int leaf_count() const { return static_cast<int>(leaves_.size()); }
    bool has_leaf(const std::string& taxon) const { return leaf_vertex(taxon) >= 0; }
    int leaf_vertex(const std::string& taxon) const;  // -1 when absent

    // True when every interior vertex has degree exactly 3.
    bool is_binary() const { return binary_; }

    bool adjacent(int u, int v) const;
    std::vector<Edge> edges() const;
    std::vector<Edge> interior_edges() const;
    int interior_edge_count() const;

    // Unique path between two vertices (inclusive of endpoints).
    std::vector<int> path_vertices(int from, int to) const;
    std::vector<Edge> path_edges(int from, int to) const;

    // Sorted leaf labels in the component of `keep` after removing the edge
    // {keep, drop}.
    std::vector<std::string> split_side(int keep, int drop) const;

    const std::string& canonical_newick() const { return canonical_; }

private:
    std::vector<std::vector<int>> adj_;
    std::vector<std::string> labels_;
    std::vector<std::string> leaves_;                       // sorted
    std::vector<std::pair<std::string, int>> leaf_index_;   // sorted by label
    std::string canonical_;
    bool binary_ = false;

    std::pair<std::string, std::string> serialize_rooted(int v, int parent) const;
    std::string build_canonical() const;
};

// Parses a single `;`-terminated Newick expression. Branch lengths are
// accepted and discarded; a degree-2 root is suppressed so the result is
// unrooted. "(a,b);" normalizes to the two-leaf tree (a single edge).
PhyloTree parse_newick(const std::string& text);

// Canonical serialization: the tree is rooted for output on the interior
// edge at the neighbour of the lexicographically smallest leaf (stars and
// two-leaf trees are written from their unique hub), children ordered by
// smallest descendant label. Isomorphic trees produce identical strings.
std::string write_newick(const PhyloTree& tree);

// Leaf-fixing isomorphism.
bool is_isomorphic(const PhyloTree& a, const PhyloTree& b);

// Restriction T|_keep plus the map from restricted vertex ids back to
// vertices of the source tree (used for subdivision analysis).
struct Restriction {
    PhyloTree tree;
    std::vector<int> source_vertex;
};
Restriction restrict_mapped(const PhyloTree& tree, std::vector<std::string> keep);

// The smallest subtree of `tree` containing `keep`, degree-2 vertices
// suppressed. Requires keep subset of the leaf set, |keep| >= 2.
PhyloTree restrict_to(const PhyloTree& tree, const std::vector<std::string>& keep);

// True iff restrict_to(tree, L(smaller)) is isomorphic to `smaller`.
// `smaller` must be binary with leaves contained in those of `tree`.
bool displays(const PhyloTree& tree, const PhyloTree& smaller);

// All cherries of a binary tree, sorted. A binary tree on >= 4 leaves has at
// least two, and they are pairwise disjoint.
std::vector<Cherry> cherries(const PhyloTree& tree);

}  // namespace phyloq
