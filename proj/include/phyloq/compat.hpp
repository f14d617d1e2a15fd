#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "phyloq/collection.hpp"
#include "phyloq/common.hpp"
#include "phyloq/tree.hpp"

namespace phyloq {

// The shared restriction of two binary trees: the tree on the intersection of
// their leaf sets, plus the core edges that are subdivided inside each input
// (a core edge is subdivided in T when the corresponding path in T's Steiner
// tree passes an attachment point for leaves outside the core).
struct SharedRestriction {
    PhyloTree core;
    std::vector<Edge> subdivided1;
    std::vector<Edge> subdivided2;
};

// Absent when the two restrictions to the shared leaf set differ. Requires
// both trees binary and at least two shared leaves (the single-shared-leaf
// case carries no core tree and is handled by the two-tree predicates).
std::optional<SharedRestriction> shared_restriction(const PhyloTree& t1, const PhyloTree& t2);

// Two-tree compatibility and definitiveness. The pair is compatible iff a
// shared restriction exists, and definitive iff additionally the two
// subdivided edge sets are disjoint. Requires a non-empty leaf intersection.
bool two_tree_compatible(const PhyloTree& t1, const PhyloTree& t2);
bool two_tree_definitive(const PhyloTree& t1, const PhyloTree& t2);

// Every binary tree on `taxa` (default: L(P)) that displays all members of P,
// in deterministic enumeration order, truncated at `limit` (0 = no limit).
// Counting binary trees decides existence and uniqueness over all
// phylogenetic trees: a non-binary displaying tree would admit at least three
// binary refinements, each displaying P as well.
std::vector<PhyloTree> find_displaying_trees(const TreeCollection& p, std::uint64_t limit = 0,
                                             int max_leaves = kDefaultEnumCap);
std::vector<PhyloTree> find_displaying_trees(const TreeCollection& p,
                                             const std::vector<std::string>& taxa,
                                             std::uint64_t limit = 0,
                                             int max_leaves = kDefaultEnumCap);

enum class OracleMode {
    existence,   // stop at the first witness; definitive stays false
    uniqueness,  // stop once two witnesses are known
    full_count,  // count every displaying tree
};

struct CompatVerdict {
    bool compatible = false;
    bool definitive = false;
    std::optional<PhyloTree> witness;               // first displaying tree
    std::optional<std::uint64_t> witness_count;     // set when the count is exact
};

CompatVerdict is_compatible(const TreeCollection& p, OracleMode mode = OracleMode::uniqueness,
                            int max_leaves = kDefaultEnumCap);
CompatVerdict is_compatible(const TreeCollection& p, const std::vector<std::string>& taxa,
                            OracleMode mode = OracleMode::uniqueness,
                            int max_leaves = kDefaultEnumCap);

// Replaces the cherry {x,y} by the fresh leaf z throughout the collection:
// members with the cherry get it contracted, members with exactly one of the
// two leaves get it renamed. Members shrinking below 4 leaves are dropped and
// reported. Fails if z is already present or some member has x and y as
// non-cherry leaves.
struct CherryReduction {
    TreeCollection collection;
    std::vector<PhyloTree> dropped;
};
CherryReduction cherry_reduce(const TreeCollection& p, const Cherry& xy, const std::string& z);

}  // namespace phyloq
