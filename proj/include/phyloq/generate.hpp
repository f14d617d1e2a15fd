#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "phyloq/tree.hpp"

namespace phyloq {

// (2n-5)!! — the number of binary phylogenetic trees on n >= 3 leaves.
std::uint64_t binary_tree_count(int n);

// Streams every binary phylogenetic tree on `taxa` exactly once up to
// leaf-fixing isomorphism, by sequential leaf insertion in sorted label
// order. Branches whose partial tree fails to display a member of `required`
// are pruned as soon as the member's leaves are all present; since a partial
// tree is exactly the restriction of each completion to the inserted leaves,
// the pruning is exact. The visitor returns false to stop early.
void enumerate_displaying(const std::vector<std::string>& taxa,
                          const std::vector<const PhyloTree*>& required,
                          const std::function<bool(const PhyloTree&)>& visit,
                          int max_leaves = kDefaultEnumCap);

// Plain exhaustive enumeration (no display constraints).
void enumerate_binary_trees(const std::vector<std::string>& taxa,
                            const std::function<bool(const PhyloTree&)>& visit,
                            int max_leaves = kDefaultEnumCap);

std::vector<PhyloTree> all_binary_trees(const std::vector<std::string>& taxa,
                                        int max_leaves = kDefaultEnumCap);

// Uniformly random binary topology on `taxa`, by sequential leaf insertion
// with a uniform edge choice at every step. Deterministic in `seed`.
PhyloTree random_binary_tree(const std::vector<std::string>& taxa, std::uint64_t seed);

}  // namespace phyloq
