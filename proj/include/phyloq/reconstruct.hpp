#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "phyloq/collection.hpp"
#include "phyloq/common.hpp"
#include "phyloq/excess.hpp"
#include "phyloq/quartet.hpp"
#include "phyloq/tree.hpp"

namespace phyloq {

// One pairwise merge during reconstruction: the three shared leaves and, for
// each side, which star edges (named by their leaf) were subdivided there.
struct MergeRecord {
    std::array<std::string, 3> overlap;
    std::vector<std::string> subdivided_in_first;
    std::vector<std::string> subdivided_in_second;
    bool conflict = false;
};

// Merges two binary trees sharing exactly three leaves into the unique tree
// on the union displaying both, by splicing each tree's attachment paths into
// the other's star edges. Absent when both trees subdivide a common star edge
// (then the displaying tree is not unique).
std::optional<PhyloTree> merge_children(const PhyloTree& t1, const PhyloTree& t2);
std::optional<PhyloTree> merge_children(const PhyloTree& t1, const PhyloTree& t2,
                                        MergeRecord& record);

enum class NotDefinitiveReason {
    no_maximal_hierarchy,
    merge_conflict,
    undistinguished_edge,
    not_displayed,
};
const char* to_string(NotDefinitiveReason reason);

struct ReconstructionTrace {
    std::optional<PhyloTree> tree;                  // set iff definitive
    std::optional<NotDefinitiveReason> reason;      // set iff not definitive
    std::optional<Hierarchy> hierarchy;             // the split tree used
    std::vector<MergeRecord> merge_log;
    bool definitive() const { return tree.has_value(); }
};

// Decides whether the excess-free quartet set q is definitive and, if so,
// reconstructs the tree it defines. Recursively partitions q into two
// excess-free parts (which then share exactly 3 leaves), merges the
// recursively built child trees, and finally verifies the certificate: the
// assembled tree displays every quartet and every interior edge is
// distinguished by one. A failing child or merge is final: were q definitive,
// every excess-free subset would be definitive too, so no backtracking across
// partitions is needed.
ReconstructionTrace decide_and_reconstruct(const QuartetSet& q,
                                           int max_subset = kDefaultSubsetCap);

// Condition (i): every interior edge of t is distinguished by some quartet of
// q. Returns the undistinguished edges. Requires L(q) = L(t), t binary.
std::pair<bool, std::vector<Edge>> check_condition_i(const PhyloTree& t, const QuartetSet& q);

// A defining quartet set of size n-3 for t: one quartet per interior edge,
// leaves drawn per edge with weight 2^-distance, resampled (seed derived per
// attempt) until decide_and_reconstruct certifies the result. Deterministic
// in `seed`; throws when the retry budget runs out.
QuartetSet sample_defining_set(const PhyloTree& t, std::uint64_t seed,
                               int max_attempts = 1000, int max_subset = kDefaultSubsetCap);

}  // namespace phyloq
