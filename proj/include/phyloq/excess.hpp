#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "phyloq/collection.hpp"
#include "phyloq/common.hpp"

namespace phyloq {

// exc(P) = |L(P)| - 3 - sum over members of interior-edge counts.
// For a quartet set this is |L(Q)| - 3 - |Q|.
long long excess(const TreeCollection& p);
long long excess(const QuartetSet& q);

// Slimness: every non-empty subset has excess >= 0. When false, `witness`
// holds a minimum-cardinality negative-excess subset. The full subset sweep
// runs over 2^|P| - 1 masks via Gray-code iteration, so |P| is capped.
struct SlimResult {
    bool slim = true;
    std::optional<TreeCollection> witness;
};
SlimResult is_slim(const TreeCollection& p, int max_subset = kDefaultSubsetCap);

struct SlimResultQ {
    bool slim = true;
    std::optional<QuartetSet> witness;
};
SlimResultQ is_slim(const QuartetSet& q, int max_subset = kDefaultSubsetCap);

// Exc(Q): every non-empty subset with excess exactly 0, as member bitmasks in
// ascending numeric order (bit i = i-th quartet of Q).
std::vector<std::uint64_t> excess_free_masks(const QuartetSet& q,
                                             int max_subset = kDefaultSubsetCap);
std::vector<QuartetSet> excess_free_subsets(const QuartetSet& q,
                                            int max_subset = kDefaultSubsetCap);

// Patchwork: any two intersecting clusters have both their intersection and
// union present. Clusters must be non-empty subsets of q.
bool is_patchwork(const QuartetSet& q, const std::vector<QuartetSet>& clusters);

// Maximal hierarchy: a laminar family that contains q itself and gives every
// cluster of size > 1 two disjoint children covering it.
bool is_maximal_hierarchy(const QuartetSet& q, const std::vector<QuartetSet>& clusters);

// A hierarchy over a ground quartet set, clusters stored as bitmasks.
struct Hierarchy {
    QuartetSet ground;
    std::vector<std::uint64_t> cluster_masks;  // sorted ascending

    bool contains(std::uint64_t mask) const;
    std::vector<QuartetSet> clusters() const;
};

// A maximal hierarchy of q contained in Exc(q), if one exists. Deterministic:
// at every split the numerically least excess-free child containing the
// cluster's first member is tried first. Requires exc(q) = 0.
std::optional<Hierarchy> find_maximal_hierarchy(const QuartetSet& q,
                                                int max_subset = kDefaultSubsetCap);

// A maximal hierarchy of q within Exc(q) that contains the cluster c.
// First repairs an existing hierarchy through intersections and unions; falls
// back to exhaustive search. Requires exc(q) = 0 and c in Exc(q).
std::optional<Hierarchy> extend_to_hierarchy(const QuartetSet& q, const QuartetSet& c,
                                             int max_subset = kDefaultSubsetCap);

}  // namespace phyloq
