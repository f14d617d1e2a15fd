#include "phyloq/excess.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace phyloq {

long long excess(const TreeCollection& p) {
    if (p.empty()) throw std::invalid_argument("excess of an empty collection is undefined");
    return static_cast<long long>(p.all_taxa().size()) - 3 - p.total_interior_edges();
}

long long excess(const QuartetSet& q) {
    if (q.empty()) throw std::invalid_argument("excess of an empty quartet set is undefined");
    return static_cast<long long>(q.all_taxa().size()) - 3 - q.size();
}

namespace {

// Gray-code sweep over every non-empty subset of `m` members. Per step one
// member is flipped; the per-taxon counters keep |L(subset)| incremental.
// visit(mask, excess) is called once per subset.
void sweep_subsets(const std::vector<std::vector<int>>& member_taxa,
                   const std::vector<int>& member_edges, int taxa_count,
                   const std::function<void(std::uint64_t, long long)>& visit) {
    const int m = static_cast<int>(member_taxa.size());
    std::vector<int> count(taxa_count, 0);
    long long union_size = 0, edge_sum = 0;
    const std::uint64_t total = std::uint64_t{1} << m;
    std::uint64_t gray = 0;
    for (std::uint64_t k = 1; k < total; ++k) {
        const int j = std::countr_zero(k);
        gray ^= std::uint64_t{1} << j;
        if (gray >> j & 1) {
            for (int t : member_taxa[j])
                if (count[t]++ == 0) ++union_size;
            edge_sum += member_edges[j];
        } else {
            for (int t : member_taxa[j])
                if (--count[t] == 0) --union_size;
            edge_sum -= member_edges[j];
        }
        visit(gray, union_size - 3 - edge_sum);
    }
}

struct SubsetContext {
    std::vector<std::vector<int>> member_taxa;
    std::vector<int> member_edges;
    int taxa_count = 0;
};

SubsetContext make_context(const TreeCollection& p, int max_subset, const char* who) {
    if (p.size() > max_subset)
        throw cap_error(std::string(who) + ": collection of size " + std::to_string(p.size()) +
                        " exceeds the subset cap of " + std::to_string(max_subset));
    if (p.size() > 63) throw cap_error(std::string(who) + ": subset sweeps are limited to 63 members");
    const auto taxa = p.all_taxa();
    SubsetContext ctx;
    ctx.taxa_count = static_cast<int>(taxa.size());
    for (const auto& member : p) {
        std::vector<int> ids;
        for (const auto& leaf : member.leaves())
            ids.push_back(static_cast<int>(
                std::lower_bound(taxa.begin(), taxa.end(), leaf) - taxa.begin()));
        ctx.member_taxa.push_back(std::move(ids));
        ctx.member_edges.push_back(member.interior_edge_count());
    }
    return ctx;
}

std::optional<std::uint64_t> min_negative_subset(const SubsetContext& ctx) {
    std::optional<std::uint64_t> best;
    int best_size = 0;
    sweep_subsets(ctx.member_taxa, ctx.member_edges, ctx.taxa_count,
                  [&](std::uint64_t mask, long long exc) {
                      if (exc >= 0) return;
                      const int size = std::popcount(mask);
                      if (!best || size < best_size || (size == best_size && mask < *best)) {
                          best = mask;
                          best_size = size;
                      }
                  });
    return best;
}

}  // namespace

SlimResult is_slim(const TreeCollection& p, int max_subset) {
    if (p.empty()) return {true, std::nullopt};
    const auto ctx = make_context(p, max_subset, "is_slim");
    if (auto bad = min_negative_subset(ctx)) return {false, p.subset(*bad)};
    return {true, std::nullopt};
}

SlimResultQ is_slim(const QuartetSet& q, int max_subset) {
    if (q.empty()) return {true, std::nullopt};
    const auto ctx = make_context(q.to_collection(), max_subset, "is_slim");
    if (auto bad = min_negative_subset(ctx)) return {false, q.subset(*bad)};
    return {true, std::nullopt};
}

std::vector<std::uint64_t> excess_free_masks(const QuartetSet& q, int max_subset) {
    if (q.empty()) throw std::invalid_argument("Exc of an empty quartet set is undefined");
    const auto ctx = make_context(q.to_collection(), max_subset, "excess_free_subsets");
    std::vector<std::uint64_t> out;
    sweep_subsets(ctx.member_taxa, ctx.member_edges, ctx.taxa_count,
                  [&](std::uint64_t mask, long long exc) {
                      if (exc == 0) out.push_back(mask);
                  });
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<QuartetSet> excess_free_subsets(const QuartetSet& q, int max_subset) {
    std::vector<QuartetSet> out;
    for (std::uint64_t mask : excess_free_masks(q, max_subset)) out.push_back(q.subset(mask));
    return out;
}

namespace {

std::uint64_t cluster_mask(const QuartetSet& q, const QuartetSet& cluster, const char* who) {
    if (cluster.empty()) throw std::invalid_argument(std::string(who) + ": empty cluster");
    std::uint64_t mask = 0;
    for (const auto& quartet : cluster) {
        auto idx = q.index_of(quartet);
        if (!idx)
            throw std::invalid_argument(std::string(who) + ": cluster member '" +
                                        quartet.to_line() + "' is not in the ground set");
        mask |= std::uint64_t{1} << *idx;
    }
    return mask;
}

std::vector<std::uint64_t> cluster_masks(const QuartetSet& q,
                                         const std::vector<QuartetSet>& clusters,
                                         const char* who) {
    if (q.size() > 63) throw cap_error(std::string(who) + ": ground sets are limited to 63 quartets");
    std::set<std::uint64_t> masks;
    for (const auto& c : clusters) masks.insert(cluster_mask(q, c, who));
    return {masks.begin(), masks.end()};
}

bool laminar(const std::vector<std::uint64_t>& masks) {
    for (std::size_t i = 0; i < masks.size(); ++i)
        for (std::size_t j = i + 1; j < masks.size(); ++j) {
            const std::uint64_t meet = masks[i] & masks[j];
            if (meet != 0 && meet != masks[i] && meet != masks[j]) return false;
        }
    return true;
}

bool maximal_over(const std::vector<std::uint64_t>& masks, std::uint64_t full) {
    const std::set<std::uint64_t> present(masks.begin(), masks.end());
    if (!present.count(full)) return false;
    for (std::uint64_t c : masks) {
        if (std::popcount(c) <= 1) continue;
        bool split = false;
        for (std::uint64_t child : masks) {
            if (child == 0 || child == c || (child & c) != child) continue;
            if (present.count(c ^ child)) {
                split = true;
                break;
            }
        }
        if (!split) return false;
    }
    return true;
}

}  // namespace

bool is_patchwork(const QuartetSet& q, const std::vector<QuartetSet>& clusters) {
    const auto masks = cluster_masks(q, clusters, "is_patchwork");
    const std::set<std::uint64_t> present(masks.begin(), masks.end());
    for (std::size_t i = 0; i < masks.size(); ++i)
        for (std::size_t j = i + 1; j < masks.size(); ++j) {
            if ((masks[i] & masks[j]) == 0) continue;
            if (!present.count(masks[i] & masks[j])) return false;
            if (!present.count(masks[i] | masks[j])) return false;
        }
    return true;
}

bool is_maximal_hierarchy(const QuartetSet& q, const std::vector<QuartetSet>& clusters) {
    if (q.empty()) throw std::invalid_argument("is_maximal_hierarchy: empty ground set");
    const auto masks = cluster_masks(q, clusters, "is_maximal_hierarchy");
    const std::uint64_t full = (std::uint64_t{1} << q.size()) - 1;
    return laminar(masks) && maximal_over(masks, full);
}

bool Hierarchy::contains(std::uint64_t mask) const {
    return std::binary_search(cluster_masks.begin(), cluster_masks.end(), mask);
}

std::vector<QuartetSet> Hierarchy::clusters() const {
    std::vector<QuartetSet> out;
    for (std::uint64_t mask : cluster_masks) out.push_back(ground.subset(mask));
    return out;
}

namespace {

// Recursive split search shared by find_maximal_hierarchy and the fallback of
// extend_to_hierarchy. Splits commit to the numerically least workable child
// containing the cluster's lowest bit, memoized per mask.
struct HierarchySearch {
    std::vector<std::uint64_t> exc_masks;           // ascending
    std::unordered_set<std::uint64_t> exc_set;
    std::unordered_map<std::uint64_t, std::uint64_t> split_of;  // mask -> first child
    std::unordered_map<std::uint64_t, bool> memo;

    explicit HierarchySearch(std::vector<std::uint64_t> masks)
        : exc_masks(std::move(masks)), exc_set(exc_masks.begin(), exc_masks.end()) {}

    bool splittable(std::uint64_t mask) {
        if (std::popcount(mask) == 1) return true;
        if (auto it = memo.find(mask); it != memo.end()) return it->second;
        const std::uint64_t low = mask & ~(mask - 1);
        bool ok = false;
        for (std::uint64_t child : exc_masks) {
            if (child >= mask) break;
            if ((child & mask) != child || !(child & low)) continue;
            if (!exc_set.count(mask ^ child)) continue;
            if (splittable(child) && splittable(mask ^ child)) {
                split_of[mask] = child;
                ok = true;
                break;
            }
        }
        memo[mask] = ok;
        return ok;
    }

    void collect(std::uint64_t mask, std::set<std::uint64_t>& out) {
        out.insert(mask);
        if (std::popcount(mask) == 1) return;
        const std::uint64_t child = split_of.at(mask);
        collect(child, out);
        collect(mask ^ child, out);
    }
};

HierarchySearch make_search(const QuartetSet& q, int max_subset, const char* who) {
    if (q.empty()) throw std::invalid_argument(std::string(who) + ": empty quartet set");
    if (excess(q) != 0)
        throw std::invalid_argument(std::string(who) + ": requires an excess-free quartet set");
    return HierarchySearch(excess_free_masks(q, max_subset));
}

}  // namespace

std::optional<Hierarchy> find_maximal_hierarchy(const QuartetSet& q, int max_subset) {
    HierarchySearch search = make_search(q, max_subset, "find_maximal_hierarchy");
    const std::uint64_t full = (std::uint64_t{1} << q.size()) - 1;
    if (!search.splittable(full)) return std::nullopt;
    std::set<std::uint64_t> masks;
    search.collect(full, masks);
    return Hierarchy{q, {masks.begin(), masks.end()}};
}

namespace {

// Constructive repair of a maximal hierarchy so that it passes through
// `target`: restrict the hierarchy onto the target cluster, then grow the
// target upward by disjoint unions until it meets an existing cluster.
std::optional<std::set<std::uint64_t>> repair_through(
    const std::set<std::uint64_t>& hier, const std::unordered_set<std::uint64_t>& exc_set,
    std::uint64_t target, std::uint64_t full) {
    if (hier.count(target)) return hier;
    if (target == full) return std::nullopt;

    // intersections of the existing hierarchy with the target
    std::set<std::uint64_t> onto_target;
    for (std::uint64_t x : hier) {
        const std::uint64_t meet = x & target;
        if (meet == 0) continue;
        if (!exc_set.count(meet)) return std::nullopt;
        onto_target.insert(meet);
    }

    // minimal cluster meeting the target without being contained in it
    std::uint64_t enclosing = 0;
    int enclosing_size = 0;
    for (std::uint64_t x : hier) {
        if ((x & target) == 0 || (x | target) == target) continue;
        const int size = std::popcount(x);
        if (enclosing == 0 || size < enclosing_size ||
            (size == enclosing_size && x < enclosing)) {
            enclosing = x;
            enclosing_size = size;
        }
    }
    if (enclosing == 0) return std::nullopt;

    // the child of `enclosing` that misses the target
    std::uint64_t beside = 0;
    for (std::uint64_t x : hier) {
        if (x == enclosing || (x & enclosing) != x) continue;
        if (hier.count(enclosing ^ x) && (x & target) == 0 && (enclosing ^ x) != 0) {
            beside = x;
            break;
        }
    }
    if (beside == 0) return std::nullopt;

    const std::uint64_t grown = beside | target;
    if ((beside & target) != 0 || !exc_set.count(grown)) return std::nullopt;

    auto above = repair_through(hier, exc_set, grown, full);
    if (!above) return std::nullopt;

    std::set<std::uint64_t> out;
    for (std::uint64_t x : *above)
        if (!((x & grown) == x && x != grown)) out.insert(x);
    out.insert(onto_target.begin(), onto_target.end());
    for (std::uint64_t x : hier)
        if ((x & beside) == x) out.insert(x);
    out.insert(grown);
    return out;
}

bool valid_extension(const std::set<std::uint64_t>& masks,
                     const std::unordered_set<std::uint64_t>& exc_set, std::uint64_t target,
                     std::uint64_t full) {
    if (!masks.count(target) || !masks.count(full)) return false;
    std::vector<std::uint64_t> v(masks.begin(), masks.end());
    for (std::uint64_t x : v)
        if (!exc_set.count(x)) return false;
    return laminar(v) && maximal_over(v, full);
}

}  // namespace

std::optional<Hierarchy> extend_to_hierarchy(const QuartetSet& q, const QuartetSet& c,
                                             int max_subset) {
    HierarchySearch search = make_search(q, max_subset, "extend_to_hierarchy");
    const std::uint64_t target = cluster_mask(q, c, "extend_to_hierarchy");
    if (!search.exc_set.count(target))
        throw std::invalid_argument("extend_to_hierarchy: C must be excess-free");
    const std::uint64_t full = (std::uint64_t{1} << q.size()) - 1;

    if (!search.splittable(full)) return std::nullopt;
    std::set<std::uint64_t> base;
    search.collect(full, base);
    if (base.count(target)) return Hierarchy{q, {base.begin(), base.end()}};

    if (auto repaired = repair_through(base, search.exc_set, target, full);
        repaired && valid_extension(*repaired, search.exc_set, target, full))
        return Hierarchy{q, {repaired->begin(), repaired->end()}};

    // exhaustive fallback: force `target` to appear on some split path
    std::unordered_map<std::uint64_t, std::uint64_t> path_split;
    std::unordered_map<std::uint64_t, bool> path_memo;
    std::function<bool(std::uint64_t)> through = [&](std::uint64_t mask) -> bool {
        if (mask == target) return search.splittable(mask);
        if (auto it = path_memo.find(mask); it != path_memo.end()) return it->second;
        const std::uint64_t low = mask & ~(mask - 1);
        bool ok = false;
        for (std::uint64_t child : search.exc_masks) {
            if (child >= mask) break;
            if ((child & mask) != child || !(child & low)) continue;
            const std::uint64_t other = mask ^ child;
            if (!search.exc_set.count(other)) continue;
            if ((target & child) == target) {
                if (through(child) && search.splittable(other)) ok = true;
            } else if ((target & other) == target) {
                if (search.splittable(child) && through(other)) ok = true;
            }
            if (ok) {
                path_split[mask] = child;
                break;
            }
        }
        path_memo[mask] = ok;
        return ok;
    };
    if (!through(full)) return std::nullopt;

    std::set<std::uint64_t> masks;
    std::function<void(std::uint64_t)> collect_path = [&](std::uint64_t mask) {
        masks.insert(mask);
        if (mask == target) {
            std::set<std::uint64_t> below;
            search.collect(mask, below);
            masks.insert(below.begin(), below.end());
            return;
        }
        const std::uint64_t child = path_split.at(mask);
        const std::uint64_t other = mask ^ child;
        if ((target & child) == target) {
            collect_path(child);
            search.collect(other, masks);
        } else {
            search.collect(child, masks);
            collect_path(other);
        }
    };
    collect_path(full);
    return Hierarchy{q, {masks.begin(), masks.end()}};
}

}  // namespace phyloq
