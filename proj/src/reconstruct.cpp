#include "phyloq/reconstruct.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace phyloq {

const char* to_string(NotDefinitiveReason reason) {
    switch (reason) {
        case NotDefinitiveReason::no_maximal_hierarchy: return "no maximal hierarchy";
        case NotDefinitiveReason::merge_conflict: return "merge conflict";
        case NotDefinitiveReason::undistinguished_edge: return "undistinguished edge";
        case NotDefinitiveReason::not_displayed: return "not displayed";
    }
    return "unknown";
}

namespace {

// Mutable adjacency scratch for grafting.
struct TreeBuilder {
    std::vector<std::vector<int>> adj;
    std::vector<std::string> labels;

    explicit TreeBuilder(const PhyloTree& t) {
        adj.reserve(2 * t.vertex_count());
        for (int v = 0; v < t.vertex_count(); ++v) {
            adj.push_back(t.neighbors(v));
            labels.push_back(t.label(v));
        }
    }

    int add_vertex(std::string label) {
        adj.emplace_back();
        labels.push_back(std::move(label));
        return static_cast<int>(adj.size()) - 1;
    }

    void connect(int a, int b) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }

    void disconnect(int a, int b) {
        std::erase(adj[a], b);
        std::erase(adj[b], a);
    }

    // deep copy of the subtree of `source` hanging at `root` away from
    // `parent`; returns the new id of the copied root
    int graft_subtree(const PhyloTree& source, int root, int parent) {
        int copy = add_vertex(source.label(root));
        for (int w : source.neighbors(root))
            if (w != parent) connect(copy, graft_subtree(source, w, root));
        return copy;
    }

    PhyloTree build() { return PhyloTree(std::move(adj), std::move(labels)); }
};

}  // namespace

std::optional<PhyloTree> merge_children(const PhyloTree& t1, const PhyloTree& t2) {
    MergeRecord record;
    return merge_children(t1, t2, record);
}

std::optional<PhyloTree> merge_children(const PhyloTree& t1, const PhyloTree& t2,
                                        MergeRecord& record) {
    if (!t1.is_binary() || !t2.is_binary())
        throw std::invalid_argument("merge_children: trees must be binary");
    std::vector<std::string> shared;
    std::set_intersection(t1.leaves().begin(), t1.leaves().end(), t2.leaves().begin(),
                          t2.leaves().end(), std::back_inserter(shared));
    if (shared.size() != 3)
        throw std::invalid_argument("merge_children: trees must share exactly 3 leaves");
    std::copy(shared.begin(), shared.end(), record.overlap.begin());

    const Restriction r1 = restrict_mapped(t1, shared);
    const Restriction r2 = restrict_mapped(t2, shared);
    auto hub_of = [](const Restriction& r) {
        for (int v = 0; v < r.tree.vertex_count(); ++v)
            if (r.tree.is_interior(v)) return v;
        throw std::logic_error("three-leaf core without a hub");
    };
    const int hub1 = hub_of(r1);
    const int hub2 = hub_of(r2);
    const int src_hub1 = r1.source_vertex[hub1];
    const int src_hub2 = r2.source_vertex[hub2];

    // which star edges (named by leaf) are subdivided on each side
    auto subdivided = [&](const PhyloTree& t, const Restriction& r, int hub) {
        std::vector<std::string> out;
        for (const auto& leaf : shared)
            if (!t.adjacent(r.source_vertex[hub], r.source_vertex[r.tree.leaf_vertex(leaf)]))
                out.push_back(leaf);
        return out;
    };
    record.subdivided_in_first = subdivided(t1, r1, hub1);
    record.subdivided_in_second = subdivided(t2, r2, hub2);

    std::vector<std::string> both;
    std::set_intersection(record.subdivided_in_first.begin(), record.subdivided_in_first.end(),
                          record.subdivided_in_second.begin(), record.subdivided_in_second.end(),
                          std::back_inserter(both));
    if (!both.empty()) {
        record.conflict = true;
        return std::nullopt;
    }

    // Graft: start from t1; every star edge subdivided only in t2 is a plain
    // edge hub-leaf in t1, and t2's attachment path (with its hanging
    // subtrees) is spliced into it, preserving t2's ordering.
    TreeBuilder builder(t1);
    for (const auto& leaf : record.subdivided_in_second) {
        const int leaf1 = t1.leaf_vertex(leaf);
        const auto path = t2.path_vertices(src_hub2, t2.leaf_vertex(leaf));
        builder.disconnect(src_hub1, leaf1);
        int prev = src_hub1;
        for (std::size_t i = 1; i + 1 < path.size(); ++i) {
            const int station = builder.add_vertex("");
            builder.connect(prev, station);
            for (int w : t2.neighbors(path[i]))
                if (w != path[i - 1] && w != path[i + 1])
                    builder.connect(station, builder.graft_subtree(t2, w, path[i]));
            prev = station;
        }
        builder.connect(prev, leaf1);
    }

    PhyloTree merged = builder.build();
    if (!displays(merged, t1) || !displays(merged, t2))
        throw std::logic_error("merge_children: assembled tree fails to display its parts");
    return merged;
}

std::pair<bool, std::vector<Edge>> check_condition_i(const PhyloTree& t, const QuartetSet& q) {
    if (!t.is_binary()) throw std::invalid_argument("check_condition_i: tree must be binary");
    if (q.all_taxa() != t.leaves())
        throw std::invalid_argument("check_condition_i: quartet set and tree leaf sets differ");
    std::set<Edge> hit;
    for (const Quartet& quartet : q) {
        auto r = distinguished_edge(t, quartet);
        if (r.found()) hit.insert(*r.edge);
    }
    std::vector<Edge> missing;
    for (const Edge& e : t.interior_edges())
        if (!hit.count(e)) missing.push_back(e);
    return {missing.empty(), missing};
}

namespace {

struct Decider {
    const QuartetSet& q;
    std::vector<std::uint64_t> exc_masks;
    std::unordered_set<std::uint64_t> exc_set;
    std::unordered_map<std::uint64_t, std::uint64_t> split_of;
    std::map<std::uint64_t, std::optional<PhyloTree>> memo;
    std::optional<NotDefinitiveReason> reason;
    std::vector<MergeRecord> merge_log;

    Decider(const QuartetSet& q_, int max_subset)
        : q(q_), exc_masks(excess_free_masks(q_, max_subset)),
          exc_set(exc_masks.begin(), exc_masks.end()) {}

    // the tree defined by the sub-quartet-set `mask`, or nullopt with `reason`
    const std::optional<PhyloTree>& solve(std::uint64_t mask) {
        if (auto it = memo.find(mask); it != memo.end()) return it->second;
        auto& slot = memo[mask];

        if (std::popcount(mask) == 1) {
            slot = q[std::countr_zero(mask)].to_tree();
            return slot;
        }

        // first excess-free partition, committed: a failing partition of a
        // definitive set cannot exist, so the verdict does not depend on it
        const std::uint64_t low = mask & ~(mask - 1);
        std::uint64_t first = 0;
        for (std::uint64_t child : exc_masks) {
            if (child >= mask) break;
            if ((child & mask) != child || !(child & low)) continue;
            if (exc_set.count(mask ^ child)) {
                first = child;
                break;
            }
        }
        if (first == 0) {
            if (!reason) reason = NotDefinitiveReason::no_maximal_hierarchy;
            return slot;
        }
        split_of[mask] = first;

        const auto& left = solve(first);
        if (!left) return slot;
        const auto& right = solve(mask ^ first);
        if (!right) return slot;

        MergeRecord record;
        auto merged = merge_children(*left, *right, record);
        merge_log.push_back(std::move(record));
        if (!merged) {
            if (!reason) reason = NotDefinitiveReason::merge_conflict;
            return slot;
        }
        slot = std::move(merged);
        return slot;
    }

    void collect(std::uint64_t mask, std::set<std::uint64_t>& out) const {
        out.insert(mask);
        if (std::popcount(mask) == 1) return;
        const std::uint64_t child = split_of.at(mask);
        collect(child, out);
        collect(mask ^ child, out);
    }
};

}  // namespace

ReconstructionTrace decide_and_reconstruct(const QuartetSet& q, int max_subset) {
    if (q.empty()) throw std::invalid_argument("decide_and_reconstruct: empty quartet set");
    if (excess(q) != 0)
        throw std::invalid_argument("decide_and_reconstruct: requires an excess-free quartet set");

    ReconstructionTrace trace;
    Decider decider(q, max_subset);
    const std::uint64_t full = (std::uint64_t{1} << q.size()) - 1;
    const auto& built = decider.solve(full);
    trace.merge_log = std::move(decider.merge_log);
    if (!built) {
        trace.reason = decider.reason;
        return trace;
    }

    // soundness gate: the verdict carries a machine-checked certificate
    for (const Quartet& quartet : q)
        if (!displays_quartet(*built, quartet)) {
            trace.reason = NotDefinitiveReason::not_displayed;
            return trace;
        }
    if (!check_condition_i(*built, q).first) {
        trace.reason = NotDefinitiveReason::undistinguished_edge;
        return trace;
    }

    std::set<std::uint64_t> masks;
    decider.collect(full, masks);
    trace.hierarchy = Hierarchy{q, {masks.begin(), masks.end()}};
    trace.tree = *built;
    return trace;
}

namespace {

// leaves reachable from `start` away from `avoid`, with their distances
std::vector<std::pair<int, int>> leaves_beyond(const PhyloTree& t, int start, int avoid) {
    std::vector<std::pair<int, int>> out;  // (leaf vertex, depth)
    std::vector<int> depth(t.vertex_count(), -1);
    std::queue<int> bfs;
    bfs.push(start);
    depth[start] = 0;
    depth[avoid] = -2;
    while (!bfs.empty()) {
        int v = bfs.front();
        bfs.pop();
        if (t.is_leaf(v)) out.emplace_back(v, depth[v]);
        for (int w : t.neighbors(v))
            if (depth[w] == -1) {
                depth[w] = depth[v] + 1;
                bfs.push(w);
            }
    }
    return out;
}

// weighted draw, weight 2^(max_depth - depth); favours leaves near the edge
int pick_leaf(const std::vector<std::pair<int, int>>& pool, std::mt19937_64& rng) {
    int max_depth = 0;
    for (auto [v, d] : pool) max_depth = std::max(max_depth, d);
    max_depth = std::min(max_depth, 40);
    std::uint64_t total = 0;
    std::vector<std::uint64_t> cumulative;
    for (auto [v, d] : pool) {
        total += std::uint64_t{1} << (max_depth - std::min(d, max_depth));
        cumulative.push_back(total);
    }
    const std::uint64_t roll = rng() % total;
    for (std::size_t i = 0; i < pool.size(); ++i)
        if (roll < cumulative[i]) return pool[i].first;
    return pool.back().first;
}

}  // namespace

QuartetSet sample_defining_set(const PhyloTree& t, std::uint64_t seed, int max_attempts,
                               int max_subset) {
    if (!t.is_binary() || t.leaf_count() < 4)
        throw std::invalid_argument("sample_defining_set: need a binary tree on >= 4 leaves");

    // per interior edge {u,v}: the four leaf pools behind u's and v's other
    // neighbours; a quartet with one leaf per pool distinguishes exactly it
    struct EdgePools {
        std::vector<std::pair<int, int>> a1, a2, b1, b2;
    };
    std::vector<EdgePools> pools;
    for (const Edge& e : t.interior_edges()) {
        EdgePools p;
        std::vector<std::vector<std::pair<int, int>>*> slots{&p.a1, &p.a2, &p.b1, &p.b2};
        std::size_t slot = 0;
        for (int w : t.neighbors(e.u))
            if (w != e.v) *slots[slot++] = leaves_beyond(t, w, e.u);
        for (int w : t.neighbors(e.v))
            if (w != e.u) *slots[slot++] = leaves_beyond(t, w, e.v);
        pools.push_back(std::move(p));
    }

    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        std::mt19937_64 rng(mix_seed(seed ^ (0x9e3779b97f4a7c15ULL * (attempt + 1))));
        QuartetSet candidate;
        for (const auto& p : pools)
            candidate.add(Quartet(t.label(pick_leaf(p.a1, rng)), t.label(pick_leaf(p.a2, rng)),
                                  t.label(pick_leaf(p.b1, rng)), t.label(pick_leaf(p.b2, rng))));
        if (candidate.size() != t.leaf_count() - 3) continue;
        if (candidate.all_taxa() != t.leaves()) continue;
        auto trace = decide_and_reconstruct(candidate, max_subset);
        if (trace.definitive() && is_isomorphic(*trace.tree, t)) return candidate;
    }
    throw std::runtime_error("sample_defining_set: no defining set found within " +
                             std::to_string(max_attempts) + " attempts");
}

}  // namespace phyloq
