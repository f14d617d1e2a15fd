#include "phyloq/compat.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "phyloq/generate.hpp"

namespace phyloq {

namespace {

std::vector<std::string> shared_leaves(const PhyloTree& t1, const PhyloTree& t2) {
    std::vector<std::string> out;
    std::set_intersection(t1.leaves().begin(), t1.leaves().end(), t2.leaves().begin(),
                          t2.leaves().end(), std::back_inserter(out));
    return out;
}

void require_binary_pair(const PhyloTree& t1, const PhyloTree& t2) {
    if (!t1.is_binary() || !t2.is_binary())
        throw std::invalid_argument("two-tree analysis requires binary trees");
}

// canonical key of the split a core edge induces on the core leaf set: the
// side containing the smallest core leaf
std::vector<std::string> split_key(const PhyloTree& core, const Edge& e) {
    auto side = core.split_side(e.u, e.v);
    if (std::binary_search(side.begin(), side.end(), core.leaves().front())) return side;
    return core.split_side(e.v, e.u);
}

}  // namespace

std::optional<SharedRestriction> shared_restriction(const PhyloTree& t1, const PhyloTree& t2) {
    require_binary_pair(t1, t2);
    const auto shared = shared_leaves(t1, t2);
    if (shared.empty())
        throw std::invalid_argument("shared_restriction: the trees share no leaves");
    if (shared.size() == 1)
        throw std::invalid_argument(
            "shared_restriction: a single shared leaf carries no core tree");

    Restriction r1 = restrict_mapped(t1, shared);
    Restriction r2 = restrict_mapped(t2, shared);
    if (!is_isomorphic(r1.tree, r2.tree)) return std::nullopt;

    // a core edge is subdivided in the source when its endpoints are not
    // adjacent there (the Steiner path has an interior attachment point)
    std::vector<Edge> sub1;
    for (const Edge& e : r1.tree.edges())
        if (!t1.adjacent(r1.source_vertex[e.u], r1.source_vertex[e.v])) sub1.push_back(e);

    std::map<std::vector<std::string>, Edge> by_split;
    for (const Edge& e : r1.tree.edges()) by_split[split_key(r1.tree, e)] = e;
    std::vector<Edge> sub2;
    for (const Edge& e : r2.tree.edges()) {
        if (t2.adjacent(r2.source_vertex[e.u], r2.source_vertex[e.v])) continue;
        sub2.push_back(by_split.at(split_key(r2.tree, e)));
    }
    std::sort(sub2.begin(), sub2.end());
    return SharedRestriction{std::move(r1.tree), std::move(sub1), std::move(sub2)};
}

bool two_tree_compatible(const PhyloTree& t1, const PhyloTree& t2) {
    require_binary_pair(t1, t2);
    const auto shared = shared_leaves(t1, t2);
    if (shared.empty())
        throw std::invalid_argument("two_tree_compatible: the trees share no leaves");
    if (shared.size() == 1) return true;
    return shared_restriction(t1, t2).has_value();
}

bool two_tree_definitive(const PhyloTree& t1, const PhyloTree& t2) {
    require_binary_pair(t1, t2);
    const auto shared = shared_leaves(t1, t2);
    if (shared.empty())
        throw std::invalid_argument("two_tree_definitive: the trees share no leaves");
    if (shared.size() == 1) {
        // gluing at one leaf is free unless both trees are single edges, in
        // which case the union has 3 taxa and only the star exists
        return t1.leaf_count() == 2 && t2.leaf_count() == 2;
    }
    auto sr = shared_restriction(t1, t2);
    if (!sr) return false;
    std::vector<Edge> both;
    std::set_intersection(sr->subdivided1.begin(), sr->subdivided1.end(),
                          sr->subdivided2.begin(), sr->subdivided2.end(),
                          std::back_inserter(both));
    return both.empty();
}

std::vector<PhyloTree> find_displaying_trees(const TreeCollection& p, std::uint64_t limit,
                                             int max_leaves) {
    return find_displaying_trees(p, p.all_taxa(), limit, max_leaves);
}

std::vector<PhyloTree> find_displaying_trees(const TreeCollection& p,
                                             const std::vector<std::string>& taxa,
                                             std::uint64_t limit, int max_leaves) {
    if (p.empty()) throw std::invalid_argument("find_displaying_trees: empty collection");
    std::vector<const PhyloTree*> members;
    for (const auto& m : p) members.push_back(&m);
    std::vector<PhyloTree> out;
    enumerate_displaying(taxa, members, [&](const PhyloTree& t) {
        out.push_back(t);
        return limit == 0 || out.size() < limit;
    }, max_leaves);
    return out;
}

CompatVerdict is_compatible(const TreeCollection& p, OracleMode mode, int max_leaves) {
    return is_compatible(p, p.all_taxa(), mode, max_leaves);
}

CompatVerdict is_compatible(const TreeCollection& p, const std::vector<std::string>& taxa,
                            OracleMode mode, int max_leaves) {
    if (p.empty()) throw std::invalid_argument("is_compatible: empty collection");
    std::vector<const PhyloTree*> members;
    for (const auto& m : p) members.push_back(&m);

    CompatVerdict verdict;
    std::uint64_t count = 0;
    bool exhausted = true;
    enumerate_displaying(taxa, members, [&](const PhyloTree& t) {
        if (count++ == 0) verdict.witness = t;
        if (mode == OracleMode::existence && count >= 1) {
            exhausted = false;
            return false;
        }
        if (mode == OracleMode::uniqueness && count >= 2) {
            exhausted = false;
            return false;
        }
        return true;
    }, max_leaves);

    verdict.compatible = count > 0;
    if (exhausted) {
        verdict.witness_count = count;
        verdict.definitive = count == 1;
    } else if (mode == OracleMode::uniqueness) {
        verdict.definitive = false;  // at least two witnesses seen
    }
    return verdict;
}

namespace {

// contract the cherry {x,y} of `tree` to the single leaf z
PhyloTree contract_cherry(const PhyloTree& tree, int vx, int vy, const std::string& z) {
    const int hub = tree.neighbors(vx).front();
    std::vector<int> new_id(tree.vertex_count(), -1);
    std::vector<std::string> labels;
    std::vector<std::vector<int>> adj;
    for (int v = 0; v < tree.vertex_count(); ++v) {
        if (v == vx || v == vy) continue;
        new_id[v] = static_cast<int>(labels.size());
        labels.push_back(v == hub ? z : tree.label(v));
        adj.emplace_back();
    }
    for (int v = 0; v < tree.vertex_count(); ++v) {
        if (new_id[v] < 0) continue;
        for (int w : tree.neighbors(v))
            if (new_id[w] >= 0 && v < w) {
                adj[new_id[v]].push_back(new_id[w]);
                adj[new_id[w]].push_back(new_id[v]);
            }
    }
    return PhyloTree(std::move(adj), std::move(labels));
}

PhyloTree rename_leaf(const PhyloTree& tree, int v, const std::string& z) {
    std::vector<std::vector<int>> adj;
    std::vector<std::string> labels;
    for (int u = 0; u < tree.vertex_count(); ++u) {
        adj.push_back(tree.neighbors(u));
        labels.push_back(u == v ? z : tree.label(u));
    }
    return PhyloTree(std::move(adj), std::move(labels));
}

}  // namespace

CherryReduction cherry_reduce(const TreeCollection& p, const Cherry& xy, const std::string& z) {
    if (!is_valid_taxon(z)) throw std::invalid_argument("cherry_reduce: invalid new label");
    const auto taxa = p.all_taxa();
    if (std::binary_search(taxa.begin(), taxa.end(), z))
        throw std::invalid_argument("cherry_reduce: label '" + z + "' already occurs in the collection");

    CherryReduction result;
    for (const auto& member : p) {
        const int vx = member.leaf_vertex(xy.first);
        const int vy = member.leaf_vertex(xy.second);
        if (vx >= 0 && vy >= 0) {
            const int hx = member.neighbors(vx).front();
            if (hx != member.neighbors(vy).front() || member.degree(hx) != 3)
                throw std::invalid_argument("cherry_reduce: {" + xy.first + "," + xy.second +
                                            "} is not a cherry of every member containing both");
            PhyloTree reduced = contract_cherry(member, vx, vy, z);
            if (reduced.leaf_count() < 4)
                result.dropped.push_back(std::move(reduced));
            else
                result.collection.add(std::move(reduced));
        } else if (vx >= 0 || vy >= 0) {
            result.collection.add(rename_leaf(member, vx >= 0 ? vx : vy, z));
        } else {
            result.collection.add(member);
        }
    }
    return result;
}

}  // namespace phyloq
