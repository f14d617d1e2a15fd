#include "phyloq/collection.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace phyloq {

TreeCollection::TreeCollection(std::vector<PhyloTree> members) {
    for (auto& t : members) add(std::move(t));
}

bool TreeCollection::add(PhyloTree tree) {
    if (!tree.is_binary())
        throw std::invalid_argument("collection members must be binary");
    if (tree.leaf_count() < 4)
        throw std::invalid_argument("collection members must have at least 4 leaves");
    for (const auto& m : members_)
        if (m.canonical_newick() == tree.canonical_newick()) return false;
    members_.push_back(std::move(tree));
    return true;
}

std::vector<std::string> TreeCollection::all_taxa() const {
    std::set<std::string> taxa;
    for (const auto& m : members_) taxa.insert(m.leaves().begin(), m.leaves().end());
    return {taxa.begin(), taxa.end()};
}

int TreeCollection::total_interior_edges() const {
    int total = 0;
    for (const auto& m : members_) total += m.interior_edge_count();
    return total;
}

TreeCollection TreeCollection::subset(std::uint64_t mask) const {
    TreeCollection out;
    for (int i = 0; i < size(); ++i)
        if (mask >> i & 1) out.add(members_[i]);
    return out;
}

QuartetSet::QuartetSet(std::vector<Quartet> members) {
    for (auto& q : members) add(std::move(q));
}

bool QuartetSet::add(Quartet q) {
    if (index_of(q)) return false;
    members_.push_back(std::move(q));
    return true;
}

std::optional<int> QuartetSet::index_of(const Quartet& q) const {
    for (int i = 0; i < size(); ++i)
        if (members_[i] == q) return i;
    return std::nullopt;
}

std::vector<std::string> QuartetSet::all_taxa() const {
    std::set<std::string> taxa;
    for (const auto& q : members_) {
        auto t = q.taxa();
        taxa.insert(t.begin(), t.end());
    }
    return {taxa.begin(), taxa.end()};
}

QuartetSet QuartetSet::subset(std::uint64_t mask) const {
    QuartetSet out;
    for (int i = 0; i < size(); ++i)
        if (mask >> i & 1) out.add(members_[i]);
    return out;
}

TreeCollection QuartetSet::to_collection() const {
    TreeCollection out;
    for (const auto& q : members_) out.add(q.to_tree());
    return out;
}

}  // namespace phyloq
