#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "phyloq/quartet.hpp"
#include "phyloq/tree.hpp"

namespace phyloq {

// A set of binary phylogenetic trees, each with at least 4 leaves. Insertion
// order is preserved; identity is the canonical Newick string, so isomorphic
// duplicates collapse.
class TreeCollection {
public:
    TreeCollection() = default;
    explicit TreeCollection(std::vector<PhyloTree> members);

    // false when an isomorphic member is already present
    bool add(PhyloTree tree);

    int size() const { return static_cast<int>(members_.size()); }
    bool empty() const { return members_.empty(); }
    const PhyloTree& operator[](int i) const { return members_[i]; }
    auto begin() const { return members_.begin(); }
    auto end() const { return members_.end(); }

    // sorted union of the members' leaf sets
    std::vector<std::string> all_taxa() const;
    int total_interior_edges() const;

    TreeCollection subset(std::uint64_t mask) const;

private:
    std::vector<PhyloTree> members_;
};

// A set of quartets in canonical form, duplicates collapsed, insertion order
// preserved.
class QuartetSet {
public:
    QuartetSet() = default;
    explicit QuartetSet(std::vector<Quartet> members);

    bool add(Quartet q);

    int size() const { return static_cast<int>(members_.size()); }
    bool empty() const { return members_.empty(); }
    const Quartet& operator[](int i) const { return members_[i]; }
    auto begin() const { return members_.begin(); }
    auto end() const { return members_.end(); }

    std::optional<int> index_of(const Quartet& q) const;
    std::vector<std::string> all_taxa() const;

    QuartetSet subset(std::uint64_t mask) const;
    TreeCollection to_collection() const;

    friend bool operator==(const QuartetSet&, const QuartetSet&) = default;

private:
    std::vector<Quartet> members_;
};

}  // namespace phyloq
