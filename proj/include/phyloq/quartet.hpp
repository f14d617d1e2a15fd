#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "phyloq/tree.hpp"

namespace phyloq {

// The binary tree ab|cd on four leaves, stored canonically: both cherries
// sorted and the cherry with the smaller first label first.
class Quartet {
public:
    Quartet(const std::string& a, const std::string& b,
            const std::string& c, const std::string& d);

    const std::string& a() const { return leaves_[0]; }
    const std::string& b() const { return leaves_[1]; }
    const std::string& c() const { return leaves_[2]; }
    const std::string& d() const { return leaves_[3]; }

    Cherry first_cherry() const { return Cherry(leaves_[0], leaves_[1]); }
    Cherry second_cherry() const { return Cherry(leaves_[2], leaves_[3]); }

    // the four taxa in sorted order
    std::vector<std::string> taxa() const;
    bool contains(const std::string& taxon) const;

    PhyloTree to_tree() const;

    // canonical echo of the line format: "a b | c d"
    std::string to_line() const;

    friend bool operator==(const Quartet&, const Quartet&) = default;
    friend auto operator<=>(const Quartet&, const Quartet&) = default;

private:
    std::array<std::string, 4> leaves_;  // {a,b,c,d} meaning ab|cd
};

// Parses one whitespace-tolerant quartet line "a b | c d".
Quartet parse_quartet_line(const std::string& line);

// The topology of a binary 4-leaf tree as a Quartet.
Quartet quartet_from_tree(const PhyloTree& tree);

// True iff `tree` displays the quartet, decided by vertex-disjointness of the
// two cherry-mate paths. Throws when a quartet leaf is missing.
bool displays_quartet(const PhyloTree& tree, const Quartet& q);

// Every 4-leaf restriction of a binary tree; result size C(n,4).
std::vector<Quartet> quartets_of(const PhyloTree& tree);

// Outcome of the distinguished-edge test: ab|cd distinguishes e when the tree
// displays the quartet and e is the only common edge of the a-c and b-d paths.
struct DistinguishedEdge {
    enum class Status { found, not_displayed, no_single_common_edge };
    Status status = Status::not_displayed;
    std::optional<Edge> edge;
    bool found() const { return status == Status::found; }
};
DistinguishedEdge distinguished_edge(const PhyloTree& tree, const Quartet& q);

}  // namespace phyloq
