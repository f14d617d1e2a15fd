#include "phyloq/quartet.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace phyloq {

Quartet::Quartet(const std::string& a, const std::string& b,
                 const std::string& c, const std::string& d) {
    for (const auto* s : {&a, &b, &c, &d})
        if (!is_valid_taxon(*s)) throw std::invalid_argument("invalid taxon label '" + *s + "'");
    std::array<std::string, 4> all{a, b, c, d};
    std::array<std::string, 4> sorted = all;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("quartet needs four distinct taxa");
    std::pair<std::string, std::string> p1{std::min(a, b), std::max(a, b)};
    std::pair<std::string, std::string> p2{std::min(c, d), std::max(c, d)};
    if (p2 < p1) std::swap(p1, p2);
    leaves_ = {p1.first, p1.second, p2.first, p2.second};
}

std::vector<std::string> Quartet::taxa() const {
    std::vector<std::string> out(leaves_.begin(), leaves_.end());
    std::sort(out.begin(), out.end());
    return out;
}

bool Quartet::contains(const std::string& taxon) const {
    return std::find(leaves_.begin(), leaves_.end(), taxon) != leaves_.end();
}

PhyloTree Quartet::to_tree() const {
    // vertices: 0..3 the leaves a,b,c,d; 4 and 5 the cherry hubs
    std::vector<std::vector<int>> adj{{4}, {4}, {5}, {5}, {0, 1, 5}, {2, 3, 4}};
    std::vector<std::string> labels{leaves_[0], leaves_[1], leaves_[2], leaves_[3], "", ""};
    return PhyloTree(std::move(adj), std::move(labels));
}

std::string Quartet::to_line() const {
    return leaves_[0] + " " + leaves_[1] + " | " + leaves_[2] + " " + leaves_[3];
}

Quartet parse_quartet_line(const std::string& line) {
    auto bar = line.find('|');
    if (bar == std::string::npos || line.find('|', bar + 1) != std::string::npos)
        throw parse_error("quartet line must contain exactly one '|'");
    auto words = [](const std::string& part) {
        std::istringstream in(part);
        std::vector<std::string> out;
        std::string w;
        while (in >> w) out.push_back(w);
        return out;
    };
    auto left = words(line.substr(0, bar));
    auto right = words(line.substr(bar + 1));
    if (left.size() != 2 || right.size() != 2)
        throw parse_error("quartet line must name two taxa on each side of '|'");
    for (const auto& w : {left[0], left[1], right[0], right[1]})
        if (!is_valid_taxon(w)) throw parse_error("invalid taxon label '" + w + "'");
    try {
        return Quartet(left[0], left[1], right[0], right[1]);
    } catch (const std::invalid_argument& e) {
        throw parse_error(e.what());
    }
}

Quartet quartet_from_tree(const PhyloTree& tree) {
    if (!tree.is_binary() || tree.leaf_count() != 4)
        throw std::invalid_argument("not a quartet tree");
    for (int v = 0; v < tree.vertex_count(); ++v) {
        if (!tree.is_interior(v)) continue;
        std::vector<std::string> pair, rest;
        for (int w : tree.neighbors(v))
            if (tree.is_leaf(w)) pair.push_back(tree.label(w));
        if (pair.size() != 2) continue;
        for (const auto& name : tree.leaves())
            if (name != pair[0] && name != pair[1]) rest.push_back(name);
        return Quartet(pair[0], pair[1], rest[0], rest[1]);
    }
    throw std::logic_error("quartet tree without a cherry");
}

bool displays_quartet(const PhyloTree& tree, const Quartet& q) {
    int va = tree.leaf_vertex(q.a()), vb = tree.leaf_vertex(q.b());
    int vc = tree.leaf_vertex(q.c()), vd = tree.leaf_vertex(q.d());
    if (va < 0 || vb < 0 || vc < 0 || vd < 0)
        throw std::invalid_argument("quartet leaf missing from tree");
    std::vector<char> on_first(tree.vertex_count(), 0);
    for (int v : tree.path_vertices(va, vb)) on_first[v] = 1;
    for (int v : tree.path_vertices(vc, vd))
        if (on_first[v]) return false;
    return true;
}

std::vector<Quartet> quartets_of(const PhyloTree& tree) {
    if (!tree.is_binary()) throw std::invalid_argument("quartets_of: tree must be binary");
    const auto& names = tree.leaves();
    const int n = tree.leaf_count();
    if (n < 4) throw std::invalid_argument("quartets_of: tree must have at least 4 leaves");

    // path vertex sets between all leaf pairs, as bool rows
    std::vector<int> vert(n);
    for (int i = 0; i < n; ++i) vert[i] = tree.leaf_vertex(names[i]);
    std::vector<std::vector<char>> on_path(n * n);
    auto mark = [&](int i, int j) -> const std::vector<char>& {
        auto& row = on_path[i * n + j];
        if (row.empty()) {
            row.assign(tree.vertex_count(), 0);
            for (int v : tree.path_vertices(vert[i], vert[j])) row[v] = 1;
        }
        return row;
    };
    auto disjoint = [&](int i, int j, int k, int l) {
        const auto& left = mark(i, j);
        const auto& right = mark(k, l);
        for (std::size_t v = 0; v < left.size(); ++v)
            if (left[v] && right[v]) return false;
        return true;
    };

    std::vector<Quartet> out;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k)
                for (int l = k + 1; l < n; ++l) {
                    if (disjoint(i, j, k, l))
                        out.emplace_back(names[i], names[j], names[k], names[l]);
                    else if (disjoint(i, k, j, l))
                        out.emplace_back(names[i], names[k], names[j], names[l]);
                    else
                        out.emplace_back(names[i], names[l], names[j], names[k]);
                }
    std::sort(out.begin(), out.end());
    return out;
}

DistinguishedEdge distinguished_edge(const PhyloTree& tree, const Quartet& q) {
    if (!displays_quartet(tree, q))
        return {DistinguishedEdge::Status::not_displayed, std::nullopt};
    const auto first = tree.path_edges(tree.leaf_vertex(q.a()), tree.leaf_vertex(q.c()));
    const auto second = tree.path_edges(tree.leaf_vertex(q.b()), tree.leaf_vertex(q.d()));
    std::vector<Edge> shared;
    std::set_intersection(first.begin(), first.end(), second.begin(), second.end(),
                          std::back_inserter(shared));
    if (shared.empty())
        throw std::logic_error("displayed quartet with disjoint cross paths");
    if (shared.size() > 1)
        return {DistinguishedEdge::Status::no_single_common_edge, std::nullopt};
    return {DistinguishedEdge::Status::found, shared.front()};
}

}  // namespace phyloq
