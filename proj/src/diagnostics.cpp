#include "phyloq/diagnostics.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace phyloq {

DigraphBuildResult build_cherry_digraph(const TreeCollection& p) {
    DigraphBuildResult result;
    CherryDigraph g;
    g.trees = p;

    // member order by canonical string, for deterministic target choice
    std::vector<int> by_canonical(p.size());
    for (int i = 0; i < p.size(); ++i) by_canonical[i] = i;
    std::sort(by_canonical.begin(), by_canonical.end(), [&](int a, int b) {
        return p[a].canonical_newick() < p[b].canonical_newick();
    });

    for (int i = 0; i < p.size(); ++i) {
        const auto all = cherries(p[i]);
        if (all.size() < 2)
            throw std::invalid_argument("build_cherry_digraph: member without two cherries");
        for (int k = 0; k < 2; ++k) {
            const Cherry& cherry = all[k];
            std::vector<int> targets;
            for (int j : by_canonical) {
                if (j == i) continue;
                const PhyloTree& other = p[j];
                if (!other.has_leaf(cherry.first) || !other.has_leaf(cherry.second)) continue;
                const auto other_cherries = cherries(other);
                if (std::find(other_cherries.begin(), other_cherries.end(), cherry) !=
                    other_cherries.end())
                    continue;
                targets.push_back(j);
            }
            if (targets.empty()) {
                result.failures.push_back({i, cherry});
            } else {
                g.arcs.push_back({i, targets.front(), cherry});
                g.alternatives.push_back(std::move(targets));
            }
        }
    }
    if (result.failures.empty()) result.digraph = std::move(g);
    return result;
}

namespace {

void validate(const CherryDigraph& g) {
    std::vector<int> outdeg(g.trees.size(), 0);
    for (const auto& arc : g.arcs) {
        if (arc.from < 0 || arc.from >= g.trees.size() || arc.to < 0 || arc.to >= g.trees.size())
            throw std::invalid_argument("cherry digraph: arc endpoint out of range");
        ++outdeg[arc.from];
        const PhyloTree& src = g.trees[arc.from];
        const PhyloTree& dst = g.trees[arc.to];
        const auto src_cherries = cherries(src);
        if (std::find(src_cherries.begin(), src_cherries.end(), arc.label) == src_cherries.end())
            throw std::invalid_argument("cherry digraph: arc label is not a cherry of its source");
        if (!dst.has_leaf(arc.label.first) || !dst.has_leaf(arc.label.second))
            throw std::invalid_argument("cherry digraph: target misses an arc label leaf");
        const auto dst_cherries = cherries(dst);
        if (std::find(dst_cherries.begin(), dst_cherries.end(), arc.label) != dst_cherries.end())
            throw std::invalid_argument("cherry digraph: arc label is a cherry of its target");
    }
    for (int d : outdeg)
        if (d != 2) throw std::invalid_argument("cherry digraph: every vertex needs outdegree 2");
    for (std::size_t i = 0; i < g.arcs.size(); ++i)
        for (std::size_t j = i + 1; j < g.arcs.size(); ++j)
            if (g.arcs[i].from == g.arcs[j].from &&
                (g.arcs[i].label.contains(g.arcs[j].label.first) ||
                 g.arcs[i].label.contains(g.arcs[j].label.second)))
                throw std::invalid_argument("cherry digraph: out-arc labels are not disjoint");
}

}  // namespace

std::vector<ColouredCycle> coloured_cycles(const CherryDigraph& g) {
    validate(g);
    std::set<std::string> taxa;
    for (const auto& arc : g.arcs) {
        taxa.insert(arc.label.first);
        taxa.insert(arc.label.second);
    }

    std::vector<ColouredCycle> out;
    const int n = g.trees.size();
    for (const auto& taxon : taxa) {
        // outdegree <= 1 in the taxon-restricted subdigraph (labels of the
        // two out-arcs are disjoint), so successor walking finds every cycle
        std::vector<int> succ_arc(n, -1);
        for (std::size_t a = 0; a < g.arcs.size(); ++a)
            if (g.arcs[a].label.contains(taxon)) succ_arc[g.arcs[a].from] = static_cast<int>(a);

        std::vector<char> state(n, 0);  // 0 fresh, 1 on stack, 2 done
        for (int start = 0; start < n; ++start) {
            if (state[start] != 0) continue;
            std::vector<int> stack;
            int v = start;
            while (v != -1 && state[v] == 0) {
                state[v] = 1;
                stack.push_back(v);
                v = succ_arc[v] == -1 ? -1 : g.arcs[succ_arc[v]].to;
            }
            if (v != -1 && state[v] == 1) {
                // walked into the current stack: the tail from v is a cycle
                auto cycle_start = std::find(stack.begin(), stack.end(), v);
                std::vector<int> cycle(cycle_start, stack.end());
                const auto smallest = std::min_element(cycle.begin(), cycle.end());
                std::rotate(cycle.begin(), smallest, cycle.end());
                ColouredCycle found;
                found.taxon = taxon;
                for (int u : cycle) found.arc_indices.push_back(succ_arc[u]);
                out.push_back(std::move(found));
            }
            for (int u : stack) state[u] = 2;
        }
    }
    return out;
}

int cyclomatic_number(int vertex_count, const std::vector<std::pair<int, int>>& edges) {
    std::vector<int> parent(vertex_count);
    for (int v = 0; v < vertex_count; ++v) parent[v] = v;
    auto find = [&](int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    int components = vertex_count;
    for (auto [u, v] : edges) {
        int ru = find(u), rv = find(v);
        if (ru != rv) {
            parent[ru] = rv;
            --components;
        }
    }
    return static_cast<int>(edges.size()) - vertex_count + components;
}

int cyclomatic_number(const CherryDigraph& g) {
    std::vector<std::pair<int, int>> edges;
    for (const auto& arc : g.arcs) edges.emplace_back(arc.from, arc.to);
    return cyclomatic_number(g.trees.size(), edges);
}

std::string to_dot(const CherryDigraph& g) {
    std::ostringstream out;
    out << "digraph cherries {\n";
    for (int i = 0; i < g.trees.size(); ++i)
        out << "  t" << i << " [label=\"" << g.trees[i].canonical_newick() << "\"];\n";
    for (const auto& arc : g.arcs)
        out << "  t" << arc.from << " -> t" << arc.to << " [label=\"{" << arc.label.first << ","
            << arc.label.second << "}\"];\n";
    out << "}\n";
    return out.str();
}

}  // namespace phyloq
