#include "phyloq/generate.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "phyloq/quartet.hpp"

namespace phyloq {

std::uint64_t binary_tree_count(int n) {
    if (n < 3) throw std::invalid_argument("binary_tree_count needs n >= 3");
    std::uint64_t count = 1;
    for (int k = 3; k <= n - 1; ++k) count *= 2 * k - 3;
    return count;
}

namespace {

std::vector<std::string> checked_taxa(std::vector<std::string> taxa, int min_count) {
    std::sort(taxa.begin(), taxa.end());
    if (std::adjacent_find(taxa.begin(), taxa.end()) != taxa.end())
        throw std::invalid_argument("duplicate taxon");
    for (const auto& t : taxa)
        if (!is_valid_taxon(t)) throw std::invalid_argument("invalid taxon label '" + t + "'");
    if (static_cast<int>(taxa.size()) < min_count)
        throw std::invalid_argument("need at least " + std::to_string(min_count) + " taxa");
    return taxa;
}

// A member translated to leaf indices of the sorted global taxa list, checked
// once its last leaf (the largest index) has been inserted.
struct MemberCheck {
    int completion_size;                        // prefix size that completes it
    std::vector<std::array<int, 4>> quartets;   // {a,b,c,d} meaning ab|cd
};

// Leaf-insertion enumerator. Leaves get ids 0..n-1 in sorted label order and
// interior vertices ids n, n+1, ... in creation order, so a partial tree on
// the first s leaves uses ids {0..s-1} and {n..n+s-3}.
struct Walker {
    int n;
    const std::vector<std::string>& names;
    std::vector<std::pair<int, int>> edge_list;
    std::vector<std::vector<MemberCheck>> checks_at;  // indexed by prefix size
    const std::function<bool(const PhyloTree&)>& visit;
    bool stopped = false;

    std::vector<std::vector<int>> adj;  // scratch adjacency
    std::vector<int> bfs_parent;
    std::vector<int> bfs_queue;
    std::vector<int> stamp;
    int tick = 0;

    Walker(int n_, const std::vector<std::string>& names_,
           const std::function<bool(const PhyloTree&)>& visit_)
        : n(n_), names(names_), visit(visit_) {
        checks_at.resize(n + 1);
        adj.resize(2 * n);
        bfs_parent.resize(2 * n);
        bfs_queue.reserve(2 * n);
        stamp.assign(2 * n, 0);
    }

    void build_adj() {
        for (auto& row : adj) row.clear();
        for (auto [u, v] : edge_list) {
            adj[u].push_back(v);
            adj[v].push_back(u);
        }
    }

    void bfs(int from, int to) {
        std::fill(bfs_parent.begin(), bfs_parent.end(), -2);
        bfs_queue.clear();
        bfs_queue.push_back(from);
        bfs_parent[from] = -1;
        for (std::size_t head = 0; head < bfs_queue.size(); ++head) {
            int v = bfs_queue[head];
            if (v == to) return;
            for (int w : adj[v])
                if (bfs_parent[w] == -2) {
                    bfs_parent[w] = v;
                    bfs_queue.push_back(w);
                }
        }
    }

    // ab|cd is displayed iff the a-b and c-d paths are vertex-disjoint
    bool quartet_displayed(const std::array<int, 4>& q) {
        ++tick;
        bfs(q[0], q[1]);
        for (int v = q[1]; v != -1; v = bfs_parent[v]) stamp[v] = tick;
        bfs(q[2], q[3]);
        for (int v = q[3]; v != -1; v = bfs_parent[v])
            if (stamp[v] == tick) return false;
        return true;
    }

    bool displays_all(int size) {
        if (checks_at[size].empty()) return true;
        build_adj();
        for (const auto& member : checks_at[size])
            for (const auto& q : member.quartets)
                if (!quartet_displayed(q)) return false;
        return true;
    }

    PhyloTree materialize() const {
        const int verts = n + n - 2;
        std::vector<std::vector<int>> full_adj(verts);
        std::vector<std::string> labels(verts);
        for (auto [u, v] : edge_list) {
            full_adj[u].push_back(v);
            full_adj[v].push_back(u);
        }
        for (int i = 0; i < n; ++i) labels[i] = names[i];
        return PhyloTree(std::move(full_adj), std::move(labels));
    }

    void recurse(int size) {
        if (stopped) return;
        if (size == n) {
            if (!visit(materialize())) stopped = true;
            return;
        }
        const int edge_count = static_cast<int>(edge_list.size());
        const int hub = n + size - 2;  // interior vertex created by this insertion
        for (int i = 0; i < edge_count && !stopped; ++i) {
            auto [u, v] = edge_list[i];
            edge_list[i] = {u, hub};
            edge_list.push_back({hub, v});
            edge_list.push_back({hub, size});
            if (displays_all(size + 1)) recurse(size + 1);
            edge_list.pop_back();
            edge_list.pop_back();
            edge_list[i] = {u, v};
        }
    }

    void run() {
        edge_list = {{0, n}, {1, n}, {2, n}};
        if (n == 3) {
            if (displays_all(3)) visit(materialize());
            return;
        }
        recurse(3);
    }
};

}  // namespace

void enumerate_displaying(const std::vector<std::string>& taxa,
                          const std::vector<const PhyloTree*>& required,
                          const std::function<bool(const PhyloTree&)>& visit,
                          int max_leaves) {
    auto names = checked_taxa(taxa, 3);
    const int n = static_cast<int>(names.size());
    if (n > max_leaves)
        throw cap_error("enumeration over " + std::to_string(n) + " leaves exceeds the cap of " +
                        std::to_string(max_leaves) + " (raise it explicitly to proceed)");

    Walker walker(n, names, visit);
    auto leaf_id = [&](const std::string& name) {
        return static_cast<int>(std::lower_bound(names.begin(), names.end(), name) - names.begin());
    };
    for (const PhyloTree* member : required) {
        int completion = 0;
        for (const auto& leaf : member->leaves()) {
            if (!std::binary_search(names.begin(), names.end(), leaf))
                throw std::invalid_argument("member leaf '" + leaf + "' missing from taxa set");
            completion = std::max(completion, leaf_id(leaf) + 1);
        }
        completion = std::max(completion, 3);
        MemberCheck check;
        check.completion_size = completion;
        if (member->leaf_count() >= 4) {
            for (const Quartet& q : quartets_of(*member))
                check.quartets.push_back({leaf_id(q.a()), leaf_id(q.b()),
                                          leaf_id(q.c()), leaf_id(q.d())});
        }
        walker.checks_at[completion].push_back(std::move(check));
    }
    walker.run();
}

void enumerate_binary_trees(const std::vector<std::string>& taxa,
                            const std::function<bool(const PhyloTree&)>& visit,
                            int max_leaves) {
    enumerate_displaying(taxa, {}, visit, max_leaves);
}

std::vector<PhyloTree> all_binary_trees(const std::vector<std::string>& taxa, int max_leaves) {
    std::vector<PhyloTree> out;
    enumerate_binary_trees(taxa, [&](const PhyloTree& t) {
        out.push_back(t);
        return true;
    }, max_leaves);
    return out;
}

PhyloTree random_binary_tree(const std::vector<std::string>& taxa, std::uint64_t seed) {
    auto names = checked_taxa(taxa, 3);
    const int n = static_cast<int>(names.size());
    std::mt19937_64 rng(mix_seed(seed));

    std::vector<std::pair<int, int>> edge_list{{0, n}, {1, n}, {2, n}};
    for (int size = 3; size < n; ++size) {
        const int hub = n + size - 2;
        auto pick = static_cast<std::size_t>(rng() % edge_list.size());
        auto [u, v] = edge_list[pick];
        edge_list[pick] = {u, hub};
        edge_list.push_back({hub, v});
        edge_list.push_back({hub, size});
    }

    const int verts = 2 * n - 2;
    std::vector<std::vector<int>> adj(verts);
    std::vector<std::string> labels(verts);
    for (auto [u, v] : edge_list) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    for (int i = 0; i < n; ++i) labels[i] = names[i];
    return PhyloTree(std::move(adj), std::move(labels));
}

}  // namespace phyloq
