#include "phyloq/tree.hpp"

#include <algorithm>
#include <cctype>
#include <queue>
#include <set>
#include <stdexcept>

namespace phyloq {

bool is_valid_taxon(const std::string& label) {
    if (label.empty()) return false;
    for (char c : label) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.' && c != '-')
            return false;
    }
    return true;
}

Cherry::Cherry(std::string a, std::string b) {
    if (a == b) throw std::invalid_argument("cherry needs two distinct leaves");
    if (b < a) std::swap(a, b);
    first = std::move(a);
    second = std::move(b);
}

PhyloTree::PhyloTree(std::vector<std::vector<int>> adjacency, std::vector<std::string> labels)
    : adj_(std::move(adjacency)), labels_(std::move(labels)) {
    const int n = static_cast<int>(adj_.size());
    if (labels_.size() != adj_.size())
        throw std::invalid_argument("adjacency/label size mismatch");
    if (n < 2) throw std::invalid_argument("a phylogenetic tree needs at least 2 leaves");

    int edge_twice = 0;
    for (int v = 0; v < n; ++v) {
        for (int w : adj_[v]) {
            if (w < 0 || w >= n || w == v)
                throw std::invalid_argument("bad adjacency entry");
            if (std::count(adj_[w].begin(), adj_[w].end(), v) != 1)
                throw std::invalid_argument("adjacency not symmetric");
        }
        std::set<int> uniq(adj_[v].begin(), adj_[v].end());
        if (uniq.size() != adj_[v].size())
            throw std::invalid_argument("duplicate adjacency entry");
        edge_twice += degree(v);
    }
    if (edge_twice != 2 * (n - 1))
        throw std::invalid_argument("vertex/edge count is not that of a tree");

    // connectivity (acyclicity then follows from the edge count)
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : adj_[v])
            if (!seen[w]) {
                seen[w] = 1;
                ++reached;
                stack.push_back(w);
            }
    }
    if (reached != n) throw std::invalid_argument("graph is not connected");

    binary_ = true;
    for (int v = 0; v < n; ++v) {
        const int d = degree(v);
        const bool labelled = !labels_[v].empty();
        if (d == 2) throw std::invalid_argument("degree-2 vertex is not allowed");
        if (d == 1 && !labelled) throw std::invalid_argument("unlabelled leaf");
        if (d > 1 && labelled) throw std::invalid_argument("label on interior vertex");
        if (labelled && !is_valid_taxon(labels_[v]))
            throw std::invalid_argument("invalid taxon label '" + labels_[v] + "'");
        if (d > 1 && d != 3) binary_ = false;
        if (labelled) leaf_index_.emplace_back(labels_[v], v);
    }
    std::sort(leaf_index_.begin(), leaf_index_.end());
    for (std::size_t i = 1; i < leaf_index_.size(); ++i)
        if (leaf_index_[i].first == leaf_index_[i - 1].first)
            throw std::invalid_argument("duplicate leaf label '" + leaf_index_[i].first + "'");
    leaves_.reserve(leaf_index_.size());
    for (const auto& [name, v] : leaf_index_) leaves_.push_back(name);

    canonical_ = build_canonical();
}

int PhyloTree::leaf_vertex(const std::string& taxon) const {
    auto it = std::lower_bound(leaf_index_.begin(), leaf_index_.end(),
                               std::make_pair(taxon, -1));
    if (it != leaf_index_.end() && it->first == taxon) return it->second;
    return -1;
}

bool PhyloTree::adjacent(int u, int v) const {
    return std::find(adj_[u].begin(), adj_[u].end(), v) != adj_[u].end();
}

std::vector<Edge> PhyloTree::edges() const {
    std::vector<Edge> out;
    out.reserve(vertex_count() - 1);
    for (int v = 0; v < vertex_count(); ++v)
        for (int w : adj_[v])
            if (v < w) out.emplace_back(v, w);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Edge> PhyloTree::interior_edges() const {
    std::vector<Edge> out;
    for (const Edge& e : edges())
        if (is_interior(e.u) && is_interior(e.v)) out.push_back(e);
    return out;
}

int PhyloTree::interior_edge_count() const {
    return static_cast<int>(interior_edges().size());
}

std::vector<int> PhyloTree::path_vertices(int from, int to) const {
    std::vector<int> parent(vertex_count(), -2);
    parent[from] = -1;
    std::queue<int> q;
    q.push(from);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        if (v == to) break;
        for (int w : adj_[v])
            if (parent[w] == -2) {
                parent[w] = v;
                q.push(w);
            }
    }
    std::vector<int> path;
    for (int v = to; v != -1; v = parent[v]) path.push_back(v);
    std::reverse(path.begin(), path.end());
    return path;
}

std::vector<Edge> PhyloTree::path_edges(int from, int to) const {
    const auto verts = path_vertices(from, to);
    std::vector<Edge> out;
    for (std::size_t i = 1; i < verts.size(); ++i) out.emplace_back(verts[i - 1], verts[i]);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> PhyloTree::split_side(int keep, int drop) const {
    std::vector<std::string> out;
    std::vector<int> stack{keep};
    std::vector<char> seen(vertex_count(), 0);
    seen[keep] = 1;
    seen[drop] = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (is_leaf(v)) out.push_back(labels_[v]);
        for (int w : adj_[v])
            if (!seen[w]) {
                seen[w] = 1;
                stack.push_back(w);
            }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::pair<std::string, std::string> PhyloTree::serialize_rooted(int v, int parent) const {
    if (is_leaf(v)) return {labels_[v], labels_[v]};
    std::vector<std::pair<std::string, std::string>> kids;
    for (int w : adj_[v])
        if (w != parent) kids.push_back(serialize_rooted(w, v));
    std::sort(kids.begin(), kids.end());
    std::string text = "(";
    for (std::size_t i = 0; i < kids.size(); ++i) {
        if (i) text += ',';
        text += kids[i].second;
    }
    text += ')';
    return {kids.front().first, text};
}

std::string PhyloTree::build_canonical() const {
    if (vertex_count() == 2) return "(" + leaves_[0] + "," + leaves_[1] + ");";
    const int av = leaf_vertex(leaves_.front());
    const int hub = adj_[av].front();

    // interior neighbours of the hub; none means the tree is a star
    int root_edge_end = -1;
    std::string best;
    for (int w : adj_[hub]) {
        if (is_leaf(w)) continue;
        std::string far_min = split_side(w, hub).front();
        if (root_edge_end == -1 || far_min < best) {
            root_edge_end = w;
            best = far_min;
        }
    }
    if (root_edge_end == -1) return serialize_rooted(hub, -1).second + ";";

    auto near = serialize_rooted(hub, root_edge_end);
    auto far = serialize_rooted(root_edge_end, hub);
    // the globally smallest leaf sits on the hub side, so it comes first
    return "(" + near.second + "," + far.second + ");";
}

std::string write_newick(const PhyloTree& tree) { return tree.canonical_newick(); }

bool is_isomorphic(const PhyloTree& a, const PhyloTree& b) {
    return a.canonical_newick() == b.canonical_newick();
}

namespace {

// recursive-descent Newick reader
struct NewickParser {
    const std::string& text;
    std::size_t pos = 0;
    std::vector<std::vector<int>> adj;
    std::vector<std::string> labels;

    explicit NewickParser(const std::string& t) : text(t) {}

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    char peek() {
        skip_ws();
        if (pos >= text.size()) throw parse_error("unexpected end of Newick text");
        return text[pos];
    }

    int new_vertex(std::string label) {
        adj.emplace_back();
        labels.push_back(std::move(label));
        return static_cast<int>(adj.size()) - 1;
    }

    void connect(int a, int b) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }

    std::string read_label() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size()) {
            char c = text[pos];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-')
                ++pos;
            else
                break;
        }
        if (pos == start) throw parse_error("expected a leaf label at position " + std::to_string(pos));
        return text.substr(start, pos - start);
    }

    void drop_branch_length() {
        skip_ws();
        if (pos < text.size() && text[pos] == ':') {
            ++pos;
            skip_ws();
            std::size_t start = pos;
            while (pos < text.size() &&
                   (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.' ||
                    text[pos] == '-' || text[pos] == '+' || text[pos] == 'e' || text[pos] == 'E'))
                ++pos;
            if (pos == start) throw parse_error("':' without a branch length");
        }
    }

    // returns the vertex for this subtree
    int parse_subtree() {
        if (peek() == '(') {
            ++pos;
            int v = new_vertex("");
            while (true) {
                int child = parse_subtree();
                connect(v, child);
                char c = peek();
                if (c == ',') {
                    ++pos;
                    continue;
                }
                if (c == ')') {
                    ++pos;
                    break;
                }
                throw parse_error("expected ',' or ')' at position " + std::to_string(pos));
            }
            skip_ws();
            if (pos < text.size() &&
                (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
                throw parse_error("labels on interior vertices are not supported");
            drop_branch_length();
            return v;
        }
        int v = new_vertex(read_label());
        drop_branch_length();
        return v;
    }

    PhyloTree parse() {
        int root = parse_subtree();
        if (peek() != ';') throw parse_error("Newick expression must end with ';'");
        ++pos;
        skip_ws();
        if (pos != text.size()) throw parse_error("trailing characters after ';'");

        if (adj[root].size() == 2) {
            // erase the degree-2 root written in the text
            int a = adj[root][0], b = adj[root][1];
            adj[root].clear();
            std::erase(adj[a], root);
            std::erase(adj[b], root);
            connect(a, b);
            // compact: move the last vertex into the root slot
            int last = static_cast<int>(adj.size()) - 1;
            if (root != last) {
                adj[root] = std::move(adj[last]);
                labels[root] = std::move(labels[last]);
                for (int w : adj[root]) std::replace(adj[w].begin(), adj[w].end(), last, root);
            }
            adj.pop_back();
            labels.pop_back();
        } else if (adj[root].size() == 1 && labels[root].empty()) {
            throw parse_error("redundant parentheses around a single subtree");
        }
        return PhyloTree(std::move(adj), std::move(labels));
    }
};

}  // namespace

PhyloTree parse_newick(const std::string& text) {
    NewickParser parser(text);
    return parser.parse();
}

Restriction restrict_mapped(const PhyloTree& tree, std::vector<std::string> keep) {
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    if (keep.size() < 2) throw std::invalid_argument("restriction needs at least 2 leaves");

    const int n = tree.vertex_count();
    std::vector<char> kept(n, 0);
    for (const auto& name : keep) {
        int v = tree.leaf_vertex(name);
        if (v < 0) throw std::invalid_argument("leaf '" + name + "' is not in the tree");
        kept[v] = 1;
    }

    // prune to the Steiner tree of the kept leaves
    std::vector<int> deg(n);
    std::vector<char> alive(n, 1);
    std::vector<int> stack;
    for (int v = 0; v < n; ++v) {
        deg[v] = tree.degree(v);
        if (deg[v] == 1 && !kept[v]) stack.push_back(v);
    }
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        alive[v] = 0;
        for (int w : tree.neighbors(v))
            if (alive[w] && --deg[w] == 1 && !kept[w]) stack.push_back(w);
    }

    // vertices that survive suppression: kept leaves and branch points
    std::vector<int> new_id(n, -1);
    std::vector<int> source;
    std::vector<std::string> labels;
    for (int v = 0; v < n; ++v) {
        if (!alive[v]) continue;
        if (deg[v] == 2) continue;
        new_id[v] = static_cast<int>(source.size());
        source.push_back(v);
        labels.push_back(kept[v] ? tree.label(v) : "");
    }

    std::vector<std::vector<int>> adj(source.size());
    for (int v : source) {
        for (int w : tree.neighbors(v)) {
            if (!alive[w]) continue;
            // walk the chain of suppressed vertices starting towards w
            int prev = v, cur = w;
            while (alive[cur] && deg[cur] == 2) {
                for (int x : tree.neighbors(cur))
                    if (alive[x] && x != prev) {
                        prev = cur;
                        cur = x;
                        break;
                    }
            }
            if (v < cur) {
                adj[new_id[v]].push_back(new_id[cur]);
                adj[new_id[cur]].push_back(new_id[v]);
            }
        }
    }
    return Restriction{PhyloTree(std::move(adj), std::move(labels)), std::move(source)};
}

PhyloTree restrict_to(const PhyloTree& tree, const std::vector<std::string>& keep) {
    return restrict_mapped(tree, keep).tree;
}

bool displays(const PhyloTree& tree, const PhyloTree& smaller) {
    if (!smaller.is_binary()) throw std::invalid_argument("displays: the displayed tree must be binary");
    for (const auto& name : smaller.leaves())
        if (!tree.has_leaf(name))
            throw std::invalid_argument("displays: leaf '" + name + "' missing from the host tree");
    if (smaller.leaf_count() == tree.leaf_count() && &tree == &smaller) return true;
    return restrict_to(tree, smaller.leaves()).canonical_newick() == smaller.canonical_newick();
}

std::vector<Cherry> cherries(const PhyloTree& tree) {
    if (!tree.is_binary()) throw std::invalid_argument("cherries: tree must be binary");
    std::vector<Cherry> out;
    for (int v = 0; v < tree.vertex_count(); ++v) {
        if (!tree.is_interior(v) || tree.degree(v) != 3) continue;
        std::vector<std::string> around;
        for (int w : tree.neighbors(v))
            if (tree.is_leaf(w)) around.push_back(tree.label(w));
        if (around.size() == 2) out.emplace_back(around[0], around[1]);
        if (around.size() == 3) {
            // the 3-leaf star: every pair of its leaves is a cherry
            out.emplace_back(around[0], around[1]);
            out.emplace_back(around[0], around[2]);
            out.emplace_back(around[1], around[2]);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace phyloq
