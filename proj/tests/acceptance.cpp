// Acceptance suite: one numbered check per invariant the library promises,
// each printed as a [PASS]/[FAIL] line. Run with a criterion number to run
// just that one, or with no arguments for all nine.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "phyloq/compat.hpp"
#include "phyloq/diagnostics.hpp"
#include "phyloq/excess.hpp"
#include "phyloq/generate.hpp"
#include "phyloq/quartet.hpp"
#include "phyloq/reconstruct.hpp"
#include "phyloq/tree.hpp"

using namespace phyloq;
using Clock = std::chrono::steady_clock;

namespace {

std::vector<std::string> letters(int n) {
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) out.push_back(std::string(1, 'a' + i));
    return out;
}

std::vector<std::string> draw_subset(std::vector<std::string> pool, int size,
                                     std::mt19937_64& rng) {
    for (int k = 0; k < size; ++k)
        std::swap(pool[k], pool[k + rng() % (pool.size() - k)]);
    pool.resize(size);
    return pool;
}

QuartetSet figure1() {
    return QuartetSet({Quartet("a", "d", "c", "f"), Quartet("a", "e", "b", "f"),
                       Quartet("b", "d", "c", "e")});
}

QuartetSet figure2() {
    return QuartetSet({Quartet("a", "b", "c", "d"), Quartet("a", "c", "e", "f"),
                       Quartet("a", "e", "b", "g"), Quartet("b", "d", "g", "h"),
                       Quartet("c", "f", "d", "h"), Quartet("e", "g", "f", "h")});
}

// random quartet drawn from an n-taxon universe
Quartet random_quartet(const std::vector<std::string>& universe, std::mt19937_64& rng) {
    auto four = draw_subset(universe, 4, rng);
    const int pairing = static_cast<int>(rng() % 3);
    if (pairing == 0) return Quartet(four[0], four[1], four[2], four[3]);
    if (pairing == 1) return Quartet(four[0], four[2], four[1], four[3]);
    return Quartet(four[0], four[3], four[1], four[2]);
}

// --- criteria -------------------------------------------------------------

// Every slim collection is compatible: 1000 rejection-sampled slim
// collections, |L(P)| <= 9, |P| <= 5, member sizes 4-6; the brute-force
// oracle must find a displaying tree for every single one.
bool criterion1(std::ostream& log) {
    std::mt19937_64 rng(0xC1);
    const auto universe = letters(9);
    int produced = 0;
    while (produced < 1000) {
        TreeCollection p;
        const int members = 1 + static_cast<int>(rng() % 5);
        for (int i = 0; i < members; ++i) {
            const int size = 4 + static_cast<int>(rng() % 3);
            p.add(random_binary_tree(draw_subset(universe, size, rng), rng()));
        }
        if (!is_slim(p).slim) continue;
        ++produced;
        if (!is_compatible(p, OracleMode::existence).compatible) {
            log << "slim but incompatible collection found:\n";
            for (const auto& t : p) log << "  " << t.canonical_newick() << "\n";
            return false;
        }
    }
    log << produced << " slim collections, all compatible";
    return true;
}

// decide_and_reconstruct agrees with the brute-force oracle on 500 random
// excess-free quartet sets drawn from the quartets of a random tree.
bool criterion2(std::ostream& log) {
    std::mt19937_64 rng(0xC2);
    int cases = 0, definitive = 0;
    while (cases < 500) {
        const int n = 5 + static_cast<int>(rng() % 4);
        auto t = random_binary_tree(letters(n), rng());
        auto all = quartets_of(t);
        std::shuffle(all.begin(), all.end(), rng);
        QuartetSet q;
        for (int i = 0; i < n - 3; ++i) q.add(all[i]);
        if (q.all_taxa() != t.leaves()) continue;  // exc(q) must be 0
        ++cases;
        const auto trace = decide_and_reconstruct(q);
        const auto verdict = is_compatible(q.to_collection(), OracleMode::uniqueness);
        if (trace.definitive() != verdict.definitive) {
            log << "verdict mismatch on:";
            for (const auto& quartet : q) log << "  " << quartet.to_line();
            return false;
        }
        if (trace.definitive()) {
            ++definitive;
            if (!is_isomorphic(*trace.tree, *verdict.witness)) {
                log << "reconstructed tree differs from the oracle witness";
                return false;
            }
        }
    }
    log << cases << " cases agree with the oracle (" << definitive << " definitive)";
    return true;
}

// Figure 1 golden: {ad|cf, ae|bf, bd|ce} has excess 0, is slim, exactly two
// of the 105 six-leaf trees display it, and the decision is NOT_DEFINITIVE.
bool criterion3(std::ostream& log) {
    auto q = figure1();
    if (excess(q) != 0) {
        log << "excess is " << excess(q) << ", want 0";
        return false;
    }
    if (!is_slim(q).slim) {
        log << "set should be slim";
        return false;
    }
    const auto witnesses = find_displaying_trees(q.to_collection());
    if (witnesses.size() < 2) {
        log << "want >= 2 displaying trees, got " << witnesses.size();
        return false;
    }
    if (witnesses.size() != 2) {  // regression value computed by this oracle
        log << "displaying-tree count changed: " << witnesses.size() << " != 2";
        return false;
    }
    const auto trace = decide_and_reconstruct(q);
    if (trace.definitive() ||
        *trace.reason != NotDefinitiveReason::no_maximal_hierarchy) {
        log << "expected NOT_DEFINITIVE(no maximal hierarchy)";
        return false;
    }
    log << "exc 0, slim, exactly 2 displaying trees, NOT_DEFINITIVE";
    return true;
}

// Figure 2 golden: the full 12-arc digraph, excess -1, not slim, the
// a-coloured directed cycle q1 -> q3 -> q2 -> q1, cyclomatic number 7.
bool criterion4(std::ostream& log) {
    auto q = figure2();
    if (excess(q) != -1) {
        log << "excess is " << excess(q) << ", want -1";
        return false;
    }
    auto slim = is_slim(q);
    if (slim.slim || !slim.witness || slim.witness->size() != 6) {
        log << "want not-slim with the whole set as witness";
        return false;
    }
    auto built = build_cherry_digraph(q.to_collection());
    if (!built.ok()) {
        log << "digraph construction failed";
        return false;
    }
    const std::vector<DigraphArc> expected{
        {0, 2, Cherry("a", "b")}, {0, 4, Cherry("c", "d")}, {1, 0, Cherry("a", "c")},
        {1, 5, Cherry("e", "f")}, {2, 1, Cherry("a", "e")}, {2, 3, Cherry("b", "g")},
        {3, 0, Cherry("b", "d")}, {3, 5, Cherry("g", "h")}, {4, 1, Cherry("c", "f")},
        {4, 3, Cherry("d", "h")}, {5, 2, Cherry("e", "g")}, {5, 4, Cherry("f", "h")}};
    if (built.digraph->arcs != expected) {
        log << "arc list differs from the golden 12 arcs";
        return false;
    }
    bool a_cycle = false;
    for (const auto& c : coloured_cycles(*built.digraph)) {
        if (c.taxon != "a") continue;
        std::vector<int> vertices;
        for (int arc : c.arc_indices) vertices.push_back(built.digraph->arcs[arc].from);
        if (vertices == std::vector<int>{0, 2, 1}) a_cycle = true;
    }
    if (!a_cycle) {
        log << "a-coloured cycle q1->q3->q2->q1 not reported";
        return false;
    }
    if (cyclomatic_number(*built.digraph) != 7) {
        log << "cyclomatic number " << cyclomatic_number(*built.digraph) << ", want 7";
        return false;
    }
    log << "12 golden arcs, exc -1, not slim, a-cycle found, cyclomatic 7";
    return true;
}

// Lower bound on defining sets: for n in {5,6,7}, no sampled quartet set of
// size < n-3 is displayed by exactly one tree on the n-taxon universe.
bool criterion5(std::ostream& log) {
    std::mt19937_64 rng(0xC5);
    for (int n : {5, 6, 7}) {
        const auto universe = letters(n);
        for (int trial = 0; trial < 200; ++trial) {
            const int size = 1 + static_cast<int>(rng() % (n - 4 > 0 ? n - 4 : 1));
            QuartetSet q;
            while (q.size() < size) q.add(random_quartet(universe, rng));
            const auto verdict =
                is_compatible(q.to_collection(), universe, OracleMode::uniqueness);
            if (verdict.definitive) {
                log << "a set of " << size << " quartets on " << n
                    << " taxa has a unique displaying tree:";
                for (const auto& quartet : q) log << "  " << quartet.to_line();
                return false;
            }
        }
    }
    log << "600 undersized sets, none with a unique displaying tree";
    return true;
}

// Minimum definitive sets: 200 oracle-certified definitive sets of size n-3
// (n <= 7) are slim, every excess-free subset is itself oracle-definitive,
// and quartets distinguish pairwise distinct interior edges.
bool criterion6(std::ostream& log) {
    std::mt19937_64 rng(0xC6);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 5 + static_cast<int>(rng() % 3);
        auto t = random_binary_tree(letters(n), rng());
        auto q = sample_defining_set(t, rng());
        const auto verdict = is_compatible(q.to_collection(), OracleMode::uniqueness);
        if (!verdict.definitive) {
            log << "sampled set not oracle-definitive";
            return false;
        }
        if (!is_slim(q).slim) {
            log << "oracle-definitive minimum set is not slim";
            return false;
        }
        for (const auto& sub : excess_free_subsets(q)) {
            const auto sub_verdict = is_compatible(sub.to_collection(), OracleMode::uniqueness);
            if (!sub_verdict.definitive) {
                log << "excess-free subset of a definitive set is not definitive";
                return false;
            }
        }
        std::set<Edge> hit;
        for (const auto& quartet : q) {
            auto r = distinguished_edge(t, quartet);
            if (!r.found()) {
                log << "member quartet distinguishes no edge";
                return false;
            }
            hit.insert(*r.edge);
        }
        if (static_cast<int>(hit.size()) != n - 3) {
            log << "quartet-to-edge map is not a bijection";
            return false;
        }
    }
    log << "200 definitive minimum sets pass slimness, subset and bijection checks";
    return true;
}

// Every oracle-certified definitive excess-free set carries a maximal
// hierarchy inside Exc(Q), and every excess-free cluster extends to one.
bool criterion7(std::ostream& log) {
    std::mt19937_64 rng(0xC7);
    int checked = 0, clusters = 0;
    for (int trial = 0; trial < 120; ++trial) {
        const int n = 5 + static_cast<int>(rng() % 4);
        auto t = random_binary_tree(letters(n), rng());
        auto q = sample_defining_set(t, rng());
        if (!is_compatible(q.to_collection(), OracleMode::uniqueness).definitive) {
            log << "sampled set not oracle-definitive";
            return false;
        }
        ++checked;
        if (!find_maximal_hierarchy(q)) {
            log << "definitive set without a maximal hierarchy in Exc(Q)";
            return false;
        }
        for (std::uint64_t mask : excess_free_masks(q)) {
            auto h = extend_to_hierarchy(q, q.subset(mask));
            if (!h || !h->contains(mask) || !is_maximal_hierarchy(q, h->clusters())) {
                log << "cluster failed to extend to a maximal hierarchy";
                return false;
            }
            for (const auto& cluster : h->clusters())
                if (excess(cluster) != 0) {
                    log << "extended hierarchy leaves Exc(Q)";
                    return false;
                }
            ++clusters;
        }
    }
    log << checked << " definitive sets, " << clusters << " clusters extended";
    return true;
}

// Round trip: decide_and_reconstruct(sample_defining_set(T)) rebuilds T for
// 300 random trees with 6..12 leaves; oracle-checked through n = 8,
// certificate-checked beyond.
bool criterion8(std::ostream& log) {
    std::mt19937_64 rng(0xC8);
    int oracle_checked = 0, certificate_checked = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 6 + static_cast<int>(rng() % 7);
        std::vector<std::string> taxa;
        for (int i = 0; i < n; ++i) taxa.push_back("t" + std::to_string(i + 10));
        auto t = random_binary_tree(taxa, rng());
        auto q = sample_defining_set(t, rng());
        const auto trace = decide_and_reconstruct(q);
        if (!trace.definitive() || !is_isomorphic(*trace.tree, t)) {
            log << "round trip failed at n=" << n;
            return false;
        }
        if (n <= 8) {
            const auto verdict = is_compatible(q.to_collection(), OracleMode::uniqueness);
            if (!verdict.definitive || !is_isomorphic(*verdict.witness, t)) {
                log << "oracle disagrees at n=" << n;
                return false;
            }
            ++oracle_checked;
        } else {
            bool shows_all = true;
            for (const auto& quartet : q)
                shows_all = shows_all && displays_quartet(*trace.tree, quartet);
            if (!shows_all || !check_condition_i(*trace.tree, q).first ||
                !trace.hierarchy ||
                !is_maximal_hierarchy(q, trace.hierarchy->clusters())) {
                log << "certificate incomplete at n=" << n;
                return false;
            }
            ++certificate_checked;
        }
    }
    log << "300 round trips (" << oracle_checked << " oracle-verified, "
        << certificate_checked << " certificate-verified)";
    return true;
}

// Performance floor: full 8-leaf enumeration with a 5-quartet display test
// under 10 s; two-tree decisions on 100-leaf trees under 100 ms.
bool criterion9(std::ostream& log) {
    const auto start_enum = Clock::now();
    std::mt19937_64 rng(0xC9);
    auto t8 = random_binary_tree(letters(8), rng());
    auto all8 = quartets_of(t8);
    std::shuffle(all8.begin(), all8.end(), rng);
    std::vector<Quartet> probe(all8.begin(), all8.begin() + 5);
    std::uint64_t seen = 0, displaying = 0;
    enumerate_binary_trees(letters(8), [&](const PhyloTree& t) {
        ++seen;
        bool shows_all = true;
        for (const auto& q : probe) shows_all = shows_all && displays_quartet(t, q);
        if (shows_all) ++displaying;
        return true;
    });
    const auto enum_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start_enum)
            .count();
    if (seen != 10395) {
        log << "expected 10395 trees, saw " << seen;
        return false;
    }
    if (displaying == 0) {
        log << "the displayed 5-quartet set should have a witness";
        return false;
    }
    if (enum_ms > 10000) {
        log << "enumeration took " << enum_ms << " ms (> 10 s)";
        return false;
    }

    // a compatible 100-leaf pair sharing 50 leaves: the second tree is the
    // first with half its leaves renamed, so both restrictions agree and the
    // full subdivision analysis runs
    std::vector<std::string> taxa1;
    for (int i = 0; i < 100; ++i) taxa1.push_back("t" + std::to_string(i + 100));
    auto big1 = random_binary_tree(taxa1, 1);
    std::vector<std::vector<int>> adj2;
    std::vector<std::string> labels2;
    for (int v = 0; v < big1.vertex_count(); ++v) {
        adj2.push_back(big1.neighbors(v));
        std::string label = big1.label(v);
        if (!label.empty() && label < "t150") label = "u" + label.substr(1);
        labels2.push_back(label);
    }
    PhyloTree big2(std::move(adj2), std::move(labels2));
    const auto start_two = Clock::now();
    const bool compatible = two_tree_compatible(big1, big2);
    const bool definitive = two_tree_definitive(big1, big2);
    const auto two_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start_two)
            .count();
    if (!compatible || definitive) {
        log << "pair built to be compatible and non-definitive";
        return false;
    }
    if (two_ms > 100) {
        log << "two-tree decisions took " << two_ms << " ms (> 100 ms)";
        return false;
    }
    log << "enumeration+display " << enum_ms << " ms, two-tree " << two_ms << " ms";
    return true;
}

struct Criterion {
    int number;
    const char* name;
    bool (*check)(std::ostream&);
};

const Criterion kCriteria[] = {
    {1, "slim collections are compatible", criterion1},
    {2, "decision procedure matches the oracle", criterion2},
    {3, "figure 1 golden instance", criterion3},
    {4, "figure 2 golden digraph", criterion4},
    {5, "defining sets need at least n-3 quartets", criterion5},
    {6, "minimum definitive sets: slim, hereditary, bijective", criterion6},
    {7, "definitive sets carry extendable maximal hierarchies", criterion7},
    {8, "sample/reconstruct round trip", criterion8},
    {9, "performance floor", criterion9},
};

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    if (argc > 1) only = std::atoi(argv[1]);
    bool all_ok = true;
    for (const auto& criterion : kCriteria) {
        if (only != 0 && criterion.number != only) continue;
        std::ostringstream detail;
        bool ok = false;
        const auto start = Clock::now();
        try {
            ok = criterion.check(detail);
        } catch (const std::exception& e) {
            detail << "exception: " << e.what();
        }
        const auto ms =
            std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start)
                .count();
        std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << criterion.number << ": "
                  << criterion.name << " — " << detail.str() << " (" << ms << " ms)\n";
        all_ok = all_ok && ok;
    }
    return all_ok ? 0 : 1;
}
