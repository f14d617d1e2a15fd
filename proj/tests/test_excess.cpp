#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "phyloq/excess.hpp"
#include "phyloq/generate.hpp"
#include "phyloq/reconstruct.hpp"

using namespace phyloq;

namespace {

QuartetSet figure1() {
    return QuartetSet({Quartet("a", "d", "c", "f"), Quartet("a", "e", "b", "f"),
                       Quartet("b", "d", "c", "e")});
}

QuartetSet figure2() {
    return QuartetSet({Quartet("a", "b", "c", "d"), Quartet("a", "c", "e", "f"),
                       Quartet("a", "e", "b", "g"), Quartet("b", "d", "g", "h"),
                       Quartet("c", "f", "d", "h"), Quartet("e", "g", "f", "h")});
}

QuartetSet chain2() {
    return QuartetSet({Quartet("a", "b", "c", "d"), Quartet("b", "c", "d", "e")});
}

}  // namespace

TEST_CASE("excess arithmetic") {
    CHECK(excess(figure1()) == 0);   // 6 - 3 - 3
    CHECK(excess(figure2()) == -1);  // 8 - 3 - 6
    CHECK(excess(chain2()) == 0);    // 5 - 3 - 2

    SUBCASE("any singleton has excess 0") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            TreeCollection p;
            p.add(random_binary_tree({"a", "b", "c", "d", "e", "f", "g"}, seed));
            CHECK(excess(p) == 0);
        }
    }
    SUBCASE("empty collection is an error") {
        CHECK_THROWS_AS(excess(TreeCollection{}), std::invalid_argument);
        CHECK_THROWS_AS(excess(QuartetSet{}), std::invalid_argument);
    }
    SUBCASE("additivity over disjoint parts") {
        // exc(Q1 u Q2) = exc(Q1) + exc(Q2) + 3 - |L(Q1) n L(Q2)|
        std::mt19937_64 rng(7);
        const std::vector<std::string> universe{"a", "b", "c", "d", "e", "f", "g", "h", "i"};
        for (int trial = 0; trial < 50; ++trial) {
            auto t = random_binary_tree(universe, rng());
            auto all = quartets_of(t);
            std::shuffle(all.begin(), all.end(), rng);
            const int n1 = 1 + static_cast<int>(rng() % 3);
            const int n2 = 1 + static_cast<int>(rng() % 3);
            QuartetSet q1, q2;
            for (int i = 0; i < n1; ++i) q1.add(all[i]);
            for (int i = 0; i < n2; ++i) q2.add(all[n1 + i]);
            QuartetSet both = q1;
            for (const auto& q : q2) both.add(q);
            const auto l1 = q1.all_taxa();
            const auto l2 = q2.all_taxa();
            std::vector<std::string> meet;
            std::set_intersection(l1.begin(), l1.end(), l2.begin(), l2.end(),
                                  std::back_inserter(meet));
            CHECK(excess(both) ==
                  excess(q1) + excess(q2) + 3 - static_cast<long long>(meet.size()));
        }
    }
    SUBCASE("excess-free split of an excess-free set shares exactly 3 leaves") {
        std::mt19937_64 rng(11);
        for (int trial = 0; trial < 20; ++trial) {
            auto t = random_binary_tree({"a", "b", "c", "d", "e", "f", "g"}, rng());
            auto q = sample_defining_set(t, rng());
            const auto masks = excess_free_masks(q);
            const std::uint64_t full = (std::uint64_t{1} << q.size()) - 1;
            for (std::uint64_t m : masks) {
                if (m == full || !std::binary_search(masks.begin(), masks.end(), full ^ m))
                    continue;
                const auto l1 = q.subset(m).all_taxa();
                const auto l2 = q.subset(full ^ m).all_taxa();
                std::vector<std::string> meet;
                std::set_intersection(l1.begin(), l1.end(), l2.begin(), l2.end(),
                                      std::back_inserter(meet));
                CHECK(meet.size() == 3);
            }
        }
    }
}

TEST_CASE("slimness") {
    SUBCASE("figure 1 set is slim") {
        auto r = is_slim(figure1());
        CHECK(r.slim);
        CHECK_FALSE(r.witness.has_value());
    }
    SUBCASE("figure 2 set is not slim; the only negative subset is the whole set") {
        auto r = is_slim(figure2());
        REQUIRE_FALSE(r.slim);
        REQUIRE(r.witness.has_value());
        CHECK(r.witness->size() == 6);
        CHECK(excess(*r.witness) == -1);
    }
    SUBCASE("singletons are slim") {
        QuartetSet q({Quartet("a", "b", "c", "d")});
        CHECK(is_slim(q).slim);
    }
    SUBCASE("cap") {
        QuartetSet q({Quartet("a", "b", "c", "d"), Quartet("a", "b", "c", "e")});
        CHECK_THROWS_AS(is_slim(q, 1), cap_error);
    }
}

TEST_CASE("excess-free subsets") {
    SUBCASE("two chained quartets") {
        auto subsets = excess_free_subsets(chain2());
        REQUIRE(subsets.size() == 3);  // both singletons and the pair
        CHECK(subsets[0].size() == 1);
        CHECK(subsets[1].size() == 1);
        CHECK(subsets[2].size() == 2);
    }
    SUBCASE("figure 1: the three singletons and the full set") {
        auto masks = excess_free_masks(figure1());
        CHECK(masks == std::vector<std::uint64_t>{1, 2, 4, 7});
    }
    SUBCASE("all singletons always appear") {
        auto q = figure2();
        auto masks = excess_free_masks(q);
        for (int i = 0; i < q.size(); ++i)
            CHECK(std::binary_search(masks.begin(), masks.end(), std::uint64_t{1} << i));
    }
}

TEST_CASE("patchwork predicate") {
    auto q = figure1();
    SUBCASE("singletons only: vacuously a patchwork") {
        std::vector<QuartetSet> singles;
        for (const auto& quartet : q) singles.push_back(QuartetSet({quartet}));
        CHECK(is_patchwork(q, singles));
    }
    SUBCASE("closure failure") {
        QuartetSet q3({Quartet("a", "b", "c", "d"), Quartet("b", "c", "d", "e"),
                       Quartet("c", "d", "e", "f")});
        std::vector<QuartetSet> c{q3.subset(0b011), q3.subset(0b110)};
        CHECK_FALSE(is_patchwork(q3, c));  // missing both meet and join
        c.push_back(q3.subset(0b010));
        c.push_back(q3.subset(0b111));
        CHECK(is_patchwork(q3, c));
    }
    SUBCASE("Exc of a defining set is a patchwork") {
        std::mt19937_64 rng(23);
        for (int trial = 0; trial < 15; ++trial) {
            const int n = 5 + static_cast<int>(rng() % 3);
            std::vector<std::string> taxa;
            for (int i = 0; i < n; ++i) taxa.push_back(std::string(1, 'a' + i));
            auto t = random_binary_tree(taxa, rng());
            auto defining = sample_defining_set(t, rng());
            CHECK(is_patchwork(defining, excess_free_subsets(defining)));
        }
    }
    SUBCASE("membership violation") {
        std::vector<QuartetSet> c{QuartetSet({Quartet("x", "y", "z", "w")})};
        CHECK_THROWS_AS(is_patchwork(q, c), std::invalid_argument);
    }
}

TEST_CASE("maximal hierarchy predicate") {
    auto q = chain2();
    SUBCASE("smallest nontrivial hierarchy") {
        std::vector<QuartetSet> c{q.subset(0b01), q.subset(0b10), q.subset(0b11)};
        CHECK(is_maximal_hierarchy(q, c));
    }
    SUBCASE("ground set required") {
        std::vector<QuartetSet> c{q.subset(0b01), q.subset(0b10)};
        CHECK_FALSE(is_maximal_hierarchy(q, c));
    }
    SUBCASE("Exc of figure 1 is no maximal hierarchy") {
        auto f1 = figure1();
        CHECK_FALSE(is_maximal_hierarchy(f1, excess_free_subsets(f1)));
    }
    SUBCASE("clusters of size > 1 need two disjoint children") {
        QuartetSet q3({Quartet("a", "b", "c", "d"), Quartet("b", "c", "d", "e"),
                       Quartet("c", "d", "e", "f")});
        std::vector<QuartetSet> c{q3.subset(0b001), q3.subset(0b010), q3.subset(0b100),
                                  q3.subset(0b111)};
        CHECK_FALSE(is_maximal_hierarchy(q3, c));  // the full set lacks children
        c.push_back(q3.subset(0b011));
        CHECK(is_maximal_hierarchy(q3, c));
    }
}

TEST_CASE("find_maximal_hierarchy") {
    SUBCASE("two chained quartets split into singletons") {
        auto h = find_maximal_hierarchy(chain2());
        REQUIRE(h.has_value());
        CHECK(h->cluster_masks == std::vector<std::uint64_t>{1, 2, 3});
        CHECK(is_maximal_hierarchy(h->ground, h->clusters()));
    }
    SUBCASE("figure 1 has none") {
        CHECK_FALSE(find_maximal_hierarchy(figure1()).has_value());
    }
    SUBCASE("singleton") {
        QuartetSet q({Quartet("a", "b", "c", "d")});
        auto h = find_maximal_hierarchy(q);
        REQUIRE(h.has_value());
        CHECK(h->cluster_masks == std::vector<std::uint64_t>{1});
    }
    SUBCASE("every cluster of a found hierarchy is excess-free") {
        std::mt19937_64 rng(31);
        for (int trial = 0; trial < 15; ++trial) {
            const int n = 5 + static_cast<int>(rng() % 4);
            std::vector<std::string> taxa;
            for (int i = 0; i < n; ++i) taxa.push_back(std::string(1, 'a' + i));
            auto t = random_binary_tree(taxa, rng());
            auto q = sample_defining_set(t, rng());
            auto h = find_maximal_hierarchy(q);
            REQUIRE(h.has_value());
            CHECK(is_maximal_hierarchy(q, h->clusters()));
            for (const auto& cluster : h->clusters()) CHECK(excess(cluster) == 0);
        }
    }
    SUBCASE("requires an excess-free ground set") {
        CHECK_THROWS_AS(find_maximal_hierarchy(figure2()), std::invalid_argument);
    }
}

TEST_CASE("extend_to_hierarchy") {
    SUBCASE("a cluster that is already a child") {
        auto q = chain2();
        auto h = extend_to_hierarchy(q, q.subset(0b01));
        REQUIRE(h.has_value());
        CHECK(h->contains(0b01));
    }
    SUBCASE("the ground set always extends") {
        auto q = chain2();
        auto h = extend_to_hierarchy(q, q);
        REQUIRE(h.has_value());
        CHECK(h->contains(0b11));
    }
    SUBCASE("no hierarchy at all yields absent") {
        auto f1 = figure1();
        CHECK_FALSE(extend_to_hierarchy(f1, f1.subset(0b001)).has_value());
    }
    SUBCASE("C must be excess-free and a subset") {
        auto q = chain2();
        CHECK_THROWS_AS(extend_to_hierarchy(q, QuartetSet({Quartet("x", "y", "z", "w")})),
                        std::invalid_argument);
    }
    SUBCASE("every excess-free cluster of a defining set extends through it") {
        std::mt19937_64 rng(37);
        for (int trial = 0; trial < 12; ++trial) {
            const int n = 6 + static_cast<int>(rng() % 2);
            std::vector<std::string> taxa;
            for (int i = 0; i < n; ++i) taxa.push_back(std::string(1, 'a' + i));
            auto t = random_binary_tree(taxa, rng());
            auto q = sample_defining_set(t, rng());
            for (std::uint64_t mask : excess_free_masks(q)) {
                auto h = extend_to_hierarchy(q, q.subset(mask));
                REQUIRE(h.has_value());
                CHECK(h->contains(mask));
                CHECK(is_maximal_hierarchy(q, h->clusters()));
                for (const auto& cluster : h->clusters()) CHECK(excess(cluster) == 0);
            }
        }
    }
}
