#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "phyloq/cli.hpp"
#include "phyloq/tree.hpp"

using namespace phyloq;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& contents) {
        static int counter = 0;
        path = "phyloq_test_" + std::to_string(counter++) + ".txt";
        std::ofstream out(path);
        out << contents;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run invoke(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

const char* kFigure1 = "a d | c f\na e | b f\nb d | c e\n";
const char* kFigure2 = "a b | c d\na c | e f\na e | b g\nb d | g h\nc f | d h\ne g | f h\n";
const char* kChain = "a b | c d\nb c | d e\n";

}  // namespace

TEST_CASE("excess command") {
    TempFile f(kFigure1);
    auto r = invoke({"excess", "-q", f.path});
    CHECK(r.code == 0);
    CHECK(r.out == "0\n");

    TempFile f2(kFigure2);
    CHECK(invoke({"excess", "-q", f2.path}).out == "-1\n");

    TempFile trees("((a,b),c,(d,e));\n((a,b),(c,f));\n");
    auto rt = invoke({"excess", "-t", trees.path});
    CHECK(rt.code == 0);
    CHECK(rt.out == "0\n");  // 6 leaves - 3 - (2 + 1)
}

TEST_CASE("slim command") {
    TempFile f(kFigure2);
    auto r = invoke({"slim", "-q", f.path});
    CHECK(r.code == 0);  // a false predicate still exits 0
    CHECK(r.out.find("false") == 0);
    CHECK(r.out.find("witness:") != std::string::npos);
    CHECK(r.out.find("a b | c d") != std::string::npos);

    TempFile f1(kFigure1);
    CHECK(invoke({"slim", "-q", f1.path}).out == "true\n");
}

TEST_CASE("compat command") {
    TempFile f(kChain);
    auto r = invoke({"compat", "-q", f.path, "--count"});
    CHECK(r.code == 0);
    CHECK(r.out.find("compatible: true") != std::string::npos);
    CHECK(r.out.find("definitive: true") != std::string::npos);
    CHECK(r.out.find("count: 1") != std::string::npos);
}

TEST_CASE("definitive command") {
    SUBCASE("chain defines the caterpillar") {
        TempFile f(kChain);
        auto r = invoke({"definitive", "-q", f.path});
        CHECK(r.code == 0);
        CHECK(r.out == parse_newick("((a,b),c,(d,e));").canonical_newick() + "\n");
    }
    SUBCASE("figure 1 is not definitive") {
        TempFile f(kFigure1);
        auto r = invoke({"definitive", "-q", f.path});
        CHECK(r.code == 0);
        CHECK(r.out == "NOT_DEFINITIVE:no maximal hierarchy\n");
    }
    SUBCASE("json trace") {
        TempFile f(kChain);
        auto r = invoke({"--json", "definitive", "-q", f.path});
        CHECK(r.code == 0);
        auto j = nlohmann::json::parse(r.out);
        CHECK(j["command"] == "definitive");
        CHECK(j["trace"]["hierarchy"].size() == 3);
        // emitted Newick re-parses to an isomorphic tree
        auto echoed = parse_newick(j["result"].get<std::string>());
        CHECK(echoed.canonical_newick() == j["result"].get<std::string>());
    }
}

TEST_CASE("quartets and restrict commands") {
    TempFile tree("((a,b),c,(d,e));\n");
    auto r = invoke({"quartets", "-T", tree.path});
    CHECK(r.code == 0);
    CHECK(r.out ==
          "a b | c d\na b | c e\na b | d e\na c | d e\nb c | d e\n");

    auto rr = invoke({"restrict", "-T", tree.path, "-l", "b,c,d,e"});
    CHECK(rr.code == 0);
    CHECK(rr.out == "((b,c),(d,e));\n");
}

TEST_CASE("digraph command") {
    TempFile f(kFigure2);
    auto r = invoke({"digraph", "-q", f.path});
    CHECK(r.code == 0);
    CHECK(r.out.find("a b | c d  ->  a e | b g   {a,b}") != std::string::npos);
    CHECK(r.out.find("a-coloured cycle: a b | c d -> a e | b g -> a c | e f -> a b | c d") !=
          std::string::npos);
    CHECK(r.out.find("cyclomatic number: 7") != std::string::npos);

    auto dot = invoke({"digraph", "-q", f.path, "--dot"});
    CHECK(dot.out.find("digraph cherries {") == 0);

    TempFile lone("a b | c d\n");
    auto fail = invoke({"digraph", "-q", lone.path});
    CHECK(fail.code == 0);
    CHECK(fail.out.find("FAILED") == 0);
}

TEST_CASE("generators") {
    SUBCASE("gen-tree is deterministic and valid") {
        auto a = invoke({"gen-tree", "--leaves", "7", "--seed", "42"});
        auto b = invoke({"gen-tree", "--leaves", "7", "--seed", "42"});
        CHECK(a.code == 0);
        CHECK(a.out == b.out);
        auto t = parse_newick(a.out.substr(0, a.out.size() - 1));
        CHECK(t.leaf_count() == 7);
        CHECK(t.is_binary());
    }
    SUBCASE("gen-defining round-trips through definitive") {
        TempFile tree("(((a,b),c),(d,(e,f)));\n");
        auto gen = invoke({"gen-defining", "-T", tree.path, "--seed", "7"});
        CHECK(gen.code == 0);
        TempFile q(gen.out);
        auto dec = invoke({"definitive", "-q", q.path});
        CHECK(dec.code == 0);
        CHECK(dec.out == parse_newick("(((a,b),c),(d,(e,f)));").canonical_newick() + "\n");
    }
    SUBCASE("gen-slim emits a slim collection and reports acceptance") {
        auto gen = invoke({"gen-slim", "--leaves", "8", "--trees", "3", "--seed", "11"});
        CHECK(gen.code == 0);
        CHECK(gen.err.find("# accepted after") == 0);
        TempFile trees(gen.out);
        auto slim = invoke({"slim", "-t", trees.path});
        CHECK(slim.out == "true\n");
        auto again = invoke({"gen-slim", "--leaves", "8", "--trees", "3", "--seed", "11"});
        CHECK(again.out == gen.out);
        CHECK(again.err == gen.err);
    }
    SUBCASE("missing seed is a usage error") {
        CHECK(invoke({"gen-tree", "--leaves", "7"}).code == 2);
    }
}

TEST_CASE("exit codes and caps") {
    SUBCASE("malformed quartet line reports its number") {
        TempFile f("a b | c d\na b c | d\n");
        auto r = invoke({"slim", "-q", f.path});
        CHECK(r.code == 2);
        CHECK(r.err.find("line 2") != std::string::npos);
    }
    SUBCASE("malformed newick reports its line") {
        TempFile f("((a,b),(c,d));\n((a,b);\n");
        auto r = invoke({"excess", "-t", f.path});
        CHECK(r.code == 2);
        CHECK(r.err.find("line 2") != std::string::npos);
    }
    SUBCASE("enum cap exceeded gives exit 3") {
        // a sliding-window chain over 11 taxa
        std::string chain;
        for (char c = 'a'; c + 3 <= 'k'; ++c) {
            chain += std::string(1, c);
            chain += " ";
            chain += std::string(1, c + 1);
            chain += " | ";
            chain += std::string(1, c + 2);
            chain += " ";
            chain += std::string(1, c + 3);
            chain += "\n";
        }
        TempFile f(chain);
        auto r = invoke({"compat", "-q", f.path});
        CHECK(r.code == 3);
    }
    SUBCASE("raising a cap needs --unsafe-cap") {
        TempFile f(kChain);
        CHECK(invoke({"--max-enum", "12", "compat", "-q", f.path}).code == 2);
        CHECK(invoke({"--max-enum", "12", "--unsafe-cap", "compat", "-q", f.path}).code == 0);
        CHECK(invoke({"--max-enum", "8", "compat", "-q", f.path}).code == 0);
    }
    SUBCASE("PHYLOQ_MAX_ENUM is honored below --unsafe-cap") {
        TempFile f(kChain);
        setenv("PHYLOQ_MAX_ENUM", "4", 1);
        auto r = invoke({"compat", "-q", f.path});  // needs 5 leaves
        CHECK(r.code == 3);
        setenv("PHYLOQ_MAX_ENUM", "20", 1);
        CHECK(invoke({"compat", "-q", f.path}).code == 2);  // raise needs --unsafe-cap
        CHECK(invoke({"--unsafe-cap", "compat", "-q", f.path}).code == 0);
        unsetenv("PHYLOQ_MAX_ENUM");
    }
    SUBCASE("unknown option") {
        CHECK(invoke({"excess", "--bogus"}).code == 2);
    }
    SUBCASE("missing input") {
        CHECK(invoke({"excess"}).code == 2);
        CHECK(invoke({"excess", "-q", "does_not_exist.txt"}).code == 2);
    }
}

TEST_CASE("json output is stable and round-trips") {
    TempFile f(kChain);
    auto a = invoke({"--json", "compat", "-q", f.path, "--count"});
    auto b = invoke({"--json", "compat", "-q", f.path, "--count"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    auto j = nlohmann::json::parse(a.out);
    CHECK(j["command"] == "compat");
    CHECK(j["result"]["compatible"] == true);
    CHECK(j["count"] == 1);
    auto witness = parse_newick(j["witness"].get<std::string>());
    CHECK(witness.canonical_newick() == j["witness"].get<std::string>());
}
