#include "phyloq/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "phyloq/collection.hpp"
#include "phyloq/compat.hpp"
#include "phyloq/diagnostics.hpp"
#include "phyloq/excess.hpp"
#include "phyloq/generate.hpp"
#include "phyloq/quartet.hpp"
#include "phyloq/reconstruct.hpp"
#include "phyloq/tree.hpp"

namespace phyloq::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open file '" + path + "'");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

bool blank(const std::string& line) {
    return line.find_first_not_of(" \t\r\n") == std::string::npos;
}

QuartetSet load_quartets(const std::string& path) {
    QuartetSet out;
    const auto lines = read_lines(path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (blank(lines[i])) continue;
        try {
            out.add(parse_quartet_line(lines[i]));
        } catch (const parse_error& e) {
            throw parse_error(std::string(e.what()), static_cast<int>(i + 1));
        }
    }
    return out;
}

TreeCollection load_trees(const std::string& path) {
    TreeCollection out;
    const auto lines = read_lines(path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (blank(lines[i])) continue;
        try {
            out.add(parse_newick(lines[i]));
        } catch (const parse_error& e) {
            throw parse_error(std::string(e.what()), static_cast<int>(i + 1));
        } catch (const std::invalid_argument& e) {
            throw parse_error(std::string(e.what()), static_cast<int>(i + 1));
        }
    }
    return out;
}

PhyloTree load_single_tree(const std::string& path) {
    for (const auto& line : read_lines(path))
        if (!blank(line)) return parse_newick(line);
    throw parse_error("file '" + path + "' contains no tree");
}

// collection from -q or -t, remembering which format to echo
struct LoadedCollection {
    TreeCollection collection;
    std::optional<QuartetSet> quartets;
};

LoadedCollection load_collection(const RunConfig& cfg) {
    if (!cfg.quartet_file.empty()) {
        auto q = load_quartets(cfg.quartet_file);
        return {q.to_collection(), std::move(q)};
    }
    return {load_trees(cfg.tree_file), std::nullopt};
}

std::vector<std::string> member_strings(const TreeCollection& c, bool as_quartets) {
    std::vector<std::string> out;
    for (const auto& t : c)
        out.push_back(as_quartets && t.leaf_count() == 4 ? quartet_from_tree(t).to_line()
                                                         : t.canonical_newick());
    return out;
}

std::vector<std::string> default_taxa(int n) {
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) {
        if (n <= 26)
            out.push_back(std::string(1, static_cast<char>('a' + i)));
        else
            out.push_back("t" + std::to_string(i + 1));
    }
    return out;
}

void emit(const RunConfig& cfg, std::ostream& out, const ordered_json& payload,
          const std::string& text) {
    if (cfg.output == OutputFormat::json)
        out << payload.dump(2) << "\n";
    else
        out << text;
}

// --- subcommand handlers -------------------------------------------------

void run_excess(const RunConfig& cfg, std::ostream& out) {
    const auto loaded = load_collection(cfg);
    const long long exc = excess(loaded.collection);
    ordered_json j;
    j["command"] = "excess";
    j["result"] = exc;
    emit(cfg, out, j, std::to_string(exc) + "\n");
}

void run_slim(const RunConfig& cfg, std::ostream& out) {
    const auto loaded = load_collection(cfg);
    const auto result = is_slim(loaded.collection, cfg.caps.max_subset);
    ordered_json j;
    j["command"] = "slim";
    j["result"] = result.slim;
    std::ostringstream text;
    text << (result.slim ? "true" : "false") << "\n";
    if (result.witness) {
        const auto members = member_strings(*result.witness, loaded.quartets.has_value());
        j["witness"] = members;
        text << "witness:\n";
        for (const auto& m : members) text << "  " << m << "\n";
    }
    emit(cfg, out, j, text.str());
}

void run_compat(const RunConfig& cfg, std::ostream& out) {
    const auto loaded = load_collection(cfg);
    const auto verdict = is_compatible(loaded.collection,
                                       cfg.count ? OracleMode::full_count : OracleMode::uniqueness,
                                       cfg.caps.max_leaves_enum);
    ordered_json j;
    j["command"] = "compat";
    j["result"] = {{"compatible", verdict.compatible}, {"definitive", verdict.definitive}};
    std::ostringstream text;
    text << "compatible: " << (verdict.compatible ? "true" : "false") << "\n";
    text << "definitive: " << (verdict.definitive ? "true" : "false") << "\n";
    if (verdict.witness) {
        j["witness"] = verdict.witness->canonical_newick();
        text << "witness: " << verdict.witness->canonical_newick() << "\n";
    }
    if (verdict.witness_count) {
        j["count"] = *verdict.witness_count;
        text << "count: " << *verdict.witness_count << "\n";
    }
    emit(cfg, out, j, text.str());
}

ordered_json trace_json(const ReconstructionTrace& trace) {
    ordered_json t;
    if (trace.hierarchy) {
        ordered_json clusters = ordered_json::array();
        for (const auto& cluster : trace.hierarchy->clusters()) {
            ordered_json one = ordered_json::array();
            for (const auto& q : cluster) one.push_back(q.to_line());
            clusters.push_back(one);
        }
        t["hierarchy"] = clusters;
    }
    ordered_json merges = ordered_json::array();
    for (const auto& m : trace.merge_log) {
        ordered_json rec;
        rec["overlap"] = m.overlap;
        rec["subdivided_in_first"] = m.subdivided_in_first;
        rec["subdivided_in_second"] = m.subdivided_in_second;
        rec["conflict"] = m.conflict;
        merges.push_back(rec);
    }
    t["merge_log"] = merges;
    return t;
}

void run_definitive(const RunConfig& cfg, std::ostream& out) {
    const auto q = load_quartets(cfg.quartet_file);
    const auto trace = decide_and_reconstruct(q, cfg.caps.max_subset);
    ordered_json j;
    j["command"] = "definitive";
    std::ostringstream text;
    if (trace.definitive()) {
        j["result"] = trace.tree->canonical_newick();
        text << trace.tree->canonical_newick() << "\n";
    } else {
        const std::string line = std::string("NOT_DEFINITIVE:") + to_string(*trace.reason);
        j["result"] = line;
        text << line << "\n";
    }
    j["trace"] = trace_json(trace);
    if (cfg.verbose && cfg.output == OutputFormat::text) {
        if (trace.hierarchy) {
            text << "hierarchy:\n";
            for (const auto& cluster : trace.hierarchy->clusters()) {
                text << "  {";
                for (int i = 0; i < cluster.size(); ++i)
                    text << (i ? "; " : "") << cluster[i].to_line();
                text << "}\n";
            }
        }
        for (const auto& m : trace.merge_log) {
            text << "merge: overlap {" << m.overlap[0] << "," << m.overlap[1] << ","
                 << m.overlap[2] << "}";
            auto side = [&](const char* name, const std::vector<std::string>& v) {
                text << " " << name << "={";
                for (std::size_t i = 0; i < v.size(); ++i) text << (i ? "," : "") << v[i];
                text << "}";
            };
            side("sub1", m.subdivided_in_first);
            side("sub2", m.subdivided_in_second);
            if (m.conflict) text << " CONFLICT";
            text << "\n";
        }
    }
    emit(cfg, out, j, text.str());
}

void run_quartets(const RunConfig& cfg, std::ostream& out) {
    const auto tree = load_single_tree(cfg.single_tree_file);
    const auto all = quartets_of(tree);
    ordered_json j;
    j["command"] = "quartets";
    ordered_json lines = ordered_json::array();
    std::ostringstream text;
    for (const auto& q : all) {
        lines.push_back(q.to_line());
        text << q.to_line() << "\n";
    }
    j["result"] = lines;
    emit(cfg, out, j, text.str());
}

void run_restrict(const RunConfig& cfg, std::ostream& out) {
    const auto tree = load_single_tree(cfg.single_tree_file);
    std::vector<std::string> keep;
    std::stringstream ss(cfg.leaf_list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) keep.push_back(item);
    }
    const auto restricted = restrict_to(tree, keep);
    ordered_json j;
    j["command"] = "restrict";
    j["result"] = restricted.canonical_newick();
    emit(cfg, out, j, restricted.canonical_newick() + "\n");
}

void run_digraph(const RunConfig& cfg, std::ostream& out) {
    const auto q = load_quartets(cfg.quartet_file);
    const auto built = build_cherry_digraph(q.to_collection());
    ordered_json j;
    j["command"] = "digraph";
    std::ostringstream text;
    if (!built.ok()) {
        ordered_json failures = ordered_json::array();
        text << "FAILED\n";
        for (const auto& f : built.failures) {
            failures.push_back({{"tree", q[f.tree_index].to_line()},
                                {"cherry", {f.cherry.first, f.cherry.second}}});
            text << "no target for cherry {" << f.cherry.first << "," << f.cherry.second
                 << "} of " << q[f.tree_index].to_line() << "\n";
        }
        j["result"] = {{"ok", false}, {"failures", failures}};
        emit(cfg, out, j, text.str());
        return;
    }
    const auto& g = *built.digraph;
    if (cfg.output == OutputFormat::dot) {
        out << to_dot(g);
        return;
    }
    ordered_json arcs = ordered_json::array();
    for (const auto& arc : g.arcs) {
        arcs.push_back({{"from", q[arc.from].to_line()},
                        {"to", q[arc.to].to_line()},
                        {"label", {arc.label.first, arc.label.second}}});
        text << q[arc.from].to_line() << "  ->  " << q[arc.to].to_line() << "   {"
             << arc.label.first << "," << arc.label.second << "}\n";
    }
    if (cfg.verbose && cfg.output == OutputFormat::text) {
        for (std::size_t a = 0; a < g.arcs.size(); ++a) {
            if (g.alternatives[a].size() < 2) continue;
            text << "alternatives for arc " << a << ":";
            for (int alt : g.alternatives[a]) text << " " << q[alt].to_line() << ";";
            text << "\n";
        }
    }
    const auto cycles = coloured_cycles(g);
    ordered_json jcycles = ordered_json::array();
    for (const auto& c : cycles) {
        ordered_json vertices = ordered_json::array();
        std::ostringstream line;
        line << c.taxon << "-coloured cycle:";
        for (int a : c.arc_indices) {
            vertices.push_back(q[g.arcs[a].from].to_line());
            line << " " << q[g.arcs[a].from].to_line() << " ->";
        }
        line << " " << q[g.arcs[c.arc_indices.front()].from].to_line() << "\n";
        jcycles.push_back({{"taxon", c.taxon}, {"vertices", vertices}});
        text << line.str();
    }
    const int cyclomatic = cyclomatic_number(g);
    text << "cyclomatic number: " << cyclomatic << "\n";
    j["result"] = {{"ok", true},
                   {"arcs", arcs},
                   {"coloured_cycles", jcycles},
                   {"cyclomatic_number", cyclomatic}};
    emit(cfg, out, j, text.str());
}

void run_gen_tree(const RunConfig& cfg, std::ostream& out) {
    const auto tree = random_binary_tree(default_taxa(cfg.leaves), cfg.seed);
    ordered_json j;
    j["command"] = "gen-tree";
    j["result"] = tree.canonical_newick();
    emit(cfg, out, j, tree.canonical_newick() + "\n");
}

void run_gen_defining(const RunConfig& cfg, std::ostream& out) {
    const auto tree = load_single_tree(cfg.single_tree_file);
    const auto q = sample_defining_set(tree, cfg.seed, 1000, cfg.caps.max_subset);
    ordered_json j;
    j["command"] = "gen-defining";
    ordered_json lines = ordered_json::array();
    std::ostringstream text;
    for (const auto& quartet : q) {
        lines.push_back(quartet.to_line());
        text << quartet.to_line() << "\n";
    }
    j["result"] = lines;
    emit(cfg, out, j, text.str());
}

void run_gen_slim(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.leaves < 4) throw std::invalid_argument("gen-slim needs --leaves >= 4");
    if (cfg.trees < 1) throw std::invalid_argument("gen-slim needs --trees >= 1");
    const auto universe = default_taxa(cfg.leaves);
    const int max_size = std::min(6, cfg.leaves);
    constexpr int kBudget = 100000;

    std::mt19937_64 rng(mix_seed(cfg.seed));
    for (int attempt = 1; attempt <= kBudget; ++attempt) {
        TreeCollection p;
        for (int i = 0; i < cfg.trees; ++i) {
            const int m = 4 + static_cast<int>(rng() % (max_size - 3));
            std::vector<std::string> pool = universe;
            for (int k = 0; k < m; ++k)
                std::swap(pool[k], pool[k + rng() % (pool.size() - k)]);
            pool.resize(m);
            p.add(random_binary_tree(pool, rng()));
        }
        if (p.size() != cfg.trees) continue;  // isomorphic duplicates collapsed
        if (!is_slim(p, cfg.caps.max_subset).slim) continue;

        ordered_json j;
        j["command"] = "gen-slim";
        ordered_json lines = ordered_json::array();
        std::ostringstream text;
        for (const auto& t : p) {
            lines.push_back(t.canonical_newick());
            text << t.canonical_newick() << "\n";
        }
        j["result"] = lines;
        j["attempts"] = attempt;
        if (cfg.output == OutputFormat::text)
            err << "# accepted after " << attempt << " attempt" << (attempt == 1 ? "" : "s")
                << "\n";
        emit(cfg, out, j, text.str());
        return;
    }
    throw std::runtime_error("gen-slim: no slim collection found within the attempt budget");
}

int effective_cap(const char* env_name, int flag_value, bool flag_given, int fallback,
                  bool unsafe_ok) {
    int value = fallback;
    const char* env = std::getenv(env_name);
    if (env != nullptr) {
        try {
            value = std::stoi(env);
        } catch (...) {
            throw std::invalid_argument(std::string(env_name) + " is not an integer");
        }
    }
    if (flag_given) value = flag_value;
    if (value < 3) throw std::invalid_argument("cap too small to be useful");
    if (value > fallback && !unsafe_ok)
        throw std::invalid_argument("raising a cap above its default (" +
                                    std::to_string(fallback) + ") requires --unsafe-cap");
    return value;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"quartet set excess, slimness, compatibility and reconstruction"};
    app.require_subcommand(1);

    RunConfig cfg;
    bool json_flag = false;
    bool dot_flag = false;
    int max_enum_flag = kDefaultEnumCap;
    int max_subset_flag = kDefaultSubsetCap;
    app.add_flag("--json", json_flag, "emit JSON instead of text");
    app.add_flag("-v,--verbose", cfg.verbose, "more detail in text output");
    auto* enum_opt = app.add_option("--max-enum", max_enum_flag,
                                    "cap on leaves for exhaustive enumeration");
    auto* subset_opt = app.add_option("--max-subset", max_subset_flag,
                                      "cap on collection size for subset sweeps");
    app.add_flag("--unsafe-cap", cfg.unsafe_cap, "allow caps above their defaults");

    auto add_collection_inputs = [&](CLI::App* sub, bool quartets_only = false) {
        auto* q = sub->add_option("-q,--quartets", cfg.quartet_file, "quartet file, one 'a b | c d' per line");
        if (quartets_only) {
            q->required();
        } else {
            auto* t = sub->add_option("-t,--trees", cfg.tree_file, "tree file, one Newick per line");
            q->excludes(t);
            t->excludes(q);
        }
        return q;
    };

    auto* excess_cmd = app.add_subcommand("excess", "excess of a collection");
    add_collection_inputs(excess_cmd);
    auto* slim_cmd = app.add_subcommand("slim", "slimness, with a minimum negative witness");
    add_collection_inputs(slim_cmd);
    auto* compat_cmd = app.add_subcommand("compat", "brute-force compatibility verdict");
    add_collection_inputs(compat_cmd);
    compat_cmd->add_flag("--count", cfg.count, "count all displaying trees");
    auto* definitive_cmd = app.add_subcommand("definitive", "decide and reconstruct");
    add_collection_inputs(definitive_cmd, true);
    auto* quartets_cmd = app.add_subcommand("quartets", "all quartets displayed by a tree");
    quartets_cmd->add_option("-T,--tree", cfg.single_tree_file, "Newick tree file")->required();
    auto* restrict_cmd = app.add_subcommand("restrict", "restrict a tree to given leaves");
    restrict_cmd->add_option("-T,--tree", cfg.single_tree_file, "Newick tree file")->required();
    restrict_cmd->add_option("-l,--leaves", cfg.leaf_list, "comma-separated leaf labels")->required();
    auto* digraph_cmd = app.add_subcommand("digraph", "cherry digraph and coloured cycles");
    add_collection_inputs(digraph_cmd, true);
    digraph_cmd->add_flag("--dot", dot_flag, "emit DOT");
    auto* gen_tree_cmd = app.add_subcommand("gen-tree", "random binary tree");
    gen_tree_cmd->add_option("--leaves", cfg.leaves, "number of leaves")->required();
    gen_tree_cmd->add_option("--seed", cfg.seed, "random seed")->required();
    auto* gen_def_cmd = app.add_subcommand("gen-defining", "sample a defining quartet set");
    gen_def_cmd->add_option("-T,--tree", cfg.single_tree_file, "Newick tree file")->required();
    gen_def_cmd->add_option("--seed", cfg.seed, "random seed")->required();
    auto* gen_slim_cmd = app.add_subcommand("gen-slim", "rejection-sample a slim collection");
    gen_slim_cmd->add_option("--leaves", cfg.leaves, "taxon universe size")->required();
    gen_slim_cmd->add_option("--trees", cfg.trees, "number of member trees")->required();
    gen_slim_cmd->add_option("--seed", cfg.seed, "random seed")->required();

    try {
        std::vector<const char*> argv{"phyloq"};
        for (const auto& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    }

    try {
        cfg.caps.max_leaves_enum = effective_cap("PHYLOQ_MAX_ENUM", max_enum_flag,
                                                 enum_opt->count() > 0, kDefaultEnumCap,
                                                 cfg.unsafe_cap);
        cfg.caps.max_subset = effective_cap("PHYLOQ_MAX_SUBSET", max_subset_flag,
                                            subset_opt->count() > 0, kDefaultSubsetCap,
                                            cfg.unsafe_cap);
        cfg.output = json_flag ? OutputFormat::json : OutputFormat::text;
        if (dot_flag) {
            if (json_flag) throw std::invalid_argument("--dot and --json are mutually exclusive");
            cfg.output = OutputFormat::dot;
        }

        if (excess_cmd->parsed()) {
            cfg.command = "excess";
            if (cfg.quartet_file.empty() && cfg.tree_file.empty())
                throw std::invalid_argument("excess needs -q or -t");
            run_excess(cfg, out);
        } else if (slim_cmd->parsed()) {
            cfg.command = "slim";
            if (cfg.quartet_file.empty() && cfg.tree_file.empty())
                throw std::invalid_argument("slim needs -q or -t");
            run_slim(cfg, out);
        } else if (compat_cmd->parsed()) {
            cfg.command = "compat";
            if (cfg.quartet_file.empty() && cfg.tree_file.empty())
                throw std::invalid_argument("compat needs -q or -t");
            run_compat(cfg, out);
        } else if (definitive_cmd->parsed()) {
            cfg.command = "definitive";
            run_definitive(cfg, out);
        } else if (quartets_cmd->parsed()) {
            cfg.command = "quartets";
            run_quartets(cfg, out);
        } else if (restrict_cmd->parsed()) {
            cfg.command = "restrict";
            run_restrict(cfg, out);
        } else if (digraph_cmd->parsed()) {
            cfg.command = "digraph";
            run_digraph(cfg, out);
        } else if (gen_tree_cmd->parsed()) {
            cfg.command = "gen-tree";
            run_gen_tree(cfg, out);
        } else if (gen_def_cmd->parsed()) {
            cfg.command = "gen-defining";
            run_gen_defining(cfg, out);
        } else if (gen_slim_cmd->parsed()) {
            cfg.command = "gen-slim";
            run_gen_slim(cfg, out, err);
        }
        return 0;
    } catch (const cap_error& e) {
        err << "cap exceeded: " << e.what() << "\n";
        return 3;
    } catch (const parse_error& e) {
        err << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 4;
    }
}

}  // namespace phyloq::cli
