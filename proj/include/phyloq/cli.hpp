#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "phyloq/common.hpp"

namespace phyloq::cli {

enum class OutputFormat { text, json, dot };

struct Caps {
    int max_leaves_enum = kDefaultEnumCap;
    int max_subset = kDefaultSubsetCap;
};

struct RunConfig {
    std::string command;
    std::string quartet_file;
    std::string tree_file;
    std::string single_tree_file;
    std::string leaf_list;
    std::uint64_t seed = 0;
    int leaves = 0;
    int trees = 0;
    bool count = false;
    bool verbose = false;
    bool unsafe_cap = false;
    Caps caps;
    OutputFormat output = OutputFormat::text;
};

// Exit codes: 0 = ran (predicate results are payload, not exit codes),
// 2 = parse/usage error, 3 = cap exceeded, 4 = internal invariant violation.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace phyloq::cli
