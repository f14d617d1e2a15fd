#include <iostream>
#include <string>
#include <vector>

#include "phyloq/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return phyloq::cli::run(args, std::cout, std::cerr);
}
