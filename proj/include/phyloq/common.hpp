#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace phyloq {

// Desk-scale guard rails. Exhaustive tree enumeration grows as (2n-5)!! and
// subset sweeps as 2^m, so both are capped unless the caller raises the cap
// explicitly.
inline constexpr int kDefaultEnumCap = 10;
inline constexpr int kDefaultSubsetCap = 25;

// A requested computation would exceed a cap. The CLI maps this to exit 3.
class cap_error : public std::runtime_error {
public:
    explicit cap_error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed Newick text or quartet line; carries a 1-based line number when
// the input came from a multi-line source.
class parse_error : public std::runtime_error {
public:
    explicit parse_error(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_ = 0;
};

// splitmix64 mix; used to derive independent deterministic RNG streams from
// one user-facing seed.
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace phyloq
