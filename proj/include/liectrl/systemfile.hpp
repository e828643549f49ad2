#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "liectrl/analysis.hpp"
#include "liectrl/system.hpp"

namespace liectrl {

// Numeric knobs resolved from defaults, the file's [numeric] section and any
// command-line overrides, in that order.
struct NumericParams {
    double tol = kDefaultRankTol;
    double fd_step = kDefaultFdStep;
    int grid = kDefaultGridPointsPerAxis;
    std::uint64_t seed = 0;
};

struct LoadedSystem {
    LinearSystem system;
    NumericParams params;
};

using ParamOverrides = std::map<std::string, std::string>;

// Built-in names understood without a file: paper-sl2, paper-aff2,
// paper-heisenberg. Overrides reach the group parameters (paper-aff2: a, d).
bool is_builtin_system(const std::string& name);
LoadedSystem builtin_system(const std::string& name, const ParamOverrides& overrides = {});

// Parses the sectioned key = value system file format:
//
//   [group]    name = heisenberg | aff2 | sl2 | rn, n = <dim> (rn),
//              a/d = <drift parameters> (catalog paper-aff2),
//              A/B = <row-major entries> (catalog linear on rn)
//   [control]  m, lower, upper (m entries each)
//   [map]      either catalog = paper-sl2 | paper-aff2 | paper-heisenberg |
//              linear, or per-coordinate expressions F1..FN, f0_1..f0_N,
//              f0inv_1..f0inv_N
//   [numeric]  tol, fd_step, grid, seed (all optional)
//
// '#' starts a comment. Throws Error with a line-bearing diagnostic on
// malformed input; overrides replace [group] keys before construction.
LoadedSystem load_system_file(const std::string& path, const ParamOverrides& overrides = {});

// Dispatches on builtin name vs. file path.
LoadedSystem resolve_system(const std::string& name_or_path, const ParamOverrides& overrides = {});

}  // namespace liectrl
