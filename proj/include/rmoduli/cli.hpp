#pragma once

#include <iosfwd>
#include <string>

namespace rmoduli {

struct RunConfig {
    int n = 0;
    std::string sigma = "id";
    std::string command;         // enumerate | homology | pi1 | poset
    std::string coeff = "z2";    // z2 | z-experimental
    std::string output = "text"; // text | json | dot
    std::string cache_dir;       // empty: $RMODULI_CACHE, then ./.rmoduli-cache
    bool no_cache = false;
    bool verify = false;
    int threads = 0;
    std::string dump_matrices;   // directory; empty = off
};

// Exit status: 0 ok, 2 validation failure, 3 internal consistency failure.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace rmoduli
