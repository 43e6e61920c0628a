#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rmoduli/canonical.hpp"

namespace rmoduli {

inline constexpr int kCacheFormatVersion = 1;

// One invariant-edge smoothing record: `lower` (one more edge) contracts to
// `upper` along a single invariant edge; mult counts the signs (1 or 2).
struct Covering {
    std::string upper;
    std::string lower;
    int mult = 1;

    bool operator==(const Covering&) const = default;
    bool operator<(const Covering& o) const {
        return std::tie(lower, upper, mult) < std::tie(o.lower, o.upper, o.mult);
    }
};

struct StrataPoset {
    InvolutionSpec sigma;
    std::map<int, std::vector<UPlanarClass>> classes;  // dim -> sorted by encoding
    std::vector<Covering> coverings;                   // sorted; one record per (lower, edge, upper)

    int top_dim() const { return sigma.n - 3; }
    const UPlanarClass* find(const std::string& encoding) const;
    int dim_of(const std::string& encoding) const;  // -1 when absent
    std::size_t total_classes() const;
    std::vector<long long> counts_by_dim() const;  // index = dimension
};

// All stable S-trees on labels 1..n (tails get flag id = label).
std::vector<Tree> all_stable_trees(int n);

// Every valid decorated class for the tree, canonicalized and deduplicated.
std::vector<UPlanarClass> all_decorations(const Tree& tree, const InvolutionSpec& sigma);

// Exhaustive enumeration plus covering computation. threads <= 0 picks a default.
StrataPoset enumerate_classes(const InvolutionSpec& sigma, int threads = 0);

long long euler_characteristic(const StrataPoset& p);

// Every class below the top dimension admits at least one upward contraction
// landing inside the poset (invariant edge at dim+1, conjugate pair at dim+2).
bool closure_complete(const StrataPoset& p);

std::string cache_file_name(const InvolutionSpec& sigma);
void save_cache(const StrataPoset& p, const std::string& path);
// nullopt when missing, unreadable, or written for another (n, sigma, version).
std::optional<StrataPoset> load_cache(const std::string& path, const InvolutionSpec& sigma);

std::string to_dot(const StrataPoset& p);

}  // namespace rmoduli
