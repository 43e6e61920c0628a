#pragma once

// Brute-force reference implementations used only by tests. These take the
// long way around on purpose: trees come from recursive set partitions,
// equivariance from backtracking search, and u-equivalence from minimizing a
// serialization over the whole reversal orbit. They share no code path with
// the library's enumeration or canonical form.

#include <map>
#include <set>
#include <string>

#include "rmoduli/oplanar.hpp"

namespace rmoduli::oracle {

// Minimal serialization over all per-vertex reversals / the half swap.
std::string canonical_string(const OPlanarTree& t);

// All u-planar classes as canonical strings, keyed by dimension.
std::map<int, std::set<std::string>> enumerate(const InvolutionSpec& sigma);

std::map<int, long long> counts(const InvolutionSpec& sigma);

}  // namespace rmoduli::oracle
