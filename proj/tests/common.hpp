#pragma once

#include <map>

#include "rmoduli/enumerate.hpp"
#include "rmoduli/graph_complex.hpp"

namespace rmoduli::testing {

// One poset per (n, sigma) per process; enumeration is deterministic.
inline const StrataPoset& poset(const InvolutionSpec& sigma) {
    static std::map<InvolutionSpec, StrataPoset> memo;
    auto it = memo.find(sigma);
    if (it == memo.end()) it = memo.emplace(sigma, enumerate_classes(sigma)).first;
    return it->second;
}

inline InvolutionSpec sigma_k(int n, int k) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < k; ++i) pairs.emplace_back(2 * i + 1, 2 * i + 2);
    return InvolutionSpec::make(n, pairs);
}

// One representative per conjugacy class of involutions of S_n.
inline std::vector<InvolutionSpec> conjugacy_types(int n) {
    std::vector<InvolutionSpec> out;
    for (int k = 0; 2 * k <= n; ++k) out.push_back(sigma_k(n, k));
    return out;
}

}  // namespace rmoduli::testing
