#pragma once

#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace rmoduli {

// Label involution sigma on S = {1..n}. Labels outside any pair are fixed.
struct InvolutionSpec {
    int n = 0;
    std::vector<std::pair<int, int>> pairs;  // each (a, b) with a < b; sorted; disjoint

    // Throws SpecError on n < 3, out-of-range labels, or non-disjoint pairs.
    static InvolutionSpec make(int n, std::vector<std::pair<int, int>> pairs);
    static InvolutionSpec identity(int n) { return make(n, {}); }

    int apply(int label) const;
    bool fixes(int label) const { return apply(label) == label; }
    std::vector<int> fixed_labels() const;
    int perm_size() const { return 2 * static_cast<int>(pairs.size()); }
    bool fixed_point_free() const { return perm_size() == n; }

    // "id" or "(1 2)(3 4)"
    std::string text() const;

    bool operator==(const InvolutionSpec&) const = default;
    bool operator<(const InvolutionSpec& o) const {
        return std::tie(n, pairs) < std::tie(o.n, o.pairs);
    }
};

// Parses "id" or a product of transpositions like "(1 2)(3 4)".
// Throws ParseError (with position) or OverlappingPairs.
InvolutionSpec parse_sigma(const std::string& text, int n);

}  // namespace rmoduli
