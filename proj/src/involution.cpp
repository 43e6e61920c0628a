#include "rmoduli/involution.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "rmoduli/errors.hpp"

namespace rmoduli {

InvolutionSpec InvolutionSpec::make(int n, std::vector<std::pair<int, int>> pairs) {
    if (n < 3) throw SpecError("InvolutionSpec: n must be at least 3, got " + std::to_string(n));
    std::vector<char> seen(static_cast<std::size_t>(n) + 1, 0);
    for (auto& [a, b] : pairs) {
        if (a > b) std::swap(a, b);
        if (a < 1 || b > n) throw SpecError("InvolutionSpec: label out of range 1.." + std::to_string(n));
        if (a == b) throw SpecError("InvolutionSpec: pair with equal labels");
        if (seen[a] || seen[b]) throw OverlappingPairs("InvolutionSpec: label appears in more than one pair");
        seen[a] = seen[b] = 1;
    }
    std::sort(pairs.begin(), pairs.end());
    InvolutionSpec s;
    s.n = n;
    s.pairs = std::move(pairs);
    return s;
}

int InvolutionSpec::apply(int label) const {
    for (const auto& [a, b] : pairs) {
        if (label == a) return b;
        if (label == b) return a;
    }
    return label;
}

std::vector<int> InvolutionSpec::fixed_labels() const {
    std::vector<int> out;
    for (int s = 1; s <= n; ++s)
        if (fixes(s)) out.push_back(s);
    return out;
}

std::string InvolutionSpec::text() const {
    if (pairs.empty()) return "id";
    std::ostringstream os;
    for (const auto& [a, b] : pairs) os << '(' << a << ' ' << b << ')';
    return os.str();
}

InvolutionSpec parse_sigma(const std::string& text, int n) {
    std::size_t i = 0;
    auto skip_ws = [&] { while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i; };
    skip_ws();
    if (text.compare(i, 2, "id") == 0) {
        i += 2;
        skip_ws();
        if (i != text.size()) throw ParseError("trailing characters after \"id\"", i);
        return InvolutionSpec::identity(n);
    }
    std::vector<std::pair<int, int>> pairs;
    while (i < text.size()) {
        skip_ws();
        if (i == text.size()) break;
        if (text[i] != '(') throw ParseError("expected '('", i);
        ++i;
        auto read_int = [&]() -> int {
            skip_ws();
            std::size_t start = i;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
            if (i == start) throw ParseError("expected a label", i);
            return std::stoi(text.substr(start, i - start));
        };
        int a = read_int();
        int b = read_int();
        skip_ws();
        if (i == text.size() || text[i] != ')') throw ParseError("expected ')'", i);
        ++i;
        pairs.emplace_back(a, b);
        skip_ws();
    }
    if (pairs.empty()) throw ParseError("empty involution (use \"id\")", 0);
    return InvolutionSpec::make(n, std::move(pairs));  // throws OverlappingPairs on reuse
}

}  // namespace rmoduli
