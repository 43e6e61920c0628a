#pragma once

#include <cstdint>
#include <cstddef>
#include <utility>
#include <vector>

namespace rmoduli {

// Bit-packed F2 row vector.
using Z2Vec = std::vector<std::uint64_t>;

Z2Vec z2_zero(std::size_t cols);
bool z2_get(const Z2Vec& v, std::size_t j);
void z2_set(Z2Vec& v, std::size_t j, bool b);
void z2_xor(Z2Vec& dst, const Z2Vec& src);
bool z2_is_zero(const Z2Vec& v);

// Row echelon form of a span; reduced rows kept for membership tests.
struct Z2Rref {
    std::size_t cols = 0;
    std::vector<Z2Vec> rows;            // echelon rows, one pivot each
    std::vector<std::size_t> pivots;    // pivot column per row

    std::size_t rank() const { return rows.size(); }
    // Adds the vector to the span; returns true when it was independent.
    bool absorb(Z2Vec v);
    // True when v lies in the current row span.
    bool contains(Z2Vec v) const;
};

Z2Rref z2_rref(std::size_t cols, const std::vector<Z2Vec>& rows);

// Rank of a 0/1 matrix given by nonzero positions. Dense bitset elimination up
// to `dense_col_limit` columns, sparse column elimination above it.
std::size_t z2_rank(std::size_t rows, std::size_t cols,
                    const std::vector<std::pair<std::size_t, std::size_t>>& ones,
                    std::size_t dense_col_limit = 5000);

}  // namespace rmoduli
