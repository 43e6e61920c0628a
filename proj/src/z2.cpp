#include "rmoduli/z2.hpp"

#include <algorithm>
#include <map>

namespace rmoduli {

Z2Vec z2_zero(std::size_t cols) { return Z2Vec((cols + 63) / 64, 0); }

bool z2_get(const Z2Vec& v, std::size_t j) { return (v[j / 64] >> (j % 64)) & 1u; }

void z2_set(Z2Vec& v, std::size_t j, bool b) {
    if (b)
        v[j / 64] |= (std::uint64_t{1} << (j % 64));
    else
        v[j / 64] &= ~(std::uint64_t{1} << (j % 64));
}

void z2_xor(Z2Vec& dst, const Z2Vec& src) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] ^= src[i];
}

bool z2_is_zero(const Z2Vec& v) {
    for (auto w : v)
        if (w) return false;
    return true;
}

namespace {
std::size_t first_bit(const Z2Vec& v) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i]) return i * 64 + static_cast<std::size_t>(__builtin_ctzll(v[i]));
    return static_cast<std::size_t>(-1);
}
}  // namespace

bool Z2Rref::absorb(Z2Vec v) {
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (z2_get(v, pivots[i])) z2_xor(v, rows[i]);
    if (z2_is_zero(v)) return false;
    std::size_t p = first_bit(v);
    // keep echelon order by pivot column
    std::size_t at = 0;
    while (at < pivots.size() && pivots[at] < p) ++at;
    rows.insert(rows.begin() + static_cast<long>(at), std::move(v));
    pivots.insert(pivots.begin() + static_cast<long>(at), p);
    return true;
}

bool Z2Rref::contains(Z2Vec v) const {
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (z2_get(v, pivots[i])) z2_xor(v, rows[i]);
    return z2_is_zero(v);
}

Z2Rref z2_rref(std::size_t cols, const std::vector<Z2Vec>& rows) {
    Z2Rref r;
    r.cols = cols;
    for (const auto& row : rows) r.absorb(row);
    return r;
}

namespace {

std::size_t rank_dense(std::size_t n_rows, std::size_t cols,
                       const std::vector<std::pair<std::size_t, std::size_t>>& ones) {
    std::vector<Z2Vec> rows(n_rows, z2_zero(cols));
    for (auto [i, j] : ones) z2_set(rows[i], j, true);
    Z2Rref r;
    r.cols = cols;
    std::size_t rank = 0;
    for (auto& row : rows) rank += r.absorb(std::move(row)) ? 1 : 0;
    return rank;
}

// Column-list elimination: repeatedly pick the column whose lowest unused row
// index is minimal and cancel that row from every other column containing it.
std::size_t rank_sparse(std::size_t n_rows, std::size_t cols,
                        const std::vector<std::pair<std::size_t, std::size_t>>& ones) {
    (void)n_rows;
    std::vector<std::vector<std::size_t>> col(cols);
    for (auto [i, j] : ones) col[j].push_back(i);
    for (auto& c : col) {
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
    }
    auto sym_diff = [](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
        std::vector<std::size_t> out;
        std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
        return out;
    };
    std::map<std::size_t, std::vector<std::size_t>> pivot_cols;  // pivot row -> column content
    std::size_t rank = 0;
    for (std::size_t j = 0; j < cols; ++j) {
        auto cur = std::move(col[j]);
        while (!cur.empty()) {
            std::size_t low = cur.back();
            auto it = pivot_cols.find(low);
            if (it == pivot_cols.end()) {
                pivot_cols.emplace(low, std::move(cur));
                ++rank;
                break;
            }
            cur = sym_diff(cur, it->second);
        }
    }
    return rank;
}

}  // namespace

std::size_t z2_rank(std::size_t rows, std::size_t cols,
                    const std::vector<std::pair<std::size_t, std::size_t>>& ones,
                    std::size_t dense_col_limit) {
    if (rows == 0 || cols == 0) return 0;
    return cols <= dense_col_limit ? rank_dense(rows, cols, ones) : rank_sparse(rows, cols, ones);
}

}  // namespace rmoduli
