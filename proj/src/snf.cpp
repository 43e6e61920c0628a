#include "rmoduli/snf.hpp"

#include <algorithm>

namespace rmoduli {

IntMatrix IntMatrix::identity(std::size_t k) {
    IntMatrix m = zero(k, k);
    for (std::size_t i = 0; i < k; ++i) m.at(i, i) = 1;
    return m;
}

IntMatrix mul(const IntMatrix& x, const IntMatrix& y) {
    IntMatrix out = IntMatrix::zero(x.rows, y.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t k = 0; k < x.cols; ++k) {
            if (x.at(i, k) == 0) continue;
            for (std::size_t j = 0; j < y.cols; ++j)
                if (y.at(k, j) != 0) out.at(i, j) += x.at(i, k) * y.at(k, j);
        }
    return out;
}

namespace {

void swap_rows(IntMatrix& m, IntMatrix& u, std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < m.cols; ++j) std::swap(m.at(a, j), m.at(b, j));
    for (std::size_t j = 0; j < u.cols; ++j) std::swap(u.at(a, j), u.at(b, j));
}

void swap_cols(IntMatrix& m, IntMatrix& v, std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < m.rows; ++i) std::swap(m.at(i, a), m.at(i, b));
    for (std::size_t i = 0; i < v.rows; ++i) std::swap(v.at(i, a), v.at(i, b));
}

// row[a] -= q * row[b]
void row_axpy(IntMatrix& m, IntMatrix& u, std::size_t a, std::size_t b, const BigInt& q) {
    if (q == 0) return;
    for (std::size_t j = 0; j < m.cols; ++j) m.at(a, j) -= q * m.at(b, j);
    for (std::size_t j = 0; j < u.cols; ++j) u.at(a, j) -= q * u.at(b, j);
}

void col_axpy(IntMatrix& m, IntMatrix& v, std::size_t a, std::size_t b, const BigInt& q) {
    if (q == 0) return;
    for (std::size_t i = 0; i < m.rows; ++i) m.at(i, a) -= q * m.at(i, b);
    for (std::size_t i = 0; i < v.rows; ++i) v.at(i, a) -= q * v.at(i, b);
}

void negate_row(IntMatrix& m, IntMatrix& u, std::size_t a) {
    for (std::size_t j = 0; j < m.cols; ++j) m.at(a, j) = -m.at(a, j);
    for (std::size_t j = 0; j < u.cols; ++j) u.at(a, j) = -u.at(a, j);
}

}  // namespace

SNFResult smith_normal_form(IntMatrix m) {
    SNFResult r;
    r.U = IntMatrix::identity(m.rows);
    r.V = IntMatrix::identity(m.cols);

    std::size_t t = 0;
    while (t < m.rows && t < m.cols) {
        // Smallest-absolute-value pivot in the trailing block.
        std::size_t pi = t, pj = t;
        BigInt best = 0;
        for (std::size_t i = t; i < m.rows; ++i)
            for (std::size_t j = t; j < m.cols; ++j) {
                BigInt v = abs(m.at(i, j));
                if (v != 0 && (best == 0 || v < best)) {
                    best = v;
                    pi = i;
                    pj = j;
                }
            }
        if (best == 0) break;
        swap_rows(m, r.U, t, pi);
        swap_cols(m, r.V, t, pj);
        if (m.at(t, t) < 0) negate_row(m, r.U, t);

        bool dirty = false;
        for (std::size_t i = t + 1; i < m.rows; ++i) {
            BigInt q = m.at(i, t) / m.at(t, t);
            row_axpy(m, r.U, i, t, q);
            if (m.at(i, t) != 0) dirty = true;  // remainder left, pivot will shrink
        }
        for (std::size_t j = t + 1; j < m.cols; ++j) {
            BigInt q = m.at(t, j) / m.at(t, t);
            col_axpy(m, r.V, j, t, q);
            if (m.at(t, j) != 0) dirty = true;
        }
        if (dirty) continue;  // re-pick a smaller pivot in the same block

        // Divisibility: the pivot must divide the whole trailing block.
        bool fixed = true;
        for (std::size_t i = t + 1; i < m.rows && fixed; ++i)
            for (std::size_t j = t + 1; j < m.cols && fixed; ++j)
                if (m.at(i, j) % m.at(t, t) != 0) {
                    row_axpy(m, r.U, t, i, BigInt(-1));  // add row i to row t
                    fixed = false;
                }
        if (!fixed) continue;
        ++t;
    }
    for (std::size_t i = 0; i < t; ++i) r.factors.push_back(m.at(i, i));
    return r;
}

std::size_t int_rank(const IntMatrix& m) { return smith_normal_form(m).factors.size(); }

bool is_diagonal_of(const SNFResult& r, const IntMatrix& original) {
    IntMatrix d = mul(mul(r.U, original), r.V);
    for (std::size_t i = 0; i < d.rows; ++i)
        for (std::size_t j = 0; j < d.cols; ++j) {
            BigInt want = (i == j && i < r.factors.size()) ? r.factors[i] : BigInt(0);
            if (d.at(i, j) != want) return false;
        }
    for (std::size_t i = 0; i + 1 < r.factors.size(); ++i)
        if (r.factors[i + 1] % r.factors[i] != 0) return false;
    for (const auto& f : r.factors)
        if (f <= 0) return false;
    return true;
}

}  // namespace rmoduli
