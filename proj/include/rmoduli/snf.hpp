#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <vector>

namespace rmoduli {

using BigInt = boost::multiprecision::cpp_int;

struct IntMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<BigInt> a;  // row-major

    static IntMatrix zero(std::size_t r, std::size_t c) { return {r, c, std::vector<BigInt>(r * c)}; }
    static IntMatrix identity(std::size_t k);
    BigInt& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const BigInt& at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
    bool operator==(const IntMatrix&) const = default;
};

IntMatrix mul(const IntMatrix& x, const IntMatrix& y);

// U * m * V = diag(factors, then zeros), d1 | d2 | ..., all di > 0.
struct SNFResult {
    std::vector<BigInt> factors;
    IntMatrix U, V;  // unimodular certificates
};

SNFResult smith_normal_form(IntMatrix m);

// Rank over Q (number of invariant factors).
std::size_t int_rank(const IntMatrix& m);

bool is_diagonal_of(const SNFResult& r, const IntMatrix& original);

}  // namespace rmoduli
