#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "rmoduli/snf.hpp"
#include "rmoduli/z2.hpp"

using namespace rmoduli;

namespace {

IntMatrix from_rows(std::vector<std::vector<long long>> rows) {
    IntMatrix m = IntMatrix::zero(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m.at(i, j) = rows[i][j];
    return m;
}

std::size_t rank_mod2(const IntMatrix& m, std::size_t dense_limit = 5000) {
    std::vector<std::pair<std::size_t, std::size_t>> ones;
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j)
            if (m.at(i, j) % 2 != 0) ones.emplace_back(i, j);
    return z2_rank(m.rows, m.cols, ones, dense_limit);
}

}  // namespace

TEST_CASE("smith normal form: fixed examples") {
    auto id3 = smith_normal_form(IntMatrix::identity(3));
    CHECK(id3.factors == std::vector<BigInt>{1, 1, 1});
    CHECK(is_diagonal_of(id3, IntMatrix::identity(3)));

    auto z = smith_normal_form(IntMatrix::zero(3, 2));
    CHECK(z.factors.empty());

    // d1 = gcd of entries = 2; d1*d2 = |det| = 8
    auto m = from_rows({{2, 4}, {6, 8}});
    auto r = smith_normal_form(m);
    CHECK(r.factors == std::vector<BigInt>{2, 4});
    CHECK(is_diagonal_of(r, m));
}

TEST_CASE("smith normal form: certificates are unimodular on random matrices") {
    std::mt19937_64 rng(20240811);
    std::uniform_int_distribution<int> dim(1, 5), val(-9, 9);
    for (int it = 0; it < 500; ++it) {
        IntMatrix m = IntMatrix::zero(dim(rng), dim(rng));
        for (auto& x : m.a) x = val(rng);
        auto r = smith_normal_form(m);
        CHECK(is_diagonal_of(r, m));
        // unimodularity: the SNF of each certificate is all ones
        auto su = smith_normal_form(r.U);
        auto sv = smith_normal_form(r.V);
        CHECK(su.factors == std::vector<BigInt>(r.U.rows, BigInt(1)));
        CHECK(sv.factors == std::vector<BigInt>(r.V.rows, BigInt(1)));
    }
}

TEST_CASE("2x2 invariant factors against gcd/det") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> val(-20, 20);
    for (int it = 0; it < 2000; ++it) {
        IntMatrix m = IntMatrix::zero(2, 2);
        for (auto& x : m.a) x = val(rng);
        BigInt det = m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0);
        BigInt g = gcd(gcd(abs(m.at(0, 0)), abs(m.at(0, 1))), gcd(abs(m.at(1, 0)), abs(m.at(1, 1))));
        auto r = smith_normal_form(m);
        if (det != 0) {
            REQUIRE(r.factors.size() == 2);
            CHECK(r.factors[0] == g);
            CHECK(r.factors[0] * r.factors[1] == abs(det));
        } else if (g != 0) {
            REQUIRE(r.factors.size() == 1);
            CHECK(r.factors[0] == g);
        } else {
            CHECK(r.factors.empty());
        }
    }
}

TEST_CASE("mod-2 rank vs integer rank") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> dim(1, 6), val(-6, 6);
    for (int it = 0; it < 1000; ++it) {
        IntMatrix m = IntMatrix::zero(dim(rng), dim(rng));
        for (auto& x : m.a) x = val(rng);
        auto snf = smith_normal_form(m);
        std::size_t r2 = rank_mod2(m);
        CHECK(r2 <= snf.factors.size());
        bool any_even = false;
        for (const auto& f : snf.factors) any_even |= (f % 2 == 0);
        if (!any_even) CHECK(r2 == snf.factors.size());
    }
}

TEST_CASE("dense and sparse Z2 elimination agree") {
    std::mt19937_64 rng(4242);
    std::uniform_int_distribution<int> dim(1, 40);
    std::bernoulli_distribution bit(0.2);
    for (int it = 0; it < 200; ++it) {
        std::size_t r = dim(rng), c = dim(rng);
        std::vector<std::pair<std::size_t, std::size_t>> ones;
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j)
                if (bit(rng)) ones.emplace_back(i, j);
        CHECK(z2_rank(r, c, ones, 5000) == z2_rank(r, c, ones, 0));  // force sparse path
    }
}

TEST_CASE("z2 rref membership") {
    // span of {1100, 0110} contains 1010 but not 0001
    std::vector<Z2Vec> rows;
    Z2Vec a = z2_zero(4), b = z2_zero(4);
    z2_set(a, 0, true);
    z2_set(a, 1, true);
    z2_set(b, 1, true);
    z2_set(b, 2, true);
    rows = {a, b};
    auto r = z2_rref(4, rows);
    CHECK(r.rank() == 2);
    Z2Vec c = z2_zero(4);
    z2_set(c, 0, true);
    z2_set(c, 2, true);
    CHECK(r.contains(c));
    Z2Vec d = z2_zero(4);
    z2_set(d, 3, true);
    CHECK_FALSE(r.contains(d));
}
