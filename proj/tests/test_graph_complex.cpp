#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "common.hpp"
#include "rmoduli/errors.hpp"
#include "rmoduli/homology.hpp"

using namespace rmoduli;
using rmoduli::testing::conjugacy_types;
using rmoduli::testing::poset;

namespace {

std::size_t rank_mod2(const IntMatrix& m) {
    std::vector<std::pair<std::size_t, std::size_t>> ones;
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j)
            if (m.at(i, j) % 2 != 0) ones.emplace_back(i, j);
    return z2_rank(m.rows, m.cols, ones);
}

}  // namespace

TEST_CASE("boundary matrix: n=4 id is the circle complex") {
    const auto& p = poset(InvolutionSpec::identity(4));
    IntMatrix m = boundary_matrix(p, 1);
    REQUIRE(m.rows == 3);
    REQUIRE(m.cols == 3);
    for (std::size_t j = 0; j < 3; ++j) {
        int ones = 0;
        for (std::size_t i = 0; i < 3; ++i) ones += (m.at(i, j) == 1);
        CHECK(ones == 2);  // each interval has two distinct endpoint classes
    }
    CHECK(rank_mod2(m) == 2);
    CHECK_THROWS_AS(boundary_matrix(p, 7), DegreeOutOfRange);
}

TEST_CASE("boundary matrix: n=4 (1 2) wall met from both sides") {
    const auto& p = poset(parse_sigma("(1 2)", 4));
    IntMatrix m = boundary_matrix(p, 1);
    REQUIRE(m.rows == 1);
    REQUIRE(m.cols == 1);
    CHECK(m.at(0, 0) == 0);  // multiplicity 2 vanishes mod 2
}

TEST_CASE("del^2 = 0 and column supports match coverings for all n <= 6") {
    for (int n = 3; n <= 6; ++n)
        for (const auto& sigma : conjugacy_types(n)) {
            CAPTURE(n);
            CAPTURE(sigma.text());
            const auto& p = poset(sigma);
            GradedComplex c = build_complex(p, Coeff::Z2);
            CHECK(boundary_squares_to_zero(c));
            // column supports = coverings with odd multiplicity sums
            for (int d = 1; d < c.degrees(); ++d) {
                const IntMatrix& m = c.boundary[static_cast<std::size_t>(d)];
                std::map<std::pair<std::string, std::string>, int> mult;
                for (const auto& cov : p.coverings)
                    if (p.dim_of(cov.upper) == d) mult[{cov.lower, cov.upper}] += cov.mult;
                for (std::size_t i = 0; i < m.rows; ++i)
                    for (std::size_t j = 0; j < m.cols; ++j) {
                        auto key = std::make_pair(c.generators[static_cast<std::size_t>(d) - 1][i],
                                                  c.generators[static_cast<std::size_t>(d)][j]);
                        int total = mult.count(key) ? mult.at(key) : 0;
                        CHECK((m.at(i, j) != 0) == (total % 2 == 1));
                    }
            }
        }
}

TEST_CASE("relation ideal is trivial for |Perm(sigma)| < 4") {
    for (int n = 4; n <= 6; ++n)
        for (const auto& sigma : conjugacy_types(n)) {
            if (sigma.perm_size() >= 4) continue;
            const auto& p = poset(sigma);
            for (int d = 0; d <= n - 3; ++d) CHECK(relation_generators(p, sigma, d).empty());
        }
}

TEST_CASE("relations for n=5 (1 3)(2 4): the three chains are identified") {
    auto sigma = parse_sigma("(1 3)(2 4)", 5);
    const auto& p = poset(sigma);
    auto rel0 = relation_generators(p, sigma, 0);
    // two independent relations among the three dimension-0 classes
    REQUIRE(!rel0.empty());
    std::vector<Z2Vec> rows;
    for (const auto& r : rel0) {
        Z2Vec v = z2_zero(p.classes.at(0).size());
        for (auto [i, c] : r)
            if (c % 2 != 0) z2_set(v, i, true);
        rows.push_back(v);
    }
    CHECK(z2_rref(p.classes.at(0).size(), rows).rank() == 2);
    CHECK(relation_generators(p, sigma, 1).empty());
    CHECK(relation_generators(p, sigma, 2).empty());

    GradedComplex c = build_complex(p, Coeff::Z2);
    CHECK(relations_closed(c));
    GradedComplex q = quotient_complex(c);
    CHECK(q.dim(0) == 1);
    CHECK(q.dim(1) == 2);
    CHECK(q.dim(2) == 2);
}

TEST_CASE("relation regression counts for n=6") {
    // |Perm| = 6, Fix empty: families S-1.1, S-1.2, S-2, S-3
    auto s3 = parse_sigma("(1 2)(3 4)(5 6)", 6);
    const auto& p3 = poset(s3);
    auto r0 = relation_generators(p3, s3, 0);
    auto r1 = relation_generators(p3, s3, 1);
    CHECK(!r0.empty());
    CHECK(!r1.empty());
    MESSAGE("n=6 (1 2)(3 4)(5 6): relation counts d0=", r0.size(), " d1=", r1.size());

    // |Perm| = 4, Fix = {5,6}: families R-1, R-2
    auto s2 = parse_sigma("(1 2)(3 4)", 6);
    const auto& p2 = poset(s2);
    auto q0 = relation_generators(p2, s2, 0);
    auto q1 = relation_generators(p2, s2, 1);
    CHECK(!q0.empty());
    CHECK(!q1.empty());
    MESSAGE("n=6 (1 2)(3 4): relation counts d0=", q0.size(), " d1=", q1.size());
}

TEST_CASE("relations are closed under the boundary for all n <= 6") {
    for (int n = 5; n <= 6; ++n)
        for (const auto& sigma : conjugacy_types(n)) {
            if (sigma.perm_size() < 4) continue;
            CAPTURE(n);
            CAPTURE(sigma.text());
            GradedComplex c = build_complex(poset(sigma), Coeff::Z2);
            CHECK(relations_closed(c));
            GradedComplex q = quotient_complex(c);
            CHECK(boundary_squares_to_zero(q));
        }
}

TEST_CASE("quotient with empty relations is the identity") {
    GradedComplex c = build_complex(poset(InvolutionSpec::identity(5)), Coeff::Z2);
    GradedComplex q = quotient_complex(c);
    CHECK(q.generators == c.generators);
    for (int d = 0; d < c.degrees(); ++d) CHECK(q.boundary[static_cast<std::size_t>(d)] == c.boundary[static_cast<std::size_t>(d)]);
}

TEST_CASE("quotient with full-span relations kills a degree") {
    GradedComplex c = build_complex(poset(InvolutionSpec::identity(4)), Coeff::Z2);
    // artificially span all of degree 0
    c.relations[0] = {{{0, 1}}, {{1, 1}}, {{2, 1}}};
    GradedComplex q = quotient_complex(c);
    CHECK(q.dim(0) == 0);
    CHECK(q.dim(1) == 3);
}

TEST_CASE("homology: paper surfaces") {
    auto check = [](const InvolutionSpec& sigma, std::vector<long long> want, long long chi) {
        CAPTURE(sigma.text());
        HomologySummary h = betti_mod2(build_complex(poset(sigma), Coeff::Z2));
        CHECK(h.betti2 == want);
        CHECK(h.euler == chi);
    };
    check(InvolutionSpec::identity(4), {1, 1}, 0);          // P^1(R)
    check(parse_sigma("(1 2)", 4), {1, 1}, 0);              // P^1(R)
    check(parse_sigma("(1 3)(2 4)", 4), {1, 1}, 0);         // P^1(R)
    check(InvolutionSpec::identity(5), {1, 5, 1}, -3);      // torus, 3 blow-ups
    check(parse_sigma("(1 2)", 5), {1, 3, 1}, -1);          // sphere, 3 blow-ups
    check(parse_sigma("(1 3)(2 4)", 5), {1, 1, 1}, 1);      // RP^2
}

TEST_CASE("matrix exports") {
    const auto& p = poset(InvolutionSpec::identity(4));
    IntMatrix m = boundary_matrix(p, 1);
    auto j = matrix_to_json(m);
    CHECK(j.at("rows") == 3);
    CHECK(j.at("cols") == 3);
    CHECK(j.at("entries").size() == 6);
    auto sms = matrix_to_sms(m);
    CHECK(sms.substr(0, 6) == "3 3 M\n");
    CHECK(sms.find("0 0 0\n") != std::string::npos);
}

TEST_CASE("z-experimental signs square to zero on one-dimensional complexes") {
    const auto& p = poset(InvolutionSpec::identity(4));
    GradedComplex c = build_complex(p, Coeff::ZExperimental);
    CHECK(boundary_squares_to_zero(c));
    HomologySummary h = homology_integer(c);
    CHECK(h.betti2 == std::vector<long long>{1, 1});  // circle over Z: H0 = H1 = Z
    CHECK(h.invariant_factors.empty());
}
