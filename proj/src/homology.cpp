#include "rmoduli/homology.hpp"

#include <sstream>

#include "rmoduli/errors.hpp"
#include "rmoduli/z2.hpp"

namespace rmoduli {

namespace {

std::size_t rank_mod2(const IntMatrix& m) {
    std::vector<std::pair<std::size_t, std::size_t>> ones;
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j)
            if (m.at(i, j) % 2 != 0) ones.emplace_back(i, j);
    return z2_rank(m.rows, m.cols, ones);
}

}  // namespace

nlohmann::json HomologySummary::to_json() const {
    nlohmann::json j;
    j["betti2"] = betti2;
    j["euler"] = euler;
    nlohmann::json f = nlohmann::json::object();
    for (const auto& [d, fs] : invariant_factors) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& x : fs) arr.push_back(x.str());
        f[std::to_string(d)] = arr;
    }
    j["invariant_factors"] = f;
    return j;
}

std::string HomologySummary::to_text() const {
    std::ostringstream os;
    os << "degree  betti2\n";
    for (std::size_t d = 0; d < betti2.size(); ++d) os << "  " << d << "     " << betti2[d] << "\n";
    os << "euler   " << euler << "\n";
    for (const auto& [d, fs] : invariant_factors) {
        os << "torsion H_" << d << ":";
        for (const auto& x : fs) os << " Z/" << x.str();
        os << "\n";
    }
    return os.str();
}

HomologySummary betti_mod2(const GradedComplex& input) {
    GradedComplex q = quotient_complex(input);
    if (!boundary_squares_to_zero(q))
        throw ComplexAxiomViolated("del^2 != 0 on the (quotiented) complex");

    int top = q.degrees() - 1;
    std::vector<std::size_t> rank(static_cast<std::size_t>(top) + 2, 0);
    for (int d = 1; d <= top; ++d) rank[static_cast<std::size_t>(d)] = rank_mod2(q.boundary[static_cast<std::size_t>(d)]);

    HomologySummary h;
    long long chi_dims = 0, chi_betti = 0;
    for (int d = 0; d <= top; ++d) {
        long long dim = static_cast<long long>(q.dim(d));
        long long b = dim - static_cast<long long>(rank[static_cast<std::size_t>(d)]) -
                      static_cast<long long>(rank[static_cast<std::size_t>(d) + 1]);
        h.betti2.push_back(b);
        long long s = (d % 2 == 0) ? 1 : -1;
        chi_dims += s * dim;
        chi_betti += s * b;
    }
    if (chi_dims != chi_betti)
        throw ComplexAxiomViolated("Euler characteristic mismatch between chain dims and bettis");
    h.euler = chi_betti;
    return h;
}

HomologySummary homology_integer(const GradedComplex& c) {
    for (const auto& r : c.relations)
        if (!r.empty()) throw Error("homology_integer: relation ideal must be trivial");
    if (!boundary_squares_to_zero(c)) throw ComplexAxiomViolated("del^2 != 0 over Z");

    int top = c.degrees() - 1;
    std::vector<std::vector<BigInt>> factors(static_cast<std::size_t>(top) + 2);
    std::vector<std::size_t> rank(static_cast<std::size_t>(top) + 2, 0);
    for (int d = 1; d <= top; ++d) {
        auto snf = smith_normal_form(c.boundary[static_cast<std::size_t>(d)]);
        rank[static_cast<std::size_t>(d)] = snf.factors.size();
        factors[static_cast<std::size_t>(d)] = snf.factors;
    }
    HomologySummary h;
    long long chi = 0;
    for (int d = 0; d <= top; ++d) {
        long long dim = static_cast<long long>(c.dim(d));
        long long free_rank = dim - static_cast<long long>(rank[static_cast<std::size_t>(d)]) -
                              static_cast<long long>(rank[static_cast<std::size_t>(d) + 1]);
        // H_d torsion comes from the invariant factors of del_{d+1}
        std::vector<BigInt> tors;
        for (const auto& f : factors[static_cast<std::size_t>(d) + 1])
            if (f > 1) tors.push_back(f);
        if (!tors.empty()) h.invariant_factors[d] = tors;
        // betti2 over Z2 of the integer homology: free rank + 2-torsion counts
        long long two_tors_here = 0, two_tors_below = 0;
        for (const auto& f : factors[static_cast<std::size_t>(d) + 1])
            if (f % 2 == 0) ++two_tors_here;
        if (d >= 1)
            for (const auto& f : factors[static_cast<std::size_t>(d)])
                if (f % 2 == 0) ++two_tors_below;
        h.betti2.push_back(free_rank + two_tors_here + two_tors_below);
        chi += (d % 2 == 0 ? 1 : -1) * dim;
    }
    h.euler = chi;
    return h;
}

}  // namespace rmoduli
