#pragma once

#include <json.hpp>
#include <map>
#include <string>
#include <vector>

#include "rmoduli/graph_complex.hpp"
#include "rmoduli/snf.hpp"

namespace rmoduli {

struct HomologySummary {
    std::vector<long long> betti2;                      // index = degree
    long long euler = 0;                                // = alternating chain dims = alternating bettis
    std::map<int, std::vector<BigInt>> invariant_factors;  // torsion factors (> 1), Z mode only

    nlohmann::json to_json() const;
    std::string to_text() const;
};

// Mod-2 Betti numbers of the (quotiented) complex. A nontrivial relation
// ideal is quotiented out first. Throws ComplexAxiomViolated when del^2 != 0
// or the two Euler computations disagree; quotienting may throw
// RelationsNotClosedUnderBoundary.
HomologySummary betti_mod2(const GradedComplex& c);

// Integer homology of a relation-free complex with verified del^2 = 0
// (Z-experimental route): fills invariant_factors from SNF.
HomologySummary homology_integer(const GradedComplex& c);

}  // namespace rmoduli
