#pragma once

#include <json.hpp>

#include "rmoduli/enumerate.hpp"
#include "rmoduli/snf.hpp"
#include "rmoduli/z2.hpp"

namespace rmoduli {

enum class Coeff { Z2, ZExperimental };

// Sparse integer chain over the generators of one degree, sorted by index.
using ChainVec = std::vector<std::pair<std::size_t, long long>>;

// Chain groups: degree d is generated by the classes of dimension d
// (|E| = n - d - 3), modulo the relation ideal in degree d.
struct GradedComplex {
    InvolutionSpec sigma;
    Coeff coeff = Coeff::Z2;
    std::vector<std::vector<std::string>> generators;  // [d] -> encodings, sorted
    std::vector<std::vector<ChainVec>> relations;      // [d] -> ideal generators
    std::vector<IntMatrix> boundary;                   // [d]: rows gen(d-1) x cols gen(d); [0] empty

    int degrees() const { return static_cast<int>(generators.size()); }
    std::size_t dim(int d) const { return generators[static_cast<std::size_t>(d)].size(); }
};

// Boundary of degree d assembled from covering multiplicities; over
// ZExperimental entries get signs from per-class orientation bits.
IntMatrix boundary_matrix(const StrataPoset& p, int d, Coeff coeff = Coeff::Z2);

// Ideal generators in degree d (families R-1/R-2 when Fix(sigma) is nonempty,
// S-1.1/S-1.2/S-2/S-3 when it is empty); empty when |Perm(sigma)| < 4.
std::vector<ChainVec> relation_generators(const StrataPoset& p, const InvolutionSpec& sigma, int d);

GradedComplex build_complex(const StrataPoset& p, Coeff coeff = Coeff::Z2);

bool boundary_squares_to_zero(const GradedComplex& c);
// Boundary image of each degree-d relation lies in the span of the
// degree-(d-1) relations (over Z2).
bool relations_closed(const GradedComplex& c);

// Rewrites the complex in a basis of the quotient by the relation span (Z2).
// Throws RelationsNotClosedUnderBoundary when the ideal is not a subcomplex.
GradedComplex quotient_complex(const GradedComplex& c);

nlohmann::json matrix_to_json(const IntMatrix& m);
std::string matrix_to_sms(const IntMatrix& m);

}  // namespace rmoduli
