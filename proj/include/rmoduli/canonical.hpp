#pragma once

#include <string>
#include <vector>

#include "rmoduli/oplanar.hpp"

namespace rmoduli {

// One stratum of the moduli space: a decorated tree up to per-real-vertex
// orientation reversal (type 1) / half swap (type 3).
struct UPlanarClass {
    std::string encoding;        // lowercase hex, equal iff u-equivalent
    OPlanarTree representative;  // canonically renumbered and oriented
};

// How the input maps onto the canonical representative.
struct CanonicalCert {
    std::vector<std::pair<FlagId, FlagId>> flag_index;      // input flag id -> canonical flag id
    std::vector<std::pair<VertexId, VertexId>> vertex_index;
    std::vector<VertexId> reversed_vertices;                // input fixed vertices emitted reversed

    FlagId flag(FlagId in) const;
    VertexId vertex(VertexId in) const;
    bool reversed(VertexId in) const;
};

// Deterministic canonical form. Roots at the vertex of tail 1, orders children
// by minimal descendant tail, and per fixed vertex takes the lexicographically
// smaller of the rotation-minimal (cycle, plus bits) and its reversed,
// complemented variant. Throws ValidationFailed on invalid input.
UPlanarClass canonicalize(const OPlanarTree& t, CanonicalCert* cert = nullptr);

// |S| - 3 - |E|.
int dimension(const UPlanarClass& c);

std::string to_hex(const std::vector<unsigned char>& bytes);

}  // namespace rmoduli
