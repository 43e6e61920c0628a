#pragma once

#include <set>
#include <string>
#include <vector>

#include "rmoduli/tree.hpp"

namespace rmoduli {

enum class TypeMarker : int { Type1 = 1, Type2 = 2, Type3 = 3 };
enum class Sign : int { Plus = +1, Minus = -1 };

inline Sign flip(Sign s) { return s == Sign::Plus ? Sign::Minus : Sign::Plus; }

// A stable S-tree with its unique equivariant involution, a degeneration-type
// marker and the per-real-vertex planar data: an oriented cyclic order on the
// involution-fixed flags and a choice of one flag from each conjugate pair
// (type 1), nothing (type 2), or a choice of half (type 3).
struct OPlanarTree {
    InvolutionSpec sigma;
    Tree tree;
    TreeInvolution inv;
    TypeMarker marker = TypeMarker::Type1;

    std::vector<std::pair<VertexId, std::vector<FlagId>>> real_cyclic;  // fixed vertex -> cycle
    std::vector<std::pair<VertexId, std::vector<FlagId>>> plus_part;    // fixed vertex -> sorted plus flags
    std::vector<VertexId> half_plus;                                    // type 3 only, sorted

    const std::vector<FlagId>* cycle_of(VertexId v) const;
    const std::vector<FlagId>* plus_of(VertexId v) const;
    std::vector<FlagId>& cycle_mut(VertexId v);
    std::vector<FlagId>& plus_mut(VertexId v);
    bool in_plus(VertexId v, FlagId f) const;

    int n_edges() const { return static_cast<int>(tree.edges().size()); }
    int dim() const { return sigma.n - 3 - n_edges(); }

    bool edge_invariant(FlagId edge_flag) const;        // iota maps the edge to itself
    bool edge_pointwise_fixed(FlagId edge_flag) const;  // both flags fixed
    std::vector<FlagId> invariant_edges() const;        // representative flags, sorted
    std::vector<FlagId> conjugate_edge_pairs() const;   // one flag per pair orbit {e, iota(e)}

    void normalize();  // sort decoration containers
};

struct Violation {
    std::string code;
    std::string message;
};

// Total: returns the list of failed invariants (empty means ok).
std::vector<Violation> validate(const OPlanarTree& t);

// Throws ValidationFailed listing violations when validate() is nonempty.
void require_valid(const OPlanarTree& t);

// Markers the (tree, sigma) pair can carry. Throws NoEquivariantStructure when
// sigma does not extend to the tree.
std::set<TypeMarker> classify_type(const Tree& tree, const InvolutionSpec& sigma);

// Builds the decorated tree, computing the involution. Cycle/plus data is
// given per fixed vertex; validation is the caller's business.
OPlanarTree make_oplanar(const InvolutionSpec& sigma, Tree tree, TypeMarker marker,
                         std::vector<std::pair<VertexId, std::vector<FlagId>>> real_cyclic,
                         std::vector<std::pair<VertexId, std::vector<FlagId>>> plus_part,
                         std::vector<VertexId> half_plus);

// Smooths the real node of an invariant edge; two-valued via the sign.
// A pointwise-fixed edge splices the two cyclic orders (the absorbed cycle is
// reversed and its plus part complemented for Sign::Minus). The type-3 special
// edge yields the type-1 smoothing for Plus and the type-2 one for Minus.
OPlanarTree contract_invariant_edge(const OPlanarTree& t, FlagId edge_flag, Sign s);

// Contracts the orbit {e, iota(e)} of a non-invariant edge; single-valued.
OPlanarTree contract_conjugate_pair(const OPlanarTree& t, FlagId edge_flag);

// Removes a sigma-invariant set of tails, stabilizes, and renumbers the
// remaining labels order-preserving to 1..n'.
OPlanarTree forget_tails(const OPlanarTree& t, const std::vector<int>& drop);

}  // namespace rmoduli
