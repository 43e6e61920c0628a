#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "rmoduli/enumerate.hpp"
#include "rmoduli/snf.hpp"

namespace rmoduli {

// A wall crossing: dir 0 runs from the wall's Plus-smoothing side to its
// Minus-smoothing side (signs taken on the canonical representative), dir 1
// is the reverse path.
struct Crossing {
    std::string wall;
    int dir = 0;
    std::string from, to;

    bool operator==(const Crossing&) const = default;
};

struct GroupPresentation {
    bool group_form = false;
    std::vector<std::string> objects;        // top strata; group form: the basepoint
    std::vector<Crossing> generators;        // group form: loops named by their wall
    std::vector<std::vector<int>> relators;  // signed 1-based generator indices

    nlohmann::json to_json() const;
    std::string to_gap() const;  // group form only
};

// Groupoid form: one object per top stratum, two crossings per wall with the
// relator <g_ij><g_ji>, and one 4-letter relator per codimension-two stratum
// with two invariant edges (conjugate-pair strata contribute none).
GroupPresentation build_groupoid(const StrataPoset& p);

// Every relator composes as a loop (sources/targets match).
bool relators_well_typed(const GroupPresentation& g);

// Kills a spanning tree of the wall-adjacency graph and applies basic Tietze
// moves. seed != 0 randomizes the tree choice (result is isomorphic).
// Throws DisconnectedSpace listing components when the top strata do not form
// a connected graph; with restrict_to_component the basepoint's component is
// collapsed instead.
GroupPresentation collapse_to_group(const GroupPresentation& g, const std::string& basepoint,
                                    unsigned seed = 0, bool restrict_to_component = false);

struct AbelianInvariants {
    long long free_rank = 0;
    std::vector<BigInt> torsion;  // invariant factors > 1

    bool operator==(const AbelianInvariants&) const = default;
    std::string text() const;
};

AbelianInvariants abelianization(const GroupPresentation& g);  // group form

}  // namespace rmoduli
