#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "rmoduli/involution.hpp"

namespace rmoduli {

using VertexId = int;
using FlagId = int;

// A flag (half edge). Tails are self-mated and carry a label; edge flags have
// mate != id and tail == 0.
struct Flag {
    FlagId id = -1;
    VertexId vertex = -1;
    FlagId mate = -1;
    int tail = 0;

    bool is_tail() const { return mate == id; }
    bool operator==(const Flag&) const = default;
};

// S-tree: vertices plus flags with a mate involution; tails labeled 1..n.
struct Tree {
    std::vector<VertexId> vertices;  // sorted, unique
    std::vector<Flag> flags;         // sorted by id, unique ids

    const Flag& flag(FlagId id) const;
    Flag& flag_mut(FlagId id);
    bool has_vertex(VertexId v) const;

    std::vector<FlagId> flags_at(VertexId v) const;
    int valence(VertexId v) const;
    // One representative flag per edge (the smaller id of the mated pair).
    std::vector<FlagId> edges() const;
    std::vector<FlagId> tails() const;
    FlagId tail_with_label(int label) const;  // -1 if absent
    VertexId far_vertex(FlagId edge_flag) const;

    // Tail labels strictly beyond f: across the edge for edge flags, {label} for tails.
    std::vector<int> far_tails(FlagId f) const;
    int min_far_tail(FlagId f) const;

    bool connected() const;
    void normalize();  // sort containers by id

    bool operator==(const Tree&) const = default;
};

// Unique tail-compatible automorphism extension of sigma, when it exists.
struct TreeInvolution {
    std::vector<std::pair<VertexId, VertexId>> vertex_map;  // sorted by first
    std::vector<std::pair<FlagId, FlagId>> flag_map;        // sorted by first

    VertexId v(VertexId x) const;
    FlagId f(FlagId x) const;
    bool vertex_fixed(VertexId x) const { return v(x) == x; }
    bool flag_fixed(FlagId x) const { return f(x) == x; }
    std::vector<VertexId> fixed_vertices() const;
};

// Stable S-trees admit at most one automorphism inducing sigma on tails;
// returns it, or nullopt when none exists.
std::optional<TreeInvolution> find_involution(const Tree& tree, const InvolutionSpec& sigma);

// Structural checks shared by validate(): mate involutive, tails labeled
// bijectively by 1..n, connected with |E| = |V| - 1, valence >= 3.
std::vector<std::string> check_tree_structure(const Tree& tree, const InvolutionSpec& sigma);

}  // namespace rmoduli
