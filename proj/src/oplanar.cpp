#include "rmoduli/oplanar.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>

#include "rmoduli/errors.hpp"

namespace rmoduli {

namespace {

template <typename K, typename V>
const V* lookup(const std::vector<std::pair<K, V>>& m, K key) {
    for (const auto& [k, v] : m)
        if (k == key) return &v;
    return nullptr;
}

template <typename K, typename V>
V& lookup_mut(std::vector<std::pair<K, V>>& m, K key) {
    for (auto& [k, v] : m)
        if (k == key) return v;
    m.emplace_back(key, V{});
    return m.back().second;
}

void erase_value(std::vector<FlagId>& xs, FlagId x) {
    xs.erase(std::remove(xs.begin(), xs.end(), x), xs.end());
}

// Merges the far endpoint of the edge into the vertex of f_base; the two edge
// flags disappear, every other id survives.
Tree contract_edge_raw(const Tree& tr, FlagId f_base) {
    const Flag fb = tr.flag(f_base);
    FlagId f_far = fb.mate;
    VertexId keep = fb.vertex;
    VertexId gone = tr.flag(f_far).vertex;
    Tree out;
    for (VertexId v : tr.vertices)
        if (v != gone) out.vertices.push_back(v);
    for (const Flag& f : tr.flags) {
        if (f.id == f_base || f.id == f_far) continue;
        Flag g = f;
        if (g.vertex == gone) g.vertex = keep;
        out.flags.push_back(g);
    }
    out.normalize();
    return out;
}

// Vertices on flag e's side of the edge {e, mate(e)}.
std::set<VertexId> edge_side(const Tree& tr, FlagId e) {
    std::set<VertexId> side;
    FlagId me = tr.flag(e).mate;
    std::vector<VertexId> stack{tr.flag(e).vertex};
    side.insert(stack.back());
    while (!stack.empty()) {
        VertexId v = stack.back();
        stack.pop_back();
        for (FlagId g : tr.flags_at(v)) {
            if (g == e || g == me) continue;
            const Flag& gf = tr.flag(g);
            if (gf.is_tail()) continue;
            VertexId w = tr.flag(gf.mate).vertex;
            if (side.insert(w).second) stack.push_back(w);
        }
    }
    return side;
}

}  // namespace

const std::vector<FlagId>* OPlanarTree::cycle_of(VertexId v) const { return lookup(real_cyclic, v); }
const std::vector<FlagId>* OPlanarTree::plus_of(VertexId v) const { return lookup(plus_part, v); }
std::vector<FlagId>& OPlanarTree::cycle_mut(VertexId v) { return lookup_mut(real_cyclic, v); }
std::vector<FlagId>& OPlanarTree::plus_mut(VertexId v) { return lookup_mut(plus_part, v); }

bool OPlanarTree::in_plus(VertexId v, FlagId f) const {
    const auto* p = plus_of(v);
    return p && std::find(p->begin(), p->end(), f) != p->end();
}

bool OPlanarTree::edge_invariant(FlagId edge_flag) const {
    const Flag& f = tree.flag(edge_flag);
    if (f.is_tail()) return false;
    FlagId a = inv.f(f.id), b = inv.f(f.mate);
    return (a == f.id && b == f.mate) || (a == f.mate && b == f.id);
}

bool OPlanarTree::edge_pointwise_fixed(FlagId edge_flag) const {
    const Flag& f = tree.flag(edge_flag);
    if (f.is_tail()) return false;
    return inv.flag_fixed(f.id) && inv.flag_fixed(f.mate);
}

std::vector<FlagId> OPlanarTree::invariant_edges() const {
    std::vector<FlagId> out;
    for (FlagId e : tree.edges())
        if (edge_invariant(e)) out.push_back(e);
    return out;
}

std::vector<FlagId> OPlanarTree::conjugate_edge_pairs() const {
    std::vector<FlagId> out;
    std::set<FlagId> seen;
    for (FlagId e : tree.edges()) {
        if (edge_invariant(e) || seen.count(e)) continue;
        FlagId conj_rep = std::min(inv.f(e), inv.f(tree.flag(e).mate));
        seen.insert(e);
        seen.insert(conj_rep);
        out.push_back(e);
    }
    return out;
}

void OPlanarTree::normalize() {
    tree.normalize();
    std::sort(real_cyclic.begin(), real_cyclic.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::sort(plus_part.begin(), plus_part.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [v, p] : plus_part) std::sort(p.begin(), p.end());
    std::sort(half_plus.begin(), half_plus.end());
}

std::set<TypeMarker> classify_type(const Tree& tree, const InvolutionSpec& sigma) {
    auto inv = find_involution(tree, sigma);
    if (!inv) throw NoEquivariantStructure("no equivariant involution for sigma = " + sigma.text());
    auto fixed = inv->fixed_vertices();
    std::set<TypeMarker> out;
    if (!fixed.empty()) {
        out.insert(TypeMarker::Type1);
        bool any_fixed_flag = false;
        for (const auto& [a, b] : inv->flag_map) any_fixed_flag |= (a == b);
        if (fixed.size() == 1 && !any_fixed_flag && sigma.fixed_point_free())
            out.insert(TypeMarker::Type2);
    } else if (sigma.fixed_point_free()) {
        out.insert(TypeMarker::Type3);
    }
    return out;
}

OPlanarTree make_oplanar(const InvolutionSpec& sigma, Tree tree, TypeMarker marker,
                         std::vector<std::pair<VertexId, std::vector<FlagId>>> real_cyclic,
                         std::vector<std::pair<VertexId, std::vector<FlagId>>> plus_part,
                         std::vector<VertexId> half_plus) {
    auto inv = find_involution(tree, sigma);
    if (!inv) throw NoEquivariantStructure("no equivariant involution for sigma = " + sigma.text());
    OPlanarTree t;
    t.sigma = sigma;
    t.tree = std::move(tree);
    t.inv = std::move(*inv);
    t.marker = marker;
    t.real_cyclic = std::move(real_cyclic);
    t.plus_part = std::move(plus_part);
    t.half_plus = std::move(half_plus);
    t.normalize();
    return t;
}

std::vector<Violation> validate(const OPlanarTree& t) {
    std::vector<Violation> out;
    auto bad = [&](std::string code, std::string msg) { out.push_back({std::move(code), std::move(msg)}); };

    for (auto& msg : check_tree_structure(t.tree, t.sigma)) {
        std::string code = msg.substr(0, msg.find(':'));
        bad(code, msg);
    }
    if (!out.empty()) return out;

    auto inv = find_involution(t.tree, t.sigma);
    if (!inv) {
        bad("involution", "sigma does not extend to the tree");
        return out;
    }
    if (inv->flag_map != t.inv.flag_map || inv->vertex_map != t.inv.vertex_map) {
        bad("involution", "stored involution differs from the equivariant extension");
        return out;
    }

    auto fixed_vertices = t.inv.fixed_vertices();
    std::set<VertexId> fixed_set(fixed_vertices.begin(), fixed_vertices.end());

    switch (t.marker) {
        case TypeMarker::Type1: {
            if (fixed_vertices.empty()) bad("type1", "no iota-fixed vertex");
            if (!fixed_vertices.empty()) {
                std::set<VertexId> seen{fixed_vertices.front()};
                std::vector<VertexId> stack{fixed_vertices.front()};
                while (!stack.empty()) {
                    VertexId v = stack.back();
                    stack.pop_back();
                    for (FlagId g : t.tree.flags_at(v)) {
                        if (t.tree.flag(g).is_tail()) continue;
                        VertexId w = t.tree.far_vertex(g);
                        if (fixed_set.count(w) && seen.insert(w).second) stack.push_back(w);
                    }
                }
                if (seen.size() != fixed_set.size()) bad("type1", "fixed vertices not connected");
            }
            for (FlagId e : t.tree.edges()) {
                VertexId a = t.tree.flag(e).vertex, b = t.tree.far_vertex(e);
                if (fixed_set.count(a) && fixed_set.count(b) && !t.edge_pointwise_fixed(e))
                    bad("type1", "edge between fixed vertices not pointwise fixed");
            }
            if (!t.half_plus.empty()) bad("type1", "half_plus present on a type-1 tree");
            for (VertexId v : t.tree.vertices) {
                bool fixed = fixed_set.count(v) > 0;
                const auto* cyc = t.cycle_of(v);
                const auto* plus = t.plus_of(v);
                if (!fixed) {
                    if (cyc) bad("oplanar", "cycle on non-fixed vertex " + std::to_string(v));
                    if (plus) bad("oplanar", "plus part on non-fixed vertex " + std::to_string(v));
                    continue;
                }
                std::vector<FlagId> real_here, conj_here;
                for (FlagId g : t.tree.flags_at(v))
                    (t.inv.flag_fixed(g) ? real_here : conj_here).push_back(g);
                std::sort(real_here.begin(), real_here.end());
                std::vector<FlagId> cyc_sorted = cyc ? *cyc : std::vector<FlagId>{};
                std::sort(cyc_sorted.begin(), cyc_sorted.end());
                if (cyc_sorted != real_here)
                    bad("oplanar", "cycle at vertex " + std::to_string(v) + " is not its set of fixed flags");
                std::set<FlagId> plus_set;
                if (plus) plus_set.insert(plus->begin(), plus->end());
                for (FlagId g : plus_set)
                    if (t.tree.flag(g).vertex != v || t.inv.flag_fixed(g))
                        bad("oplanar", "plus part at vertex " + std::to_string(v) + " contains an invalid flag");
                for (FlagId g : conj_here) {
                    if (plus_set.count(g) + plus_set.count(t.inv.f(g)) != 1) {
                        bad("oplanar", "plus part at vertex " + std::to_string(v) +
                                           " does not pick one flag per conjugate pair");
                        break;
                    }
                }
            }
            break;
        }
        case TypeMarker::Type2: {
            if (!t.sigma.fixed_point_free()) bad("type2", "requires Fix(sigma) to be empty");
            if (fixed_vertices.size() != 1) bad("type2", "requires exactly one iota-fixed vertex");
            for (const auto& [a, b] : t.inv.flag_map)
                if (a == b) {
                    bad("type2", "iota-fixed flag present");
                    break;
                }
            if (!t.real_cyclic.empty() || !t.plus_part.empty() || !t.half_plus.empty())
                bad("type2", "type-2 trees carry no planar data");
            break;
        }
        case TypeMarker::Type3: {
            if (!t.sigma.fixed_point_free()) bad("type3", "requires Fix(sigma) to be empty");
            if (!fixed_vertices.empty()) bad("type3", "iota-fixed vertex present");
            std::vector<FlagId> special;
            for (FlagId e : t.tree.edges())
                if (t.edge_invariant(e)) special.push_back(e);
            if (special.size() != 1) {
                bad("type3", "expected exactly one invariant edge, found " + std::to_string(special.size()));
            } else if (t.edge_pointwise_fixed(special.front())) {
                bad("type3", "special edge must have swapped flags");
            } else {
                auto side = edge_side(t.tree, special.front());
                std::set<VertexId> half(t.half_plus.begin(), t.half_plus.end());
                std::set<VertexId> other;
                for (VertexId v : t.tree.vertices)
                    if (!side.count(v)) other.insert(v);
                if (half != side && half != other)
                    bad("type3", "half_plus is not one side of the special edge");
            }
            if (!t.real_cyclic.empty() || !t.plus_part.empty())
                bad("type3", "type-3 trees carry no cycle/plus data");
            break;
        }
    }
    return out;
}

void require_valid(const OPlanarTree& t) {
    auto v = validate(t);
    if (v.empty()) return;
    std::string msg = "invalid o-planar tree:";
    for (const auto& x : v) msg += " [" + x.code + "] " + x.message + ";";
    throw ValidationFailed(msg);
}

OPlanarTree contract_invariant_edge(const OPlanarTree& t, FlagId edge_flag, Sign s) {
    const Flag f1 = t.tree.flag(edge_flag);
    if (f1.is_tail() || !t.edge_invariant(edge_flag))
        throw NotInvariantEdge("edge is not invariant under the tree involution");
    FlagId f2 = f1.mate;
    VertexId keep = f1.vertex;
    VertexId gone = t.tree.flag(f2).vertex;

    OPlanarTree out;
    out.sigma = t.sigma;
    out.tree = contract_edge_raw(t.tree, edge_flag);

    if (t.edge_pointwise_fixed(edge_flag)) {
        // Real node between two circles of real points: splice the absorbed
        // cycle into the base cycle at the edge position. Sign::Minus absorbs
        // it reversed, with its plus part complemented.
        out.marker = TypeMarker::Type1;
        const auto& base_cyc = *t.cycle_of(keep);
        const auto& far_cyc = *t.cycle_of(gone);
        std::vector<FlagId> seq;
        {
            auto it = std::find(far_cyc.begin(), far_cyc.end(), f2);
            assert(it != far_cyc.end());
            std::size_t k = static_cast<std::size_t>(it - far_cyc.begin());
            for (std::size_t i = 1; i < far_cyc.size(); ++i)
                seq.push_back(far_cyc[(k + i) % far_cyc.size()]);
            if (s == Sign::Minus) std::reverse(seq.begin(), seq.end());
        }
        std::vector<FlagId> merged;
        for (FlagId g : base_cyc) {
            if (g == edge_flag)
                merged.insert(merged.end(), seq.begin(), seq.end());
            else
                merged.push_back(g);
        }
        std::vector<FlagId> merged_plus;
        if (const auto* p = t.plus_of(keep)) merged_plus = *p;
        if (s == Sign::Plus) {
            if (const auto* p = t.plus_of(gone)) merged_plus.insert(merged_plus.end(), p->begin(), p->end());
        } else {
            for (FlagId g : t.tree.flags_at(gone)) {
                if (g == f2 || t.inv.flag_fixed(g)) continue;
                if (!t.in_plus(gone, g)) merged_plus.push_back(g);
            }
        }
        for (const auto& [v, c] : t.real_cyclic)
            if (v != keep && v != gone) out.real_cyclic.emplace_back(v, c);
        for (const auto& [v, p] : t.plus_part)
            if (v != keep && v != gone) out.plus_part.emplace_back(v, p);
        out.real_cyclic.emplace_back(keep, merged);
        out.plus_part.emplace_back(keep, merged_plus);
    } else {
        // Type-3 special edge. Plus: the solitary node becomes a real circle
        // with no marked real points; Minus: the real part vanishes.
        assert(t.marker == TypeMarker::Type3);
        if (s == Sign::Plus) {
            out.marker = TypeMarker::Type1;
            std::set<VertexId> plus_half(t.half_plus.begin(), t.half_plus.end());
            std::vector<FlagId> plus;
            for (const Flag& g : t.tree.flags) {
                if (g.id == edge_flag || g.id == f2) continue;
                if ((g.vertex == keep || g.vertex == gone) && plus_half.count(g.vertex))
                    plus.push_back(g.id);
            }
            out.real_cyclic.emplace_back(keep, std::vector<FlagId>{});
            out.plus_part.emplace_back(keep, plus);
        } else {
            out.marker = TypeMarker::Type2;
        }
    }

    auto inv = find_involution(out.tree, out.sigma);
    assert(inv);
    out.inv = std::move(*inv);
    out.normalize();
    return out;
}

OPlanarTree contract_conjugate_pair(const OPlanarTree& t, FlagId edge_flag) {
    const Flag f1 = t.tree.flag(edge_flag);
    if (f1.is_tail()) throw InvariantEdge("not an edge flag");
    if (t.edge_invariant(edge_flag))
        throw InvariantEdge("edge is invariant; use contract_invariant_edge");
    FlagId f2 = f1.mate;
    FlagId g1 = t.inv.f(f1.id), g2 = t.inv.f(f2);

    OPlanarTree out;
    out.sigma = t.sigma;
    out.marker = t.marker;

    VertexId va = f1.vertex, vb = t.tree.flag(f2).vertex;
    bool a_fixed = t.inv.vertex_fixed(va), b_fixed = t.inv.vertex_fixed(vb);

    FlagId base = a_fixed ? edge_flag : (b_fixed ? f2 : (va <= vb ? edge_flag : f2));
    Tree mid = contract_edge_raw(t.tree, base);
    FlagId cbase;
    if (a_fixed || b_fixed) {
        VertexId vfix = a_fixed ? va : vb;
        cbase = (mid.flag(g1).vertex == vfix) ? g1 : g2;
    } else {
        cbase = (mid.flag(g1).vertex <= mid.flag(g2).vertex) ? g1 : g2;
    }
    out.tree = contract_edge_raw(mid, cbase);

    if ((a_fixed || b_fixed) && t.marker == TypeMarker::Type1) {
        // Conjugate components absorbed into a real vertex: their flags land
        // on the side holding the corresponding edge flag.
        VertexId vfix = a_fixed ? va : vb;
        FlagId at_fix = a_fixed ? f1.id : f2;
        FlagId at_fix_conj = t.inv.f(at_fix);
        bool side_plus = t.in_plus(vfix, at_fix);
        VertexId w = a_fixed ? vb : va;
        VertexId wbar = t.inv.v(w);
        FlagId drop_w = a_fixed ? f2 : edge_flag;
        FlagId drop_wbar = t.inv.f(drop_w);

        std::vector<FlagId> plus;
        if (const auto* p = t.plus_of(vfix))
            for (FlagId g : *p)
                if (g != at_fix && g != at_fix_conj) plus.push_back(g);
        for (const Flag& g : t.tree.flags) {
            if (g.id == drop_w || g.id == drop_wbar) continue;
            if (g.vertex == w && side_plus) plus.push_back(g.id);
            if (g.vertex == wbar && !side_plus) plus.push_back(g.id);
        }
        out.real_cyclic = t.real_cyclic;
        for (const auto& [v, p] : t.plus_part)
            if (v != vfix) out.plus_part.emplace_back(v, p);
        out.plus_part.emplace_back(vfix, plus);
    } else {
        out.real_cyclic = t.real_cyclic;
        out.plus_part = t.plus_part;
        if (t.marker == TypeMarker::Type3) {
            std::set<VertexId> alive(out.tree.vertices.begin(), out.tree.vertices.end());
            for (VertexId v : t.half_plus)
                if (alive.count(v)) out.half_plus.push_back(v);
        }
    }

    auto inv = find_involution(out.tree, out.sigma);
    assert(inv);
    out.inv = std::move(*inv);
    out.normalize();
    return out;
}

OPlanarTree forget_tails(const OPlanarTree& t, const std::vector<int>& drop) {
    std::set<int> dropset(drop.begin(), drop.end());
    for (int s : dropset) {
        if (s < 1 || s > t.sigma.n) throw TooFewLabels("dropped label out of range");
        if (!dropset.count(t.sigma.apply(s))) throw TooFewLabels("dropped label set not sigma-invariant");
    }
    int remaining = t.sigma.n - static_cast<int>(dropset.size());
    if (remaining < 3) throw TooFewLabels("fewer than 3 labels would remain");

    Tree tr = t.tree;
    std::map<VertexId, std::vector<FlagId>> cyc;
    std::map<VertexId, std::set<FlagId>> plus;
    for (const auto& [v, c] : t.real_cyclic) cyc[v] = c;
    for (const auto& [v, p] : t.plus_part) plus[v] = std::set<FlagId>(p.begin(), p.end());
    VertexId type2_vertex = -1;
    if (t.marker == TypeMarker::Type2) type2_vertex = t.inv.fixed_vertices().front();

    auto drop_flag = [&](FlagId f) {
        for (auto& [v, c] : cyc) erase_value(c, f);
        for (auto& [v, p] : plus) p.erase(f);
        tr.flags.erase(std::remove_if(tr.flags.begin(), tr.flags.end(),
                                      [&](const Flag& g) { return g.id == f; }),
                       tr.flags.end());
    };
    auto drop_vertex = [&](VertexId v) {
        tr.vertices.erase(std::remove(tr.vertices.begin(), tr.vertices.end(), v), tr.vertices.end());
        cyc.erase(v);
        plus.erase(v);
    };

    for (const Flag& f : t.tree.flags)
        if (f.is_tail() && dropset.count(f.tail)) drop_flag(f.id);

    while (tr.vertices.size() > 1) {
        VertexId bad_v = -1;
        for (VertexId v : tr.vertices)
            if (tr.valence(v) < 3) {
                bad_v = v;
                break;
            }
        if (bad_v == -1) break;
        auto here = tr.flags_at(bad_v);
        if (here.size() == 1) {
            const Flag g = tr.flag(here[0]);
            if (g.is_tail()) throw Error("forget_tails: disconnected remnant");
            FlagId mg = g.mate;
            drop_flag(g.id);
            drop_flag(mg);
            drop_vertex(bad_v);
        } else if (here.size() == 2) {
            Flag a = tr.flag(here[0]);
            Flag b = tr.flag(here[1]);
            if (a.is_tail() && b.is_tail()) throw Error("forget_tails: tree collapsed below stability");
            if (a.is_tail() || b.is_tail()) {
                if (b.is_tail()) std::swap(a, b);
                // Relocate the tail a across the edge b; it inherits the
                // contracted node's position in the neighbor's planar data.
                FlagId mb = b.mate;
                VertexId w = tr.flag(mb).vertex;
                if (auto it = cyc.find(w); it != cyc.end()) {
                    auto pos = std::find(it->second.begin(), it->second.end(), mb);
                    if (pos != it->second.end()) *pos = a.id;
                }
                if (auto it = plus.find(w); it != plus.end()) {
                    if (it->second.erase(mb)) it->second.insert(a.id);
                }
                tr.flag_mut(a.id).vertex = w;
                drop_flag(b.id);
                drop_flag(mb);
                drop_vertex(bad_v);
            } else {
                // Fuse the two edges through bad_v into one.
                FlagId ma = a.mate, mb = b.mate;
                tr.flag_mut(ma).mate = mb;
                tr.flag_mut(mb).mate = ma;
                drop_flag(a.id);
                drop_flag(b.id);
                drop_vertex(bad_v);
            }
        } else {
            throw Error("forget_tails: unexpected bald vertex");
        }
    }

    // Order-preserving relabel of the surviving labels to 1..n'.
    std::vector<int> kept;
    for (int s = 1; s <= t.sigma.n; ++s)
        if (!dropset.count(s)) kept.push_back(s);
    std::map<int, int> relabel;
    for (std::size_t i = 0; i < kept.size(); ++i) relabel[kept[i]] = static_cast<int>(i) + 1;
    std::vector<std::pair<int, int>> new_pairs;
    for (auto [a, b] : t.sigma.pairs)
        if (!dropset.count(a)) new_pairs.emplace_back(relabel[a], relabel[b]);
    InvolutionSpec sigma2 = InvolutionSpec::make(remaining, new_pairs);
    for (Flag& f : tr.flags)
        if (f.is_tail()) f.tail = relabel[f.tail];
    tr.normalize();

    auto inv = find_involution(tr, sigma2);
    if (!inv) throw Error("forget_tails: stabilized tree lost equivariance");
    auto fixed = inv->fixed_vertices();

    TypeMarker marker;
    if (fixed.empty())
        marker = TypeMarker::Type3;
    else if (t.marker == TypeMarker::Type2 && fixed.size() == 1 && fixed.front() == type2_vertex)
        marker = TypeMarker::Type2;
    else
        marker = TypeMarker::Type1;

    OPlanarTree out;
    out.sigma = sigma2;
    out.tree = std::move(tr);
    out.inv = std::move(*inv);
    out.marker = marker;
    if (marker == TypeMarker::Type1) {
        std::set<VertexId> fixed_set(fixed.begin(), fixed.end());
        for (auto& [v, c] : cyc)
            if (fixed_set.count(v)) out.real_cyclic.emplace_back(v, c);
        for (auto& [v, p] : plus)
            if (fixed_set.count(v)) out.plus_part.emplace_back(v, std::vector<FlagId>(p.begin(), p.end()));
    } else if (marker == TypeMarker::Type3) {
        FlagId special = -1;
        for (FlagId e : out.tree.edges()) {
            FlagId ea = out.inv.f(e), eb = out.inv.f(out.tree.flag(e).mate);
            if (ea == out.tree.flag(e).mate && eb == e) special = e;
        }
        if (special == -1) throw Error("forget_tails: type-3 result lacks a special edge");
        auto side = edge_side(out.tree, special);
        VertexId root = out.tree.flag(out.tree.tail_with_label(1)).vertex;
        if (side.count(root)) {
            out.half_plus.assign(side.begin(), side.end());
        } else {
            for (VertexId v : out.tree.vertices)
                if (!side.count(v)) out.half_plus.push_back(v);
        }
    }
    out.normalize();
    return out;
}

}  // namespace rmoduli
