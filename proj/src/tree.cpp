#include "rmoduli/tree.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "rmoduli/errors.hpp"

namespace rmoduli {

const Flag& Tree::flag(FlagId id) const {
    for (const auto& f : flags)
        if (f.id == id) return f;
    throw Error("Tree::flag: unknown flag id " + std::to_string(id));
}

Flag& Tree::flag_mut(FlagId id) {
    for (auto& f : flags)
        if (f.id == id) return f;
    throw Error("Tree::flag_mut: unknown flag id " + std::to_string(id));
}

bool Tree::has_vertex(VertexId v) const {
    return std::binary_search(vertices.begin(), vertices.end(), v);
}

std::vector<FlagId> Tree::flags_at(VertexId v) const {
    std::vector<FlagId> out;
    for (const auto& f : flags)
        if (f.vertex == v) out.push_back(f.id);
    return out;
}

int Tree::valence(VertexId v) const {
    int k = 0;
    for (const auto& f : flags) k += (f.vertex == v);
    return k;
}

std::vector<FlagId> Tree::edges() const {
    std::vector<FlagId> out;
    for (const auto& f : flags)
        if (!f.is_tail() && f.id < f.mate) out.push_back(f.id);
    return out;
}

std::vector<FlagId> Tree::tails() const {
    std::vector<FlagId> out;
    for (const auto& f : flags)
        if (f.is_tail()) out.push_back(f.id);
    return out;
}

FlagId Tree::tail_with_label(int label) const {
    for (const auto& f : flags)
        if (f.is_tail() && f.tail == label) return f.id;
    return -1;
}

VertexId Tree::far_vertex(FlagId edge_flag) const {
    return flag(flag(edge_flag).mate).vertex;
}

std::vector<int> Tree::far_tails(FlagId fid) const {
    const Flag& f = flag(fid);
    if (f.is_tail()) return {f.tail};
    // Tails in the component of mate(f) once the edge is removed.
    std::vector<int> out;
    std::set<VertexId> seen;
    std::vector<VertexId> stack{far_vertex(fid)};
    seen.insert(stack.back());
    while (!stack.empty()) {
        VertexId v = stack.back();
        stack.pop_back();
        for (FlagId g : flags_at(v)) {
            if (g == f.mate) continue;  // do not cross back
            const Flag& gf = flag(g);
            if (gf.is_tail()) {
                out.push_back(gf.tail);
            } else {
                VertexId w = flag(gf.mate).vertex;
                if (seen.insert(w).second) stack.push_back(w);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

int Tree::min_far_tail(FlagId fid) const {
    auto t = far_tails(fid);
    return t.empty() ? 0 : t.front();
}

bool Tree::connected() const {
    if (vertices.empty()) return false;
    std::set<VertexId> seen{vertices.front()};
    std::vector<VertexId> stack{vertices.front()};
    while (!stack.empty()) {
        VertexId v = stack.back();
        stack.pop_back();
        for (FlagId g : flags_at(v)) {
            const Flag& gf = flag(g);
            if (gf.is_tail()) continue;
            VertexId w = far_vertex(g);
            if (seen.insert(w).second) stack.push_back(w);
        }
    }
    return seen.size() == vertices.size();
}

void Tree::normalize() {
    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
    std::sort(flags.begin(), flags.end(), [](const Flag& a, const Flag& b) { return a.id < b.id; });
}

VertexId TreeInvolution::v(VertexId x) const {
    for (const auto& [a, b] : vertex_map)
        if (a == x) return b;
    throw Error("TreeInvolution: unknown vertex " + std::to_string(x));
}

FlagId TreeInvolution::f(FlagId x) const {
    for (const auto& [a, b] : flag_map)
        if (a == x) return b;
    throw Error("TreeInvolution: unknown flag " + std::to_string(x));
}

std::vector<VertexId> TreeInvolution::fixed_vertices() const {
    std::vector<VertexId> out;
    for (const auto& [a, b] : vertex_map)
        if (a == b) out.push_back(a);
    return out;
}

std::optional<TreeInvolution> find_involution(const Tree& tree, const InvolutionSpec& sigma) {
    // In a stable tree distinct flags have distinct far tail sets, so the only
    // candidate for iota(f) is the flag whose far set is sigma of f's far set.
    std::map<std::vector<int>, FlagId> by_far;
    for (const auto& f : tree.flags) by_far[tree.far_tails(f.id)] = f.id;

    TreeInvolution inv;
    for (const auto& f : tree.flags) {
        auto far = tree.far_tails(f.id);
        for (int& s : far) s = sigma.apply(s);
        std::sort(far.begin(), far.end());
        auto it = by_far.find(far);
        if (it == by_far.end()) return std::nullopt;
        inv.flag_map.emplace_back(f.id, it->second);
    }
    std::sort(inv.flag_map.begin(), inv.flag_map.end());

    // Involutivity, mate compatibility, and a consistent induced vertex map.
    std::map<VertexId, VertexId> vmap;
    for (const auto& [a, b] : inv.flag_map) {
        if (inv.f(b) != a) return std::nullopt;
        const Flag& fa = tree.flag(a);
        const Flag& fb = tree.flag(b);
        if (inv.f(fa.mate) != fb.mate) return std::nullopt;
        if (fa.is_tail() && fb.tail != sigma.apply(fa.tail)) return std::nullopt;
        auto [it, fresh] = vmap.emplace(fa.vertex, fb.vertex);
        if (!fresh && it->second != fb.vertex) return std::nullopt;
    }
    for (VertexId v : tree.vertices) {
        auto it = vmap.find(v);
        if (it == vmap.end()) return std::nullopt;
        auto back = vmap.find(it->second);
        if (back == vmap.end() || back->second != v) return std::nullopt;
    }
    inv.vertex_map.assign(vmap.begin(), vmap.end());
    return inv;
}

std::vector<std::string> check_tree_structure(const Tree& tree, const InvolutionSpec& sigma) {
    std::vector<std::string> bad;
    if (tree.vertices.empty()) {
        bad.push_back("tree: no vertices");
        return bad;
    }
    std::set<FlagId> ids;
    for (const auto& f : tree.flags) {
        if (!ids.insert(f.id).second) bad.push_back("tree: duplicate flag id " + std::to_string(f.id));
        if (!tree.has_vertex(f.vertex)) bad.push_back("tree: flag " + std::to_string(f.id) + " at unknown vertex");
    }
    for (const auto& f : tree.flags) {
        if (!ids.count(f.mate)) {
            bad.push_back("tree: flag " + std::to_string(f.id) + " has unknown mate");
            continue;
        }
        const Flag& m = tree.flag(f.mate);
        if (m.mate != f.id) bad.push_back("tree: mate not involutive at flag " + std::to_string(f.id));
        if (!f.is_tail() && m.vertex == f.vertex) bad.push_back("tree: loop edge at vertex " + std::to_string(f.vertex));
        if (f.is_tail() && (f.tail < 1 || f.tail > sigma.n))
            bad.push_back("tree: tail label out of range at flag " + std::to_string(f.id));
        if (!f.is_tail() && f.tail != 0) bad.push_back("tree: edge flag carries a tail label");
    }
    std::vector<int> seen_label(static_cast<std::size_t>(sigma.n) + 1, 0);
    for (const auto& f : tree.flags)
        if (f.is_tail() && f.tail >= 1 && f.tail <= sigma.n) seen_label[f.tail]++;
    for (int s = 1; s <= sigma.n; ++s)
        if (seen_label[s] != 1) bad.push_back("tree: label " + std::to_string(s) + " used " + std::to_string(seen_label[s]) + " times");
    if (!bad.empty()) return bad;

    if (!tree.connected()) bad.push_back("tree: not connected");
    std::size_t n_edges = tree.edges().size();
    if (n_edges + 1 != tree.vertices.size())
        bad.push_back("tree: |E| != |V| - 1 (not a tree)");
    for (VertexId v : tree.vertices)
        if (tree.valence(v) < 3) bad.push_back("stability: vertex " + std::to_string(v) + " has valence < 3");
    return bad;
}

}  // namespace rmoduli
