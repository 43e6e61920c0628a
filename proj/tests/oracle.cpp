#include "oracle.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <sstream>

namespace rmoduli::oracle {

namespace {

// ---- serialization under one orientation choice -----------------------------

int far_min_tail(const Tree& tr, FlagId f) {
    auto t = tr.far_tails(f);
    return t.empty() ? 0 : t.front();
}

struct Orientation {
    std::set<VertexId> reversed;  // type 1: vertices whose data is read reversed
    bool swap_halves = false;     // type 3
};

std::string serialize(const OPlanarTree& t, const Orientation& o) {
    const Tree& tr = t.tree;
    std::function<std::string(VertexId, FlagId)> rec = [&](VertexId v, FlagId parent) {
        std::ostringstream os;
        os << "(v" << (t.inv.vertex_fixed(v) ? "F" : "f");
        if (t.marker == TypeMarker::Type3) {
            bool in_half = std::find(t.half_plus.begin(), t.half_plus.end(), v) != t.half_plus.end();
            os << (in_half != o.swap_halves ? "H" : "h");
        }
        std::vector<int> tails;
        for (FlagId g : tr.flags_at(v))
            if (tr.flag(g).is_tail()) tails.push_back(tr.flag(g).tail);
        std::sort(tails.begin(), tails.end());
        os << ";t";
        for (int x : tails) os << "," << x;
        if (t.marker == TypeMarker::Type1 && t.inv.vertex_fixed(v)) {
            std::vector<int> cyc;
            if (const auto* c = t.cycle_of(v))
                for (FlagId g : *c) cyc.push_back(far_min_tail(tr, g));
            if (o.reversed.count(v)) std::reverse(cyc.begin(), cyc.end());
            if (!cyc.empty()) {
                auto best = std::min_element(cyc.begin(), cyc.end());
                std::rotate(cyc.begin(), best, cyc.end());
            }
            os << ";c";
            for (int x : cyc) os << "," << x;
            std::vector<int> plus;
            for (FlagId g : tr.flags_at(v)) {
                if (t.inv.flag_fixed(g)) continue;
                bool in_p = t.in_plus(v, g);
                if (o.reversed.count(v)) in_p = !in_p;
                if (in_p) plus.push_back(far_min_tail(tr, g));
            }
            std::sort(plus.begin(), plus.end());
            os << ";p";
            for (int x : plus) os << "," << x;
        }
        std::vector<std::pair<int, FlagId>> children;
        for (FlagId g : tr.flags_at(v))
            if (!tr.flag(g).is_tail() && g != parent) children.emplace_back(far_min_tail(tr, g), g);
        std::sort(children.begin(), children.end());
        os << ";[";
        for (auto [tok, g] : children) os << rec(tr.far_vertex(g), tr.flag(g).mate);
        os << "])";
        return os.str();
    };
    VertexId root = tr.flag(tr.tail_with_label(1)).vertex;
    std::ostringstream os;
    os << "n" << t.sigma.n << "m" << static_cast<int>(t.marker) << "s" << t.sigma.text();
    os << rec(root, -1);
    return os.str();
}

// ---- recursive set-partition tree generation --------------------------------

void partitions(const std::vector<int>& items, std::vector<std::vector<std::vector<int>>>& out) {
    if (items.empty()) {
        out.push_back({});
        return;
    }
    std::vector<std::vector<std::vector<int>>> rest;
    partitions(std::vector<int>(items.begin() + 1, items.end()), rest);
    for (const auto& p : rest) {
        for (std::size_t i = 0; i < p.size(); ++i) {
            auto q = p;
            q[i].insert(q[i].begin(), items.front());
            out.push_back(q);
        }
        auto q = p;
        q.push_back({items.front()});
        out.push_back(q);
    }
}

struct TreeBuilder {
    Tree tree;
    int next_vertex = 0;
    int next_flag = 1000;

    VertexId add_vertex() {
        tree.vertices.push_back(next_vertex);
        return next_vertex++;
    }
    void add_tail(VertexId v, int label) { tree.flags.push_back(Flag{label, v, label, label}); }
    void add_edge(VertexId a, VertexId b) {
        FlagId x = next_flag++, y = next_flag++;
        tree.flags.push_back(Flag{x, a, y, 0});
        tree.flags.push_back(Flag{y, b, x, 0});
    }
};

using Cont = std::function<void()>;

void grow_block(TreeBuilder& b, VertexId parent, const std::vector<int>& block, const Cont& done);

void grow_blocks(TreeBuilder& b, VertexId at, const std::vector<std::vector<int>>& blocks, std::size_t idx,
                 const Cont& done) {
    if (idx == blocks.size()) {
        done();
        return;
    }
    Cont next = [&b, at, &blocks, idx, &done]() { grow_blocks(b, at, blocks, idx + 1, done); };
    const auto& blk = blocks[idx];
    if (blk.size() == 1) {
        TreeBuilder saved = b;
        b.add_tail(at, blk.front());
        next();
        b = saved;
    } else {
        grow_block(b, at, blk, next);
    }
}

void grow_block(TreeBuilder& b, VertexId parent, const std::vector<int>& block, const Cont& done) {
    std::vector<std::vector<std::vector<int>>> parts;
    partitions(block, parts);
    for (const auto& p : parts) {
        if (p.size() < 2) continue;  // new vertex: parent edge plus at least two more flags
        TreeBuilder saved = b;
        VertexId v = b.add_vertex();
        b.add_edge(parent, v);
        grow_blocks(b, v, p, 0, done);
        b = saved;
    }
}

std::vector<Tree> gen_trees(int n) {
    std::vector<int> rest;
    for (int i = 2; i <= n; ++i) rest.push_back(i);
    std::vector<Tree> out;
    std::vector<std::vector<std::vector<int>>> parts;
    partitions(rest, parts);
    for (const auto& p : parts) {
        if (p.size() < 2) continue;  // root holds tail 1 plus at least two more flags
        TreeBuilder b;
        VertexId root = b.add_vertex();
        b.add_tail(root, 1);
        Cont emit = [&]() {
            Tree t = b.tree;
            t.normalize();
            out.push_back(t);
        };
        grow_blocks(b, root, p, 0, emit);
    }
    return out;
}

// ---- backtracking equivariance search ---------------------------------------

struct Matcher {
    const Tree& tr;
    const InvolutionSpec& sigma;
    std::map<FlagId, FlagId> fmap;
    std::map<VertexId, VertexId> vmap;

    bool assign_vertex(VertexId a, VertexId b) {
        auto it = vmap.find(a);
        if (it != vmap.end()) return it->second == b;
        vmap[a] = b;
        return true;
    }

    bool extend(std::vector<FlagId> pending) {
        while (!pending.empty() && fmap.count(pending.back())) pending.pop_back();
        if (pending.empty()) {
            if (fmap.size() != tr.flags.size()) return false;
            for (const auto& [a, b] : fmap) {
                auto it = fmap.find(b);
                if (it == fmap.end() || it->second != a) return false;
            }
            return true;
        }
        FlagId f = pending.back();
        pending.pop_back();
        const Flag& ff = tr.flag(f);
        auto vit = vmap.find(ff.vertex);
        if (vit == vmap.end()) return false;
        for (FlagId g : tr.flags_at(vit->second)) {
            const Flag& gf = tr.flag(g);
            if (gf.is_tail() != ff.is_tail()) continue;
            if (ff.is_tail() && gf.tail != sigma.apply(ff.tail)) continue;
            bool used = false;
            for (const auto& [a, b] : fmap) used |= (b == g);
            if (used) continue;
            auto saved_f = fmap;
            auto saved_v = vmap;
            bool ok = true;
            fmap[f] = g;
            auto next = pending;
            if (!ff.is_tail()) {
                auto mit = fmap.find(ff.mate);
                if (mit != fmap.end()) {
                    ok = (mit->second == gf.mate);
                } else {
                    fmap[ff.mate] = gf.mate;
                }
                if (ok) ok = assign_vertex(tr.flag(ff.mate).vertex, tr.flag(gf.mate).vertex);
                if (ok)
                    for (FlagId h : tr.flags_at(tr.flag(ff.mate).vertex)) next.push_back(h);
            }
            if (ok && extend(next)) return true;
            fmap = saved_f;
            vmap = saved_v;
        }
        return false;
    }
};

std::optional<TreeInvolution> search_involution(const Tree& tr, const InvolutionSpec& sigma) {
    Matcher m{tr, sigma, {}, {}};
    for (const Flag& f : tr.flags) {
        if (!f.is_tail()) continue;
        FlagId img = tr.tail_with_label(sigma.apply(f.tail));
        m.fmap[f.id] = img;
        if (!m.assign_vertex(f.vertex, tr.flag(img).vertex)) return std::nullopt;
    }
    std::vector<FlagId> pending;
    for (const Flag& f : tr.flags)
        if (f.is_tail())
            for (FlagId h : tr.flags_at(f.vertex)) pending.push_back(h);
    if (!m.extend(pending)) return std::nullopt;
    TreeInvolution inv;
    inv.flag_map.assign(m.fmap.begin(), m.fmap.end());
    inv.vertex_map.assign(m.vmap.begin(), m.vmap.end());
    return inv;
}

FlagId image_of(const TreeInvolution& inv, FlagId f) {
    for (const auto& [a, b] : inv.flag_map)
        if (a == f) return b;
    return -1;
}

}  // namespace

std::string canonical_string(const OPlanarTree& t) {
    std::string best;
    auto consider = [&](const Orientation& o) {
        std::string s = serialize(t, o);
        if (best.empty() || s < best) best = s;
    };
    if (t.marker == TypeMarker::Type3) {
        consider({{}, false});
        consider({{}, true});
        return best;
    }
    std::vector<VertexId> fixed = t.inv.fixed_vertices();
    for (unsigned mask = 0; mask < (1u << fixed.size()); ++mask) {
        Orientation o;
        for (std::size_t i = 0; i < fixed.size(); ++i)
            if ((mask >> i) & 1) o.reversed.insert(fixed[i]);
        consider(o);
    }
    return best;
}

std::map<int, std::set<std::string>> enumerate(const InvolutionSpec& sigma) {
    std::map<int, std::set<std::string>> out;
    for (const Tree& tr : gen_trees(sigma.n)) {
        auto inv = search_involution(tr, sigma);
        if (!inv) continue;

        std::vector<VertexId> fixed = inv->fixed_vertices();
        bool any_fixed_flag = false;
        for (const auto& [a, b] : inv->flag_map) any_fixed_flag |= (a == b);
        int dim = sigma.n - 3 - static_cast<int>(tr.edges().size());

        std::vector<TypeMarker> markers;
        if (!fixed.empty()) {
            markers.push_back(TypeMarker::Type1);
            if (fixed.size() == 1 && !any_fixed_flag && sigma.fixed_point_free())
                markers.push_back(TypeMarker::Type2);
        } else if (sigma.fixed_point_free()) {
            markers.push_back(TypeMarker::Type3);
        }

        for (TypeMarker m : markers) {
            OPlanarTree base;
            base.sigma = sigma;
            base.tree = tr;
            base.inv = *inv;
            base.marker = m;
            if (m == TypeMarker::Type2) {
                out[dim].insert(canonical_string(base));
                continue;
            }
            if (m == TypeMarker::Type3) {
                FlagId special = -1;
                for (FlagId e : tr.edges())
                    if (image_of(*inv, e) == tr.flag(e).mate) special = e;
                assert(special != -1);
                std::set<VertexId> side{tr.flag(special).vertex};
                bool grown = true;
                while (grown) {
                    grown = false;
                    for (const Flag& f : tr.flags) {
                        if (f.is_tail() || f.id == special || f.id == tr.flag(special).mate) continue;
                        VertexId far = tr.flag(f.mate).vertex;
                        if (side.count(f.vertex) && !side.count(far)) {
                            side.insert(far);
                            grown = true;
                        }
                    }
                }
                base.half_plus.assign(side.begin(), side.end());
                out[dim].insert(canonical_string(base));
                continue;
            }
            struct VC {
                VertexId v;
                std::vector<std::vector<FlagId>> cycles;
                std::vector<FlagId> reps;
            };
            std::vector<VC> per;
            for (VertexId v : fixed) {
                VC vc;
                vc.v = v;
                std::vector<FlagId> real_here;
                std::set<FlagId> done;
                for (FlagId g : tr.flags_at(v)) {
                    FlagId img = image_of(*inv, g);
                    if (img == g) {
                        real_here.push_back(g);
                    } else if (!done.count(g)) {
                        done.insert(g);
                        done.insert(img);
                        vc.reps.push_back(g);
                    }
                }
                std::sort(real_here.begin(), real_here.end());
                if (real_here.empty()) {
                    vc.cycles.push_back({});
                } else {
                    std::vector<FlagId> rest(real_here.begin() + 1, real_here.end());
                    do {
                        std::vector<FlagId> c{real_here.front()};
                        c.insert(c.end(), rest.begin(), rest.end());
                        vc.cycles.push_back(c);
                    } while (std::next_permutation(rest.begin(), rest.end()));
                }
                per.push_back(vc);
            }
            std::function<void(std::size_t, OPlanarTree&)> walk = [&](std::size_t i, OPlanarTree& cur) {
                if (i == per.size()) {
                    out[dim].insert(canonical_string(cur));
                    return;
                }
                for (const auto& cyc : per[i].cycles) {
                    for (unsigned mask = 0; mask < (1u << per[i].reps.size()); ++mask) {
                        std::vector<FlagId> plus;
                        for (std::size_t bb = 0; bb < per[i].reps.size(); ++bb) {
                            FlagId rep = per[i].reps[bb];
                            plus.push_back(((mask >> bb) & 1) ? image_of(*inv, rep) : rep);
                        }
                        cur.real_cyclic.emplace_back(per[i].v, cyc);
                        cur.plus_part.emplace_back(per[i].v, plus);
                        walk(i + 1, cur);
                        cur.real_cyclic.pop_back();
                        cur.plus_part.pop_back();
                    }
                }
            };
            walk(0, base);
        }
    }
    return out;
}

std::map<int, long long> counts(const InvolutionSpec& sigma) {
    std::map<int, long long> out;
    for (const auto& [d, s] : enumerate(sigma)) out[d] = static_cast<long long>(s.size());
    return out;
}

}  // namespace rmoduli::oracle
