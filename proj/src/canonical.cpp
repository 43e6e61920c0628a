#include "rmoduli/canonical.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>

#include "rmoduli/errors.hpp"

namespace rmoduli {

namespace {

using Bytes = std::vector<unsigned char>;

void put(Bytes& b, int v) {
    assert(v >= 0 && v < 256);
    b.push_back(static_cast<unsigned char>(v));
}

// Rotation with the lexicographically smallest reading; tokens are distinct.
std::vector<int> min_rotation(const std::vector<int>& xs) {
    if (xs.size() < 2) return xs;
    std::size_t best = 0;
    for (std::size_t i = 1; i < xs.size(); ++i) {
        for (std::size_t j = 0; j < xs.size(); ++j) {
            int a = xs[(i + j) % xs.size()], b = xs[(best + j) % xs.size()];
            if (a != b) {
                if (a < b) best = i;
                break;
            }
        }
    }
    std::vector<int> out(xs.size());
    for (std::size_t j = 0; j < xs.size(); ++j) out[j] = xs[(best + j) % xs.size()];
    return out;
}

struct Builder {
    const OPlanarTree& t;
    std::map<FlagId, int> token;  // min far tail
    Bytes enc;
    // canonical numbering
    std::vector<std::pair<VertexId, VertexId>> vmap;
    std::vector<std::pair<FlagId, FlagId>> fmap;
    std::vector<VertexId> reversed;
    int next_vertex = 0;
    int next_flag = 0;
    // decoration choice per fixed vertex (type 1), in original flag ids
    std::map<VertexId, std::vector<FlagId>> chosen_cycle;
    std::map<VertexId, std::set<FlagId>> chosen_plus;

    explicit Builder(const OPlanarTree& tt) : t(tt) {
        for (const auto& f : t.tree.flags) token[f.id] = t.tree.min_far_tail(f.id);
    }

    std::vector<FlagId> local_order(VertexId v) const {
        auto fs = t.tree.flags_at(v);
        std::sort(fs.begin(), fs.end(), [&](FlagId a, FlagId b) { return token.at(a) < token.at(b); });
        return fs;
    }

    // Decoration bytes for one orientation of a fixed vertex.
    Bytes decoration_bytes(VertexId v, bool rev) const {
        const auto& cyc = *t.cycle_of(v);
        std::vector<int> toks;
        for (FlagId g : cyc) toks.push_back(token.at(g));
        if (rev) std::reverse(toks.begin(), toks.end());
        toks = min_rotation(toks);
        // conjugate pairs at v, keyed by their smaller token
        std::vector<std::pair<int, FlagId>> pairs;  // (min token, flag holding it)
        std::set<FlagId> done;
        for (FlagId g : t.tree.flags_at(v)) {
            if (t.inv.flag_fixed(g) || done.count(g)) continue;
            FlagId h = t.inv.f(g);
            done.insert(g);
            done.insert(h);
            FlagId small = token.at(g) < token.at(h) ? g : h;
            pairs.emplace_back(token.at(small), small);
        }
        std::sort(pairs.begin(), pairs.end());
        Bytes out;
        put(out, static_cast<int>(toks.size()));
        for (int x : toks) put(out, x);
        put(out, static_cast<int>(pairs.size()));
        for (auto& [tok, small] : pairs) {
            bool small_in_plus = t.in_plus(v, small);
            if (rev) small_in_plus = !small_in_plus;
            put(out, small_in_plus ? 0 : 1);
        }
        return out;
    }

    void apply_choice(VertexId v, bool rev) {
        const auto& cyc = *t.cycle_of(v);
        std::vector<FlagId> c = cyc;
        if (rev) std::reverse(c.begin(), c.end());
        // rotate to minimal token first
        if (!c.empty()) {
            std::size_t best = 0;
            for (std::size_t i = 1; i < c.size(); ++i)
                if (token.at(c[i]) < token.at(c[best])) best = i;
            std::rotate(c.begin(), c.begin() + static_cast<long>(best), c.end());
        }
        chosen_cycle[v] = c;
        std::set<FlagId> p;
        for (FlagId g : t.tree.flags_at(v)) {
            if (t.inv.flag_fixed(g)) continue;
            bool in_p = t.in_plus(v, g);
            if (rev) in_p = !in_p;
            if (in_p) p.insert(g);
        }
        chosen_plus[v] = p;
        if (rev) reversed.push_back(v);
    }

    void rec(VertexId v, FlagId parent) {
        vmap.emplace_back(v, next_vertex++);
        auto order = local_order(v);
        for (FlagId g : order) fmap.emplace_back(g, next_flag++);

        bool fixed = t.inv.vertex_fixed(v);
        put(enc, fixed ? 1 : 0);
        std::vector<int> tails;
        for (FlagId g : order)
            if (t.tree.flag(g).is_tail()) tails.push_back(t.tree.flag(g).tail);
        std::sort(tails.begin(), tails.end());
        put(enc, static_cast<int>(tails.size()));
        for (int x : tails) put(enc, x);

        if (t.marker == TypeMarker::Type1 && fixed) {
            Bytes a = decoration_bytes(v, false);
            Bytes b = decoration_bytes(v, true);
            bool rev = b < a;
            enc.insert(enc.end(), rev ? b.begin() : a.begin(), rev ? b.end() : a.end());
            apply_choice(v, rev);
        }

        std::vector<FlagId> children;
        for (FlagId g : order) {
            const Flag& gf = t.tree.flag(g);
            if (!gf.is_tail() && g != parent) children.push_back(g);
        }
        put(enc, static_cast<int>(children.size()));
        for (FlagId g : children) rec(t.tree.far_vertex(g), t.tree.flag(g).mate);
    }
};

}  // namespace

FlagId CanonicalCert::flag(FlagId in) const {
    for (auto& [a, b] : flag_index)
        if (a == in) return b;
    throw Error("CanonicalCert: unknown flag");
}

VertexId CanonicalCert::vertex(VertexId in) const {
    for (auto& [a, b] : vertex_index)
        if (a == in) return b;
    throw Error("CanonicalCert: unknown vertex");
}

bool CanonicalCert::reversed(VertexId in) const {
    return std::find(reversed_vertices.begin(), reversed_vertices.end(), in) != reversed_vertices.end();
}

std::string to_hex(const std::vector<unsigned char>& bytes) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (unsigned char b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 15]);
    }
    return out;
}

UPlanarClass canonicalize(const OPlanarTree& t, CanonicalCert* cert) {
    require_valid(t);

    Builder b(t);
    put(b.enc, 1);  // format version
    put(b.enc, t.sigma.n);
    put(b.enc, static_cast<int>(t.marker));
    put(b.enc, static_cast<int>(t.sigma.pairs.size()));
    for (auto [x, y] : t.sigma.pairs) {
        put(b.enc, x);
        put(b.enc, y);
    }
    VertexId root = t.tree.flag(t.tree.tail_with_label(1)).vertex;
    b.rec(root, -1);

    UPlanarClass out;
    out.encoding = to_hex(b.enc);

    // Canonically renumbered representative.
    auto new_v = [&](VertexId v) {
        for (auto& [a, x] : b.vmap)
            if (a == v) return x;
        throw Error("canonicalize: vertex not numbered");
    };
    auto new_f = [&](FlagId f) {
        for (auto& [a, x] : b.fmap)
            if (a == f) return x;
        throw Error("canonicalize: flag not numbered");
    };
    OPlanarTree rep;
    rep.sigma = t.sigma;
    rep.marker = t.marker;
    for (const auto& [a, x] : b.vmap) rep.tree.vertices.push_back(x);
    for (const Flag& f : t.tree.flags) {
        Flag g;
        g.id = new_f(f.id);
        g.vertex = new_v(f.vertex);
        g.mate = f.is_tail() ? g.id : new_f(f.mate);
        g.tail = f.tail;
        rep.tree.flags.push_back(g);
    }
    rep.tree.normalize();
    if (t.marker == TypeMarker::Type1) {
        for (const auto& [v, c] : b.chosen_cycle) {
            std::vector<FlagId> cc;
            for (FlagId g : c) cc.push_back(new_f(g));
            rep.real_cyclic.emplace_back(new_v(v), cc);
        }
        for (const auto& [v, p] : b.chosen_plus) {
            std::vector<FlagId> pp;
            for (FlagId g : p) pp.push_back(new_f(g));
            rep.plus_part.emplace_back(new_v(v), pp);
        }
    } else if (t.marker == TypeMarker::Type3) {
        // Pick the half containing the root.
        std::set<VertexId> half(t.half_plus.begin(), t.half_plus.end());
        bool root_in = half.count(root) > 0;
        for (VertexId v : t.tree.vertices) {
            bool in = half.count(v) > 0;
            if (in == root_in) rep.half_plus.push_back(new_v(v));
        }
    }
    auto inv = find_involution(rep.tree, rep.sigma);
    assert(inv);
    rep.inv = std::move(*inv);
    rep.normalize();
    out.representative = std::move(rep);

    if (cert) {
        std::sort(b.vmap.begin(), b.vmap.end());
        std::sort(b.fmap.begin(), b.fmap.end());
        cert->vertex_index = b.vmap;
        cert->flag_index = b.fmap;
        cert->reversed_vertices = b.reversed;
        std::sort(cert->reversed_vertices.begin(), cert->reversed_vertices.end());
    }
    return out;
}

int dimension(const UPlanarClass& c) {
    return c.representative.sigma.n - 3 - static_cast<int>(c.representative.tree.edges().size());
}

}  // namespace rmoduli
