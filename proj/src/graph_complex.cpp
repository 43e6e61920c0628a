#include "rmoduli/graph_complex.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "rmoduli/errors.hpp"

namespace rmoduli {

namespace {

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

int orientation_bit(const std::string& enc) { return static_cast<int>(fnv1a(enc) & 1); }

std::size_t index_of(const std::vector<std::string>& v, const std::string& s) {
    auto it = std::lower_bound(v.begin(), v.end(), s);
    if (it == v.end() || *it != s) throw Error("graph_complex: generator not found");
    return static_cast<std::size_t>(it - v.begin());
}

std::vector<std::string> encodings_at(const StrataPoset& p, int d) {
    std::vector<std::string> out;
    auto it = p.classes.find(d);
    if (it == p.classes.end()) return out;
    for (const auto& c : it->second) out.push_back(c.encoding);
    return out;
}

// ---- relation families -----------------------------------------------------
//
// Membership of a degree-d class in a family is decided by contracting its two
// inserted edges and comparing the result with the base class; selected flags
// travel through the canonical flag order, so all tests below are set
// comparisons in the base class's canonical id space.

struct SplitA {  // conjugate edge pair hanging at a real vertex
    std::string enc;
    VertexId vertex;    // canonical id of the real vertex
    std::set<int> far;  // canonical ids: flags split off with e's far endpoint
};

struct SplitB {  // two pointwise-fixed edges at a common real vertex
    std::string enc;
    VertexId vertex;
    std::set<int> s1, s2;  // canonical ids: flags split off with each new vertex
};

struct SplitC {  // conjugate edge pair interior to a conjugate vertex pair
    std::string enc;
    VertexId vertex;       // canonical id of the merged vertex on this side
    std::set<int> sa, sb;  // canonical ids: the two sides of the split at v
};

struct Splits {
    std::vector<SplitA> a;
    std::vector<SplitB> b;
    std::vector<SplitC> c;
};

std::set<int> transport(const std::vector<FlagId>& flags, const CanonicalCert& cert) {
    std::set<int> out;
    for (FlagId f : flags) out.insert(cert.flag(f));
    return out;
}

VertexId canon_vertex_of_flag(FlagId f, const CanonicalCert& cert, const UPlanarClass& rc) {
    return rc.representative.tree.flag(cert.flag(f)).vertex;
}

std::vector<FlagId> flags_at_except(const Tree& tr, VertexId v, FlagId skip) {
    std::vector<FlagId> out;
    for (FlagId g : tr.flags_at(v))
        if (g != skip) out.push_back(g);
    return out;
}

Splits compute_splits(const UPlanarClass& mu) {
    Splits out;
    const OPlanarTree& t = mu.representative;

    for (FlagId e : t.conjugate_edge_pairs()) {
        const Flag f1 = t.tree.flag(e);
        FlagId f2 = f1.mate;
        VertexId va = f1.vertex, vb = t.tree.flag(f2).vertex;
        bool a_fixed = t.inv.vertex_fixed(va), b_fixed = t.inv.vertex_fixed(vb);
        CanonicalCert cert;
        UPlanarClass rc = canonicalize(contract_conjugate_pair(t, e), &cert);
        if (a_fixed || b_fixed) {
            VertexId vfix = a_fixed ? va : vb;
            FlagId at_fix = a_fixed ? e : f2;
            FlagId at_w = a_fixed ? f2 : e;
            VertexId w = a_fixed ? vb : va;
            FlagId at_fix_conj = t.inv.f(at_fix);
            FlagId probe = -1;
            for (FlagId g : t.tree.flags_at(vfix))
                if (g != at_fix && g != at_fix_conj) probe = g;
            SplitA s;
            s.enc = rc.encoding;
            s.vertex = canon_vertex_of_flag(probe, cert, rc);
            s.far = transport(flags_at_except(t.tree, w, at_w), cert);
            out.a.push_back(std::move(s));
        } else {
            FlagId g1 = t.inv.f(e), g2 = t.inv.f(f2);
            auto side = [&](VertexId x, VertexId y, FlagId ex, FlagId ey) {
                SplitC s;
                s.enc = rc.encoding;
                FlagId probe = -1;
                for (FlagId g : t.tree.flags_at(x))
                    if (g != ex) probe = g;
                s.vertex = canon_vertex_of_flag(probe, cert, rc);
                s.sa = transport(flags_at_except(t.tree, x, ex), cert);
                s.sb = transport(flags_at_except(t.tree, y, ey), cert);
                return s;
            };
            out.c.push_back(side(va, vb, e, f2));
            out.c.push_back(side(t.tree.flag(g1).vertex, t.tree.flag(g2).vertex, g1, g2));
        }
    }

    std::vector<FlagId> real_edges;
    for (FlagId e : t.invariant_edges())
        if (t.edge_pointwise_fixed(e)) real_edges.push_back(e);
    for (std::size_t i = 0; i < real_edges.size(); ++i)
        for (std::size_t j = i + 1; j < real_edges.size(); ++j) {
            FlagId e1 = real_edges[i], e2 = real_edges[j];
            VertexId a1 = t.tree.flag(e1).vertex, b1 = t.tree.far_vertex(e1);
            VertexId a2 = t.tree.flag(e2).vertex, b2 = t.tree.far_vertex(e2);
            VertexId common = -1;
            for (VertexId x : {a1, b1})
                for (VertexId y : {a2, b2})
                    if (x == y) common = x;
            if (common == -1) continue;
            VertexId x1 = (a1 == common) ? b1 : a1;  // new vertex split off by e1
            VertexId x2 = (a2 == common) ? b2 : a2;
            FlagId m1 = (a1 == common) ? t.tree.flag(e1).mate : e1;  // flag of e1 at x1
            FlagId m2 = (a2 == common) ? t.tree.flag(e2).mate : e2;
            FlagId c1 = (a1 == common) ? e1 : t.tree.flag(e1).mate;  // flag of e1 at common
            FlagId c2 = (a2 == common) ? e2 : t.tree.flag(e2).mate;
            FlagId probe = -1;
            for (FlagId g : t.tree.flags_at(common))
                if (g != c1 && g != c2) probe = g;
            auto far1 = flags_at_except(t.tree, x1, m1);
            auto far2 = flags_at_except(t.tree, x2, m2);
            std::set<std::string> seen;
            for (Sign s1 : {Sign::Plus, Sign::Minus})
                for (Sign s2 : {Sign::Plus, Sign::Minus}) {
                    OPlanarTree r1 = contract_invariant_edge(t, e1, s1);
                    CanonicalCert cert;
                    UPlanarClass rc = canonicalize(contract_invariant_edge(r1, e2, s2), &cert);
                    if (!seen.insert(rc.encoding).second) continue;
                    SplitB s;
                    s.enc = rc.encoding;
                    s.vertex = canon_vertex_of_flag(probe, cert, rc);
                    s.s1 = transport(far1, cert);
                    s.s2 = transport(far2, cert);
                    out.b.push_back(std::move(s));
                }
        }
    return out;
}

std::set<int> intersect(const std::set<int>& a, const std::set<int>& b) {
    std::set<int> out;
    for (int x : a)
        if (b.count(x)) out.insert(x);
    return out;
}

using Pairing = std::pair<std::set<int>, std::set<int>>;  // unordered; store sorted

Pairing make_pairing(std::set<int> x, std::set<int> y) {
    if (y < x) std::swap(x, y);
    return {std::move(x), std::move(y)};
}

}  // namespace

IntMatrix boundary_matrix(const StrataPoset& p, int d, Coeff coeff) {
    int top = p.sigma.n - 3;
    if (d < 0 || d > top) throw DegreeOutOfRange("degree " + std::to_string(d) + " outside 0.." + std::to_string(top));
    auto rows = encodings_at(p, d - 1);
    auto cols = encodings_at(p, d);
    IntMatrix m = IntMatrix::zero(rows.size(), cols.size());
    if (d == 0 || rows.empty() || cols.empty()) return m;

    if (coeff == Coeff::Z2) {
        for (const auto& cov : p.coverings) {
            if (p.dim_of(cov.upper) != d) continue;
            m.at(index_of(rows, cov.lower), index_of(cols, cov.upper)) += cov.mult;
        }
        for (auto& v : m.a) v = ((v % 2) + 2) % 2;
    } else {
        for (const auto& c : p.classes.at(d - 1)) {
            int blo = orientation_bit(c.encoding);
            for (FlagId e : c.representative.invariant_edges())
                for (Sign s : {Sign::Plus, Sign::Minus}) {
                    auto up = canonicalize(contract_invariant_edge(c.representative, e, s));
                    int sign = ((blo ^ orientation_bit(up.encoding) ^ (s == Sign::Minus ? 1 : 0)) ? -1 : 1);
                    m.at(index_of(rows, c.encoding), index_of(cols, up.encoding)) += sign;
                }
        }
    }
    return m;
}

std::vector<ChainVec> relation_generators(const StrataPoset& p, const InvolutionSpec& sigma, int d) {
    int top = sigma.n - 3;
    if (d < 0 || d > top) throw DegreeOutOfRange("degree " + std::to_string(d) + " outside 0.." + std::to_string(top));
    if (sigma.perm_size() < 4) return {};
    int base_dim = d + 2;
    if (sigma.n - d - 5 < 0 || base_dim > top) return {};
    if (!p.classes.count(d) || !p.classes.count(base_dim)) return {};

    const auto& gens = p.classes.at(d);
    std::vector<Splits> splits(gens.size());
    for (std::size_t i = 0; i < gens.size(); ++i) splits[i] = compute_splits(gens[i]);

    bool fixfree = sigma.fixed_point_free();
    std::set<ChainVec> dedup;
    std::vector<ChainVec> out;

    auto emit = [&](const std::map<std::size_t, long long>& acc) {
        ChainVec v;
        for (auto& [i, c] : acc)
            if (c != 0) v.emplace_back(i, c);
        if (v.empty()) return;
        if (v.front().second < 0)
            for (auto& [i, c] : v) c = -c;
        if (dedup.insert(v).second) out.push_back(v);
    };

    for (const UPlanarClass& base : p.classes.at(base_dim)) {
        const OPlanarTree& g = base.representative;
        const std::string& genc = base.encoding;
        auto conj = [&](FlagId f) { return g.inv.f(f); };

        bool has_fixed_flag = false;
        for (const auto& [a, b] : g.inv.flag_map) has_fixed_flag |= (a == b);

        if (g.marker == TypeMarker::Type1) {
            for (const auto& [v, plus] : g.plus_part) {
                const auto& cycle = *g.cycle_of(v);
                // R-1 (= S-1.2): split {f1,f2} from one side against splitting
                // the two conjugate pairs onto separate real vertices.
                for (std::size_t i = 0; i < plus.size(); ++i)
                    for (std::size_t j = i + 1; j < plus.size(); ++j)
                        for (FlagId f3 : cycle) {
                            FlagId f1 = plus[i], f2 = plus[j];
                            std::set<int> sel{f1, conj(f1), f2, conj(f2), f3};
                            std::set<int> t1{f1, f2}, t1bar{conj(f1), conj(f2)};
                            Pairing want = make_pairing({f1, conj(f1)}, {f2, conj(f2)});
                            std::map<std::size_t, long long> acc;
                            for (std::size_t m = 0; m < gens.size(); ++m) {
                                for (const SplitA& s : splits[m].a) {
                                    if (s.enc != genc || s.vertex != v) continue;
                                    auto T = intersect(s.far, sel);
                                    if (T == t1 || T == t1bar) acc[m] += 1;
                                }
                                for (const SplitB& s : splits[m].b) {
                                    if (s.enc != genc || s.vertex != v) continue;
                                    if (make_pairing(intersect(s.s1, sel), intersect(s.s2, sel)) == want)
                                        acc[m] -= 1;
                                }
                            }
                            emit(acc);
                        }
                // S-1.1: no fixed flags anywhere; resplit within one side
                // against moving f1 across.
                if (fixfree && !has_fixed_flag) {
                    for (FlagId f1 : plus)
                        for (FlagId f2 : plus)
                            for (FlagId f3 : plus) {
                                if (f1 == f2 || f1 == f3 || f2 == f3) continue;
                                std::set<int> sel{f1, conj(f1), f2, conj(f2), f3, conj(f3)};
                                std::set<int> g1a{f2, f3}, g1b{conj(f2), conj(f3)};
                                std::set<int> g2a{conj(f1), f2}, g2b{f1, conj(f2)};
                                std::map<std::size_t, long long> acc;
                                for (std::size_t m = 0; m < gens.size(); ++m)
                                    for (const SplitA& s : splits[m].a) {
                                        if (s.enc != genc || s.vertex != v) continue;
                                        auto T = intersect(s.far, sel);
                                        if (T == g1a || T == g1b) acc[m] += 1;
                                        else if (T == g2a || T == g2b) acc[m] -= 1;
                                    }
                                emit(acc);
                            }
                }
            }
        }

        if (g.marker == TypeMarker::Type2 && fixfree) {
            // S-2: all flags at the real vertex pair up.
            VertexId v = g.inv.fixed_vertices().front();
            std::vector<FlagId> reps;
            std::set<FlagId> done;
            for (FlagId f : g.tree.flags_at(v)) {
                if (done.count(f)) continue;
                done.insert(f);
                done.insert(conj(f));
                reps.push_back(f);
            }
            for (FlagId r1 : reps)
                for (FlagId r2 : reps)
                    for (FlagId r3 : reps) {
                        if (r1 == r2 || r1 == r3 || r2 == r3) continue;
                        for (int bits = 0; bits < 8; ++bits) {
                            FlagId f1 = (bits & 1) ? conj(r1) : r1;
                            FlagId f2 = (bits & 2) ? conj(r2) : r2;
                            FlagId f3 = (bits & 4) ? conj(r3) : r3;
                            std::set<int> sel{f1, conj(f1), f2, conj(f2), f3, conj(f3)};
                            std::set<int> g1a{f2, f3}, g1b{conj(f2), conj(f3)};
                            std::set<int> g2a{f1, f2}, g2b{conj(f1), conj(f2)};
                            std::map<std::size_t, long long> acc;
                            for (std::size_t m = 0; m < gens.size(); ++m)
                                for (const SplitA& s : splits[m].a) {
                                    if (s.enc != genc || s.vertex != v) continue;
                                    auto T = intersect(s.far, sel);
                                    if (T == g1a || T == g1b) acc[m] += 1;
                                    else if (T == g2a || T == g2b) acc[m] -= 1;
                                }
                            emit(acc);
                        }
                    }
        }

        // R-2 / S-3: degeneration of a conjugate pair of vertices.
        {
            std::set<VertexId> seen;
            for (const auto& [v, vbar] : g.inv.vertex_map) {
                if (v == vbar || seen.count(v)) continue;
                seen.insert(v);
                seen.insert(vbar);
                auto F = g.tree.flags_at(v);
                if (F.size() < 4) continue;
                std::sort(F.begin(), F.end());
                // all 4-subsets
                std::vector<bool> pick(F.size(), false);
                std::fill(pick.begin(), pick.begin() + 4, true);
                std::sort(pick.begin(), pick.end());  // lexicographic mask iteration
                do {
                    std::vector<FlagId> f;
                    for (std::size_t k = 0; k < F.size(); ++k)
                        if (pick[k]) f.push_back(F[k]);
                    if (f.size() != 4) continue;
                    std::set<int> sel(f.begin(), f.end());
                    Pairing P[3] = {make_pairing({f[0], f[1]}, {f[2], f[3]}),
                                    make_pairing({f[0], f[2]}, {f[1], f[3]}),
                                    make_pairing({f[0], f[3]}, {f[1], f[2]})};
                    for (int a = 0; a < 3; ++a)
                        for (int b = a + 1; b < 3; ++b) {
                            std::map<std::size_t, long long> acc;
                            for (std::size_t m = 0; m < gens.size(); ++m)
                                for (const SplitC& s : splits[m].c) {
                                    if (s.enc != genc || s.vertex != v) continue;
                                    Pairing got = make_pairing(intersect(s.sa, sel), intersect(s.sb, sel));
                                    if (got == P[a]) acc[m] += 1;
                                    else if (got == P[b]) acc[m] -= 1;
                                }
                            emit(acc);
                        }
                } while (std::next_permutation(pick.begin(), pick.end()));
            }
        }
    }
    return out;
}

GradedComplex build_complex(const StrataPoset& p, Coeff coeff) {
    GradedComplex c;
    c.sigma = p.sigma;
    c.coeff = coeff;
    int top = p.sigma.n - 3;
    c.generators.resize(static_cast<std::size_t>(top) + 1);
    c.relations.resize(static_cast<std::size_t>(top) + 1);
    c.boundary.resize(static_cast<std::size_t>(top) + 1);
    for (int d = 0; d <= top; ++d) {
        c.generators[static_cast<std::size_t>(d)] = encodings_at(p, d);
        c.boundary[static_cast<std::size_t>(d)] = boundary_matrix(p, d, coeff);
        c.relations[static_cast<std::size_t>(d)] = relation_generators(p, p.sigma, d);
    }
    return c;
}

bool boundary_squares_to_zero(const GradedComplex& c) {
    for (int d = 2; d < c.degrees(); ++d) {
        const IntMatrix& a = c.boundary[static_cast<std::size_t>(d - 1)];
        const IntMatrix& b = c.boundary[static_cast<std::size_t>(d)];
        if (a.cols != b.rows) continue;
        IntMatrix ab = mul(a, b);
        for (const auto& v : ab.a) {
            if (c.coeff == Coeff::Z2 ? (v % 2 != 0) : (v != 0)) return false;
        }
    }
    return true;
}

namespace {

Z2Vec chain_to_bits(const ChainVec& v, std::size_t cols) {
    Z2Vec out = z2_zero(cols);
    for (auto [i, coeff] : v)
        if (coeff % 2 != 0) z2_set(out, i, !z2_get(out, i));
    return out;
}

Z2Vec apply_boundary_mod2(const IntMatrix& m, const Z2Vec& x, std::size_t cols_in) {
    Z2Vec out = z2_zero(m.rows);
    for (std::size_t j = 0; j < cols_in; ++j) {
        if (!z2_get(x, j)) continue;
        for (std::size_t i = 0; i < m.rows; ++i)
            if (m.at(i, j) % 2 != 0) z2_set(out, i, !z2_get(out, i));
    }
    return out;
}

}  // namespace

bool relations_closed(const GradedComplex& c) {
    for (int d = 1; d < c.degrees(); ++d) {
        const auto& rel = c.relations[static_cast<std::size_t>(d)];
        if (rel.empty()) continue;
        std::size_t lo = c.dim(d - 1);
        Z2Rref span;
        span.cols = std::max<std::size_t>(lo, 1);
        for (const auto& r : c.relations[static_cast<std::size_t>(d - 1)])
            span.absorb(chain_to_bits(r, std::max<std::size_t>(lo, 1)));
        const IntMatrix& m = c.boundary[static_cast<std::size_t>(d)];
        for (const auto& r : rel) {
            Z2Vec x = chain_to_bits(r, c.dim(d));
            Z2Vec y = apply_boundary_mod2(m, x, c.dim(d));
            if (lo == 0) {
                if (!z2_is_zero(y)) return false;
                continue;
            }
            if (!span.contains(y)) return false;
        }
    }
    // degree-0 relations are automatically closed (boundary is zero)
    return true;
}

GradedComplex quotient_complex(const GradedComplex& c) {
    bool any = false;
    for (const auto& r : c.relations) any |= !r.empty();
    if (!any) return c;
    if (!relations_closed(c))
        throw RelationsNotClosedUnderBoundary("relation ideal is not closed under the boundary");
    if (c.coeff == Coeff::ZExperimental)
        throw Error("quotient over Z-experimental is presented via SNF; use homology reporting");

    GradedComplex q;
    q.sigma = c.sigma;
    q.coeff = c.coeff;
    int top = c.degrees() - 1;
    q.generators.resize(static_cast<std::size_t>(top) + 1);
    q.relations.resize(static_cast<std::size_t>(top) + 1);
    q.boundary.resize(static_cast<std::size_t>(top) + 1);

    std::vector<Z2Rref> rref(static_cast<std::size_t>(top) + 1);
    std::vector<std::vector<std::size_t>> keep(static_cast<std::size_t>(top) + 1);
    for (int d = 0; d <= top; ++d) {
        std::size_t k = static_cast<std::size_t>(d);
        rref[k].cols = std::max<std::size_t>(c.dim(d), 1);
        for (const auto& r : c.relations[k]) rref[k].absorb(chain_to_bits(r, std::max<std::size_t>(c.dim(d), 1)));
        std::set<std::size_t> pivots(rref[k].pivots.begin(), rref[k].pivots.end());
        for (std::size_t j = 0; j < c.dim(d); ++j)
            if (!pivots.count(j)) {
                keep[k].push_back(j);
                q.generators[k].push_back(c.generators[k][j]);
            }
    }
    for (int d = 0; d <= top; ++d) {
        std::size_t k = static_cast<std::size_t>(d);
        std::size_t rlo = d == 0 ? 0 : keep[k - 1].size();
        q.boundary[k] = IntMatrix::zero(rlo, keep[k].size());
        if (d == 0 || c.dim(d) == 0 || c.dim(d - 1) == 0) continue;
        const IntMatrix& m = c.boundary[k];
        for (std::size_t jj = 0; jj < keep[k].size(); ++jj) {
            Z2Vec x = z2_zero(c.dim(d));
            z2_set(x, keep[k][jj], true);
            Z2Vec y = apply_boundary_mod2(m, x, c.dim(d));
            // reduce by the lower-degree relation span
            for (std::size_t r = 0; r < rref[k - 1].rows.size(); ++r)
                if (z2_get(y, rref[k - 1].pivots[r])) z2_xor(y, rref[k - 1].rows[r]);
            for (std::size_t ii = 0; ii < keep[k - 1].size(); ++ii)
                if (z2_get(y, keep[k - 1][ii])) q.boundary[k].at(ii, jj) = 1;
        }
    }
    return q;
}

nlohmann::json matrix_to_json(const IntMatrix& m) {
    nlohmann::json j;
    j["rows"] = m.rows;
    j["cols"] = m.cols;
    nlohmann::json entries = nlohmann::json::array();
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t jj = 0; jj < m.cols; ++jj)
            if (m.at(i, jj) != 0)
                entries.push_back(nlohmann::json::array({i, jj, m.at(i, jj).convert_to<long long>()}));
    j["entries"] = entries;
    return j;
}

std::string matrix_to_sms(const IntMatrix& m) {
    std::ostringstream os;
    os << m.rows << " " << m.cols << " M\n";
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j)
            if (m.at(i, j) != 0) os << (i + 1) << " " << (j + 1) << " " << m.at(i, j) << "\n";
    os << "0 0 0\n";
    return os.str();
}

}  // namespace rmoduli
