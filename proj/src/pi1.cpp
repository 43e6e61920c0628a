#include "rmoduli/pi1.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "rmoduli/errors.hpp"

namespace rmoduli {

nlohmann::json GroupPresentation::to_json() const {
    nlohmann::json j;
    nlohmann::json gens = nlohmann::json::array();
    for (const auto& g : generators)
        gens.push_back(group_form ? g.wall : g.wall + (g.dir == 0 ? ":pm" : ":mp"));
    j["generators"] = gens;
    j["relators"] = relators;
    j["objects"] = objects;
    return j;
}

std::string GroupPresentation::to_gap() const {
    if (!group_form) throw Error("to_gap: group form required");
    std::ostringstream os;
    os << "F := FreeGroup(" << generators.size() << ");\n";
    os << "rels := [";
    for (std::size_t r = 0; r < relators.size(); ++r) {
        if (r) os << ",";
        os << " ";
        if (relators[r].empty()) {
            os << "One(F)";
            continue;
        }
        for (std::size_t k = 0; k < relators[r].size(); ++k) {
            int x = relators[r][k];
            if (k) os << "*";
            os << "F." << std::abs(x);
            if (x < 0) os << "^-1";
        }
    }
    os << " ];\n";
    return os.str();
}

namespace {

// Sign twist of the second contraction: contracting `first` with Sign::Minus
// reverses the absorbed cycle, flipping the smoothing convention of `second`
// exactly when the absorbed vertex is one of its endpoints.
int lambda_twist(const OPlanarTree& t, FlagId first_flag, Sign s, FlagId second_flag) {
    if (s == Sign::Plus) return +1;
    VertexId absorbed = t.tree.far_vertex(first_flag);
    VertexId a = t.tree.flag(second_flag).vertex;
    VertexId b = t.tree.far_vertex(second_flag);
    return (absorbed == a || absorbed == b) ? -1 : +1;
}

Sign times(Sign s, int sign) { return sign > 0 ? s : flip(s); }

}  // namespace

GroupPresentation build_groupoid(const StrataPoset& p) {
    GroupPresentation g;
    int top = p.sigma.n - 3;
    if (p.classes.count(top))
        for (const auto& c : p.classes.at(top)) g.objects.push_back(c.encoding);

    std::map<std::pair<std::string, int>, int> gen_index;
    if (p.classes.count(top - 1)) {
        for (const auto& wall : p.classes.at(top - 1)) {
            auto edges = wall.representative.invariant_edges();
            if (edges.size() != 1) throw Error("build_groupoid: wall without a unique invariant edge");
            auto up = canonicalize(contract_invariant_edge(wall.representative, edges[0], Sign::Plus));
            auto dn = canonicalize(contract_invariant_edge(wall.representative, edges[0], Sign::Minus));
            int i_pm = static_cast<int>(g.generators.size());
            g.generators.push_back({wall.encoding, 0, up.encoding, dn.encoding});
            g.generators.push_back({wall.encoding, 1, dn.encoding, up.encoding});
            gen_index[{wall.encoding, 0}] = i_pm;
            gen_index[{wall.encoding, 1}] = i_pm + 1;
            g.relators.push_back({i_pm + 1, i_pm + 2});
        }
    }

    if (top - 2 >= 0 && p.classes.count(top - 2)) {
        for (const auto& c2 : p.classes.at(top - 2)) {
            auto edges = c2.representative.invariant_edges();
            if (edges.size() != 2) continue;  // conjugate-pair strata: no adjacent walls
            const OPlanarTree& rep = c2.representative;
            FlagId e1 = edges[0], e2 = edges[1];

            // corner(t1, t2): both nodes smoothed, signs measured on rep
            auto corner = [&](Sign t1, Sign t2) {
                OPlanarTree germ = contract_invariant_edge(rep, e1, t1);
                Sign u = times(t2, lambda_twist(rep, e1, t1, e2));
                return canonicalize(contract_invariant_edge(germ, e2, u)).encoding;
            };
            // germ of the wall {t_second = 0} at first-sign s; returns the wall
            // class and the map from rep-level second-sign to canonical-level.
            auto germ_info = [&](FlagId first, FlagId second, Sign s) {
                OPlanarTree germ = contract_invariant_edge(rep, first, s);
                CanonicalCert cert;
                UPlanarClass w = canonicalize(germ, &cert);
                int eps = lambda_twist(rep, first, s, second);
                VertexId va = germ.tree.flag(second).vertex;
                VertexId vb = germ.tree.far_vertex(second);
                if (cert.reversed(va)) eps = -eps;
                if (cert.reversed(vb)) eps = -eps;
                return std::pair<std::string, int>{w.encoding, eps};
            };

            std::string tpp = corner(Sign::Plus, Sign::Plus);
            std::string tpm = corner(Sign::Plus, Sign::Minus);
            std::string tmm = corner(Sign::Minus, Sign::Minus);
            std::string tmp = corner(Sign::Minus, Sign::Plus);

            struct Step {
                FlagId first, second;
                Sign first_sign;   // germ: the edge already smoothed, with this sign
                Sign cross_from;   // remaining node crosses from this rep-level sign
                const std::string *from, *to;
            };
            const Step steps[4] = {
                {e1, e2, Sign::Plus, Sign::Plus, &tpp, &tpm},
                {e2, e1, Sign::Minus, Sign::Plus, &tpm, &tmm},
                {e1, e2, Sign::Minus, Sign::Minus, &tmm, &tmp},
                {e2, e1, Sign::Plus, Sign::Minus, &tmp, &tpp},
            };
            std::vector<int> word;
            bool ok = true;
            for (const Step& st : steps) {
                auto [wenc, eps] = germ_info(st.first, st.second, st.first_sign);
                Sign canon_from = times(st.cross_from, eps);
                int dir = (canon_from == Sign::Plus) ? 0 : 1;
                auto it = gen_index.find({wenc, dir});
                if (it == gen_index.end()) {
                    ok = false;
                    break;
                }
                const Crossing& cr = g.generators[static_cast<std::size_t>(it->second)];
                if (cr.from != *st.from || cr.to != *st.to) {
                    ok = false;
                    break;
                }
                word.push_back(it->second + 1);
            }
            if (!ok) throw Error("build_groupoid: codimension-two walk failed to close");
            g.relators.push_back(std::move(word));
        }
    }
    return g;
}

bool relators_well_typed(const GroupPresentation& g) {
    for (const auto& rel : g.relators) {
        if (rel.empty()) continue;
        std::string at;
        bool first = true;
        for (int x : rel) {
            if (x == 0 || std::abs(x) > static_cast<int>(g.generators.size())) return false;
            const Crossing& c = g.generators[static_cast<std::size_t>(std::abs(x)) - 1];
            std::string src = x > 0 ? c.from : c.to;
            std::string dst = x > 0 ? c.to : c.from;
            if (!first && src != at) return false;
            at = dst;
            first = false;
        }
        const Crossing& c0 = g.generators[static_cast<std::size_t>(std::abs(rel.front())) - 1];
        if (at != (rel.front() > 0 ? c0.from : c0.to)) return false;
    }
    return true;
}

GroupPresentation collapse_to_group(const GroupPresentation& g, const std::string& basepoint,
                                    unsigned seed, bool restrict_to_component) {
    if (std::find(g.objects.begin(), g.objects.end(), basepoint) == g.objects.end())
        throw Error("collapse_to_group: unknown basepoint");

    // Wall-adjacency components.
    std::map<std::string, std::vector<std::size_t>> out_edges;
    for (std::size_t i = 0; i < g.generators.size(); ++i) out_edges[g.generators[i].from].push_back(i);
    std::map<std::string, int> comp;
    int n_comp = 0;
    for (const auto& o : g.objects) {
        if (comp.count(o)) continue;
        std::vector<std::string> stack{o};
        comp[o] = n_comp;
        while (!stack.empty()) {
            std::string v = stack.back();
            stack.pop_back();
            for (std::size_t gi : out_edges[v]) {
                const std::string& w = g.generators[gi].to;
                if (!comp.count(w)) {
                    comp[w] = n_comp;
                    stack.push_back(w);
                }
            }
        }
        ++n_comp;
    }
    if (n_comp > 1 && !restrict_to_component) {
        std::vector<std::vector<std::string>> comps(static_cast<std::size_t>(n_comp));
        for (const auto& [o, k] : comp) comps[static_cast<std::size_t>(k)].push_back(o);
        throw DisconnectedSpace("top strata form " + std::to_string(n_comp) + " components", comps);
    }
    int keep_comp = comp.at(basepoint);

    // Spanning tree of the basepoint component (BFS; optionally shuffled).
    std::vector<std::size_t> order(g.generators.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    if (seed != 0) {
        std::mt19937 rng(seed);
        std::shuffle(order.begin(), order.end(), rng);
    }
    std::set<std::string> reached{basepoint};
    std::set<std::string> tree_walls;
    bool grew = true;
    while (grew) {
        grew = false;
        for (std::size_t gi : order) {
            const Crossing& c = g.generators[gi];
            if (comp.at(c.from) != keep_comp) continue;
            if (reached.count(c.from) && !reached.count(c.to)) {
                reached.insert(c.to);
                tree_walls.insert(c.wall);
                grew = true;
            }
        }
    }

    // Group generators: one per non-tree wall in the component.
    std::vector<std::string> walls;
    for (const auto& c : g.generators)
        if (comp.at(c.from) == keep_comp && c.dir == 0 && !tree_walls.count(c.wall)) walls.push_back(c.wall);
    std::sort(walls.begin(), walls.end());
    walls.erase(std::unique(walls.begin(), walls.end()), walls.end());
    std::map<std::string, int> wall_index;
    for (std::size_t i = 0; i < walls.size(); ++i) wall_index[walls[i]] = static_cast<int>(i);

    auto rewrite = [&](const std::vector<int>& rel) {
        std::vector<int> out;
        for (int x : rel) {
            const Crossing& c = g.generators[static_cast<std::size_t>(std::abs(x)) - 1];
            if (tree_walls.count(c.wall)) continue;
            auto it = wall_index.find(c.wall);
            if (it == wall_index.end()) continue;  // other component
            int letter = it->second + 1;
            bool inverse = (c.dir == 1) != (x < 0);
            out.push_back(inverse ? -letter : letter);
        }
        // free cancellation
        std::vector<int> red;
        for (int x : out) {
            if (!red.empty() && red.back() == -x)
                red.pop_back();
            else
                red.push_back(x);
        }
        while (red.size() >= 2 && red.front() == -red.back()) {
            red.erase(red.begin());
            red.pop_back();
        }
        return red;
    };

    std::vector<std::vector<int>> relators;
    for (const auto& rel : g.relators) {
        if (!rel.empty()) {
            const Crossing& c = g.generators[static_cast<std::size_t>(std::abs(rel.front())) - 1];
            if (comp.at(rel.front() > 0 ? c.from : c.to) != keep_comp) continue;
        }
        auto w = rewrite(rel);
        if (!w.empty()) relators.push_back(std::move(w));
    }

    // Basic Tietze moves: drop duplicates (up to rotation and inversion),
    // eliminate generators killed by length-1 relators.
    auto normalize = [](std::vector<int> w) {
        auto best = w;
        auto consider = [&](const std::vector<int>& v) {
            if (v < best) best = v;
        };
        std::vector<int> inv(w.rbegin(), w.rend());
        for (auto& x : inv) x = -x;
        for (std::size_t r = 0; r < w.size(); ++r) {
            std::rotate(w.begin(), w.begin() + 1, w.end());
            consider(w);
            std::rotate(inv.begin(), inv.begin() + 1, inv.end());
            consider(inv);
        }
        return best;
    };
    bool changed = true;
    while (changed) {
        changed = false;
        std::set<std::vector<int>> seen;
        std::vector<std::vector<int>> next;
        for (auto& r : relators) {
            if (r.empty()) continue;
            if (seen.insert(normalize(r)).second) next.push_back(r);
        }
        if (next.size() != relators.size()) changed = true;
        relators = std::move(next);
        int killed = 0;
        for (const auto& r : relators)
            if (r.size() == 1) {
                killed = std::abs(r[0]);
                break;
            }
        if (killed) {
            changed = true;
            std::vector<std::vector<int>> kept;
            for (auto& r : relators) {
                std::vector<int> w;
                for (int x : r)
                    if (std::abs(x) != killed) w.push_back(x);
                if (!w.empty()) kept.push_back(std::move(w));
            }
            relators = std::move(kept);
            // renumber: drop the generator
            for (auto& r : relators)
                for (auto& x : r) {
                    int a = std::abs(x);
                    if (a > killed) x = (x > 0) ? a - 1 : -(a - 1);
                }
            walls.erase(walls.begin() + (killed - 1));
        }
    }

    GroupPresentation out;
    out.group_form = true;
    out.objects = {basepoint};
    for (const auto& w : walls) out.generators.push_back({w, 0, basepoint, basepoint});
    out.relators = std::move(relators);
    return out;
}

std::string AbelianInvariants::text() const {
    std::ostringstream os;
    bool first = true;
    if (free_rank > 0) {
        os << "Z";
        if (free_rank > 1) os << "^" << free_rank;
        first = false;
    }
    for (const auto& t : torsion) {
        if (!first) os << " + ";
        os << "Z/" << t.str();
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

AbelianInvariants abelianization(const GroupPresentation& g) {
    if (!g.group_form) throw Error("abelianization: group form required");
    IntMatrix m = IntMatrix::zero(g.relators.size(), g.generators.size());
    for (std::size_t r = 0; r < g.relators.size(); ++r)
        for (int x : g.relators[r]) m.at(r, static_cast<std::size_t>(std::abs(x)) - 1) += (x > 0 ? 1 : -1);
    auto snf = smith_normal_form(m);
    AbelianInvariants out;
    out.free_rank = static_cast<long long>(g.generators.size()) - static_cast<long long>(snf.factors.size());
    for (const auto& f : snf.factors)
        if (f > 1) out.torsion.push_back(f);
    return out;
}

}  // namespace rmoduli
