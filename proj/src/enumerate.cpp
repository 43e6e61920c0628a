#include "rmoduli/enumerate.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "rmoduli/errors.hpp"
#include "rmoduli/json_io.hpp"

namespace rmoduli {

const UPlanarClass* StrataPoset::find(const std::string& encoding) const {
    for (const auto& [d, cs] : classes) {
        auto it = std::lower_bound(cs.begin(), cs.end(), encoding,
                                   [](const UPlanarClass& c, const std::string& e) { return c.encoding < e; });
        if (it != cs.end() && it->encoding == encoding) return &*it;
    }
    return nullptr;
}

int StrataPoset::dim_of(const std::string& encoding) const {
    for (const auto& [d, cs] : classes) {
        auto it = std::lower_bound(cs.begin(), cs.end(), encoding,
                                   [](const UPlanarClass& c, const std::string& e) { return c.encoding < e; });
        if (it != cs.end() && it->encoding == encoding) return d;
    }
    return -1;
}

std::size_t StrataPoset::total_classes() const {
    std::size_t k = 0;
    for (const auto& [d, cs] : classes) k += cs.size();
    return k;
}

std::vector<long long> StrataPoset::counts_by_dim() const {
    std::vector<long long> out(static_cast<std::size_t>(top_dim()) + 1, 0);
    for (const auto& [d, cs] : classes) out.at(static_cast<std::size_t>(d)) = static_cast<long long>(cs.size());
    return out;
}

std::vector<Tree> all_stable_trees(int n) {
    if (n < 3) throw SpecError("all_stable_trees: n must be at least 3");
    Tree base;
    base.vertices = {0};
    for (int i = 1; i <= 3; ++i) base.flags.push_back(Flag{i, 0, i, i});
    base.normalize();
    std::vector<Tree> trees{base};

    for (int k = 4; k <= n; ++k) {
        std::vector<Tree> next;
        for (const Tree& t : trees) {
            int fresh = 100;
            for (const Flag& f : t.flags) fresh = std::max(fresh, f.id + 1);
            int fresh_v = 0;
            for (VertexId v : t.vertices) fresh_v = std::max(fresh_v, v + 1);

            // (a) new tail at an existing vertex
            for (VertexId v : t.vertices) {
                Tree u = t;
                u.flags.push_back(Flag{k, v, k, k});
                u.normalize();
                next.push_back(std::move(u));
            }
            // (b) subdivide an edge, the new 3-valent vertex carries the tail
            for (FlagId e : t.edges()) {
                Tree u = t;
                FlagId me = u.flag(e).mate;
                VertexId w = fresh_v;
                u.vertices.push_back(w);
                FlagId a = fresh, b = fresh + 1;
                u.flag_mut(e).mate = a;
                u.flag_mut(me).mate = b;
                u.flags.push_back(Flag{a, w, e, 0});
                u.flags.push_back(Flag{b, w, me, 0});
                u.flags.push_back(Flag{k, w, k, k});
                u.normalize();
                next.push_back(std::move(u));
            }
            // (c) pull an existing tail onto a new vertex together with the new one
            for (const Flag& f : t.flags) {
                if (!f.is_tail()) continue;
                Tree u = t;
                VertexId w = fresh_v;
                u.vertices.push_back(w);
                FlagId a = fresh, b = fresh + 1;
                u.flag_mut(f.id).vertex = w;
                u.flags.push_back(Flag{a, f.vertex, b, 0});
                u.flags.push_back(Flag{b, w, a, 0});
                u.flags.push_back(Flag{k, w, k, k});
                u.normalize();
                next.push_back(std::move(u));
            }
        }
        trees = std::move(next);
    }
    return trees;
}

std::vector<UPlanarClass> all_decorations(const Tree& tree, const InvolutionSpec& sigma) {
    auto inv = find_involution(tree, sigma);
    if (!inv) return {};
    std::set<TypeMarker> markers;
    try {
        markers = classify_type(tree, sigma);
    } catch (const NoEquivariantStructure&) {
        return {};
    }

    std::map<std::string, UPlanarClass> dedup;
    auto add = [&](OPlanarTree t) {
        UPlanarClass c = canonicalize(t);
        dedup.emplace(c.encoding, std::move(c));
    };

    for (TypeMarker m : markers) {
        if (m == TypeMarker::Type2) {
            add(make_oplanar(sigma, tree, m, {}, {}, {}));
            continue;
        }
        if (m == TypeMarker::Type3) {
            FlagId special = -1;
            for (FlagId e : tree.edges()) {
                FlagId ea = inv->f(e);
                if (ea == tree.flag(e).mate) special = e;
            }
            if (special == -1) throw Error("all_decorations: type-3 tree without special edge");
            // one side of the special edge
            std::vector<VertexId> half;
            {
                std::set<VertexId> side;
                FlagId ms = tree.flag(special).mate;
                std::vector<VertexId> stack{tree.flag(special).vertex};
                side.insert(stack.back());
                while (!stack.empty()) {
                    VertexId v = stack.back();
                    stack.pop_back();
                    for (FlagId g : tree.flags_at(v)) {
                        if (g == special || g == ms || tree.flag(g).is_tail()) continue;
                        VertexId w = tree.far_vertex(g);
                        if (side.insert(w).second) stack.push_back(w);
                    }
                }
                half.assign(side.begin(), side.end());
            }
            add(make_oplanar(sigma, tree, m, {}, {}, half));
            continue;
        }
        // Type 1: all cyclic orders and plus choices per fixed vertex.
        auto fixed = inv->fixed_vertices();
        struct VertexChoices {
            VertexId v;
            std::vector<std::vector<FlagId>> cycles;
            std::vector<FlagId> pair_reps;  // one flag per conjugate pair
        };
        std::vector<VertexChoices> per_vertex;
        for (VertexId v : fixed) {
            VertexChoices vc;
            vc.v = v;
            std::vector<FlagId> real_here;
            std::set<FlagId> done;
            for (FlagId g : tree.flags_at(v)) {
                if (inv->flag_fixed(g)) {
                    real_here.push_back(g);
                } else if (!done.count(g)) {
                    done.insert(g);
                    done.insert(inv->f(g));
                    vc.pair_reps.push_back(g);
                }
            }
            std::sort(real_here.begin(), real_here.end());
            if (real_here.empty()) {
                vc.cycles.push_back({});
            } else {
                std::vector<FlagId> rest(real_here.begin() + 1, real_here.end());
                std::sort(rest.begin(), rest.end());
                do {
                    std::vector<FlagId> cyc{real_here.front()};
                    cyc.insert(cyc.end(), rest.begin(), rest.end());
                    vc.cycles.push_back(cyc);
                } while (std::next_permutation(rest.begin(), rest.end()));
            }
            std::sort(vc.pair_reps.begin(), vc.pair_reps.end());
            per_vertex.push_back(std::move(vc));
        }
        // Cartesian product of (cycle choice, plus mask) over fixed vertices.
        std::vector<std::size_t> cyc_idx(per_vertex.size(), 0);
        std::vector<unsigned> mask(per_vertex.size(), 0);
        while (true) {
            std::vector<std::pair<VertexId, std::vector<FlagId>>> cycles, pluses;
            for (std::size_t i = 0; i < per_vertex.size(); ++i) {
                const auto& vc = per_vertex[i];
                cycles.emplace_back(vc.v, vc.cycles[cyc_idx[i]]);
                std::vector<FlagId> plus;
                for (std::size_t b = 0; b < vc.pair_reps.size(); ++b) {
                    FlagId rep = vc.pair_reps[b];
                    plus.push_back((mask[i] >> b) & 1 ? inv->f(rep) : rep);
                }
                pluses.emplace_back(vc.v, plus);
            }
            add(make_oplanar(sigma, tree, m, cycles, pluses, {}));
            // advance odometer
            std::size_t i = 0;
            for (; i < per_vertex.size(); ++i) {
                if (mask[i] + 1 < (1u << per_vertex[i].pair_reps.size())) {
                    ++mask[i];
                    break;
                }
                mask[i] = 0;
                if (cyc_idx[i] + 1 < per_vertex[i].cycles.size()) {
                    ++cyc_idx[i];
                    break;
                }
                cyc_idx[i] = 0;
            }
            if (i == per_vertex.size()) break;
        }
    }

    std::vector<UPlanarClass> out;
    out.reserve(dedup.size());
    for (auto& [e, c] : dedup) out.push_back(std::move(c));
    return out;
}

StrataPoset enumerate_classes(const InvolutionSpec& sigma, int threads) {
    if (sigma.n < 3) throw SpecError("enumerate_classes: n must be at least 3");
    if (threads <= 0) {
        unsigned hc = std::thread::hardware_concurrency();
        threads = static_cast<int>(std::min(hc ? hc : 1u, 8u));
    }
    auto trees = all_stable_trees(sigma.n);

    std::map<std::string, UPlanarClass> dedup;
    std::mutex mu;
    auto worker = [&](std::size_t begin, std::size_t end) {
        std::map<std::string, UPlanarClass> local;
        for (std::size_t i = begin; i < end; ++i)
            for (auto& c : all_decorations(trees[i], sigma)) local.emplace(c.encoding, std::move(c));
        std::lock_guard<std::mutex> lock(mu);
        for (auto& [e, c] : local) dedup.emplace(e, std::move(c));
    };
    {
        std::vector<std::thread> pool;
        std::size_t chunk = (trees.size() + static_cast<std::size_t>(threads) - 1) / static_cast<std::size_t>(threads);
        for (int t = 0; t < threads; ++t) {
            std::size_t b = static_cast<std::size_t>(t) * chunk;
            std::size_t e = std::min(trees.size(), b + chunk);
            if (b < e) pool.emplace_back(worker, b, e);
        }
        for (auto& th : pool) th.join();
    }

    StrataPoset poset;
    poset.sigma = sigma;
    for (auto& [e, c] : dedup) {
        int d = dimension(c);
        poset.classes[d].push_back(std::move(c));
    }
    for (auto& [d, cs] : poset.classes)
        std::sort(cs.begin(), cs.end(),
                  [](const UPlanarClass& a, const UPlanarClass& b) { return a.encoding < b.encoding; });

    // Coverings: contract every invariant edge of every class with both signs.
    std::vector<const UPlanarClass*> all;
    for (const auto& [d, cs] : poset.classes)
        for (const auto& c : cs) all.push_back(&c);
    std::vector<Covering> covs;
    auto cov_worker = [&](std::size_t begin, std::size_t end) {
        std::vector<Covering> local;
        for (std::size_t i = begin; i < end; ++i) {
            const auto& c = *all[i];
            for (FlagId e : c.representative.invariant_edges()) {
                auto up = canonicalize(contract_invariant_edge(c.representative, e, Sign::Plus));
                auto dn = canonicalize(contract_invariant_edge(c.representative, e, Sign::Minus));
                if (up.encoding == dn.encoding)
                    local.push_back({up.encoding, c.encoding, 2});
                else {
                    local.push_back({up.encoding, c.encoding, 1});
                    local.push_back({dn.encoding, c.encoding, 1});
                }
            }
        }
        std::lock_guard<std::mutex> lock(mu);
        covs.insert(covs.end(), local.begin(), local.end());
    };
    {
        std::vector<std::thread> pool;
        std::size_t chunk = (all.size() + static_cast<std::size_t>(threads) - 1) / static_cast<std::size_t>(threads);
        for (int t = 0; t < threads; ++t) {
            std::size_t b = static_cast<std::size_t>(t) * chunk;
            std::size_t e = std::min(all.size(), b + chunk);
            if (b < e) pool.emplace_back(cov_worker, b, e);
        }
        for (auto& th : pool) th.join();
    }
    std::sort(covs.begin(), covs.end());
    poset.coverings = std::move(covs);

    for (const auto& cov : poset.coverings)
        if (poset.dim_of(cov.upper) == -1 || poset.dim_of(cov.lower) == -1)
            throw Error("enumerate_classes: covering endpoint missing from the poset");
    return poset;
}

long long euler_characteristic(const StrataPoset& p) {
    long long chi = 0;
    for (const auto& [d, cs] : p.classes)
        chi += (d % 2 == 0 ? 1 : -1) * static_cast<long long>(cs.size());
    return chi;
}

bool closure_complete(const StrataPoset& p) {
    for (const auto& [d, cs] : p.classes) {
        if (d == p.top_dim()) continue;
        for (const auto& c : cs) {
            bool ok = false;
            for (FlagId e : c.representative.invariant_edges()) {
                auto up = canonicalize(contract_invariant_edge(c.representative, e, Sign::Plus));
                if (p.dim_of(up.encoding) == d + 1) {
                    ok = true;
                    break;
                }
            }
            if (!ok)
                for (FlagId e : c.representative.conjugate_edge_pairs()) {
                    auto up = canonicalize(contract_conjugate_pair(c.representative, e));
                    if (p.dim_of(up.encoding) == d + 2) {
                        ok = true;
                        break;
                    }
                }
            if (!ok) return false;
        }
    }
    return true;
}

std::string cache_file_name(const InvolutionSpec& sigma) {
    std::ostringstream os;
    os << "poset-n" << sigma.n << "-";
    if (sigma.pairs.empty())
        os << "id";
    else
        for (auto [a, b] : sigma.pairs) os << a << "_" << b << "-";
    os << "-v" << kCacheFormatVersion << ".jsonl";
    return os.str();
}

void save_cache(const StrataPoset& p, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("save_cache: cannot open " + path);
    json sig = json::array();
    for (auto [a, b] : p.sigma.pairs) sig.push_back(json::array({a, b}));
    json header;
    header["n"] = p.sigma.n;
    header["sigma"] = sig;
    header["version"] = kCacheFormatVersion;
    out << header.dump() << "\n";
    for (const auto& [d, cs] : p.classes)
        for (const auto& c : cs) {
            json j = class_to_json(c);
            j["dim"] = d;
            out << j.dump() << "\n";
        }
    for (const auto& cov : p.coverings) {
        json j;
        j["upper"] = cov.upper;
        j["lower"] = cov.lower;
        j["mult"] = cov.mult;
        out << j.dump() << "\n";
    }
}

std::optional<StrataPoset> load_cache(const std::string& path, const InvolutionSpec& sigma) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    std::string line;
    if (!std::getline(in, line)) return std::nullopt;
    try {
        json header = json::parse(line);
        if (header.at("version").get<int>() != kCacheFormatVersion) return std::nullopt;
        if (header.at("n").get<int>() != sigma.n) return std::nullopt;
        std::vector<std::pair<int, int>> pairs;
        for (const auto& pr : header.at("sigma")) pairs.emplace_back(pr.at(0).get<int>(), pr.at(1).get<int>());
        if (InvolutionSpec::make(sigma.n, pairs) != sigma) return std::nullopt;

        StrataPoset p;
        p.sigma = sigma;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            json j = json::parse(line);
            if (j.contains("tree")) {
                UPlanarClass c = class_from_json(j);
                int d = j.at("dim").get<int>();
                if (d != dimension(c)) return std::nullopt;
                p.classes[d].push_back(std::move(c));
            } else if (j.contains("mult")) {
                p.coverings.push_back({j.at("upper").get<std::string>(), j.at("lower").get<std::string>(),
                                       j.at("mult").get<int>()});
            } else {
                return std::nullopt;
            }
        }
        for (auto& [d, cs] : p.classes)
            std::sort(cs.begin(), cs.end(),
                      [](const UPlanarClass& a, const UPlanarClass& b) { return a.encoding < b.encoding; });
        std::sort(p.coverings.begin(), p.coverings.end());
        return p;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::string to_dot(const StrataPoset& p) {
    std::ostringstream os;
    os << "digraph strata {\n  rankdir=BT;\n";
    for (const auto& [d, cs] : p.classes)
        for (const auto& c : cs)
            os << "  \"" << c.encoding << "\" [label=\"d" << d << "/" << c.encoding.substr(0, 8) << "\"];\n";
    for (const auto& cov : p.coverings)
        os << "  \"" << cov.lower << "\" -> \"" << cov.upper << "\" [label=\"" << cov.mult << "\"];\n";
    os << "}\n";
    return os.str();
}

}  // namespace rmoduli
