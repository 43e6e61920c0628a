#include "rmoduli/json_io.hpp"

#include "rmoduli/errors.hpp"

namespace rmoduli {

json tree_to_json(const OPlanarTree& t) {
    json j;
    j["n"] = t.sigma.n;
    json sig = json::array();
    for (auto [a, b] : t.sigma.pairs) sig.push_back(json::array({a, b}));
    j["sigma"] = sig;
    j["marker"] = static_cast<int>(t.marker);
    json vs = json::array();
    for (VertexId v : t.tree.vertices) {
        json jv;
        jv["id"] = v;
        jv["fixed"] = t.inv.vertex_fixed(v);
        const auto* c = t.cycle_of(v);
        jv["cycle"] = c ? json(*c) : json::array();
        const auto* p = t.plus_of(v);
        jv["plus"] = p ? json(*p) : json::array();
        vs.push_back(jv);
    }
    j["vertices"] = vs;
    json fs = json::array();
    for (const Flag& f : t.tree.flags) {
        json jf;
        jf["id"] = f.id;
        jf["vertex"] = f.vertex;
        jf["mate"] = f.is_tail() ? json(nullptr) : json(f.mate);
        jf["tail"] = f.is_tail() ? json(f.tail) : json(nullptr);
        fs.push_back(jf);
    }
    j["flags"] = fs;
    j["half_plus"] = t.marker == TypeMarker::Type3 ? json(t.half_plus) : json(nullptr);
    return j;
}

OPlanarTree tree_from_json(const json& j) {
    int n = j.at("n").get<int>();
    std::vector<std::pair<int, int>> pairs;
    for (const auto& p : j.at("sigma")) pairs.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
    InvolutionSpec sigma = InvolutionSpec::make(n, pairs);
    Tree tree;
    std::vector<std::pair<VertexId, std::vector<FlagId>>> cyc, plus;
    for (const auto& jv : j.at("vertices")) {
        VertexId v = jv.at("id").get<int>();
        tree.vertices.push_back(v);
        if (jv.at("fixed").get<bool>()) {
            cyc.emplace_back(v, jv.at("cycle").get<std::vector<FlagId>>());
            auto p = jv.at("plus").get<std::vector<FlagId>>();
            plus.emplace_back(v, p);
        }
    }
    for (const auto& jf : j.at("flags")) {
        Flag f;
        f.id = jf.at("id").get<int>();
        f.vertex = jf.at("vertex").get<int>();
        f.mate = jf.at("mate").is_null() ? f.id : jf.at("mate").get<int>();
        f.tail = jf.at("tail").is_null() ? 0 : jf.at("tail").get<int>();
        tree.flags.push_back(f);
    }
    TypeMarker marker = static_cast<TypeMarker>(j.at("marker").get<int>());
    std::vector<VertexId> half;
    if (!j.at("half_plus").is_null()) half = j.at("half_plus").get<std::vector<VertexId>>();
    if (marker != TypeMarker::Type1) {
        cyc.clear();
        plus.clear();
    }
    return make_oplanar(sigma, std::move(tree), marker, std::move(cyc), std::move(plus), std::move(half));
}

json class_to_json(const UPlanarClass& c) {
    json j;
    j["encoding"] = c.encoding;
    j["tree"] = tree_to_json(c.representative);
    return j;
}

UPlanarClass class_from_json(const json& j) {
    OPlanarTree t = tree_from_json(j.at("tree"));
    UPlanarClass c = canonicalize(t);
    if (j.contains("encoding") && j.at("encoding").get<std::string>() != c.encoding)
        throw Error("class_from_json: stored encoding does not match recomputed canonical form");
    return c;
}

}  // namespace rmoduli
