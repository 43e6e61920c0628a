#include "rmoduli/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "rmoduli/errors.hpp"
#include "rmoduli/graph_complex.hpp"
#include "rmoduli/homology.hpp"
#include "rmoduli/json_io.hpp"
#include "rmoduli/pi1.hpp"

namespace rmoduli {

namespace {

namespace fs = std::filesystem;

std::string resolve_cache_dir(const RunConfig& cfg) {
    if (!cfg.cache_dir.empty()) return cfg.cache_dir;
    if (const char* env = std::getenv("RMODULI_CACHE"); env && *env) return env;
    return ".rmoduli-cache";
}

StrataPoset obtain_poset(const RunConfig& cfg, const InvolutionSpec& sigma, std::ostream& err) {
    if (!cfg.no_cache) {
        fs::path dir = resolve_cache_dir(cfg);
        fs::path file = dir / cache_file_name(sigma);
        if (auto cached = load_cache(file.string(), sigma)) {
            err << "using cached poset " << file.string() << "\n";
            return std::move(*cached);
        }
        StrataPoset p = enumerate_classes(sigma, cfg.threads);
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (!ec) save_cache(p, file.string());
        return p;
    }
    return enumerate_classes(sigma, cfg.threads);
}

json sigma_json(const InvolutionSpec& sigma) {
    json s = json::array();
    for (auto [a, b] : sigma.pairs) s.push_back(json::array({a, b}));
    return s;
}

void dump_matrices(const RunConfig& cfg, const StrataPoset& p, Coeff coeff) {
    if (cfg.dump_matrices.empty()) return;
    fs::create_directories(cfg.dump_matrices);
    for (int d = 0; d <= p.top_dim(); ++d) {
        IntMatrix m = boundary_matrix(p, d, coeff);
        fs::path base = fs::path(cfg.dump_matrices) / ("boundary_" + std::to_string(d));
        std::ofstream(base.string() + ".json") << matrix_to_json(m).dump(2) << "\n";
        std::ofstream(base.string() + ".sms") << matrix_to_sms(m);
    }
}

int run_inner(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    InvolutionSpec sigma = parse_sigma(cfg.sigma, cfg.n);
    Coeff coeff = cfg.coeff == "z-experimental" ? Coeff::ZExperimental : Coeff::Z2;

    StrataPoset p = obtain_poset(cfg, sigma, err);

    if (cfg.verify) {
        GradedComplex c = build_complex(p, Coeff::Z2);
        if (!boundary_squares_to_zero(c)) throw ComplexAxiomViolated("del^2 != 0");
        if (!relations_closed(c))
            throw RelationsNotClosedUnderBoundary("relation ideal not closed under the boundary");
        if (!closure_complete(p)) throw ComplexAxiomViolated("poset closure incomplete");
    }

    if (cfg.command == "enumerate") {
        auto counts = p.counts_by_dim();
        if (cfg.output == "json") {
            json j;
            j["n"] = sigma.n;
            j["sigma"] = sigma_json(sigma);
            j["counts_by_dim"] = counts;
            j["euler"] = euler_characteristic(p);
            j["coverings"] = p.coverings.size();
            out << j.dump() << "\n";
        } else {
            out << "strata of n=" << sigma.n << " sigma=" << sigma.text() << "\n";
            for (std::size_t d = 0; d < counts.size(); ++d)
                out << "  dim " << d << ": " << counts[d] << "\n";
            out << "  total " << p.total_classes() << ", coverings " << p.coverings.size()
                << ", alternating count sum " << euler_characteristic(p) << "\n";
        }
        return 0;
    }

    if (cfg.command == "poset") {
        out << to_dot(p);
        return 0;
    }

    if (cfg.command == "homology") {
        GradedComplex c = build_complex(p, coeff);
        dump_matrices(cfg, p, coeff);
        if (coeff == Coeff::ZExperimental) {
            bool trivial_ideal = true;
            for (const auto& r : c.relations) trivial_ideal &= r.empty();
            if (!boundary_squares_to_zero(c))
                throw ComplexAxiomViolated(
                    "Z-experimental orientation bits do not square to zero; no integer homology here");
            if (!trivial_ideal) {
                // Present the quotient via SNF of the relation matrices.
                json pres = json::object();
                for (int d = 0; d < c.degrees(); ++d) {
                    const auto& rel = c.relations[static_cast<std::size_t>(d)];
                    if (rel.empty()) continue;
                    IntMatrix m = IntMatrix::zero(rel.size(), c.dim(d));
                    for (std::size_t r = 0; r < rel.size(); ++r)
                        for (auto [i, v] : rel[r]) m.at(r, i) = v;
                    auto snf = smith_normal_form(m);
                    json fs = json::array();
                    for (const auto& f : snf.factors) fs.push_back(f.str());
                    pres[std::to_string(d)] = {{"generators", c.dim(d)}, {"relation_factors", fs}};
                }
                err << "Z-experimental with nontrivial ideal: reporting quotient presentations only\n";
                out << pres.dump() << "\n";
                return 0;
            }
            HomologySummary h = homology_integer(c);
            out << (cfg.output == "json" ? h.to_json().dump() + "\n" : h.to_text());
            return 0;
        }
        HomologySummary h = betti_mod2(c);
        out << (cfg.output == "json" ? h.to_json().dump() + "\n" : h.to_text());
        return 0;
    }

    if (cfg.command == "pi1") {
        GroupPresentation groupoid = build_groupoid(p);
        if (groupoid.objects.empty()) throw Error("pi1: no top strata");
        std::string basepoint = groupoid.objects.front();
        GroupPresentation grp;
        try {
            grp = collapse_to_group(groupoid, basepoint);
        } catch (const DisconnectedSpace& d) {
            err << d.what() << "; computing at the basepoint component\n";
            grp = collapse_to_group(groupoid, basepoint, 0, true);
        }
        AbelianInvariants ab = abelianization(grp);
        if (cfg.output == "json") {
            json j;
            j["groupoid"] = groupoid.to_json();
            j["group"] = grp.to_json();
            json t = json::array();
            for (const auto& x : ab.torsion) t.push_back(x.str());
            j["abelianization"] = {{"free_rank", ab.free_rank}, {"torsion", t}};
            out << j.dump() << "\n";
        } else {
            out << "objects: " << groupoid.objects.size() << ", crossings: " << groupoid.generators.size()
                << ", relators: " << groupoid.relators.size() << "\n";
            out << "collapsed presentation (" << grp.generators.size() << " generators, " << grp.relators.size()
                << " relators):\n";
            out << grp.to_gap();
            out << "abelianization: " << ab.text() << "\n";
        }
        return 0;
    }

    throw SpecError("unknown command: " + cfg.command);
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        return run_inner(cfg, out, err);
    } catch (const ComplexAxiomViolated& e) {
        err << "consistency failure: " << e.what() << "\n";
        return 3;
    } catch (const RelationsNotClosedUnderBoundary& e) {
        err << "consistency failure: " << e.what() << "\n";
        return 3;
    } catch (const ParseError& e) {
        err << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const SpecError& e) {
        err << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const OverlappingPairs& e) {
        err << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const TooFewLabels& e) {
        err << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "internal error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace rmoduli
