#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tropcong/json_io.hpp"

using namespace tropcong;
using io::json;
using io::Node;

namespace {

struct Input {
    std::string file;
    json doc;
    Node root() const { return Node(doc, file); }
};

Input load(const std::string& file) { return Input{file, io::read_file(file)}; }

std::size_t max_dim()
{
    const char* env = std::getenv("TROPCONG_MAX_DIM");
    if (!env) return 6;
    try {
        return static_cast<std::size_t>(std::stoul(env));
    } catch (...) {
        throw ParseError(std::string("TROPCONG_MAX_DIM: not a number: ") + env);
    }
}

// First context found among the inputs; later ones must agree with it.
ContextPtr context_of(std::initializer_list<const Input*> inputs)
{
    ContextPtr ctx;
    for (const Input* in : inputs) {
        if (!in || !in->root().has("context")) continue;
        auto c = io::read_context(in->root()["context"]);
        if (!ctx) ctx = c;
        else if (!same_context(ctx, c)) throw PreconditionError(in->file + ": context differs from the other inputs");
    }
    if (!ctx) throw ParseError("no input carries a \"context\"");
    if (ctx->rank() > max_dim()) throw PreconditionError("rank exceeds TROPCONG_MAX_DIM");
    return ctx;
}

int emit(json out, int code)
{
    json doc = {{"format", io::kFormat}};
    doc.update(out);
    std::cout << doc.dump(2) << "\n";
    return code;
}

json cells_json(const VarietySupport& v, std::optional<std::size_t> only, bool all)
{
    json strata = json::array();
    for (const auto& s : v.strata) {
        if (only && s.face != *only) continue;
        json cells = json::array();
        for (const auto& c : s.cells) {
            if (!all && !c.selected) continue;
            auto key = cone_key(c.gens);
            bool height0 = true;
            for (const auto& r : key.rays) height0 = height0 && sgn(r[0]) == 0;
            for (const auto& l : key.lines) height0 = height0 && sgn(l[0]) == 0;
            json cell = {{"rays", io::write(key.rays)}, {"lines", io::write(key.lines)}, {"height_zero_only", height0},
                         {"hrep", io::write(c.cone)}};
            if (all) cell["selected"] = c.selected;
            cells.push_back(cell);
        }
        strata.push_back({{"tau_rays", io::write(v.ctx->face(s.face).rays)}, {"cells", cells}});
    }
    return strata;
}

PolyPair pair_from(const Input& in, const ContextPtr& ctx)
{
    auto r = in.root();
    return io::read_pair(r.has("pair") ? r["pair"] : r, ctx);
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact tropical congruence toolkit"};
    app.require_subcommand(1);
    std::uint64_t seed = 1;
    app.add_option("--seed", seed, "seed for sampled checks");

    std::string poly_f, point_f, matrix_f, pair_f, cong_f, deriv_f, cert_f, stratum_f, flag_f, polyh_f, fan_f, prime_f;
    std::size_t max_i = 4, max_deg = 8, sample_deg = 6, samples = 500, trials = 200, degree = 3;
    bool all_cells = false, finite_flag = false;

    auto* eval = app.add_subcommand("eval", "evaluate a polynomial at an extended point");
    eval->add_option("--poly", poly_f)->required();
    eval->add_option("--point", point_f)->required();

    auto* bend = app.add_subcommand("bend", "bend relations of a polynomial");
    bend->add_option("--poly", poly_f)->required();

    auto* peval = app.add_subcommand("prime-eval", "lexicographic evaluation by a defining matrix");
    peval->add_option("--matrix", matrix_f)->required();
    peval->add_option("--poly", poly_f)->required();

    auto* member = app.add_subcommand("member", "is a pair (or every generator) in the prime of a matrix");
    member->add_option("--matrix", matrix_f)->required();
    member->add_option("--pair", pair_f);
    member->add_option("--cong", cong_f);

    auto* kernel = app.add_subcommand("kernel", "ideal-kernel face of a matrix");
    kernel->add_option("--matrix", matrix_f)->required();

    auto* variety = app.add_subcommand("variety", "cells of the extended variety of a congruence");
    variety->add_option("--cong", cong_f)->required();
    variety->add_option("--stratum", stratum_f);
    variety->add_flag("--all", all_cells, "include unselected arrangement cells");

    auto* hyper = app.add_subcommand("hypersurface", "cells of the variety of the bend relations of a polynomial");
    hyper->add_option("--poly", poly_f)->required();
    hyper->add_option("--stratum", stratum_f);
    hyper->add_flag("--all", all_cells, "include unselected arrangement cells");

    auto* radm = app.add_subcommand("radical-member", "radical membership through rank-1 primes");
    radm->add_option("--cong", cong_f)->required();
    radm->add_option("--pair", pair_f)->required();
    radm->add_flag("--finite-basis", finite_flag, "declare the generators a finite tropical basis");

    auto* verify = app.add_subcommand("verify", "check a derivation or a radical certificate");
    verify->add_option("--cong", cong_f)->required();
    verify->add_option("--pair", pair_f)->required();
    verify->add_option("--derivation", deriv_f);
    verify->add_option("--certificate", cert_f);

    auto* rsearch = app.add_subcommand("radical-search", "bounded search for a radical certificate");
    rsearch->add_option("--cong", cong_f);
    rsearch->add_option("--matrix", matrix_f);
    rsearch->add_option("--pair", pair_f)->required();
    rsearch->add_option("--max-i", max_i);
    rsearch->add_option("--max-deg", max_deg);

    auto* closure_cmd = app.add_subcommand("closure", "closure membership with limit witnesses");
    closure_cmd->add_option("--polyhedron", polyh_f)->required();
    closure_cmd->add_option("--fan", fan_f)->required();
    closure_cmd->add_option("--point", point_f)->required();

    auto* resolve = app.add_subcommand("resolve", "resolve a boundary prime to a trivial-kernel prime");
    resolve->add_option("--cong", cong_f)->required();
    resolve->add_option("--prime", prime_f)->required();
    resolve->add_option("--sample-degree", sample_deg);
    resolve->add_option("--samples", samples);

    auto* fcheck = app.add_subcommand("flag-check", "validate a flag, optionally against a variety");
    fcheck->add_option("--flag", flag_f)->required();
    fcheck->add_option("--cong", cong_f);

    auto* cancel = app.add_subcommand("cancel-check", "randomized cancellativity harness");
    cancel->add_option("--cong", cong_f)->required();
    cancel->add_option("--trials", trials);
    cancel->add_option("--degree", degree);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (eval->parsed()) {
            auto pf = load(poly_f), wf = load(point_f);
            auto ctx = context_of({&pf, &wf});
            auto f = io::read_poly(pf.root(), ctx);
            auto w = io::read_point(wf.root(), ctx);
            return emit({{"value", io::write(eval_poly(f, w))}, {"initial_form", f.is_zero() ? json() : io::write(initial_form_point(f, w))}}, 0);
        }
        if (bend->parsed()) {
            auto pf = load(poly_f);
            auto ctx = context_of({&pf});
            json pairs = json::array();
            for (const auto& p : bend_relations(io::read_poly(pf.root(), ctx))) pairs.push_back(io::write(p));
            return emit({{"context", io::write(*ctx)}, {"pairs", pairs}}, 0);
        }
        if (peval->parsed()) {
            auto mf = load(matrix_f), pf = load(poly_f);
            auto ctx = context_of({&mf, &pf});
            auto m = io::read_matrix(mf.root(), ctx);
            auto f = io::read_poly(pf.root(), ctx);
            return emit({{"value", io::write(prime_eval(m, f))}}, 0);
        }
        if (member->parsed()) {
            if (pair_f.empty() == cong_f.empty()) throw ParseError("give exactly one of --pair and --cong");
            auto mf = load(matrix_f);
            std::optional<Input> other = load(pair_f.empty() ? cong_f : pair_f);
            auto ctx = context_of({&mf, &*other});
            auto m = io::read_matrix(mf.root(), ctx);
            std::vector<PolyPair> pairs;
            if (!pair_f.empty()) pairs.push_back(pair_from(*other, ctx));
            else pairs = io::read_congruence(other->root()).pairs;
            json per = json::array();
            bool all = true;
            for (const auto& p : pairs) {
                bool in = prime_contains_pair(m, p);
                all = all && in;
                per.push_back({{"lhs", io::write(prime_eval(m, p.first))}, {"rhs", io::write(prime_eval(m, p.second))}, {"member", in}});
            }
            return emit({{"member", all}, {"pairs", per}}, all ? 0 : 1);
        }
        if (kernel->parsed()) {
            auto mf = load(matrix_f);
            auto ctx = context_of({&mf});
            auto m = io::read_matrix(mf.root(), ctx);
            bool trivial = has_trivial_ideal_kernel(m);
            return emit({{"tau_rays", io::write(ctx->face(ideal_kernel_face(m)).rays)}, {"trivial", trivial}}, trivial ? 0 : 1);
        }
        if (variety->parsed() || hyper->parsed()) {
            Input in = load(variety->parsed() ? cong_f : poly_f);
            auto ctx = context_of({&in});
            std::optional<std::size_t> only;
            if (!stratum_f.empty()) {
                auto sf = load(stratum_f);
                only = io::read_face(sf.root()["tau_rays"], *ctx);
            }
            VarietySupport v = variety->parsed() ? variety_of_basis(io::read_congruence(in.root()), !all_cells)
                                                 : hypersurface(io::read_poly(in.root(), ctx), !all_cells);
            return emit({{"context", io::write(*ctx)}, {"strata", cells_json(v, only, all_cells)}}, 0);
        }
        if (radm->parsed()) {
            auto cf = load(cong_f), pf = load(pair_f);
            auto ctx = context_of({&cf, &pf});
            auto e = io::read_congruence(cf.root());
            e.finite_basis = e.finite_basis || finite_flag;
            bool in = radical_member(e, pair_from(pf, ctx));
            return emit({{"radical_member", in}}, in ? 0 : 1);
        }
        if (verify->parsed()) {
            if (deriv_f.empty() == cert_f.empty()) throw ParseError("give exactly one of --derivation and --certificate");
            auto cf = load(cong_f), pf = load(pair_f);
            auto ctx = context_of({&cf, &pf});
            auto e = io::read_congruence(cf.root());
            auto pair = pair_from(pf, ctx);
            bool ok;
            if (!deriv_f.empty()) {
                auto df = load(deriv_f);
                ok = verify_derivation(e, io::read_derivation(df.root(), ctx), pair);
            } else {
                auto kf = load(cert_f);
                ok = verify_radical_certificate(e, pair, io::read_certificate(kf.root(), ctx));
            }
            return emit({{"valid", ok}}, ok ? 0 : 1);
        }
        if (rsearch->parsed()) {
            if (cong_f.empty() == matrix_f.empty()) throw ParseError("give exactly one of --cong and --matrix");
            Input src = load(cong_f.empty() ? matrix_f : cong_f);
            auto pf = load(pair_f);
            auto ctx = context_of({&src, &pf});
            auto pair = pair_from(pf, ctx);
            SearchBounds b{max_i, max_deg, 4000};
            SearchResult r = cong_f.empty() ? search_radical_certificate(io::read_matrix(src.root(), ctx), pair, b)
                                            : search_radical_certificate(io::read_congruence(src.root()), pair, b);
            if (auto* c = std::get_if<RadicalCertificate>(&r)) return emit({{"found", true}, {"certificate", io::write(*c)}}, 0);
            return emit({{"found", false}, {"explored", std::get<NotFound>(r).explored}}, 1);
        }
        if (closure_cmd->parsed()) {
            auto lf = load(polyh_f), ff = load(fan_f), wf = load(point_f);
            auto poly = io::read_polyhedron(lf.root());
            auto fan = io::read_fan(ff.root());
            if (poly.dim != fan.dim) throw PreconditionError("polyhedron and fan live in different dimensions");
            if (poly.dim > max_dim()) throw PreconditionError("dimension exceeds TROPCONG_MAX_DIM");
            // first fan member having the point's stratum as a face
            for (const auto& cone : fan.cones) {
                auto gens = rays_from_hrep(cone);
                if (!gens.lines.empty()) continue;
                std::vector<IVec> rays;
                for (const auto& r : gens.rays) rays.push_back(to_ivec(primitive(r)));
                auto ctx = ToricContext::create(fan.dim, rays, CoeffMode::Rational);
                ExtPoint w;
                try {
                    w = io::read_point(wf.root(), ctx);
                } catch (const PreconditionError&) {
                    continue;
                }
                auto r = polyhedron_closure_membership(*ctx, poly, StratumPoint{w.face, w.coords});
                json tau = io::write(ctx->face(w.face).rays);
                if (auto* c = std::get_if<ClosureWitness>(&r)) {
                    auto lim = check_limit(*ctx, w.face, c->hat[0], c->v, w.coords);
                    return emit({{"in_closure", true}, {"tau_rays", tau}, {"w_hat", io::write(c->hat[0])}, {"v", io::write(c->v)},
                                 {"limit_check", {{"exact", lim.exact}, {"numeric", lim.numeric}}}},
                                0);
                }
                auto& nc = std::get<NotInClosure>(r);
                return emit({{"in_closure", false}, {"tau_rays", tau}, {"failed_claim", nc.claim}, {"reason", nc.reason}}, 1);
            }
            throw PreconditionError("the point's stratum is not a face of any fan member");
        }
        if (resolve->parsed()) {
            auto cf = load(cong_f), pf = load(prime_f);
            auto ctx = context_of({&cf, &pf});
            auto e = io::read_congruence(cf.root());
            PrimeMatrix p = pf.root().has("cones") ? flag_to_matrix(ctx, io::read_flag(pf.root(), ctx)) : io::read_matrix(pf.root(), ctx);
            auto r = resolve_boundary_prime(e, p, ResolveOptions{samples, sample_deg, seed});
            if (auto* f = std::get_if<ResolveFailure>(&r))
                return emit({{"resolved", false}, {"failure", to_string(f->kind)}, {"detail", f->detail}}, 1);
            auto& res = std::get<ResolutionResult>(r);
            json hats = json::array();
            for (const auto& h : res.hat_partial) hats.push_back(io::write(h));
            return emit({{"resolved", true},
                         {"q", io::write(res.q)},
                         {"trivial_kernel", has_trivial_ideal_kernel(res.q)},
                         {"contains_congruence", congruence_in_prime(e, res.q)},
                         {"cell", io::write(rays_from_hrep(res.cell))},
                         {"v", io::write(res.v)},
                         {"hat_partial_sums", hats},
                         {"b", io::write(res.b)},
                         {"refinement", {{"samples", res.refinement.samples}, {"failures", res.refinement.failures}}}},
                        0);
        }
        if (fcheck->parsed()) {
            auto ff = load(flag_f);
            std::optional<Input> cf;
            if (!cong_f.empty()) cf = load(cong_f);
            auto ctx = context_of({&ff, cf ? &*cf : nullptr});
            auto flag = io::read_flag(ff.root(), ctx);
            auto vio = validate_flag(flag);
            json out = {{"violation", to_string(vio)}};
            bool ok = vio == FlagViolation::None;
            if (ok) out["matrix"] = io::write(flag_to_matrix(ctx, flag));
            if (ok && cf) {
                bool in = flag_in_variety(ctx, flag, io::read_congruence(cf->root()).pairs);
                out["in_variety"] = in;
                ok = in;
            }
            return emit(out, ok ? 0 : 1);
        }
        if (cancel->parsed()) {
            auto cf = load(cong_f);
            context_of({&cf});
            auto rep = cancellativity_harness(io::read_congruence(cf.root()), trials, degree, seed);
            return emit({{"trials", rep.trials}, {"premise_hits", rep.premise_hits}, {"violations", rep.violations}},
                        rep.violations == 0 ? 0 : 1);
        }
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const PreconditionError& e) {
        std::cerr << "precondition violated: " << e.what() << "\n";
        return 3;
    } catch (const InternalError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
    return 2;
}
