#include <gtest/gtest.h>

#include "support.hpp"

using namespace tctest;

namespace {

TropPoly mono(const ContextPtr& ctx, long a, IVec u) { return TropPoly::monomial(ctx, Q(a), std::move(u)); }

ExtPoint dense(const ContextPtr& ctx, Q h, Vec x) { return make_point(*ctx, std::move(h), ctx->dense_face(), x); }

PolyhedronH cell_polyhedron() { return load_polyhedron("closure/cell.json"); }

// {(r, x) : r >= 0, a.x rel b r} for a list of rows.
ConeH height_cone(std::size_t n, const std::vector<std::tuple<Vec, Q, Rel>>& rows)
{
    ConeH c{n + 1, {}};
    c.add(scale(unit(n + 1, 0), Q(-1)), 0, Rel::Le);
    for (const auto& [a, b, rel] : rows) {
        Vec full{-b};
        full.insert(full.end(), a.begin(), a.end());
        c.add(full, 0, rel);
    }
    return c;
}

}  // namespace

// ------------------------------------------------------------ varieties

TEST(Variety, TruncatedFamilyMember)
{
    auto e = load_congruence("truncation/congruence.json");
    auto v = variety_of_basis(e, true);
    ConeH want = height_cone(1, {{{Q(1)}, Q(1), Rel::Le}});
    EXPECT_TRUE(union_equal(v.stratum(0).selected(), {want}));
}

TEST(Variety, DiagonalPairIsWholeStratum)
{
    auto ctx = ToricContext::affine_space(2);
    TropPoly f = mono(ctx, 0, {2, 0}) + mono(ctx, 1, {1, 1}) + mono(ctx, 0, {0, 0});
    for (std::size_t face = 0; face < ctx->faces().size(); ++face)
        EXPECT_TRUE(union_equal(pair_variety({f, f}, face), {stratum_space(*ctx, face)})) << face;
}

TEST(Variety, NoKerPrime2Cells)
{
    auto e = load_congruence("nokerprime2/congruence.json");
    auto v = variety_of_basis(e, true);
    const auto& ctx = *e.ctx;
    auto sel = v.stratum(ctx.dense_face()).selected();
    EXPECT_TRUE(covered_by(cone_over(cell_polyhedron()), sel));
    EXPECT_EQ(sel.size(), 9u);
    EXPECT_EQ(v.stratum(ctx.deep_face()).selected().size(), 1u);
    for (std::size_t face = 1; face + 1 < ctx.faces().size(); ++face) EXPECT_TRUE(v.stratum(face).selected().empty());
    // Canonical order puts cone((0,-1,-1),(1,0,1)) before cone((0,-1,-1),(1,1,0)).
    std::vector<ConeKey> keys;
    for (const auto& c : v.stratum(0).cells) keys.push_back(cone_key(c.gens));
    EXPECT_TRUE(std::is_sorted(keys.begin(), keys.end()));
    auto l2 = cone_of_rays({{Q(0), Q(-1), Q(-1)}, {Q(1), Q(0), Q(1)}}, 3);
    auto l1 = cone_of_rays({{Q(0), Q(-1), Q(-1)}, {Q(1), Q(1), Q(0)}}, 3);
    auto pos = [&](const ConeH& c) {
        for (std::size_t i = 0; i < sel.size(); ++i)
            if (cone_key(sel[i]) == cone_key(c)) return static_cast<long>(i);
        return -1L;
    };
    ASSERT_GE(pos(l1), 0);
    ASSERT_GE(pos(l2), 0);
    EXPECT_LT(pos(l2), pos(l1));
}

TEST(Variety, PointMembership)
{
    auto e = load_congruence("nokerprime2/congruence.json");
    auto v = variety_of_basis(e, true);
    for (const auto& [name, want] : std::vector<std::pair<std::string, bool>>{
             {"nokerprime2/point_on.json", true}, {"nokerprime2/point_deep.json", true}, {"nokerprime2/point_off.json", false}}) {
        json j = load(name);
        auto w = io::read_point(io::Node(j, name), e.ctx);
        EXPECT_EQ(point_in_variety(v, w), want) << name;
        EXPECT_EQ(pairs_hold(e.pairs, w), want) << name;
    }
}

TEST(Variety, BigExampleHypersurfaceAndBooleanImage)
{
    json j = load("big/generators.json");
    io::Node n(j, "generators");
    auto ctx = io::read_context(n["context"]);
    auto f1 = io::read_poly(n["f"][0], ctx);
    EXPECT_TRUE(union_equal(dense_slices(hypersurface(f1, true)), load_pieces("big/f1_display.json")));

    auto bctx = ToricContext::affine_space(3, CoeffMode::Boolean);
    std::vector<PolyPair> pairs;
    for (const auto& g : n["g"].items()) {
        TropPoly b(bctx);
        auto gp = io::read_poly(g, ctx);
        for (const auto& [u, a] : gp.terms()) b.add_term(0, u);
        for (auto& pr : bend_relations(b)) pairs.push_back(pr);
    }
    auto slices = dense_slices(variety_of_pairs(bctx, pairs, true));
    EXPECT_TRUE(union_equal(slices, load_pieces("big/boolean_g_display.json")));
}

TEST(Variety, FlagMembership)
{
    auto e = load_congruence("nokerprime2/congruence.json");
    for (const char* name : {"nokerprime2/flag_deep.json", "nokerprime2/flag_Q.json"}) {
        json j = load(name);
        auto flag = io::read_flag(io::Node(j, name), e.ctx);
        EXPECT_TRUE(flag_in_variety(e.ctx, flag, e.pairs)) << name;
        EXPECT_TRUE(congruence_in_prime(e, flag_to_matrix(e.ctx, flag))) << name;
    }
    FlagOfCones off{{}, {{{Q(1), Q(1), Q(1)}}}};
    EXPECT_FALSE(flag_in_variety(e.ctx, off, e.pairs));
    EXPECT_FALSE(congruence_in_prime(e, flag_to_matrix(e.ctx, off)));
}

TEST(Variety, RadicalMembership)
{
    auto e = load_congruence("gleich/congruence.json");
    EXPECT_TRUE(radical_member(e, load_pair("gleich/pair_x_1.json", e.ctx)));
    EXPECT_TRUE(radical_member(e, e.pairs[0]));
    EXPECT_TRUE(radical_member(e, {e.pairs[0].first * mono(e.ctx, 2, {1}), e.pairs[0].second * mono(e.ctx, 2, {1})}));
    auto no_basis = e;
    no_basis.finite_basis = false;
    EXPECT_THROW(radical_member(no_basis, e.pairs[0]), PreconditionError);

    auto e2 = load_congruence("nokerprime2/congruence.json");
    auto fg = load_pair("nokerprime2/pair_x2_txy.json", e2.ctx);
    bool oracle = oracle_equal_on_variety(e2, fg.first, fg.second);
    EXPECT_EQ(radical_member(e2, fg), oracle);
    EXPECT_FALSE(oracle);
    bool separated = false;
    for (const auto& w : grid_points(*e2.ctx))
        separated = separated || (pairs_hold(e2.pairs, w) && !(eval_poly(fg.first, w) == eval_poly(fg.second, w)));
    EXPECT_TRUE(separated);
}

TEST(Variety, FunctionsAndFractions)
{
    auto e = load_congruence("gleich/congruence.json");
    auto v = variety_of_basis(e, true);
    TropPoly x = mono(e.ctx, 0, {1}), one = mono(e.ctx, 0, {0});
    EXPECT_TRUE(functions_equal_on_variety(v, x, one));
    TropPoly f = x + mono(e.ctx, -1, {2});
    EXPECT_TRUE(functions_equal_on_variety(v, f, f + f));

    auto torus = ToricContext::torus(1);
    CongruencePresentation empty{torus, {}, true};
    auto tv = variety_of_basis(empty, true);
    TropPoly tx = mono(torus, 0, {1});
    EXPECT_TRUE(fractions_equal_on_variety(tv, {tx, mono(torus, 0, {0})}, {tx * tx, tx}));
    EXPECT_FALSE(fractions_equal_on_variety(tv, {tx, mono(torus, 0, {0})}, {tx, tx}));
}

TEST(Variety, ShrinkFlags)
{
    auto g = load_congruence("gleich/congruence.json");
    FlagOfCones ray{{}, {{{Q(1), Q(0)}}}};
    auto s = shrink_flag(g.ctx, ray, g.pairs);
    EXPECT_EQ(s.cones, ray.cones);

    auto e = load_congruence("nokerprime2/congruence.json");
    json j = load("nokerprime2/flag_deep.json");
    auto deep = io::read_flag(io::Node(j, "flag_deep"), e.ctx);
    EXPECT_EQ(shrink_flag(e.ctx, deep, e.pairs).cones, deep.cones);

    auto t = load_congruence("truncation/congruence.json");
    auto p = load_matrix("truncation/P.json", t.ctx);
    auto flag = matrix_to_flag(p);
    EXPECT_FALSE(flag_in_variety(t.ctx, flag, t.pairs));
    auto shrunk = shrink_flag(t.ctx, flag, t.pairs);
    ConeH c1 = cone_of_rays(shrunk.cones[1], 2);
    ConeH want = intersect(cone_of_rays(flag.cones[1], 2), height_cone(1, {{{Q(1)}, Q(1), Rel::Le}}));
    EXPECT_TRUE(covered_by(c1, {want}));
    EXPECT_EQ(dimension(c1), 2);
    EXPECT_TRUE(flag_in_variety(t.ctx, shrunk, t.pairs));
    EXPECT_TRUE(same_prime_sampled(flag_to_matrix(t.ctx, shrunk), p, 5));
}

// ------------------------------------------------------------ closures

TEST(Closure, ConeWitnessesOnNoKerPrime2Cell)
{
    auto ctx = ToricContext::affine_space(2);
    auto r = cone_closure_witnesses(*ctx, cone_over(cell_polyhedron()), ctx->deep_face(), {{Q(1), Q(0), Q(0)}});
    ASSERT_TRUE(std::holds_alternative<ClosureWitness>(r));
    const auto& w = std::get<ClosureWitness>(r);
    EXPECT_EQ(w.v, (Vec{Q(0), Q(-1), Q(-1)}));
    EXPECT_EQ(w.hat.at(0), (Vec{Q(1), Q(0), Q(-1)}));
}

TEST(Closure, DenseTargetsAndNegatives)
{
    auto ctx = ToricContext::affine_space(2);
    ConeH l = cone_over(cell_polyhedron());
    auto r = cone_closure_witnesses(*ctx, l, ctx->dense_face(), {{Q(1), Q(0), Q(-1)}});
    ASSERT_TRUE(std::holds_alternative<ClosureWitness>(r));
    EXPECT_EQ(std::get<ClosureWitness>(r).hat[0], (Vec{Q(1), Q(0), Q(-1)}));
    EXPECT_TRUE(is_zero(std::get<ClosureWitness>(r).v));

    auto miss = cone_closure_witnesses(*ctx, l, ctx->dense_face(), {{Q(1), Q(5), Q(5)}});
    ASSERT_TRUE(std::holds_alternative<NotInClosure>(miss));
    EXPECT_EQ(std::get<NotInClosure>(miss).claim, 1);

    PolyhedronH point = load_polyhedron("closure/single_point.json");
    for (std::size_t face = 1; face < ctx->faces().size(); ++face) {
        auto rp = polyhedron_closure_membership(*ctx, point, StratumPoint{face, zeros(2)});
        ASSERT_TRUE(std::holds_alternative<NotInClosure>(rp)) << face;
        EXPECT_EQ(std::get<NotInClosure>(rp).claim, 3) << face;
    }
    auto axis = ctx->find_face({{Q(-1), Q(0)}});
    ASSERT_TRUE(axis);
    auto ra = polyhedron_closure_membership(*ctx, cell_polyhedron(), StratumPoint{*axis, ctx->canonical(*axis, {Q(0), Q(5)})});
    ASSERT_TRUE(std::holds_alternative<NotInClosure>(ra));
    EXPECT_EQ(std::get<NotInClosure>(ra).claim, 1);
}

TEST(Closure, LimitChecksDetectWrongDirections)
{
    auto ctx = ToricContext::affine_space(2);
    auto good = check_limit(*ctx, ctx->deep_face(), {Q(0), Q(-1)}, {Q(-1), Q(-1)}, zeros(2));
    EXPECT_TRUE(good.exact && good.numeric);
    auto bad = check_limit(*ctx, ctx->deep_face(), {Q(0), Q(-1)}, {Q(-1), Q(0)}, zeros(2));
    EXPECT_FALSE(bad.exact);
    EXPECT_FALSE(bad.numeric);
}

// ------------------------------------------------------------ initial forms

TEST(InitForms, StabilityThresholds)
{
    auto line = ToricContext::torus(1);
    TropPoly f = mono(line, 0, {0}) + mono(line, 0, {1});
    auto st = init_stability(f, dense(line, 0, {Q(1)}), dense(line, 1, {Q(0)}));
    EXPECT_EQ(st.threshold, 0);
    ASSERT_EQ(st.xi.size(), 1u);
    EXPECT_EQ(st.margin[0], 1);
    EXPECT_EQ(initial_form_point(f, dense(line, 1, {Q(1)})), mono(line, 0, {1}));
    EXPECT_EQ(init_stability(mono(line, 3, {1}), dense(line, 0, {Q(1)}), dense(line, 1, {Q(0)})).threshold, 0);

    auto e = load_congruence("nokerprime2/congruence.json");
    auto q = load_matrix("nokerprime2/Q.json", e.ctx);
    const auto& quartic = e.pairs[0].first;
    auto s2 = init_stability(quartic, q.rows[0], q.rows[1]);
    TropPoly want = initial_form_prime(quartic, q);
    EXPECT_EQ(initial_form_point(initial_form_point(quartic, q.rows[0]), q.rows[1]), want);
    Q n = (s2.threshold < 0 ? Q(0) : s2.threshold) + 1;
    EXPECT_EQ(initial_form_point(quartic, point_add(*e.ctx, q.rows[1], q.rows[0], n)), want);
}

TEST(InitForms, IteratedRegion)
{
    auto e = load_congruence("nokerprime2/congruence.json");
    auto q = load_matrix("nokerprime2/Q.json", e.ctx);
    std::vector<ExtPoint> xi{q.rows[1], q.rows[0]};
    const auto& [f, g] = e.pairs.front();
    auto region = iterated_init_region({f, g}, xi);
    EXPECT_EQ(dimension(region), 1);
    auto inside = relative_interior(region);
    ASSERT_TRUE(inside);
    for (Q n : std::vector<Q>{(*inside)[0], Q((*inside)[0] + 3)}) {
        auto at = combine(*e.ctx, xi, {n});
        EXPECT_EQ(initial_form_point(f, at), iterated_init(f, xi));
        EXPECT_EQ(initial_form_point(g, at), iterated_init(g, xi));
    }
    std::vector<ExtPoint> zero{dense(e.ctx, 1, {Q(0), Q(-1)}), dense(e.ctx, 0, zeros(2))};
    EXPECT_TRUE(iterated_init_region({f}, zero).rows.empty());
    EXPECT_EQ(iterated_init(f, zero), initial_form_point(f, zero[0]));
}

// ------------------------------------------------------------ resolution

TEST(Resolve, NoKerPrime2)
{
    auto e = load_congruence("nokerprime2/congruence.json");
    auto p = load_matrix("nokerprime2/P.json", e.ctx);
    auto r = resolve_boundary_prime(e, p);
    ASSERT_TRUE(std::holds_alternative<ResolutionResult>(r));
    const auto& res = std::get<ResolutionResult>(r);
    EXPECT_EQ(res.v, (Vec{Q(0), Q(-1), Q(-1)}));
    EXPECT_TRUE(has_trivial_ideal_kernel(res.q));
    EXPECT_TRUE(congruence_in_prime(e, res.q));
    EXPECT_EQ(res.refinement.failures, 0u);
    // Mirror image of the displayed Q under x <-> y.
    EXPECT_EQ(as_vector(res.q.rows[1]), (Vec{Q(1), Q(-1), Q(0)}));
}

TEST(Resolve, NoKerPrime1AndTrivialKernel)
{
    auto e = load_congruence("nokerprime1/congruence.json");
    auto p = load_matrix("nokerprime1/P.json", e.ctx);
    auto r = resolve_boundary_prime(e, p);
    ASSERT_TRUE(std::holds_alternative<ResolutionResult>(r));
    const auto& q = std::get<ResolutionResult>(r).q;
    EXPECT_TRUE(congruence_in_prime(e, q));
    EXPECT_EQ(sample_refinement(q, p, 500, 6, 3).failures, 0u);

    auto c1 = load_matrix("nokerprime1/C1.json", e.ctx);
    auto same = resolve_boundary_prime(e, c1);
    ASSERT_TRUE(std::holds_alternative<ResolutionResult>(same));
    EXPECT_EQ(std::get<ResolutionResult>(same).q.rows, c1.rows);

    auto outside = make_prime_matrix(e.ctx, 0, {{Q(1), Q(0), Q(0), Q(1)}});
    auto bad = resolve_boundary_prime(e, outside);
    ASSERT_TRUE(std::holds_alternative<ResolveFailure>(bad));
    EXPECT_EQ(std::get<ResolveFailure>(bad).kind, ResolveFailure::Kind::NoFlagInVariety);
}

TEST(Cancellativity, HarnessOnNoKerPrime2)
{
    auto e = load_congruence("nokerprime2/congruence.json");
    auto rep = cancellativity_harness(e, 100, 3, 11);
    EXPECT_EQ(rep.trials, 100u);
    EXPECT_EQ(rep.violations, 0u);

    // Empty presentation on the torus: x(x+y) and y(x+y) differ, so the premise never fires.
    auto torus = ToricContext::torus(2);
    CongruencePresentation none{torus, {}, true};
    auto v = variety_of_basis(none, true);
    TropPoly x = mono(torus, 0, {1, 0}), y = mono(torus, 0, {0, 1});
    EXPECT_FALSE(functions_equal_on_variety(v, (x + y) * x, (x + y) * y));
    TropPoly unit = mono(torus, 2, {0, 0});
    EXPECT_FALSE(functions_equal_on_variety(v, unit * x, unit * y));
}

// ------------------------------------------------------------ JSON input

TEST(JsonIo, ParseErrorsCarryPositions)
{
    json j = load("malformed/bad_rational.json");
    try {
        io::read_poly(io::Node(j, "bad"), ToricContext::affine_space(1));
        FAIL() << "no error";
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("bad.terms[0].coeff"), std::string::npos) << e.what();
    }
    json broken = json::parse(R"({"context": {"rank": 1, "preset": "affine", "coeff": "Q"}, "pairs": []})");
    EXPECT_THROW(io::read_congruence(io::Node(broken, "c")), ParseError);
    EXPECT_THROW(io::read_file(fixture_path("missing.json")), ParseError);
}

TEST(JsonIo, RoundTripsMatricesAndDerivations)
{
    auto e = load_congruence("nokerprime2/congruence.json");
    for (const char* name : {"nokerprime2/P.json", "nokerprime2/Q.json"}) {
        auto m = load_matrix(name, e.ctx);
        json out = io::write(m);
        EXPECT_EQ(io::read_matrix(io::Node(out, "out"), e.ctx).rows, m.rows) << name;
    }
    auto g = load_congruence("gleich/congruence.json");
    auto fg = load_pair("gleich/pair_x_1.json", g.ctx);
    auto found = search_radical_certificate(g, fg);
    ASSERT_TRUE(std::holds_alternative<RadicalCertificate>(found));
    json cj = io::write(std::get<RadicalCertificate>(found));
    auto back = io::read_certificate(io::Node(cj, "cert"), g.ctx);
    EXPECT_TRUE(verify_radical_certificate(g, fg, back));
}
