#pragma once

#include <sstream>

#include "support.hpp"

namespace tctest {

struct PropertyReport {
    std::size_t cases = 0;
    std::size_t failures = 0;
    std::string first;

    bool ok() const { return cases > 0 && failures == 0; }
    void fail(const std::string& why)
    {
        if (failures++ == 0) first = why;
    }
};

/// init_{w + N v}(f) = init_w(init_v(f)) above the threshold, and the threshold is attained.
inline PropertyReport init_stability_property(std::size_t cases, std::uint64_t seed)
{
    PropertyReport rep;
    Gen gen(seed);
    auto torus = ToricContext::torus(2), plane = ToricContext::affine_space(2);
    while (rep.cases < cases) {
        auto ctx = gen.coin() ? torus : plane;
        TropPoly f = gen.poly(ctx, 5, 3);
        ExtPoint v = make_point(*ctx, Q(gen.integer(0, 1)), ctx->dense_face(), gen.coords(2, 3));
        ExtPoint w = make_point(*ctx, Q(1), ctx->dense_face(), gen.coords(2, 3));
        ++rep.cases;
        auto st = init_stability(f, v, w);
        TropPoly expect = initial_form_point(initial_form_point(f, v), w);
        Q base = st.threshold < 0 ? Q(0) : st.threshold;
        for (long extra : {1L, 7L}) {
            Q n = base + extra;
            if (!(initial_form_point(f, point_add(*ctx, w, v, n)) == expect)) {
                rep.fail("init differs above the threshold at case " + std::to_string(rep.cases));
                break;
            }
        }
        if (!st.xi.empty() && sgn(st.threshold) >= 0 && initial_form_point(f, point_add(*ctx, w, v, st.threshold)) == expect)
            rep.fail("threshold not attained at case " + std::to_string(rep.cases));
    }
    return rep;
}

inline bool in_hypersurface(const TropPoly& f, const ExtPoint& w) { return pairs_hold(bend_relations(f), w); }

/// Pointwise V(fg) = V(f) u V(g), points drawn from the cells of all three and from a grid.
inline PropertyReport product_variety_property(std::size_t cases, std::uint64_t seed)
{
    PropertyReport rep;
    Gen gen(seed);
    auto plane = ToricContext::affine_space(2), torus = ToricContext::torus(2);
    while (rep.cases < cases) {
        auto ctx = gen.coin() ? plane : torus;
        TropPoly f = gen.poly(ctx, 3), g = gen.poly(ctx, 3);
        TropPoly fg = f * g;
        std::vector<std::pair<std::size_t, ConeV>> cells;
        for (const auto* h : {&f, &g, &fg})
            for (const auto& s : hypersurface(*h, true).strata)
                for (const auto& c : s.cells) cells.push_back({s.face, c.gens});
        for (int k = 0; k < 20 && rep.cases < cases; ++k) {
            ExtPoint w;
            if (!cells.empty() && gen.coin()) {
                const auto& [face, g0] = gen.pick(cells);
                w = point_from_vector(*ctx, face, gen.in_cone(g0));
            } else {
                std::size_t face = static_cast<std::size_t>(gen.integer(0, static_cast<long>(ctx->faces().size()) - 1));
                w = make_point(*ctx, Q(gen.integer(0, 1)), face, gen.coords(2, 3));
            }
            ++rep.cases;
            if (in_hypersurface(fg, w) != (in_hypersurface(f, w) || in_hypersurface(g, w)))
                rep.fail("mismatch at case " + std::to_string(rep.cases));
        }
    }
    return rep;
}

/// flag in V~(E) implies E in P_flag; E in P_flag implies the shrunken flag lies in V~(E) with the same prime.
inline PropertyReport flag_property(std::size_t cases, std::uint64_t seed)
{
    PropertyReport rep;
    Gen gen(seed);
    std::vector<CongruencePresentation> es;
    std::vector<VarietySupport> vs;
    for (const auto& name : finite_basis_fixtures()) {
        es.push_back(load_congruence(name));
        vs.push_back(variety_of_basis(es.back(), true));
    }
    std::size_t inside = 0, contained = 0;
    while (rep.cases < cases) {
        std::size_t which = static_cast<std::size_t>(gen.integer(0, static_cast<long>(es.size()) - 1));
        const auto& e = es[which];
        const auto& ctx = *e.ctx;
        std::size_t face = static_cast<std::size_t>(gen.integer(0, static_cast<long>(ctx.faces().size()) - 1));
        std::vector<const VarietyCell*> sel;
        for (const auto& c : vs[which].stratum(face).cells)
            if (c.selected) sel.push_back(&c);
        const ConeV* cell = (!sel.empty() && gen.coin()) ? &gen.pick(sel)->gens : nullptr;
        std::size_t room = ctx.rank() - ctx.face(face).dim() + 1;
        if (cell) room = static_cast<std::size_t>(dimension(hrep_from_rays(*cell)));
        if (room == 0) continue;
        std::size_t k = static_cast<std::size_t>(gen.integer(0, static_cast<long>(std::min<std::size_t>(room, 3)) - 1));
        auto flag = random_flag(gen, ctx, face, cell, k);
        if (!flag) continue;
        ++rep.cases;
        bool in_v = flag_in_variety(e.ctx, *flag, e.pairs);
        PrimeMatrix p = flag_to_matrix(e.ctx, *flag);
        bool in_p = congruence_in_prime(e, p);
        inside += in_v;
        contained += in_p;
        std::ostringstream where;
        where << "case " << rep.cases << " (" << finite_basis_fixtures()[which] << ", face " << face << ", k " << k << ")";
        if (in_v && !in_p) {
            rep.fail("flag in the variety but prime misses E at " + where.str());
            continue;
        }
        if (!in_p) continue;
        try {
            FlagOfCones s = shrink_flag(e.ctx, *flag, e.pairs);
            if (!flag_in_variety(e.ctx, s, e.pairs)) rep.fail("shrunken flag leaves the variety at " + where.str());
            else if (!same_prime_sampled(flag_to_matrix(e.ctx, s), p, seed + rep.cases))
                rep.fail("shrinking changed the prime at " + where.str());
        } catch (const std::exception& ex) {
            rep.fail(std::string("shrinking failed at ") + where.str() + ": " + ex.what());
        }
    }
    if (inside == 0 || contained == cases) rep.fail("generator produced no variety flags or no negative flags");
    return rep;
}

/// radical_member against oracle_equal_on_variety on every finite-basis fixture.
inline PropertyReport radical_oracle_property(std::size_t cases, std::uint64_t seed)
{
    PropertyReport rep;
    Gen gen(seed);
    std::vector<CongruencePresentation> es;
    for (const auto& name : finite_basis_fixtures()) es.push_back(load_congruence(name));
    std::size_t trues = 0;
    while (rep.cases < cases) {
        const auto& e = es[rep.cases % es.size()];
        TropPoly f(e.ctx), g(e.ctx);
        switch (gen.integer(0, 2)) {
        case 0: {
            const auto& [a, b] = gen.pick(e.pairs);
            TropPoly h = gen.poly(e.ctx, 2, 1);
            f = h * a;
            g = h * b;
            if (gen.coin()) {
                TropPoly s = gen.poly(e.ctx, 2, 1);
                f = f + s;
                g = g + s;
            }
            break;
        }
        case 1:
            f = gen.poly(e.ctx, 3, 2);
            g = f + gen.poly(e.ctx, 1, 2);
            break;
        default:
            f = gen.poly(e.ctx, 3, 2);
            g = gen.poly(e.ctx, 3, 2);
        }
        ++rep.cases;
        bool got = radical_member(e, {f, g});
        bool want = oracle_equal_on_variety(e, f, g);
        trues += want;
        if (got != want)
            rep.fail("disagreement at case " + std::to_string(rep.cases) + " (radical_member " + (got ? "true" : "false") + ")");
    }
    if (trues == 0 || trues == cases) rep.fail("oracle outcomes are all equal");
    return rep;
}

}  // namespace tctest
