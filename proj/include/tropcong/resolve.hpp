#pragma once

#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "tropcong/toric_geom.hpp"

namespace tropcong {

struct StabilityData {
    std::vector<Term> xi;  // deleted terms with finite pairing at v
    Vec margin;            // f~(v) - <m, v> per deleted term
    Q threshold;
};

/// N0 with init_{w + N v}(f) = init_w(init_v(f)) for every N > N0.
inline StabilityData init_stability(const TropPoly& f, const ExtPoint& v, const ExtPoint& w)
{
    if (v.face != w.face) throw PreconditionError("v and w lie in different strata");
    if (f.is_zero()) throw PreconditionError("initial form of the zero polynomial");
    const auto& ctx = *f.context();
    TropPoly h = initial_form_point(f, v);
    TropScalar fv = eval_poly(f, v), hw = eval_poly(h, w);
    StabilityData out;
    std::optional<Q> best;
    for (const auto& [u, a] : f.terms()) {
        if (h.terms().count(u)) continue;
        TropScalar mv = pairing(ctx, a, u, v);
        if (mv.is_bottom()) continue;
        Q margin = fv.value() - mv.value();
        Q bound = -(hw.value() - pairing(ctx, a, u, w).value()) / margin;
        out.xi.push_back(Term{a, u});
        out.margin.push_back(margin);
        if (!best || *best < bound) best = bound;
    }
    out.threshold = best.value_or(Q(0));
    return out;
}

/// Point xi_0 + sum N_j xi_j.
inline ExtPoint combine(const ToricContext& ctx, const std::vector<ExtPoint>& xi, const Vec& n)
{
    ExtPoint p = xi.at(0);
    for (std::size_t j = 1; j < xi.size(); ++j) p = point_add(ctx, p, xi[j], n.at(j - 1));
    return p;
}

namespace detail {

// Region for one polynomial; h_j are the iterated forms with h_k = f.
inline void init_region_rows(const TropPoly& f, const std::vector<ExtPoint>& xi, PolyhedronH& region)
{
    const auto& ctx = *f.context();
    const std::size_t k = xi.size() - 1;
    if (k == 0 || f.is_zero()) return;
    TropPoly g = initial_form_point(f, xi[k]);
    // h_{j} for the recursion on g: h_{k-1} = g, h_{j-1} = init_{xi_j}(h_j)
    std::vector<TropPoly> h(k, g);
    for (std::size_t j = k - 1; j >= 1; --j) h[j - 1] = initial_form_point(h[j], xi[j]);
    TropScalar fk = eval_poly(f, xi[k]);
    for (const auto& [u, a] : f.terms()) {
        if (g.terms().count(u)) continue;
        TropScalar mk = pairing(ctx, a, u, xi[k]);
        if (mk.is_bottom()) continue;
        // N_k V_m + sum_{j<k} N_j (h_j(xi_j) - <m,xi_j>) > -(h_0(xi_0) - <m,xi_0>)
        Vec row = zeros(k);
        row[k - 1] = -(fk.value() - mk.value());
        for (std::size_t j = 1; j < k; ++j) row[j - 1] = -(eval_poly(h[j], xi[j]).value() - pairing(ctx, a, u, xi[j]).value());
        Q rhs = eval_poly(h[0], xi[0]).value() - pairing(ctx, a, u, xi[0]).value();
        region.add(row, rhs, Rel::Lt);
    }
    std::vector<ExtPoint> head(xi.begin(), xi.end() - 1);
    PolyhedronH sub{k - 1, {}};
    init_region_rows(g, head, sub);
    for (const auto& r : sub.rows) {
        Vec a = r.a;
        a.push_back(0);
        region.add(a, r.b, r.rel);
    }
}

}  // namespace detail

/// Open region of (N_1..N_k) where init_{xi_0 + sum N_j xi_j}(f_i) equals the iterated initial form, for all i.
inline PolyhedronH iterated_init_region(const std::vector<TropPoly>& polys, const std::vector<ExtPoint>& xi)
{
    if (xi.empty()) throw PreconditionError("need at least one vector");
    for (const auto& p : xi)
        if (p.face != xi[0].face) throw PreconditionError("vectors lie in different strata");
    PolyhedronH region{xi.size() - 1, {}};
    for (const auto& f : polys) detail::init_region_rows(f, xi, region);
    return region;
}

inline TropPoly iterated_init(const TropPoly& f, const std::vector<ExtPoint>& xi)
{
    TropPoly h = f;
    for (std::size_t j = xi.size(); j-- > 0;) h = initial_form_point(h, xi[j]);
    return h;
}

// ------------------------------------------------------------- order sampling

/// Random monomial t^a x^u with u in the monoid and |u|_1 <= degree.
inline Term random_monomial(const ToricContext& ctx, std::mt19937_64& rng, std::size_t degree)
{
    const long d = static_cast<long>(degree);
    std::uniform_int_distribution<long> coord(-d, d), coef(-3, 3);
    for (;;) {
        IVec u(ctx.rank());
        long l1 = 0;
        for (auto& x : u) {
            x = coord(rng);
            l1 += x < 0 ? -x : x;
        }
        if (l1 > d || !ctx.in_monoid(u)) continue;
        Q a = ctx.mode() == CoeffMode::Boolean ? Q(0) : Q(coef(rng));
        return Term{a, u};
    }
}

struct RefinementReport {
    std::size_t samples = 0;
    std::size_t failures = 0;
};

/// m1 <=_Q m2 implies m1 <=_P m2 and m1 =_Q m2 implies m1 =_P m2 on random monomial pairs.
inline RefinementReport sample_refinement(const PrimeMatrix& q, const PrimeMatrix& p, std::size_t samples, std::size_t degree,
                                          std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    RefinementReport out;
    for (std::size_t i = 0; i < samples; ++i) {
        Term a = random_monomial(*q.ctx, rng, degree), b = random_monomial(*q.ctx, rng, degree);
        auto qa = prime_eval_term(q, a.coeff, a.exp), qb = prime_eval_term(q, b.coeff, b.exp);
        auto pa = prime_eval_term(p, a.coeff, a.exp), pb = prime_eval_term(p, b.coeff, b.exp);
        ++out.samples;
        bool ok = true;
        if (qa <= qb && !(pa <= pb)) ok = false;
        if (qb <= qa && !(pb <= pa)) ok = false;
        if (qa == qb && !(pa == pb)) ok = false;
        if (!ok) ++out.failures;
    }
    return out;
}

// ------------------------------------------------------------------ resolution

struct ResolutionResult {
    PrimeMatrix q;
    ConeH cell;
    Vec v;
    std::vector<Vec> hat_partial;  // V^_0 .. V^_k
    Vec b;                         // b_1 .. b_k
    std::size_t cells_tried = 0;
    RefinementReport refinement;
};

struct ResolveFailure {
    enum class Kind { NoFlagInVariety, ClosureHypothesis, NoFeasibleCone };
    Kind kind;
    std::string detail;
};

inline std::string to_string(ResolveFailure::Kind k)
{
    switch (k) {
    case ResolveFailure::Kind::NoFlagInVariety: return "no_flag_in_variety";
    case ResolveFailure::Kind::ClosureHypothesis: return "closure_hypothesis_violated";
    case ResolveFailure::Kind::NoFeasibleCone: return "no_feasible_cone";
    }
    return "?";
}

using ResolveOutcome = std::variant<ResolutionResult, ResolveFailure>;

struct ResolveOptions {
    std::size_t samples = 500;
    std::size_t sample_degree = 6;
    std::uint64_t seed = 1;
};

/// Projection of a dense cone to the stratum of tau.
inline ConeH project_cone(const ToricContext& ctx, const ConeV& gens, std::size_t face)
{
    Mat rays;
    auto proj = [&](const Vec& r) {
        Vec x(r.begin() + 1, r.end());
        Vec out{r[0]};
        auto c = ctx.canonical(face, x);
        out.insert(out.end(), c.begin(), c.end());
        return out;
    };
    for (const auto& r : gens.rays) rays.push_back(proj(r));
    for (const auto& l : gens.lines) {
        rays.push_back(proj(l));
        rays.push_back(proj(scale(l, Q(-1))));
    }
    return cone_of_rays(rays, gens.dim);
}

/// Every selected boundary cell lies in the projection of dense selected cells reaching its stratum.
inline std::optional<std::string> check_closure_hypothesis(const VarietySupport& v)
{
    const auto& ctx = *v.ctx;
    const auto& dense = v.stratum(ctx.dense_face());
    for (std::size_t face = 1; face < ctx.faces().size(); ++face) {
        std::vector<ConeH> reach;
        for (const auto& c : dense.cells) {
            if (!c.selected) continue;
            if (is_empty(intersect(c.cone, height_zero_tau(ctx, face, true)))) continue;
            reach.push_back(project_cone(ctx, c.gens, face));
        }
        for (const auto& c : v.stratum(face).cells)
            if (c.selected && !covered_by(c.cone, reach))
                return "a selected cell in stratum " + std::to_string(face) + " is not in the closure of the dense part";
    }
    return std::nullopt;
}

namespace detail {

// Joint system in (V^_0..V^_k, b_1..b_k): V^_i in L, pi(V^_i) = w_0 + sum_{j<=i} b_j w_j, b > 0.
inline std::optional<Vec> partial_sum_coefficients(const ToricContext& ctx, const ConeH& l, std::size_t face, const Mat& w)
{
    const std::size_t d = ctx.rank() + 1, k = w.size() - 1, nv = (k + 1) * d + k;
    PolyhedronH sys{nv, {}};
    Mat pm = quotient_map(ctx, face);
    for (std::size_t i = 0; i <= k; ++i) {
        embed_rows(l, sys, i * d);
        // coordinate c of (r, pi(x)) for V^_i minus sum_{1<=j<=i} b_j w_j[c] equals w_0[c]
        for (std::size_t c = 0; c < d; ++c) {
            Vec a = zeros(nv);
            if (c == 0) a[i * d] = 1;
            else
                for (std::size_t j = 0; j + 1 < d; ++j) a[i * d + 1 + j] = pm[c - 1][j];
            for (std::size_t j = 1; j <= i; ++j) a[(k + 1) * d + j - 1] = -w[j][c];
            if (is_zero(a) && sgn(w[0][c]) == 0) continue;
            sys.add(a, w[0][c], Rel::Eq);
        }
    }
    for (std::size_t j = 0; j < k; ++j) sys.add(scale(unit(nv, (k + 1) * d + j), Q(-1)), 0, Rel::Lt);
    auto x = feasible(sys);
    if (!x) return std::nullopt;
    return Vec(x->begin() + static_cast<long>((k + 1) * d), x->end());
}

}  // namespace detail

/// Resolves a prime containing E to a prime with trivial ideal-kernel below it.
inline ResolveOutcome resolve_boundary_prime(const CongruencePresentation& e, const PrimeMatrix& p, const ResolveOptions& opt = {})
{
    if (!e.finite_basis) throw PreconditionError("resolution needs a declared finite tropical basis");
    if (!same_context(e.ctx, p.ctx)) throw PreconditionError("context mismatch");
    validate_matrix(p);
    if (!congruence_in_prime(e, p)) return ResolveFailure{ResolveFailure::Kind::NoFlagInVariety, "congruence is not contained in the prime"};
    const auto& ctx = *e.ctx;
    if (has_trivial_ideal_kernel(p)) {
        ResolutionResult r{p, ConeH{ctx.rank() + 1, {}}, zeros(ctx.rank() + 1), {}, {}, 0, {}};
        r.refinement = sample_refinement(p, p, opt.samples, opt.sample_degree, opt.seed);
        return r;
    }
    FlagOfCones flag = matrix_to_flag(p);
    if (!flag_in_variety(e.ctx, flag, e.pairs)) flag = shrink_flag(e.ctx, flag, e.pairs);
    PrimeMatrix pf = flag_to_matrix(e.ctx, flag);
    Mat w;
    for (const auto& row : pf.rows) w.push_back(as_vector(row));

    VarietySupport var = variety_of_basis(e, true);
    if (auto bad = check_closure_hypothesis(var)) return ResolveFailure{ResolveFailure::Kind::ClosureHypothesis, *bad};

    const std::size_t face = p.face;
    std::size_t tried = 0;
    for (const auto& cell : var.stratum(ctx.dense_face()).cells) {
        if (!cell.selected) continue;
        ++tried;
        const ConeH& l = cell.cone;
        if (is_empty(intersect(l, height_zero_tau(ctx, face, true)))) continue;
        auto b = detail::partial_sum_coefficients(ctx, l, face, w);
        if (!b) continue;
        std::vector<Vec> hat;
        Vec zeta = w[0];
        bool ok = true;
        for (std::size_t i = 0; i < w.size() && ok; ++i) {
            if (i > 0) zeta = add(zeta, scale(w[i], (*b)[i - 1]));
            PolyhedronH fib = l;
            add_fiber_rows(ctx, face, zeta, fib);
            auto pt = canonical_relint(fib);
            if (!pt) ok = false;
            else hat.push_back(*pt);
        }
        if (!ok) throw InternalError("fiber of a feasible cone is empty");
        Vec v = relative_interior_point(intersect(l, height_zero_tau(ctx, face, false)));
        Mat rows{v, hat[0]};
        for (std::size_t i = 1; i < hat.size(); ++i) rows.push_back(scale(sub(hat[i], hat[i - 1]), Q(1) / (*b)[i - 1]));
        PrimeMatrix q = make_prime_matrix(e.ctx, ctx.dense_face(), rows);
        if (!congruence_in_prime(e, q)) continue;
        auto rep = sample_refinement(q, p, opt.samples, opt.sample_degree, opt.seed);
        if (rep.failures > 0) continue;
        return ResolutionResult{q, l, v, hat, *b, tried, rep};
    }
    return ResolveFailure{ResolveFailure::Kind::NoFeasibleCone,
                          "no dense cell admitted witnesses (" + std::to_string(tried) + " cells tried)"};
}

// ------------------------------------------------------------ cancellativity

struct CancelReport {
    std::size_t trials = 0;
    std::size_t premise_hits = 0;
    std::size_t violations = 0;
};

inline TropPoly random_poly(const ContextPtr& ctx, std::mt19937_64& rng, std::size_t degree, std::size_t max_terms)
{
    std::uniform_int_distribution<std::size_t> count(1, max_terms);
    TropPoly f(ctx);
    std::size_t n = count(rng);
    for (std::size_t i = 0; i < n; ++i) {
        Term t = random_monomial(*ctx, rng, degree);
        f.add_term(t.coeff, t.exp);
    }
    return f;
}

/// For g not identically -inf on the variety, g f1 = g f2 there implies f1 = f2 there, for random triples; f2 is f1 plus a random term half the time.
inline CancelReport cancellativity_harness(const CongruencePresentation& e, std::size_t trials, std::size_t degree, std::uint64_t seed)
{
    auto var = variety_of_basis(e, true);
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(0.5);
    CancelReport out;
    bool nonempty = false;
    for (const auto& s : var.strata)
        for (const auto& c : s.cells) nonempty = nonempty || c.selected;
    if (!nonempty) return out;
    while (out.trials < trials) {
        TropPoly g = random_poly(e.ctx, rng, degree, 3);
        bool g_lives = false;
        for (const auto& s : var.strata) {
            bool any = false;
            for (const auto& c : s.cells) any = any || c.selected;
            if (any && !stratum_forms(g, s.face).empty()) g_lives = true;
        }
        if (!g_lives) continue;
        TropPoly f1 = random_poly(e.ctx, rng, degree, 3);
        TropPoly f2 = coin(rng) ? f1 + random_poly(e.ctx, rng, degree, 1) : random_poly(e.ctx, rng, degree, 3);
        ++out.trials;
        if (!functions_equal_on_variety(var, g * f1, g * f2)) continue;
        ++out.premise_hits;
        if (!functions_equal_on_variety(var, f1, f2)) ++out.violations;
    }
    return out;
}

}  // namespace tropcong
