#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tropcong/variety.hpp"

namespace tropcong {

struct StratumPoint {
    std::size_t face = 0;
    Vec coords;
};

inline StratumPoint project_to_stratum(const ToricContext& ctx, const Vec& x, std::size_t face)
{
    if (x.size() != ctx.rank()) throw PreconditionError("point has wrong rank");
    if (face >= ctx.faces().size()) throw PreconditionError("not a face of sigma");
    return StratumPoint{face, ctx.canonical(face, x)};
}

/// Matrix of the quotient map x -> canonical representative mod span tau.
inline Mat quotient_map(const ToricContext& ctx, std::size_t face)
{
    const std::size_t n = ctx.rank();
    Mat m(n, zeros(n));
    for (std::size_t j = 0; j < n; ++j) {
        Vec c = ctx.canonical(face, unit(n, j));
        for (std::size_t i = 0; i < n; ++i) m[i][j] = c[i];
    }
    return m;
}

/// Rows of (id x pi_tau)^{-1}(w) on R^{1+n}, shifted to columns [off, off+1+n) of a d-dim space.
inline void add_fiber_rows(const ToricContext& ctx, std::size_t face, const Vec& w, PolyhedronH& h, std::size_t off = 0)
{
    const std::size_t n = ctx.rank();
    Vec a = zeros(h.dim);
    a[off] = 1;
    h.add(a, w[0], Rel::Eq);
    Mat pm = quotient_map(ctx, face);
    for (std::size_t i = 0; i < n; ++i) {
        Vec r = zeros(h.dim);
        for (std::size_t j = 0; j < n; ++j) r[off + 1 + j] = pm[i][j];
        if (is_zero(r)) continue;
        h.add(r, w[1 + i], Rel::Eq);
    }
}

/// Copy of p's rows acting on columns [off, off+p.dim) of a d-dim space.
inline void embed_rows(const PolyhedronH& p, PolyhedronH& h, std::size_t off)
{
    for (const auto& r : p.rows) {
        Vec a = zeros(h.dim);
        for (std::size_t j = 0; j < p.dim; ++j) a[off + j] = r.a[j];
        h.add(a, r.b, r.rel);
    }
}

/// {0} x rel.int tau (strict = true) or {0} x tau, in R^{1+n}.
inline PolyhedronH height_zero_tau(const ToricContext& ctx, std::size_t face, bool strict)
{
    const std::size_t n = ctx.rank();
    PolyhedronH h{n + 1, {}};
    h.add(unit(n + 1, 0), 0, Rel::Eq);
    const auto& rays = ctx.face(face).rays;
    if (rays.empty()) {
        for (std::size_t i = 0; i < n; ++i) h.add(unit(n + 1, 1 + i), 0, Rel::Eq);
        return h;
    }
    ConeH tau = cone_of_rays(rays, n);
    for (const auto& r : tau.rows) {
        Vec a{Q(0)};
        a.insert(a.end(), r.a.begin(), r.a.end());
        h.add(a, 0, r.rel == Rel::Eq ? Rel::Eq : (strict ? Rel::Lt : Rel::Le));
    }
    return h;
}

struct ClosureWitness {
    Vec v;                // height 0, in rel.int tau
    std::vector<Vec> hat; // one point of L per target
};

struct NotInClosure {
    int claim = 0;        // 1: some fiber misses L; 3: L misses {0} x rel.int tau
    std::size_t target = 0;
    std::string reason;
};

using ClosureResult = std::variant<ClosureWitness, NotInClosure>;

/// Witnesses that targets in stratum tau lie in the closure of the cone L (dense coordinates).
inline ClosureResult cone_closure_witnesses(const ToricContext& ctx, const ConeH& l, std::size_t face, const std::vector<Vec>& targets)
{
    const std::size_t d = ctx.rank() + 1;
    if (l.dim != d) throw PreconditionError("cone has wrong dimension");
    ClosureWitness out;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (targets[i].size() != d) throw PreconditionError("target has wrong dimension");
        PolyhedronH fib = l;
        add_fiber_rows(ctx, face, targets[i], fib);
        auto p = canonical_relint(fib);
        if (!p) return NotInClosure{1, i, "cone misses the fiber over a target"};
        out.hat.push_back(*p);
    }
    if (is_empty(intersect(l, height_zero_tau(ctx, face, true))))
        return NotInClosure{3, 0, "cone has no height-0 direction in the relative interior of the face"};
    out.v = relative_interior_point(intersect(l, height_zero_tau(ctx, face, false)));
    return out;
}

/// Cone over a polyhedron: {(r, x) : a.x rel b r, r >= 0}.
inline ConeH cone_over(const PolyhedronH& p)
{
    ConeH c{p.dim + 1, {}};
    c.add(scale(unit(p.dim + 1, 0), Q(-1)), 0, Rel::Le);
    for (const auto& r : p.rows) {
        Vec a{-r.b};
        a.insert(a.end(), r.a.begin(), r.a.end());
        c.add(a, 0, r.rel == Rel::Lt ? Rel::Le : r.rel);
    }
    return c;
}

/// Closure membership of a boundary point w (stratum tau) in a polyhedron; dense points test cl(P) directly.
inline ClosureResult polyhedron_closure_membership(const ToricContext& ctx, const PolyhedronH& p, const StratumPoint& w)
{
    if (p.dim != ctx.rank()) throw PreconditionError("polyhedron has wrong dimension");
    if (w.face == ctx.dense_face()) {
        if (!closure(p).contains(w.coords)) return NotInClosure{1, 0, "point is not in the closed polyhedron"};
        return ClosureWitness{zeros(p.dim), {w.coords}};
    }
    if (is_empty(p)) return NotInClosure{1, 0, "polyhedron is empty"};
    Vec target{Q(1)};
    target.insert(target.end(), w.coords.begin(), w.coords.end());
    auto r = cone_closure_witnesses(ctx, cone_over(closure(p)), w.face, {target});
    if (auto* cw = std::get_if<ClosureWitness>(&r)) {
        ClosureWitness out;
        out.v = Vec(cw->v.begin() + 1, cw->v.end());
        out.hat.push_back(Vec(cw->hat[0].begin() + 1, cw->hat[0].end()));
        return out;
    }
    return r;
}

struct LimitCheck {
    bool exact = true;    // sign and equality conditions on the monoid generators
    bool numeric = true;  // pairings at N = 10, 100, 1000 behave as limits
};

/// Checks that hat + N v tends to w (stratum tau) on the monoid generators.
inline LimitCheck check_limit(const ToricContext& ctx, std::size_t face, const Vec& hat_x, const Vec& v_x, const Vec& w_x)
{
    LimitCheck out;
    for (const auto& g : ctx.dual_generators()) {
        Vec gp = primitive(g);
        IVec u = to_ivec(gp);
        bool finite = ctx.in_perp(face, u);
        int sv = sgn(dot(u, v_x));
        if ((sv < 0) == finite || sv > 0) out.exact = false;
        if (sv == 0 && dot(u, hat_x) != dot(u, w_x)) out.exact = false;
        std::optional<Q> prev;
        for (long n : {10L, 100L, 1000L}) {
            Q val = dot(u, add(hat_x, scale(v_x, Q(n))));
            if (prev) {
                if (finite && val != *prev) out.numeric = false;
                if (!finite && !(val < *prev)) out.numeric = false;
            }
            prev = val;
        }
    }
    return out;
}

}  // namespace tropcong
