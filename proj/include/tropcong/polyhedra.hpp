#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tropcong/lp.hpp"

namespace tropcong {

/// {x in Q^dim : every row holds}. A cone is a polyhedron whose rows all have b = 0.
struct PolyhedronH {
    std::size_t dim = 0;
    std::vector<Row> rows;

    void add(Vec a, Q b, Rel rel) { rows.push_back(Row{std::move(a), std::move(b), rel}); }
    bool is_cone() const
    {
        return std::all_of(rows.begin(), rows.end(), [](const Row& r) { return sgn(r.b) == 0; });
    }
    bool contains(const Vec& x) const { return satisfies_all(rows, x); }
};

using ConeH = PolyhedronH;

inline PolyhedronH intersect(PolyhedronH a, const PolyhedronH& b)
{
    if (a.dim != b.dim) throw PreconditionError("dimension mismatch");
    a.rows.insert(a.rows.end(), b.rows.begin(), b.rows.end());
    return a;
}

inline PolyhedronH closure(PolyhedronH p)
{
    for (auto& r : p.rows)
        if (r.rel == Rel::Lt) r.rel = Rel::Le;
    return p;
}

inline std::optional<Vec> feasible(const PolyhedronH& p) { return find_point(p.rows, p.dim); }

inline bool is_empty(const PolyhedronH& p) { return !feasible(p).has_value(); }

/// Homogeneous part of p; the empty polyhedron has recession cone {0}.
inline ConeH recession_cone(const PolyhedronH& p)
{
    ConeH c{p.dim, {}};
    if (is_empty(p)) {
        for (std::size_t i = 0; i < p.dim; ++i) c.add(unit(p.dim, i), 0, Rel::Eq);
        return c;
    }
    for (const auto& r : p.rows) c.add(r.a, 0, r.rel == Rel::Eq ? Rel::Eq : Rel::Le);
    return c;
}

struct InteriorData {
    Vec point;                   // satisfies every non-implicit row strictly
    std::vector<bool> implicit;  // per row: holds with equality on all of cl(p)
};

/// Relative interior of cl(p) as the average of per-row strict witnesses.
inline std::optional<InteriorData> interior_data(const PolyhedronH& p)
{
    PolyhedronH cl = closure(p);
    auto base = feasible(cl);
    if (!base) return std::nullopt;
    InteriorData out;
    out.implicit.assign(cl.rows.size(), true);
    std::vector<bool> done(cl.rows.size(), false);
    Mat witnesses;
    for (std::size_t i = 0; i < cl.rows.size(); ++i) {
        if (cl.rows[i].rel == Rel::Eq) done[i] = true;
        else if (dot(cl.rows[i].a, *base) < cl.rows[i].b) {
            done[i] = true;
            out.implicit[i] = false;
        }
    }
    bool base_strict = false;
    for (std::size_t i = 0; i < cl.rows.size(); ++i) base_strict = base_strict || !out.implicit[i];
    if (base_strict) witnesses.push_back(*base);
    for (std::size_t i = 0; i < cl.rows.size(); ++i) {
        if (done[i]) continue;
        auto rows = cl.rows;
        rows[i].rel = Rel::Lt;
        auto w = find_point(rows, cl.dim);
        done[i] = true;
        if (!w) continue;
        for (std::size_t j = 0; j < cl.rows.size(); ++j)
            if (cl.rows[j].rel != Rel::Eq && dot(cl.rows[j].a, *w) < cl.rows[j].b) {
                done[j] = true;
                out.implicit[j] = false;
            }
        witnesses.push_back(std::move(*w));
    }
    if (witnesses.empty()) {
        out.point = *base;
        return out;
    }
    Vec avg = zeros(cl.dim);
    for (const auto& w : witnesses) avg = add(avg, w);
    out.point = scale(avg, Q(1) / Q(static_cast<long>(witnesses.size())));
    return out;
}

inline std::optional<Vec> relative_interior(const PolyhedronH& p)
{
    auto d = interior_data(p);
    if (!d) return std::nullopt;
    return d->point;
}

/// Canonical relative-interior ray of a nonempty cone: smallest integer vector.
inline Vec relative_interior_point(const ConeH& c)
{
    if (!c.is_cone()) throw PreconditionError("relative_interior_point expects a cone");
    auto d = interior_data(c);
    if (!d) throw PreconditionError("relative_interior_point of an empty set");
    return primitive(d->point);
}

/// Dimension of cl(p); -1 when empty.
inline long dimension(const PolyhedronH& p)
{
    auto d = interior_data(p);
    if (!d) return -1;
    Mat eq;
    for (std::size_t i = 0; i < p.rows.size(); ++i)
        if (d->implicit[i]) eq.push_back(p.rows[i].a);
    return static_cast<long>(p.dim) - static_cast<long>(rank(eq, p.dim));
}

/// Cone given by generators: lin(lines) + cone(rays).
struct ConeV {
    std::size_t dim = 0;
    Mat lines;
    Mat rays;
};

namespace detail {

inline Mat canonical_lines(const Mat& lines, std::size_t d)
{
    auto e = rref(lines, d);
    Mat out;
    for (auto& r : e.rows) out.push_back(primitive(r));
    return out;
}

// Component of v orthogonal to span(lines).
inline Vec project_off(const Mat& lines, Vec v)
{
    if (lines.empty()) return v;
    const std::size_t k = lines.size();
    Mat g(k, Vec(k + 1));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) g[i][j] = dot(lines[i], lines[j]);
        g[i][k] = dot(lines[i], v);
    }
    auto e = rref(g, k + 1);
    for (std::size_t i = 0; i < e.pivots.size(); ++i) v = sub(v, scale(lines[e.pivots[i]], e.rows[i][k]));
    return v;
}

}  // namespace detail

/// Double description (Motzkin) with an algebraic adjacency test; exact.
inline ConeV rays_from_hrep(const ConeH& c)
{
    if (!c.is_cone()) throw PreconditionError("rays_from_hrep expects a cone");
    const std::size_t d = c.dim;
    Mat normals;
    for (const auto& r : c.rows) {
        if (is_zero(r.a)) continue;
        normals.push_back(primitive(r.a));
        if (r.rel == Rel::Eq) normals.push_back(scale(normals.back(), Q(-1)));
    }
    Mat lines;
    for (std::size_t i = 0; i < d; ++i) lines.push_back(unit(d, i));
    Mat rays;
    Mat done;
    for (const auto& a : normals) {
        std::size_t p = 0;
        while (p < lines.size() && sgn(dot(a, lines[p])) == 0) ++p;
        if (p < lines.size()) {
            Vec lp = lines[p];
            Q ap = dot(a, lp);
            for (std::size_t i = 0; i < lines.size(); ++i) {
                if (i == p) continue;
                Q f = dot(a, lines[i]);
                if (sgn(f) != 0) lines[i] = primitive(sub(lines[i], scale(lp, f / ap)));
            }
            for (auto& r : rays) {
                Q f = dot(a, r);
                if (sgn(f) != 0) r = primitive(sub(r, scale(lp, f / ap)));
            }
            lines.erase(lines.begin() + static_cast<long>(p));
            rays.push_back(primitive(sgn(ap) < 0 ? lp : scale(lp, Q(-1))));
            done.push_back(a);
            continue;
        }
        Mat pos, neg, keep;
        std::vector<Q> val;
        for (const auto& r : rays) {
            int s = sgn(dot(a, r));
            if (s > 0) pos.push_back(r);
            else {
                keep.push_back(r);
                if (s < 0) neg.push_back(r);
            }
        }
        if (!pos.empty() && !neg.empty()) {
            const long target = static_cast<long>(d) - static_cast<long>(lines.size()) - 2;
            auto tight = [&](const Vec& r) {
                std::vector<bool> t(done.size());
                for (std::size_t k = 0; k < done.size(); ++k) t[k] = sgn(dot(done[k], r)) == 0;
                return t;
            };
            std::vector<std::vector<bool>> tp, tn;
            for (const auto& r : pos) tp.push_back(tight(r));
            for (const auto& r : neg) tn.push_back(tight(r));
            for (std::size_t i = 0; i < pos.size(); ++i)
                for (std::size_t j = 0; j < neg.size(); ++j) {
                    Mat common;
                    for (std::size_t k = 0; k < done.size(); ++k)
                        if (tp[i][k] && tn[j][k]) common.push_back(done[k]);
                    if (static_cast<long>(common.size()) < target || static_cast<long>(rank(common, d)) != target) continue;
                    Vec comb = sub(scale(neg[j], dot(a, pos[i])), scale(pos[i], dot(a, neg[j])));
                    keep.push_back(primitive(comb));
                }
        }
        rays = std::move(keep);
        done.push_back(a);
    }
    ConeV out{d, detail::canonical_lines(lines, d), {}};
    for (auto& r : rays) out.rays.push_back(primitive(r));
    std::sort(out.rays.begin(), out.rays.end());
    out.rays.erase(std::unique(out.rays.begin(), out.rays.end()), out.rays.end());
    return out;
}

/// Irredundant H-representation of lin(lines) + cone(rays) via the polar cone.
inline ConeH hrep_from_rays(const ConeV& v)
{
    ConeH polar{v.dim, {}};
    for (const auto& r : v.rays) polar.add(r, 0, Rel::Le);
    for (const auto& l : v.lines) polar.add(l, 0, Rel::Eq);
    auto pv = rays_from_hrep(polar);
    ConeH out{v.dim, {}};
    for (const auto& l : pv.lines) out.add(l, 0, Rel::Eq);
    for (const auto& r : pv.rays) out.add(r, 0, Rel::Le);
    return out;
}

inline ConeH cone_of_rays(const Mat& rays, std::size_t d) { return hrep_from_rays(ConeV{d, {}, rays}); }

/// Average of the minimal-face generators of cl(p) plus the canonical rel.int ray of rec(p).
inline std::optional<Vec> canonical_relint(const PolyhedronH& p)
{
    if (is_empty(p)) return std::nullopt;
    ConeH hom{p.dim + 1, {}};
    hom.add(scale(unit(p.dim + 1, 0), Q(-1)), 0, Rel::Le);
    for (const auto& r : p.rows) {
        Vec a{-r.b};
        a.insert(a.end(), r.a.begin(), r.a.end());
        hom.add(a, 0, r.rel == Rel::Eq ? Rel::Eq : Rel::Le);
    }
    auto g = rays_from_hrep(hom);
    Vec c = zeros(p.dim);
    long count = 0;
    for (const auto& r : g.rays) {
        if (sgn(r[0]) <= 0) continue;
        c = add(c, scale(Vec(r.begin() + 1, r.end()), Q(1) / r[0]));
        ++count;
    }
    if (count == 0) throw InternalError("nonempty polyhedron without a point generator");
    c = scale(c, Q(1) / Q(count));
    return add(c, relative_interior_point(recession_cone(p)));
}

/// Canonical identity of a cone: canonical lineality basis and sorted primitive rays orthogonal to it.
struct ConeKey {
    Mat lines;
    Mat rays;
    auto operator<=>(const ConeKey&) const = default;
    bool operator==(const ConeKey&) const = default;
};

inline ConeKey cone_key(const ConeV& v)
{
    ConeKey k;
    k.lines = detail::canonical_lines(v.lines, v.dim);
    for (const auto& r : v.rays) k.rays.push_back(primitive(detail::project_off(k.lines, r)));
    std::sort(k.rays.begin(), k.rays.end());
    k.rays.erase(std::unique(k.rays.begin(), k.rays.end()), k.rays.end());
    return k;
}

inline ConeKey cone_key(const ConeH& c) { return cone_key(rays_from_hrep(c)); }

/// All faces of a cone (including itself), canonically ordered.
inline std::vector<ConeH> faces_of(const ConeH& c)
{
    ConeH irr = hrep_from_rays(rays_from_hrep(c));
    std::map<ConeKey, ConeH> seen;
    std::vector<ConeH> stack{irr};
    seen.emplace(cone_key(irr), irr);
    while (!stack.empty()) {
        ConeH f = stack.back();
        stack.pop_back();
        long fd = dimension(f);
        for (const auto& r : irr.rows) {
            if (r.rel == Rel::Eq) continue;
            ConeH g = f;
            g.add(r.a, 0, Rel::Eq);
            if (dimension(g) != fd - 1) continue;
            ConeH gi = hrep_from_rays(rays_from_hrep(g));
            auto key = cone_key(gi);
            if (seen.emplace(key, gi).second) stack.push_back(gi);
        }
    }
    std::vector<ConeH> out;
    for (auto& kv : seen) out.push_back(kv.second);
    return out;
}

/// Collection of cones in one ambient space.
struct Fan {
    std::size_t dim = 0;
    std::vector<ConeH> cones;
};

inline Fan face_closure(const Fan& f)
{
    std::map<ConeKey, ConeH> all;
    for (const auto& c : f.cones)
        for (auto& g : faces_of(c)) all.emplace(cone_key(g), g);
    Fan out{f.dim, {}};
    for (auto& kv : all) out.cones.push_back(kv.second);
    return out;
}

/// Face-closed and pairwise intersections are common faces.
inline bool is_fan(const Fan& f)
{
    std::set<ConeKey> keys;
    for (const auto& c : f.cones) keys.insert(cone_key(c));
    for (const auto& c : f.cones)
        for (const auto& g : faces_of(c))
            if (!keys.count(cone_key(g))) return false;
    for (std::size_t i = 0; i < f.cones.size(); ++i)
        for (std::size_t j = i + 1; j < f.cones.size(); ++j) {
            auto k = cone_key(intersect(f.cones[i], f.cones[j]));
            bool fi = false, fj = false;
            for (const auto& g : faces_of(f.cones[i])) fi = fi || cone_key(g) == k;
            for (const auto& g : faces_of(f.cones[j])) fj = fj || cone_key(g) == k;
            if (!fi || !fj) return false;
        }
    return true;
}

/// All nonempty intersections of one member from each fan, canonical order.
inline Fan common_refinement(const std::vector<Fan>& fans)
{
    if (fans.empty()) throw PreconditionError("common_refinement of no fans");
    const std::size_t d = fans.front().dim;
    for (const auto& f : fans)
        if (f.dim != d) throw PreconditionError("common_refinement: dimension mismatch");
    std::vector<ConeH> cur = face_closure(fans.front()).cones;
    for (std::size_t i = 1; i < fans.size(); ++i) {
        auto other = face_closure(fans[i]).cones;
        std::map<ConeKey, ConeH> next;
        for (const auto& a : cur)
            for (const auto& b : other) {
                ConeH c = intersect(a, b);
                ConeH ci = hrep_from_rays(rays_from_hrep(c));
                next.emplace(cone_key(ci), ci);
            }
        cur.clear();
        for (auto& kv : next) cur.push_back(kv.second);
    }
    std::map<ConeKey, ConeH> sorted;
    for (auto& c : cur) sorted.emplace(cone_key(c), c);
    Fan out{d, {}};
    for (auto& kv : sorted) out.cones.push_back(kv.second);
    return out;
}

namespace detail {

inline bool covered_from(const PolyhedronH& p, const std::vector<PolyhedronH>& qs, std::size_t idx)
{
    if (is_empty(p)) return true;
    if (idx == qs.size()) return false;
    const auto& q = qs[idx];
    if (is_empty(intersect(p, q))) return covered_from(p, qs, idx + 1);
    for (const auto& r : q.rows) {
        Vec na = scale(r.a, Q(-1));
        Q nb = -r.b;
        std::vector<Row> outside;
        if (r.rel == Rel::Le) outside.push_back(Row{na, nb, Rel::Lt});
        else if (r.rel == Rel::Lt) outside.push_back(Row{na, nb, Rel::Le});
        else {
            outside.push_back(Row{r.a, r.b, Rel::Lt});
            outside.push_back(Row{na, nb, Rel::Lt});
        }
        for (auto& o : outside) {
            PolyhedronH piece = p;
            piece.rows.push_back(o);
            if (!covered_from(piece, qs, idx + 1)) return false;
        }
    }
    return true;
}

}  // namespace detail

/// Exact test p ⊆ q_1 ∪ ... ∪ q_m by recursive set difference.
inline bool covered_by(const PolyhedronH& p, const std::vector<PolyhedronH>& qs)
{
    return detail::covered_from(p, qs, 0);
}

inline bool union_equal(const std::vector<PolyhedronH>& a, const std::vector<PolyhedronH>& b)
{
    for (const auto& p : a)
        if (!covered_by(p, b)) return false;
    for (const auto& p : b)
        if (!covered_by(p, a)) return false;
    return true;
}

/// Flag C_0 <= ... <= C_k in R_{>=0} x N_R/tau; vectors are (height, coords) with coords reduced mod span tau.
struct FlagOfCones {
    Mat tau_rays;
    std::vector<Mat> cones;
};

enum class FlagViolation { None, ZeroRay, NegativeHeight, StratumMismatch, Dimension, NotSimplicial, NotFace };

inline std::string to_string(FlagViolation v)
{
    switch (v) {
    case FlagViolation::None: return "ok";
    case FlagViolation::ZeroRay: return "zero_ray";
    case FlagViolation::NegativeHeight: return "negative_height";
    case FlagViolation::StratumMismatch: return "stratum_mismatch";
    case FlagViolation::Dimension: return "dimension";
    case FlagViolation::NotSimplicial: return "not_simplicial";
    case FlagViolation::NotFace: return "not_face";
    }
    return "?";
}

inline FlagViolation validate_flag(const FlagOfCones& flag)
{
    if (flag.cones.empty()) return FlagViolation::Dimension;
    const std::size_t d = flag.cones.front().empty() ? 0 : flag.cones.front().front().size();
    if (d == 0) return FlagViolation::Dimension;
    Mat tau_x;
    for (const auto& t : flag.tau_rays) tau_x.push_back(t);
    auto span = rref(tau_x, d - 1);
    for (const auto& c : flag.cones)
        for (const auto& r : c) {
            if (r.size() != d) return FlagViolation::Dimension;
            if (is_zero(r)) return FlagViolation::ZeroRay;
            if (sgn(r[0]) < 0) return FlagViolation::NegativeHeight;
            for (auto p : span.pivots)
                if (sgn(r[1 + p]) != 0) return FlagViolation::StratumMismatch;
        }
    for (std::size_t i = 0; i < flag.cones.size(); ++i) {
        const auto& c = flag.cones[i];
        std::size_t rk = rank(c, d);
        if (rk != i + 1) return FlagViolation::Dimension;
        if (c.size() != rk) return FlagViolation::NotSimplicial;
        if (i == 0) continue;
        for (const auto& r : flag.cones[i - 1]) {
            bool found = false;
            for (const auto& s : c) found = found || positively_parallel(r, s);
            if (!found) return FlagViolation::NotFace;
        }
    }
    return FlagViolation::None;
}

}  // namespace tropcong
