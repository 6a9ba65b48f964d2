#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "tropcong/congruence.hpp"

namespace tropcong {

/// Space of one stratum: R^{1+n} with coordinates (r, x), x canonical mod span tau.
inline PolyhedronH stratum_space(const ToricContext& ctx, std::size_t face)
{
    const std::size_t d = ctx.rank() + 1;
    PolyhedronH h{d, {}};
    h.add(scale(unit(d, 0), Q(-1)), 0, Rel::Le);
    for (auto p : ctx.face(face).span.pivots) h.add(unit(d, 1 + p), 0, Rel::Eq);
    return h;
}

/// Linear forms of the terms of f that are finite on the stratum.
inline Mat stratum_forms(const TropPoly& f, std::size_t face)
{
    Mat out;
    for (const auto& [u, a] : f.terms())
        if (f.context()->in_perp(face, u)) out.push_back(term_form(a, u));
    return out;
}

struct VarietyCell {
    ConeH cone;  // closed cone in R^{1+n}
    ConeV gens;
    bool selected = false;
};

struct StratumCells {
    std::size_t face = 0;
    std::vector<VarietyCell> cells;  // canonical order

    std::vector<ConeH> selected() const
    {
        std::vector<ConeH> out;
        for (const auto& c : cells)
            if (c.selected) out.push_back(c.cone);
        return out;
    }
};

struct VarietySupport {
    ContextPtr ctx;
    std::vector<PolyPair> pairs;
    std::vector<StratumCells> strata;  // indexed by face

    const StratumCells& stratum(std::size_t face) const { return strata.at(face); }
};

namespace detail {

// Max-plus comparison data of one pair on one stratum.
// Forms are sorted and distinct; each side marks which forms belong to f and to g.
struct FormList {
    struct Side {
        std::vector<bool> in_f, in_g;
        friend bool operator==(const Side&, const Side&) = default;
    };
    Mat forms;
    std::vector<Side> sides;
};

inline FormList pair_forms(const PolyPair& fg, std::size_t face)
{
    FormList l;
    Mat f = stratum_forms(fg.first, face), g = stratum_forms(fg.second, face);
    l.forms = f;
    l.forms.insert(l.forms.end(), g.begin(), g.end());
    std::sort(l.forms.begin(), l.forms.end());
    l.forms.erase(std::unique(l.forms.begin(), l.forms.end()), l.forms.end());
    FormList::Side s{std::vector<bool>(l.forms.size()), std::vector<bool>(l.forms.size())};
    auto mark = [&](const Mat& m, std::vector<bool>& bits) {
        for (const auto& v : m) bits[static_cast<std::size_t>(std::lower_bound(l.forms.begin(), l.forms.end(), v) - l.forms.begin())] = true;
    };
    mark(f, s.in_f);
    mark(g, s.in_g);
    l.sides.push_back(std::move(s));
    return l;
}

struct Enumerator {
    const std::vector<FormList>& lists;
    bool selected_only;
    std::vector<std::pair<PolyhedronH, bool>> found;

    bool list_selects(std::size_t li, const std::vector<bool>& mask) const
    {
        for (const auto& s : lists[li].sides) {
            bool f = false, g = false;
            for (std::size_t i = 0; i < mask.size(); ++i)
                if (mask[i]) {
                    f = f || s.in_f[i];
                    g = g || s.in_g[i];
                }
            if (!(f && g)) return false;
        }
        return true;
    }

    void run(std::size_t li, const PolyhedronH& cur, std::vector<bool> sel)
    {
        if (li == lists.size()) {
            bool all = true;
            for (auto b : sel) all = all && b;
            found.emplace_back(cur, all);
            return;
        }
        const auto& l = lists[li];
        const std::size_t m = l.forms.size();
        if (m == 0) {
            sel[li] = true;
            run(li + 1, cur, sel);
            return;
        }
        // lead = first maximal form; later forms branch on tie or strictly below, pruned by feasibility
        for (std::size_t lead = 0; lead < m; ++lead) {
            PolyhedronH base = cur;
            for (std::size_t j = 0; j < lead; ++j) base.add(sub(l.forms[j], l.forms[lead]), 0, Rel::Lt);
            if (is_empty(base)) continue;
            std::vector<bool> bits(m, false);
            bits[lead] = true;
            branch(li, lead, lead + 1, base, bits, sel);
        }
    }

    void branch(std::size_t li, std::size_t lead, std::size_t j, const PolyhedronH& cur, std::vector<bool>& bits,
                std::vector<bool>& sel)
    {
        const auto& l = lists[li];
        if (j == l.forms.size()) {
            bool s = list_selects(li, bits);
            if (selected_only && !s) return;
            sel[li] = s;
            run(li + 1, cur, sel);
            return;
        }
        Vec diff = sub(l.forms[j], l.forms[lead]);
        for (Rel rel : {Rel::Eq, Rel::Lt}) {
            PolyhedronH next = cur;
            next.add(diff, 0, rel);
            if (is_empty(next)) continue;
            bits[j] = rel == Rel::Eq;
            branch(li, lead, j + 1, next, bits, sel);
        }
        bits[j] = false;
    }
};

// One-sided lists (a side without finite terms while the other has some) never agree.
inline bool side_never_equal(const FormList::Side& s)
{
    bool f = false, g = false;
    for (std::size_t i = 0; i < s.in_f.size(); ++i) {
        f = f || s.in_f[i];
        g = g || s.in_g[i];
    }
    return f != g;
}

}  // namespace detail

/// Cells of the arrangement of all pairs on one stratum; selected cells are where every pair agrees.
inline StratumCells stratum_cells(const ContextPtr& ctx, const std::vector<PolyPair>& pairs, std::size_t face,
                                  bool selected_only = false)
{
    std::vector<detail::FormList> lists;
    bool never = false;
    for (const auto& fg : pairs) {
        auto l = detail::pair_forms(fg, face);
        never = never || detail::side_never_equal(l.sides.front());
        auto same = std::find_if(lists.begin(), lists.end(), [&](const detail::FormList& o) { return o.forms == l.forms; });
        if (same == lists.end()) lists.push_back(std::move(l));
        else if (std::find(same->sides.begin(), same->sides.end(), l.sides.front()) == same->sides.end())
            same->sides.push_back(std::move(l.sides.front()));
    }
    StratumCells out{face, {}};
    if (never && selected_only) return out;
    if (never)
        for (auto& l : lists) l.sides.clear();  // keeps the arrangement; selection is forced off below
    detail::Enumerator en{lists, selected_only, {}};
    en.run(0, stratum_space(*ctx, face), std::vector<bool>(lists.size(), false));
    std::map<ConeKey, VarietyCell> sorted;
    for (auto& [open, sel] : en.found) {
        if (never) sel = false;
        ConeH cl = closure(open);
        auto gens = rays_from_hrep(cl);
        sorted.emplace(cone_key(gens), VarietyCell{cl, gens, sel});
    }
    for (auto& kv : sorted) out.cells.push_back(std::move(kv.second));
    return out;
}

inline VarietySupport variety_of_pairs(const ContextPtr& ctx, const std::vector<PolyPair>& pairs, bool selected_only = false)
{
    for (const auto& [f, g] : pairs)
        if (!same_context(ctx, f.context()) || !same_context(ctx, g.context())) throw PreconditionError("context mismatch");
    VarietySupport v{ctx, pairs, {}};
    for (std::size_t face = 0; face < ctx->faces().size(); ++face)
        v.strata.push_back(stratum_cells(ctx, pairs, face, selected_only));
    return v;
}

inline VarietySupport variety_of_basis(const CongruencePresentation& e, bool selected_only = false)
{
    return variety_of_pairs(e.ctx, e.pairs, selected_only);
}

inline VarietySupport hypersurface(const TropPoly& f, bool selected_only = false)
{
    return variety_of_pairs(f.context(), bend_relations(f), selected_only);
}

/// Closed cones covering {f~ = g~} on the stratum.
inline std::vector<ConeH> pair_variety(const PolyPair& fg, std::size_t face)
{
    return stratum_cells(fg.first.context(), {fg}, face, true).selected();
}

/// Exact test f~ = g~ on all of a cone C in one stratum.
inline bool equal_on_cone(const TropPoly& f, const TropPoly& g, std::size_t face, const ConeH& c)
{
    Mat ff = stratum_forms(f, face), gf = stratum_forms(g, face);
    if (ff.empty() && gf.empty()) return true;
    if (ff.empty() || gf.empty()) return is_empty(c) ? true : false;
    auto beats = [&](const Mat& a, const Mat& b) {
        for (const auto& m : a) {
            PolyhedronH h = c;
            for (const auto& mu : b) h.add(sub(mu, m), 0, Rel::Lt);
            if (!is_empty(h)) return true;
        }
        return false;
    };
    return !beats(ff, gf) && !beats(gf, ff);
}

inline bool pairs_hold(const std::vector<PolyPair>& pairs, const ExtPoint& w)
{
    for (const auto& [f, g] : pairs)
        if (eval_poly(f, w) != eval_poly(g, w)) return false;
    return true;
}

/// Pointwise evaluation, cross-checked against the selected cells.
inline bool point_in_variety(const VarietySupport& v, const ExtPoint& w)
{
    bool pointwise = pairs_hold(v.pairs, w);
    Vec x = as_vector(w);
    bool cells = false;
    for (const auto& c : v.stratum(w.face).cells) cells = cells || (c.selected && c.cone.contains(x));
    if (cells != pointwise) throw InternalError("variety cells disagree with pointwise evaluation");
    return pointwise;
}

/// Cone of a flag member in R^{1+n}.
inline ConeH flag_cone(const FlagOfCones& flag, std::size_t i, std::size_t dim) { return cone_of_rays(flag.cones.at(i), dim); }

inline bool flag_in_variety(const ContextPtr& ctx, const FlagOfCones& flag, const std::vector<PolyPair>& pairs)
{
    if (auto vio = validate_flag(flag); vio != FlagViolation::None) throw PreconditionError("invalid flag: " + to_string(vio));
    auto face = ctx->find_face(flag.tau_rays);
    if (!face) throw PreconditionError("flag stratum is not a face of sigma");
    ConeH top = flag_cone(flag, flag.cones.size() - 1, ctx->rank() + 1);
    for (const auto& [f, g] : pairs)
        if (!equal_on_cone(f, g, *face, top)) return false;
    return true;
}

inline bool flag_in_variety(const FlagOfCones& flag, const VarietySupport& v) { return flag_in_variety(v.ctx, flag, v.pairs); }

inline bool functions_equal_on_variety(const VarietySupport& v, const TropPoly& f, const TropPoly& g)
{
    for (const auto& s : v.strata)
        for (const auto& c : s.cells)
            if (c.selected && !equal_on_cone(f, g, s.face, c.cone)) return false;
    return true;
}

inline bool radical_member(const CongruencePresentation& e, const PolyPair& fg)
{
    if (!e.finite_basis) throw PreconditionError("radical membership needs a declared finite tropical basis");
    return functions_equal_on_variety(variety_of_basis(e, true), fg.first, fg.second);
}

/// f1/g1 = f2/g2 on V, i.e. f1 g2 = f2 g1 there; denominators must be finite on V.
inline bool fractions_equal_on_variety(const VarietySupport& v, const PolyPair& a, const PolyPair& b)
{
    for (const auto& s : v.strata) {
        bool any = false;
        for (const auto& c : s.cells) any = any || c.selected;
        if (!any) continue;
        if (stratum_forms(a.second, s.face).empty() || stratum_forms(b.second, s.face).empty())
            throw PreconditionError("denominator is -inf on part of the variety");
    }
    return functions_equal_on_variety(v, a.first * b.second, b.first * a.second);
}

/// Rows of the matrix as a flag: C_i = cone(w_0..w_i), dropping rows dependent on earlier ones.
inline FlagOfCones matrix_to_flag(const PrimeMatrix& p)
{
    validate_matrix(p);
    FlagOfCones flag;
    flag.tau_rays = p.ctx->face(p.face).rays;
    Mat acc;
    const std::size_t d = p.ctx->rank() + 1;
    for (const auto& w : p.rows) {
        Vec v = as_vector(w);
        Mat next = acc;
        next.push_back(v);
        if (rank(next, d) == acc.size()) continue;
        acc = next;
        flag.cones.push_back(acc);
    }
    if (flag.cones.empty()) throw PreconditionError("prime matrix has only zero rows");
    return flag;
}

namespace detail {

// Theta-leading term of f: first in canonical order among the terms of the initial form.
inline std::optional<IVec> leading_exp(const TropPoly& f, const PrimeMatrix& p)
{
    if (f.is_zero()) return std::nullopt;
    auto best = prime_eval(p, f);
    for (const auto& t : best)
        if (!t.is_bottom()) return initial_form_prime(f, p).terms().begin()->first;
    return std::nullopt;
}

}  // namespace detail

/// Cone where every generator pair agrees through its leading terms; C_j cut by it keeps the prime.
inline FlagOfCones shrink_flag(const ContextPtr& ctx, const FlagOfCones& flag, const std::vector<PolyPair>& pairs)
{
    PrimeMatrix p = flag_to_matrix(ctx, flag);
    for (const auto& fg : pairs)
        if (!prime_contains_pair(p, fg)) throw PreconditionError("congruence is not contained in the prime of the flag");
    const std::size_t d = ctx->rank() + 1;
    PolyhedronH u = stratum_space(*ctx, p.face);
    for (const auto& [f, g] : pairs) {
        auto mf = detail::leading_exp(f, p), mg = detail::leading_exp(g, p);
        if (!mf && !mg) continue;
        Vec lf = term_form(f.terms().at(*mf), *mf), lg = term_form(g.terms().at(*mg), *mg);
        for (const auto& l : stratum_forms(f, p.face)) u.add(sub(l, lf), 0, Rel::Le);
        for (const auto& l : stratum_forms(g, p.face)) u.add(sub(l, lg), 0, Rel::Le);
        u.add(sub(lf, lg), 0, Rel::Eq);
    }
    FlagOfCones out;
    out.tau_rays = flag.tau_rays;
    Mat rays;
    for (std::size_t j = 0; j < flag.cones.size(); ++j) {
        ConeH cj = intersect(flag_cone(flag, j, d), u);
        if (dimension(cj) != static_cast<long>(j + 1)) throw InternalError("shrinking a flag lost dimension");
        rays.push_back(relative_interior_point(cj));
        out.cones.push_back(rays);
    }
    if (validate_flag(out) != FlagViolation::None) throw InternalError("shrunken flag is invalid");
    if (!flag_in_variety(ctx, out, pairs)) throw InternalError("shrunken flag leaves the variety");
    return out;
}

}  // namespace tropcong
