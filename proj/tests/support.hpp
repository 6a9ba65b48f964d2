#pragma once

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "tropcong/json_io.hpp"
#include "tropcong/resolve.hpp"
#include "tropcong/toric_geom.hpp"

namespace tctest {

using namespace tropcong;
using io::json;

/// Canonicalized a/b; the two-argument mpq constructor does not reduce.
inline Q frac(long a, long b)
{
    Q q(a, b);
    q.canonicalize();
    return q;
}

inline std::string fixture_path(const std::string& rel) { return std::string(TROPCONG_FIXTURES) + "/" + rel; }

inline json load(const std::string& rel) { return io::read_file(fixture_path(rel)); }

inline CongruencePresentation load_congruence(const std::string& rel)
{
    json j = load(rel);
    return io::read_congruence(io::Node(j, rel));
}

inline PrimeMatrix load_matrix(const std::string& rel, const ContextPtr& ctx)
{
    json j = load(rel);
    return io::read_matrix(io::Node(j, rel), ctx);
}

inline PolyPair load_pair(const std::string& rel, const ContextPtr& ctx)
{
    json j = load(rel);
    return io::read_pair(io::Node(j, rel), ctx);
}

inline PolyhedronH load_polyhedron(const std::string& rel)
{
    json j = load(rel);
    return io::read_polyhedron(io::Node(j, rel));
}

inline std::vector<PolyhedronH> load_pieces(const std::string& rel)
{
    json j = load(rel);
    io::Node n(j, rel);
    std::vector<PolyhedronH> out;
    for (const auto& p : n["pieces"].items()) out.push_back(io::read_polyhedron(p));
    return out;
}

/// Fixtures whose presentations are declared finite tropical bases.
inline const std::vector<std::string>& finite_basis_fixtures()
{
    static const std::vector<std::string> names{"nokerprime1/congruence.json", "nokerprime2/congruence.json",
                                                "gleich/congruence.json", "truncation/congruence.json"};
    return names;
}

// ------------------------------------------------------------ generators

struct Gen {
    std::mt19937_64 rng;
    explicit Gen(std::uint64_t seed) : rng(seed) {}

    long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }
    bool coin() { return integer(0, 1) == 1; }
    /// Multiples of 1/2 in [lo, hi].
    Q half(long lo, long hi) { return frac(integer(2 * lo, 2 * hi), 2); }
    template <class T>
    const T& pick(const std::vector<T>& v) { return v.at(static_cast<std::size_t>(integer(0, static_cast<long>(v.size()) - 1))); }

    /// Exponent in the monoid, entries in [-k, k].
    IVec exponent(const ToricContext& ctx, long k)
    {
        for (;;) {
            IVec u;
            for (std::size_t i = 0; i < ctx.rank(); ++i) u.push_back(integer(-k, k));
            if (ctx.in_monoid(u)) return u;
        }
    }

    TropPoly poly(const ContextPtr& ctx, std::size_t max_terms, long k = 2)
    {
        TropPoly f(ctx);
        auto n = static_cast<std::size_t>(integer(1, static_cast<long>(max_terms)));
        bool boolean = ctx->mode() == CoeffMode::Boolean;
        while (f.size() < n) f.add_term(boolean ? Q(0) : Q(integer(-3, 3)), exponent(*ctx, k));
        return f;
    }

    Vec coords(std::size_t n, long k)
    {
        Vec x;
        for (std::size_t i = 0; i < n; ++i) x.push_back(half(-k, k));
        return x;
    }

    /// Positive combination of a cell's rays plus an arbitrary combination of its lines.
    Vec in_cone(const ConeV& g)
    {
        Vec v = zeros(g.dim);
        for (const auto& r : g.rays) v = add(v, scale(r, Q(integer(1, 4))));
        for (const auto& l : g.lines) v = add(v, scale(l, Q(integer(-3, 3))));
        return v;
    }
};

inline ExtPoint point_from_vector(const ToricContext& ctx, std::size_t face, const Vec& v)
{
    return make_point(ctx, v[0], face, Vec(v.begin() + 1, v.end()));
}

// ------------------------------------------------------------ oracle

/// Grid points of every stratum at heights 0 and 1, coordinates in {-2, -3/2, ..., 2}.
inline std::vector<ExtPoint> grid_points(const ToricContext& ctx)
{
    std::vector<ExtPoint> out;
    std::set<std::pair<std::size_t, Vec>> seen;
    const std::size_t n = ctx.rank();
    std::vector<long> idx(n, -4);
    for (;;) {
        Vec x;
        for (auto i : idx) x.push_back(frac(i, 2));
        for (std::size_t face = 0; face < ctx.faces().size(); ++face)
            for (int h = 0; h <= 1; ++h) {
                Vec c = ctx.canonical(face, x);
                Vec key{Q(h)};
                key.insert(key.end(), c.begin(), c.end());
                if (!seen.insert({face, key}).second) continue;
                out.push_back(make_point(ctx, Q(h), face, c));
            }
        std::size_t k = 0;
        while (k < n && idx[k] == 4) idx[k++] = -4;
        if (k == n) break;
        ++idx[k];
    }
    return out;
}

/// Pointwise f~ = g~ on V~(E): grid points, then rays, lines and a rel.int point of each cell of V~(E)
/// refined by the linearity regions of f and g.
inline bool oracle_equal_on_variety(const CongruencePresentation& e, const TropPoly& f, const TropPoly& g)
{
    const auto& ctx = *e.ctx;
    static std::map<const ToricContext*, std::vector<ExtPoint>> grids;
    auto it = grids.find(&ctx);
    if (it == grids.end()) it = grids.emplace(&ctx, grid_points(ctx)).first;
    for (const auto& w : it->second)
        if (pairs_hold(e.pairs, w) && !(eval_poly(f, w) == eval_poly(g, w))) return false;
    auto pairs = e.pairs;
    pairs.push_back({f, f});
    pairs.push_back({g, g});
    auto refined = variety_of_pairs(e.ctx, pairs, true);
    for (const auto& s : refined.strata)
        for (const auto& c : s.cells) {
            if (!c.selected) continue;
            std::vector<Vec> probes = c.gens.rays;
            for (const auto& l : c.gens.lines) {
                probes.push_back(l);
                probes.push_back(scale(l, Q(-1)));
            }
            probes.push_back(relative_interior_point(c.cone));
            for (const auto& p : probes) {
                auto w = point_from_vector(ctx, s.face, p);
                if (!(eval_poly(f, w) == eval_poly(g, w))) return false;
            }
        }
    return true;
}

/// Dense slice at height 1 of a cone in R^{1+n}, as a polyhedron in R^n.
inline PolyhedronH height_one_slice(const ConeH& c)
{
    PolyhedronH out{c.dim - 1, {}};
    for (const auto& r : c.rows) out.add(Vec(r.a.begin() + 1, r.a.end()), r.b - r.a[0], r.rel);
    return out;
}

inline std::vector<PolyhedronH> dense_slices(const VarietySupport& v)
{
    std::vector<PolyhedronH> out;
    for (const auto& c : v.stratum(v.ctx->dense_face()).selected()) {
        auto s = height_one_slice(c);
        if (!is_empty(s)) out.push_back(s);
    }
    return out;
}

/// Same prime: sampled order refinement in both directions.
inline bool same_prime_sampled(const PrimeMatrix& a, const PrimeMatrix& b, std::uint64_t seed, std::size_t samples = 200)
{
    return sample_refinement(a, b, samples, 4, seed).failures == 0 && sample_refinement(b, a, samples, 4, seed + 1).failures == 0;
}

/// Random flag of length k+1 in the stratum of face: rays drawn from a selected cell, or arbitrary when cell is null.
inline std::optional<FlagOfCones> random_flag(Gen& gen, const ToricContext& ctx, std::size_t face, const ConeV* cell, std::size_t k)
{
    const std::size_t d = ctx.rank() + 1;
    FlagOfCones flag;
    flag.tau_rays = ctx.face(face).rays;
    Mat rays;
    for (int attempt = 0; attempt < 40 && rays.size() <= k; ++attempt) {
        Vec r;
        if (cell) {
            r = gen.in_cone(*cell);
        } else {
            r = Vec{Q(gen.integer(0, 2))};
            Vec x;
            for (std::size_t i = 1; i < d; ++i) x.push_back(Q(gen.integer(-3, 3)));
            x = ctx.canonical(face, x);
            r.insert(r.end(), x.begin(), x.end());
        }
        if (is_zero(r)) continue;
        Mat next = rays;
        next.push_back(r);
        if (rank(next, d) != next.size()) continue;
        rays = next;
        flag.cones.push_back(rays);
    }
    if (rays.size() != k + 1) return std::nullopt;
    if (validate_flag(flag) != FlagViolation::None) return std::nullopt;
    return flag;
}

}  // namespace tctest
