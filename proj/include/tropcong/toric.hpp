#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "tropcong/polyhedra.hpp"
#include "tropcong/trop_scalar.hpp"

namespace tropcong {

enum class CoeffMode { Rational, Boolean };

/// Face of sigma: a subset of its extreme rays plus an echelon basis of its span.
struct Face {
    std::vector<std::size_t> ray_ids;
    Mat rays;
    Echelon span;

    std::size_t dim() const { return span.pivots.size(); }
};

/// Lattice Z^n, strongly convex cone sigma, monoid M = {u : <v,u> <= 0 for v in sigma} ∩ Z^n.
class ToricContext {
public:
    static std::shared_ptr<const ToricContext> create(std::size_t rank, const std::vector<IVec>& sigma_rays, CoeffMode mode)
    {
        return std::shared_ptr<const ToricContext>(new ToricContext(rank, sigma_rays, mode));
    }
    static std::shared_ptr<const ToricContext> affine_space(std::size_t n, CoeffMode mode = CoeffMode::Rational)
    {
        std::vector<IVec> rays;
        for (std::size_t i = 0; i < n; ++i) {
            IVec r(n, 0);
            r[i] = -1;
            rays.push_back(r);
        }
        return create(n, rays, mode);
    }
    static std::shared_ptr<const ToricContext> torus(std::size_t n, CoeffMode mode = CoeffMode::Rational)
    {
        return create(n, {}, mode);
    }

    std::size_t rank() const { return rank_; }
    CoeffMode mode() const { return mode_; }
    const Mat& sigma_rays() const { return rays_; }
    const std::vector<Face>& faces() const { return faces_; }
    const Face& face(std::size_t i) const { return faces_.at(i); }
    std::size_t dense_face() const { return 0; }
    std::size_t deep_face() const { return faces_.size() - 1; }
    /// Cone generators of sigma-dual (rays and both signs of lineality generators).
    const Mat& dual_generators() const { return dual_gens_; }

    bool in_monoid(const IVec& u) const
    {
        if (u.size() != rank_) return false;
        for (const auto& r : rays_)
            if (sgn(dot(u, r)) > 0) return false;
        return true;
    }

    bool in_perp(std::size_t f, const IVec& u) const
    {
        for (const auto& r : face(f).rays)
            if (sgn(dot(u, r)) != 0) return false;
        return true;
    }

    /// Canonical representative of x modulo span(face f).
    Vec canonical(std::size_t f, const Vec& x) const { return reduce_mod(face(f).span, x); }

    /// Index of the face generated by the given rays, if it is a face of sigma.
    std::optional<std::size_t> find_face(const Mat& tau_rays) const
    {
        if (tau_rays.empty()) return dense_face();
        for (const auto& t : tau_rays)
            if (t.size() != rank_) return std::nullopt;
        auto v = rays_from_hrep(cone_of_rays(tau_rays, rank_));
        if (!v.lines.empty()) return std::nullopt;
        std::vector<std::size_t> ids;
        for (const auto& r : v.rays) {
            auto it = std::find(rays_.begin(), rays_.end(), r);
            if (it == rays_.end()) return std::nullopt;
            ids.push_back(static_cast<std::size_t>(it - rays_.begin()));
        }
        std::sort(ids.begin(), ids.end());
        for (std::size_t i = 0; i < faces_.size(); ++i)
            if (faces_[i].ray_ids == ids) return i;
        return std::nullopt;
    }

    /// Face spanned by -e_i for the listed coordinates (the "-inf columns" convention).
    std::optional<std::size_t> coordinate_face(const std::vector<std::size_t>& coords) const
    {
        Mat rays;
        for (auto i : coords) rays.push_back(scale(unit(rank_, i), Q(-1)));
        return find_face(rays);
    }

    /// Coordinates i with -e_i a ray of face f, when f is generated by such rays.
    std::optional<std::vector<std::size_t>> as_coordinate_face(std::size_t f) const
    {
        std::vector<std::size_t> out;
        for (const auto& r : face(f).rays) {
            std::size_t nz = 0, idx = 0;
            for (std::size_t i = 0; i < r.size(); ++i)
                if (sgn(r[i]) != 0) {
                    ++nz;
                    idx = i;
                }
            if (nz != 1 || r[idx] != -1) return std::nullopt;
            out.push_back(idx);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    friend bool operator==(const ToricContext& a, const ToricContext& b)
    {
        return a.rank_ == b.rank_ && a.rays_ == b.rays_ && a.mode_ == b.mode_;
    }

private:
    ToricContext(std::size_t rank, const std::vector<IVec>& sigma_rays, CoeffMode mode) : rank_(rank), mode_(mode)
    {
        Mat given;
        for (const auto& r : sigma_rays) {
            if (r.size() != rank) throw PreconditionError("sigma ray has wrong length");
            Vec v = to_vec(r);
            if (is_zero(v)) continue;
            given.push_back(v);
        }
        if (!given.empty()) {
            auto v = rays_from_hrep(cone_of_rays(given, rank));
            if (!v.lines.empty()) throw PreconditionError("sigma is not strongly convex");
            rays_ = v.rays;
        }
        enumerate_faces();
        ConeH dual{rank, {}};
        for (const auto& r : rays_) dual.add(r, 0, Rel::Le);
        auto dv = rays_from_hrep(dual);
        dual_gens_ = dv.rays;
        for (const auto& l : dv.lines) {
            dual_gens_.push_back(l);
            dual_gens_.push_back(scale(l, Q(-1)));
        }
        std::sort(dual_gens_.begin(), dual_gens_.end());
    }

    void enumerate_faces()
    {
        const std::size_t k = rays_.size();
        for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
            std::vector<Row> rows;
            std::vector<std::size_t> ids;
            for (std::size_t i = 0; i < k; ++i) {
                bool in = (mask >> i) & 1;
                if (in) ids.push_back(i);
                rows.push_back(Row{rays_[i], 0, in ? Rel::Eq : Rel::Lt});
            }
            if (!find_point(rows, rank_)) continue;
            Face f;
            f.ray_ids = ids;
            for (auto i : ids) f.rays.push_back(rays_[i]);
            f.span = rref(f.rays, rank_);
            faces_.push_back(std::move(f));
        }
        std::sort(faces_.begin(), faces_.end(), [](const Face& a, const Face& b) {
            if (a.ray_ids.size() != b.ray_ids.size()) return a.ray_ids.size() < b.ray_ids.size();
            return a.ray_ids < b.ray_ids;
        });
    }

    std::size_t rank_;
    CoeffMode mode_;
    Mat rays_;
    std::vector<Face> faces_;
    Mat dual_gens_;
};

using ContextPtr = std::shared_ptr<const ToricContext>;

inline bool same_context(const ContextPtr& a, const ContextPtr& b) { return a == b || (a && b && *a == *b); }

/// Point (r, x) of R_{>=0} x N_R(sigma): height, stratum face, canonical coordinates mod span(face).
struct ExtPoint {
    Q height;
    std::size_t face = 0;
    Vec coords;

    friend bool operator==(const ExtPoint&, const ExtPoint&) = default;
};

inline ExtPoint make_point(const ToricContext& ctx, Q height, std::size_t face, const Vec& coords)
{
    if (sgn(height) < 0) throw PreconditionError("negative height");
    if (coords.size() != ctx.rank()) throw PreconditionError("point has wrong rank");
    if (face >= ctx.faces().size()) throw PreconditionError("unknown face");
    return ExtPoint{std::move(height), face, ctx.canonical(face, coords)};
}

/// The vector (r, x) in R^{1+n}.
inline Vec as_vector(const ExtPoint& w)
{
    Vec v{w.height};
    v.insert(v.end(), w.coords.begin(), w.coords.end());
    return v;
}

/// Linear form (a, u) of a term on R^{1+n}; Boolean coefficients are 0 by construction.
inline Vec term_form(const Q& a, const IVec& u)
{
    Vec v{a};
    for (auto x : u) v.push_back(to_q(x));
    return v;
}

/// <(a,u),(r,x)> = r a + <x,u> if u ∈ tau-perp, else Bottom.
inline TropScalar pairing(const ToricContext& ctx, const Q& a, const IVec& u, const ExtPoint& w)
{
    if (!ctx.in_perp(w.face, u)) return TropScalar::bottom();
    return TropScalar(w.height * a + dot(u, w.coords));
}

/// Sum of points in one stratum (heights add, coordinates add).
inline ExtPoint point_add(const ToricContext& ctx, const ExtPoint& a, const ExtPoint& b, const Q& nb = 1)
{
    if (a.face != b.face) throw PreconditionError("points lie in different strata");
    return make_point(ctx, a.height + nb * b.height, a.face, add(a.coords, scale(b.coords, nb)));
}

}  // namespace tropcong
