#pragma once

#include <map>
#include <utility>
#include <vector>

#include "tropcong/toric.hpp"

namespace tropcong {

struct Term {
    Q coeff;
    IVec exp;
};

/// Tropical polynomial in S[M]: exponent -> coefficient exponent, Bottom never stored.
class TropPoly {
public:
    explicit TropPoly(ContextPtr ctx) : ctx_(std::move(ctx)) {}

    static TropPoly zero(ContextPtr ctx) { return TropPoly(std::move(ctx)); }
    static TropPoly one(ContextPtr ctx)
    {
        TropPoly p(ctx);
        p.add_term(0, IVec(ctx->rank(), 0));
        return p;
    }
    static TropPoly monomial(ContextPtr ctx, Q coeff, IVec exp)
    {
        TropPoly p(std::move(ctx));
        p.add_term(std::move(coeff), std::move(exp));
        return p;
    }

    /// Adds t^a x^u, keeping the larger coefficient on collision.
    void add_term(Q a, IVec u)
    {
        if (u.size() != ctx_->rank()) throw PreconditionError("exponent has wrong rank");
        if (!ctx_->in_monoid(u)) throw PreconditionError("exponent not in the monoid");
        if (ctx_->mode() == CoeffMode::Boolean && sgn(a) != 0) throw PreconditionError("Boolean coefficients must be 0");
        auto it = terms_.find(u);
        if (it == terms_.end()) terms_.emplace(std::move(u), std::move(a));
        else if (it->second < a) it->second = std::move(a);
    }

    const ContextPtr& context() const { return ctx_; }
    const std::map<IVec, Q>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    bool is_monomial() const { return terms_.size() == 1; }

    std::vector<Term> term_list() const
    {
        std::vector<Term> out;
        for (const auto& [u, a] : terms_) out.push_back(Term{a, u});
        return out;
    }

    TropPoly without(const IVec& u) const
    {
        TropPoly p = *this;
        p.terms_.erase(u);
        return p;
    }

    friend bool operator==(const TropPoly& a, const TropPoly& b)
    {
        return same_context(a.ctx_, b.ctx_) && a.terms_ == b.terms_;
    }
    friend bool operator<(const TropPoly& a, const TropPoly& b) { return a.terms_ < b.terms_; }

    friend TropPoly operator+(const TropPoly& f, const TropPoly& g)
    {
        check(f, g);
        TropPoly out = f;
        for (const auto& [u, a] : g.terms_) out.add_term(a, u);
        return out;
    }

    friend TropPoly operator*(const TropPoly& f, const TropPoly& g)
    {
        check(f, g);
        TropPoly out(f.ctx_);
        for (const auto& [u, a] : f.terms_)
            for (const auto& [v, b] : g.terms_) {
                IVec w(u.size());
                for (std::size_t i = 0; i < u.size(); ++i) w[i] = u[i] + v[i];
                out.add_term(a + b, std::move(w));
            }
        return out;
    }

    std::size_t degree() const
    {
        std::size_t d = 0;
        for (const auto& [u, a] : terms_) {
            std::size_t s = 0;
            for (auto x : u) s += static_cast<std::size_t>(x < 0 ? -x : x);
            d = std::max(d, s);
        }
        return d;
    }

private:
    static void check(const TropPoly& f, const TropPoly& g)
    {
        if (!same_context(f.ctx_, g.ctx_)) throw PreconditionError("context mismatch");
    }

    ContextPtr ctx_;
    std::map<IVec, Q> terms_;
};

inline TropPoly poly_add(const TropPoly& f, const TropPoly& g) { return f + g; }
inline TropPoly poly_mul(const TropPoly& f, const TropPoly& g) { return f * g; }

inline TropPoly poly_pow(const TropPoly& f, std::size_t k)
{
    TropPoly out = TropPoly::one(f.context());
    for (std::size_t i = 0; i < k; ++i) out = out * f;
    return out;
}

using PolyPair = std::pair<TropPoly, TropPoly>;

inline void check_point(const TropPoly& f, const ExtPoint& w)
{
    const auto& ctx = *f.context();
    if (w.coords.size() != ctx.rank() || w.face >= ctx.faces().size()) throw PreconditionError("context mismatch");
}

inline TropScalar eval_term(const ToricContext& ctx, const Q& a, const IVec& u, const ExtPoint& w)
{
    return pairing(ctx, a, u, w);
}

/// max over terms of r a_u + <x,u>, Bottom for the zero polynomial.
inline TropScalar eval_poly(const TropPoly& f, const ExtPoint& w)
{
    check_point(f, w);
    TropScalar best;
    for (const auto& [u, a] : f.terms()) best = best + eval_term(*f.context(), a, u, w);
    return best;
}

/// One pair (f, f without term i) per support element.
inline std::vector<PolyPair> bend_relations(const TropPoly& f)
{
    if (f.is_zero()) throw PreconditionError("bend relations of the zero polynomial");
    std::vector<PolyPair> out;
    for (const auto& [u, a] : f.terms()) out.emplace_back(f, f.without(u));
    return out;
}

/// Sum of exactly the terms maximizing the pairing with w.
inline TropPoly initial_form_point(const TropPoly& f, const ExtPoint& w)
{
    if (f.is_zero()) throw PreconditionError("initial form of the zero polynomial");
    TropScalar best = eval_poly(f, w);
    TropPoly out(f.context());
    for (const auto& [u, a] : f.terms())
        if (eval_term(*f.context(), a, u, w) == best) out.add_term(a, u);
    return out;
}

}  // namespace tropcong
