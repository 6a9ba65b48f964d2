#pragma once

#include <deque>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <variant>
#include <vector>

#include "tropcong/poly.hpp"

namespace tropcong {

/// Rows w_j = (r_j, x_j) in R_{>=0} x N_R/tau for a single face tau.
struct PrimeMatrix {
    ContextPtr ctx;
    std::size_t face = 0;
    std::vector<ExtPoint> rows;

    std::size_t size() const { return rows.size(); }
};

inline PrimeMatrix make_prime_matrix(ContextPtr ctx, std::size_t face, const Mat& rows)
{
    if (rows.empty()) throw PreconditionError("prime matrix needs at least one row");
    PrimeMatrix p{ctx, face, {}};
    for (const auto& r : rows) {
        if (r.size() != ctx->rank() + 1) throw PreconditionError("matrix row has wrong length");
        Vec x(r.begin() + 1, r.end());
        p.rows.push_back(make_point(*ctx, r[0], face, x));
    }
    return p;
}

inline void validate_matrix(const PrimeMatrix& p)
{
    if (p.rows.empty()) throw PreconditionError("empty prime matrix");
    for (const auto& r : p.rows) {
        if (r.face != p.face) throw PreconditionError("rows lie in different strata");
        if (sgn(r.height) < 0) throw PreconditionError("negative height in prime matrix");
    }
}

/// Phi(t^a x^u): the column of row pairings, all Bottom off tau-perp.
inline LexVec prime_eval_term(const PrimeMatrix& p, const Q& a, const IVec& u)
{
    LexVec out;
    out.reserve(p.rows.size());
    for (const auto& w : p.rows) out.push_back(pairing(*p.ctx, a, u, w));
    return out;
}

inline LexVec prime_eval(const PrimeMatrix& p, const TropPoly& f)
{
    if (!same_context(p.ctx, f.context())) throw PreconditionError("context mismatch");
    LexVec best(p.rows.size());
    for (const auto& [u, a] : f.terms()) {
        auto v = prime_eval_term(p, a, u);
        if (best < v) best = std::move(v);
    }
    return best;
}

inline bool prime_contains_pair(const PrimeMatrix& p, const PolyPair& fg)
{
    validate_matrix(p);
    return prime_eval(p, fg.first) == prime_eval(p, fg.second);
}

struct CongruencePresentation {
    ContextPtr ctx;
    std::vector<PolyPair> pairs;
    bool finite_basis = false;
};

inline bool congruence_in_prime(const CongruencePresentation& e, const PrimeMatrix& p)
{
    for (const auto& fg : e.pairs)
        if (!prime_contains_pair(p, fg)) return false;
    return true;
}

/// Terms of f whose Phi-value is the lex maximum.
inline TropPoly initial_form_prime(const TropPoly& f, const PrimeMatrix& p)
{
    if (f.is_zero()) throw PreconditionError("initial form of the zero polynomial");
    auto best = prime_eval(p, f);
    TropPoly out(f.context());
    for (const auto& [u, a] : f.terms())
        if (prime_eval_term(p, a, u) == best) out.add_term(a, u);
    return out;
}

inline std::size_t ideal_kernel_face(const PrimeMatrix& p) { return p.face; }

inline bool has_trivial_ideal_kernel(const PrimeMatrix& p) { return p.ctx->face(p.face).ray_ids.empty(); }

/// m1 <=_P m2 for monomials (as terms).
inline bool prime_leq(const PrimeMatrix& p, const Term& m1, const Term& m2)
{
    return prime_eval_term(p, m1.coeff, m1.exp) <= prime_eval_term(p, m2.coeff, m2.exp);
}

/// Row i is the ray of C_i not in C_{i-1}; with a seed, a random point of rel.int C_i instead.
inline PrimeMatrix flag_to_matrix(ContextPtr ctx, const FlagOfCones& flag, std::optional<std::uint64_t> seed = std::nullopt)
{
    if (auto v = validate_flag(flag); v != FlagViolation::None) throw PreconditionError("invalid flag: " + to_string(v));
    auto face = ctx->find_face(flag.tau_rays);
    if (!face) throw PreconditionError("flag stratum is not a face of sigma");
    Mat rows;
    std::mt19937_64 rng(seed.value_or(0));
    std::uniform_int_distribution<int> coef(1, 9);
    for (std::size_t i = 0; i < flag.cones.size(); ++i) {
        const auto& c = flag.cones[i];
        if (!seed) {
            for (const auto& r : c) {
                bool old = false;
                if (i > 0)
                    for (const auto& s : flag.cones[i - 1]) old = old || positively_parallel(r, s);
                if (!old) {
                    rows.push_back(r);
                    break;
                }
            }
        } else {
            Vec sum = zeros(c.front().size());
            for (const auto& r : c) sum = add(sum, scale(r, Q(coef(rng))));
            rows.push_back(sum);
        }
    }
    return make_prime_matrix(ctx, *face, rows);
}

// ---------------------------------------------------------------- derivations

struct Step {
    enum class Kind { Generator, Refl, Sym, Trans, AddBoth, MulMono };
    Kind kind = Kind::Refl;
    std::size_t i = 0;
    std::size_t j = 0;
    std::optional<TropPoly> poly;
};

struct Derivation {
    std::vector<Step> steps;
};

inline bool same_pair_unordered(const PolyPair& a, const PolyPair& b)
{
    return (a.first == b.first && a.second == b.second) || (a.first == b.second && a.second == b.first);
}

/// Replays the derivation; nullopt when some step is not a valid instance.
inline std::optional<PolyPair> replay(const CongruencePresentation& e, const Derivation& d)
{
    std::vector<PolyPair> got;
    for (const auto& s : d.steps) {
        auto prior = [&](std::size_t k) -> const PolyPair& {
            if (k >= got.size()) throw PreconditionError("derivation step refers to a later or missing step");
            return got[k];
        };
        switch (s.kind) {
        case Step::Kind::Generator:
            if (s.i >= e.pairs.size()) throw PreconditionError("generator index out of range");
            got.push_back(e.pairs[s.i]);
            break;
        case Step::Kind::Refl:
            if (!s.poly) throw PreconditionError("refl step without polynomial");
            got.emplace_back(*s.poly, *s.poly);
            break;
        case Step::Kind::Sym: {
            auto p = prior(s.i);
            got.emplace_back(p.second, p.first);
            break;
        }
        case Step::Kind::Trans: {
            const auto& a = prior(s.i);
            const auto& b = prior(s.j);
            if (!(a.second == b.first)) return std::nullopt;
            got.emplace_back(a.first, b.second);
            break;
        }
        case Step::Kind::AddBoth: {
            if (!s.poly) throw PreconditionError("add step without polynomial");
            auto p = prior(s.i);
            got.emplace_back(p.first + *s.poly, p.second + *s.poly);
            break;
        }
        case Step::Kind::MulMono: {
            if (!s.poly) throw PreconditionError("mul step without monomial");
            if (!s.poly->is_monomial()) return std::nullopt;
            auto p = prior(s.i);
            got.emplace_back(p.first * *s.poly, p.second * *s.poly);
            break;
        }
        }
    }
    if (got.empty()) return std::nullopt;
    return got.back();
}

inline bool verify_derivation(const CongruencePresentation& e, const Derivation& d, const PolyPair& target)
{
    auto last = replay(e, d);
    return last && same_pair_unordered(*last, target);
}

struct RadicalCertificate {
    std::size_t i = 0;
    TropPoly h;
    Derivation derivation;
};

/// [(f+g)^i + h] (f, g).
inline PolyPair scaled_pair(const PolyPair& fg, std::size_t i, const TropPoly& h)
{
    TropPoly c = poly_pow(fg.first + fg.second, i) + h;
    return {c * fg.first, c * fg.second};
}

inline bool verify_radical_certificate(const CongruencePresentation& e, const PolyPair& fg, const RadicalCertificate& c)
{
    return verify_derivation(e, c.derivation, scaled_pair(fg, c.i, c.h));
}

inline bool verify_radical_certificate(const PrimeMatrix& p, const PolyPair& fg, const RadicalCertificate& c)
{
    return prime_contains_pair(p, scaled_pair(fg, c.i, c.h));
}

struct SearchBounds {
    std::size_t max_i = 4;
    std::size_t max_degree = 8;
    std::size_t max_nodes = 4000;
};

struct NotFound {
    std::size_t explored = 0;
};

using SearchResult = std::variant<RadicalCertificate, NotFound>;

namespace detail {

// Cofactor candidates: 0, then each monomial of (f+g)^i and of the generators.
inline std::vector<TropPoly> cofactor_pool(const ContextPtr& ctx, const std::vector<PolyPair>& gens, const TropPoly& base,
                                           std::size_t max_degree)
{
    std::set<TropPoly> mons;
    auto take = [&](const TropPoly& f) {
        for (const auto& [u, a] : f.terms()) {
            auto m = TropPoly::monomial(ctx, a, u);
            if (m.degree() <= max_degree) mons.insert(m);
        }
    };
    take(base);
    for (const auto& [f, g] : gens) {
        take(f);
        take(g);
    }
    std::vector<TropPoly> out{TropPoly::zero(ctx)};
    out.insert(out.end(), mons.begin(), mons.end());
    return out;
}

struct Edge {
    std::size_t gen;
    bool reversed;
    TropPoly mono;
    TropPoly rest;
};

// Elementary moves p = m s + k -> m t + k for generator (s,t) in either orientation.
inline std::vector<std::pair<TropPoly, Edge>> moves(const TropPoly& p, const std::vector<PolyPair>& gens, std::size_t max_degree)
{
    std::vector<std::pair<TropPoly, Edge>> out;
    const auto& ctx = p.context();
    for (std::size_t gi = 0; gi < gens.size(); ++gi)
        for (int rev = 0; rev < 2; ++rev) {
            const TropPoly& s = rev ? gens[gi].second : gens[gi].first;
            const TropPoly& t = rev ? gens[gi].first : gens[gi].second;
            if (s.is_zero()) continue;
            const auto& [u0, a0] = *s.terms().begin();
            std::set<IVec> shifts;
            for (const auto& [u, a] : p.terms()) {
                IVec v(u.size());
                for (std::size_t i = 0; i < u.size(); ++i) v[i] = u[i] - u0[i];
                if (ctx->in_monoid(v)) shifts.insert(v);
            }
            for (const auto& v : shifts) {
                std::optional<Q> c;
                bool fits = true;
                for (const auto& [us, as] : s.terms()) {
                    IVec w(us.size());
                    for (std::size_t i = 0; i < w.size(); ++i) w[i] = us[i] + v[i];
                    auto it = p.terms().find(w);
                    if (it == p.terms().end()) {
                        fits = false;
                        break;
                    }
                    Q room = it->second - as;
                    if (!c || room < *c) c = room;
                }
                if (!fits) continue;
                if (ctx->mode() == CoeffMode::Boolean) c = 0;
                auto m = TropPoly::monomial(ctx, *c, v);
                TropPoly ms = m * s;
                bool below = true;
                for (const auto& [w, b] : ms.terms()) below = below && p.terms().at(w) >= b;
                if (!below) continue;
                TropPoly kmin(ctx);
                for (const auto& [w, b] : p.terms()) {
                    auto it = ms.terms().find(w);
                    if (it == ms.terms().end() || it->second != b) kmin.add_term(b, w);
                }
                for (const TropPoly& k : {kmin, p}) {
                    TropPoly next = m * t + k;
                    if (next.degree() > max_degree || next == p) continue;
                    out.emplace_back(next, Edge{gi, rev == 1, m, k});
                    if (k == p) break;
                }
            }
        }
    return out;
}

// Derivation of (a, b) along a path of moves; appends steps and returns the index of the final pair.
inline std::size_t emit_edge(Derivation& d, const Edge& e)
{
    d.steps.push_back(Step{Step::Kind::Generator, e.gen, 0, std::nullopt});
    if (e.reversed) d.steps.push_back(Step{Step::Kind::Sym, d.steps.size() - 1, 0, std::nullopt});
    d.steps.push_back(Step{Step::Kind::MulMono, d.steps.size() - 1, 0, e.mono});
    d.steps.push_back(Step{Step::Kind::AddBoth, d.steps.size() - 1, 0, e.rest});
    return d.steps.size() - 1;
}

// Breadth-first search from a to b in the bounded universe.
inline std::optional<Derivation> connect(const TropPoly& a, const TropPoly& b, const std::vector<PolyPair>& gens,
                                         const SearchBounds& bounds, std::size_t& explored)
{
    if (a == b) return Derivation{{Step{Step::Kind::Refl, 0, 0, a}}};
    std::map<TropPoly, std::optional<std::pair<TropPoly, Edge>>> parent;
    std::deque<TropPoly> queue{a};
    parent.emplace(a, std::nullopt);
    while (!queue.empty() && parent.size() < bounds.max_nodes) {
        TropPoly p = queue.front();
        queue.pop_front();
        for (auto& [next, edge] : moves(p, gens, bounds.max_degree)) {
            if (parent.count(next)) continue;
            parent.emplace(next, std::make_pair(p, edge));
            if (next == b) {
                explored += parent.size();
                std::vector<Edge> path;
                TropPoly cur = b;
                while (parent.at(cur)) {
                    path.push_back(parent.at(cur)->second);
                    cur = parent.at(cur)->first;
                }
                std::reverse(path.begin(), path.end());
                Derivation d;
                // each edge gives (m s + k, m t + k) = (previous, next)
                std::size_t acc = emit_edge(d, path.front());
                for (std::size_t k = 1; k < path.size(); ++k) {
                    std::size_t nxt = emit_edge(d, path[k]);
                    d.steps.push_back(Step{Step::Kind::Trans, acc, nxt, std::nullopt});
                    acc = d.steps.size() - 1;
                }
                return d;
            }
            queue.push_back(next);
        }
    }
    explored += parent.size();
    return std::nullopt;
}

}  // namespace detail

/// Bounded search for i, h and a derivation of [(f+g)^i + h](f,g) from the generators.
inline SearchResult search_radical_certificate(const CongruencePresentation& e, const PolyPair& fg, const SearchBounds& bounds = {})
{
    std::size_t explored = 0;
    for (std::size_t i = 0; i <= bounds.max_i; ++i) {
        TropPoly base = poly_pow(fg.first + fg.second, i);
        if (base.degree() > bounds.max_degree) break;
        for (const auto& h : detail::cofactor_pool(e.ctx, e.pairs, base, bounds.max_degree)) {
            auto target = scaled_pair(fg, i, h);
            if (target.first.degree() > bounds.max_degree || target.second.degree() > bounds.max_degree) continue;
            auto d = detail::connect(target.first, target.second, e.pairs, bounds, explored);
            if (d) return RadicalCertificate{i, h, std::move(*d)};
        }
    }
    return NotFound{explored};
}

/// Same search against a prime given by its matrix (membership decided by Phi).
inline SearchResult search_radical_certificate(const PrimeMatrix& p, const PolyPair& fg, const SearchBounds& bounds = {})
{
    std::size_t explored = 0;
    for (std::size_t i = 0; i <= bounds.max_i; ++i) {
        TropPoly base = poly_pow(fg.first + fg.second, i);
        if (base.degree() > bounds.max_degree) break;
        for (const auto& h : detail::cofactor_pool(p.ctx, {}, base, bounds.max_degree)) {
            ++explored;
            if (prime_contains_pair(p, scaled_pair(fg, i, h))) return RadicalCertificate{i, h, {}};
        }
    }
    return NotFound{explored};
}

}  // namespace tropcong
