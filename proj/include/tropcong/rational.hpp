#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tropcong/errors.hpp"

namespace tropcong {

using Q = mpq_class;
using Vec = std::vector<Q>;
using Mat = std::vector<Vec>;
using IVec = std::vector<std::int64_t>;

inline Q parse_rational(std::string_view s)
{
    auto bad = [&] { return ParseError("malformed rational \"" + std::string(s) + "\""); };
    if (s.empty()) throw bad();
    auto digits = [](std::string_view t, bool allow_sign) {
        if (allow_sign && !t.empty() && (t[0] == '-' || t[0] == '+')) t.remove_prefix(1);
        return !t.empty() && std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; });
    };
    auto slash = s.find('/');
    std::string num(s.substr(0, slash));
    std::string den = slash == std::string_view::npos ? "1" : std::string(s.substr(slash + 1));
    if (!digits(num, true) || !digits(den, false)) throw bad();
    if (num[0] == '+') num.erase(0, 1);
    mpz_class n(num), d(den);
    if (d == 0) throw ParseError("zero denominator in rational \"" + std::string(s) + "\"");
    Q q(n, d);
    q.canonicalize();
    return q;
}

inline std::string format_rational(const Q& q) { return q.get_str(); }

inline Q to_q(std::int64_t v) { return Q(static_cast<long>(v)); }

inline Vec to_vec(const IVec& v)
{
    Vec out;
    out.reserve(v.size());
    for (auto x : v) out.push_back(to_q(x));
    return out;
}

inline bool is_integral(const Q& q) { return q.get_den() == 1; }

inline IVec to_ivec(const Vec& v)
{
    IVec out;
    out.reserve(v.size());
    for (const auto& x : v) {
        if (!is_integral(x) || !x.get_num().fits_slong_p()) throw PreconditionError("vector entry is not a machine integer");
        out.push_back(x.get_num().get_si());
    }
    return out;
}

inline Q dot(const Vec& a, const Vec& b)
{
    Q s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
    return s;
}

inline Q dot(const IVec& a, const Vec& b)
{
    Q s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0 && sgn(b[i]) != 0) s += to_q(a[i]) * b[i];
    return s;
}

inline Vec add(Vec a, const Vec& b)
{
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

inline Vec sub(Vec a, const Vec& b)
{
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
}

inline Vec scale(Vec a, const Q& c)
{
    for (auto& x : a) x *= c;
    return a;
}

inline bool is_zero(const Vec& v)
{
    return std::all_of(v.begin(), v.end(), [](const Q& x) { return sgn(x) == 0; });
}

inline Vec zeros(std::size_t n) { return Vec(n, Q(0)); }

inline Vec unit(std::size_t n, std::size_t i)
{
    Vec v = zeros(n);
    v[i] = 1;
    return v;
}

/// Positive multiple of v with coprime integer entries; zero stays zero.
inline Vec primitive(Vec v)
{
    mpz_class l = 1, g = 0;
    for (const auto& x : v) l = lcm(l, x.get_den());
    for (auto& x : v) {
        x *= l;
        g = gcd(g, x.get_num());
    }
    if (g == 0) return v;
    for (auto& x : v) x /= g;
    return v;
}

struct Echelon {
    Mat rows;                     // reduced row echelon form, zero rows dropped
    std::vector<std::size_t> pivots;
};

inline Echelon rref(Mat m, std::size_t ncols)
{
    Echelon e;
    std::size_t r = 0;
    for (std::size_t c = 0; c < ncols && r < m.size(); ++c) {
        std::size_t p = r;
        while (p < m.size() && sgn(m[p][c]) == 0) ++p;
        if (p == m.size()) continue;
        std::swap(m[p], m[r]);
        Q inv = 1 / m[r][c];
        for (auto& x : m[r]) x *= inv;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == r || sgn(m[i][c]) == 0) continue;
            Q f = m[i][c];
            for (std::size_t j = 0; j < ncols; ++j)
                if (sgn(m[r][j]) != 0) m[i][j] -= f * m[r][j];
        }
        e.pivots.push_back(c);
        ++r;
    }
    m.resize(r);
    e.rows = std::move(m);
    return e;
}

inline std::size_t rank(const Mat& m, std::size_t ncols) { return rref(m, ncols).pivots.size(); }

/// Basis of {x : A x = 0}.
inline Mat nullspace(const Mat& a, std::size_t ncols)
{
    auto e = rref(a, ncols);
    std::vector<bool> is_pivot(ncols, false);
    for (auto p : e.pivots) is_pivot[p] = true;
    Mat basis;
    for (std::size_t f = 0; f < ncols; ++f) {
        if (is_pivot[f]) continue;
        Vec v = zeros(ncols);
        v[f] = 1;
        for (std::size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = -e.rows[i][f];
        basis.push_back(primitive(v));
    }
    return basis;
}

/// Reduce x modulo the row space of an echelon basis (zero at every pivot column).
inline Vec reduce_mod(const Echelon& e, Vec x)
{
    for (std::size_t i = 0; i < e.pivots.size(); ++i) {
        Q f = x[e.pivots[i]];
        if (sgn(f) == 0) continue;
        for (std::size_t j = 0; j < x.size(); ++j)
            if (sgn(e.rows[i][j]) != 0) x[j] -= f * e.rows[i][j];
    }
    return x;
}

/// True iff a = c b for some c > 0.
inline bool positively_parallel(const Vec& a, const Vec& b)
{
    Q c = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (sgn(a[i]) == 0 && sgn(b[i]) == 0) continue;
        if (sgn(a[i]) == 0 || sgn(b[i]) == 0) return false;
        Q r = a[i] / b[i];
        if (sgn(c) == 0) c = r;
        else if (r != c) return false;
    }
    return sgn(c) > 0;
}

}  // namespace tropcong
