#pragma once

#include <optional>
#include <vector>

#include "tropcong/rational.hpp"

namespace tropcong {

enum class Rel { Le, Lt, Eq };

/// The constraint <a, x> rel b.
struct Row {
    Vec a;
    Q b;
    Rel rel = Rel::Le;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    Vec x;
    Q value;
};

namespace detail {

// Dense tableau simplex, Bland's rule, all variables nonnegative.
class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols) : t_(rows, Vec(cols + 1, Q(0))), basis_(rows, 0), obj_(cols + 1, Q(0)) {}

    Vec& row(std::size_t i) { return t_[i]; }
    std::size_t& basis(std::size_t i) { return basis_[i]; }
    std::size_t rows() const { return t_.size(); }
    std::size_t cols() const { return obj_.size() - 1; }
    Q& rhs(std::size_t i) { return t_[i].back(); }

    void set_objective(const Vec& c)
    {
        for (std::size_t j = 0; j < cols(); ++j) obj_[j] = c[j];
        obj_.back() = 0;
        for (std::size_t i = 0; i < rows(); ++i) {
            Q cb = c[basis_[i]];
            if (sgn(cb) == 0) continue;
            for (std::size_t j = 0; j <= cols(); ++j)
                if (sgn(t_[i][j]) != 0) obj_[j] -= cb * t_[i][j];
        }
    }

    // Objective value: obj_.back() holds -value.
    Q value() const { return -obj_.back(); }

    // Maximize; returns false if unbounded. Columns >= active_cols are frozen.
    bool run(std::size_t active_cols)
    {
        for (;;) {
            std::size_t enter = active_cols;
            for (std::size_t j = 0; j < active_cols; ++j)
                if (sgn(obj_[j]) > 0) {
                    enter = j;
                    break;
                }
            if (enter == active_cols) return true;
            std::size_t leave = rows();
            Q best;
            for (std::size_t i = 0; i < rows(); ++i) {
                if (sgn(t_[i][enter]) <= 0) continue;
                Q ratio = t_[i].back() / t_[i][enter];
                if (leave == rows() || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave == rows()) return false;
            pivot(leave, enter);
        }
    }

    void pivot(std::size_t r, std::size_t c)
    {
        Q inv = 1 / t_[r][c];
        for (auto& x : t_[r])
            if (sgn(x) != 0) x *= inv;
        std::vector<std::size_t> nz;
        for (std::size_t j = 0; j <= cols(); ++j)
            if (sgn(t_[r][j]) != 0) nz.push_back(j);
        auto eliminate = [&](Vec& target) {
            if (sgn(target[c]) == 0) return;
            Q f = target[c];
            for (auto j : nz) target[j] -= f * t_[r][j];
        };
        for (std::size_t i = 0; i < rows(); ++i)
            if (i != r) eliminate(t_[i]);
        eliminate(obj_);
        basis_[r] = c;
    }

    void drop_row(std::size_t i)
    {
        t_.erase(t_.begin() + static_cast<long>(i));
        basis_.erase(basis_.begin() + static_cast<long>(i));
    }

    Q var_value(std::size_t j) const
    {
        for (std::size_t i = 0; i < t_.size(); ++i)
            if (basis_[i] == j) return t_[i].back();
        return 0;
    }

private:
    Mat t_;
    std::vector<std::size_t> basis_;
    Vec obj_;
};

// maximize c.y subject to A y <= b with y free.
inline LpSolution simplex_free(const Vec& c, const Mat& a, const Vec& b)
{
    const std::size_t n = c.size(), m = a.size();
    LpSolution out;
    if (n == 0) {
        for (const auto& bi : b)
            if (sgn(bi) < 0) return out;
        out.status = LpStatus::Optimal;
        out.value = 0;
        return out;
    }
    // columns: y+ (n), z (1), slacks (m), artificials
    std::size_t n_art = 0;
    for (const auto& bi : b)
        if (sgn(bi) < 0) ++n_art;
    const std::size_t zc = n, slack0 = n + 1, art0 = n + 1 + m, ncols = art0 + n_art;
    Tableau t(m, ncols);
    std::size_t art = art0;
    for (std::size_t i = 0; i < m; ++i) {
        Vec& r = t.row(i);
        Q s = 0;
        for (std::size_t j = 0; j < n; ++j) {
            r[j] = a[i][j];
            s += a[i][j];
        }
        r[zc] = -s;
        r[slack0 + i] = 1;
        r.back() = b[i];
        t.basis(i) = slack0 + i;
        if (sgn(b[i]) < 0) {
            for (auto& x : r) x = -x;
            r[art] = 1;
            t.basis(i) = art++;
        }
    }
    if (n_art > 0) {
        Vec c1(ncols, Q(0));
        for (std::size_t j = art0; j < ncols; ++j) c1[j] = -1;
        t.set_objective(c1);
        t.run(ncols);
        if (sgn(t.value()) < 0) return out;
        for (std::size_t i = 0; i < t.rows();) {
            if (t.basis(i) < art0) {
                ++i;
                continue;
            }
            std::size_t j = 0;
            while (j < art0 && sgn(t.row(i)[j]) == 0) ++j;
            if (j == art0) {
                t.drop_row(i);
                continue;
            }
            t.pivot(i, j);
            ++i;
        }
    }
    Vec c2(ncols, Q(0));
    Q s = 0;
    for (std::size_t j = 0; j < n; ++j) {
        c2[j] = c[j];
        s += c[j];
    }
    c2[zc] = -s;
    t.set_objective(c2);
    if (!t.run(art0)) {
        out.status = LpStatus::Unbounded;
        return out;
    }
    out.status = LpStatus::Optimal;
    Q z = t.var_value(zc);
    out.x.resize(n);
    for (std::size_t j = 0; j < n; ++j) out.x[j] = t.var_value(j) - z;
    out.value = dot(c, out.x);
    return out;
}

}  // namespace detail

/// Exact LP: maximize <c, x> over the non-strict rows (strict rows are rejected).
inline LpSolution lp_maximize(const Vec& c, const std::vector<Row>& rows, std::size_t d)
{
    Mat eq;
    std::vector<const Row*> ineq;
    for (const auto& r : rows) {
        if (r.a.size() != d) throw PreconditionError("row dimension mismatch");
        if (r.rel == Rel::Lt) throw PreconditionError("lp_maximize: strict row");
        if (r.rel == Rel::Eq) {
            Vec aug = r.a;
            aug.push_back(r.b);
            eq.push_back(std::move(aug));
        } else {
            ineq.push_back(&r);
        }
    }
    auto e = rref(std::move(eq), d + 1);
    LpSolution out;
    if (!e.pivots.empty() && e.pivots.back() == d) return out;
    std::vector<bool> is_pivot(d, false);
    for (auto p : e.pivots) is_pivot[p] = true;
    std::vector<std::size_t> free_vars;
    for (std::size_t j = 0; j < d; ++j)
        if (!is_pivot[j]) free_vars.push_back(j);

    // x_p = e.rows[k][d] - sum_f e.rows[k][f] x_f
    auto reduce = [&](const Vec& a, Q& constant) {
        Vec red(free_vars.size(), Q(0));
        for (std::size_t f = 0; f < free_vars.size(); ++f) red[f] = a[free_vars[f]];
        constant = 0;
        for (std::size_t k = 0; k < e.pivots.size(); ++k) {
            const Q& ap = a[e.pivots[k]];
            if (sgn(ap) == 0) continue;
            constant += ap * e.rows[k][d];
            for (std::size_t f = 0; f < free_vars.size(); ++f) red[f] -= ap * e.rows[k][free_vars[f]];
        }
        return red;
    };
    Mat ra;
    Vec rb;
    for (const Row* r : ineq) {
        Q k;
        ra.push_back(reduce(r->a, k));
        rb.push_back(r->b - k);
    }
    Q ck;
    Vec rc = reduce(c.empty() ? zeros(d) : c, ck);
    auto sol = detail::simplex_free(rc, ra, rb);
    out.status = sol.status;
    if (sol.status != LpStatus::Optimal) return out;
    out.x = zeros(d);
    for (std::size_t f = 0; f < free_vars.size(); ++f) out.x[free_vars[f]] = sol.x[f];
    for (std::size_t k = 0; k < e.pivots.size(); ++k) {
        Q v = e.rows[k][d];
        for (std::size_t f = 0; f < free_vars.size(); ++f) v -= e.rows[k][free_vars[f]] * sol.x[f];
        out.x[e.pivots[k]] = v;
    }
    out.value = c.empty() ? Q(0) : dot(c, out.x);
    return out;
}

/// A point satisfying every row (strict rows strictly), or nullopt.
/// Strict rows share one slack variable s <= 1 which is maximized.
inline std::optional<Vec> find_point(const std::vector<Row>& rows, std::size_t d)
{
    bool strict = false;
    for (const auto& r : rows) strict = strict || r.rel == Rel::Lt;
    if (!strict) {
        auto sol = lp_maximize({}, rows, d);
        if (sol.status != LpStatus::Optimal) return std::nullopt;
        return sol.x;
    }
    std::vector<Row> ext;
    ext.reserve(rows.size() + 1);
    for (const auto& r : rows) {
        Row e{r.a, r.b, r.rel == Rel::Eq ? Rel::Eq : Rel::Le};
        e.a.push_back(r.rel == Rel::Lt ? Q(1) : Q(0));
        ext.push_back(std::move(e));
    }
    ext.push_back(Row{unit(d + 1, d), Q(1), Rel::Le});
    auto sol = lp_maximize(unit(d + 1, d), ext, d + 1);
    if (sol.status != LpStatus::Optimal || sgn(sol.value) <= 0) return std::nullopt;
    sol.x.pop_back();
    return sol.x;
}

inline bool satisfies(const Row& r, const Vec& x)
{
    int c = cmp(dot(r.a, x), r.b);
    switch (r.rel) {
    case Rel::Le: return c <= 0;
    case Rel::Lt: return c < 0;
    case Rel::Eq: return c == 0;
    }
    return false;
}

inline bool satisfies_all(const std::vector<Row>& rows, const Vec& x)
{
    for (const auto& r : rows)
        if (!satisfies(r, x)) return false;
    return true;
}

}  // namespace tropcong
