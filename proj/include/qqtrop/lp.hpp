#pragma once

// Exact rational linear programming: maximize c.x subject to A x <= b with x free.
// Dense two-phase simplex with Bland's rule.

#include "qqtrop/scalar.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace qqtrop {

using RVec = std::vector<Rational>;
using RMat = std::vector<RVec>;

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
    LpStatus status = LpStatus::infeasible;
    Rational value;
    RVec x;   // optimal point (or a feasible point when unbounded)
    RVec ray; // direction of unbounded improvement
};

namespace detail {

class Tableau {
public:
    // Columns: x+ (n), x- (n), slack (m), artificial (k); last column is the right-hand side.
    Tableau(const RMat& A, const RVec& b) : m_(A.size()), n_(A.empty() ? 0 : A[0].size())
    {
        std::size_t k = 0;
        for (const auto& v : b)
            if (v < 0)
                ++k;
        cols_ = 2 * n_ + m_ + k;
        T_.assign(m_, RVec(cols_ + 1, Rational(0)));
        basis_.assign(m_, 0);
        std::size_t art = 2 * n_ + m_;
        for (std::size_t i = 0; i < m_; ++i) {
            const int sign = b[i] < 0 ? -1 : 1;
            for (std::size_t j = 0; j < n_; ++j) {
                T_[i][j] = sign * A[i][j];
                T_[i][n_ + j] = -sign * A[i][j];
            }
            T_[i][2 * n_ + i] = sign;
            T_[i][cols_] = sign * b[i];
            if (sign < 0) {
                T_[i][art] = 1;
                basis_[i] = art++;
            } else {
                basis_[i] = 2 * n_ + i;
            }
        }
        first_art_ = 2 * n_ + m_;
    }

    /// Runs the simplex on objective cost (length cols_); returns false if unbounded,
    /// leaving the entering column in entering.
    bool optimize(const RVec& cost, std::size_t& entering)
    {
        for (;;) {
            RVec red = reduced_costs(cost);
            std::optional<std::size_t> e;
            for (std::size_t j = 0; j < cols_; ++j)
                if (!dead(j) && red[j] > 0) {
                    e = j;
                    break;
                }
            if (!e)
                return true;
            std::optional<std::size_t> leave;
            Rational best;
            for (std::size_t i = 0; i < m_; ++i) {
                if (T_[i][*e] <= 0)
                    continue;
                Rational ratio = T_[i][cols_] / T_[i][*e];
                if (!leave || ratio < best || (ratio == best && basis_[i] < basis_[*leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (!leave) {
                entering = *e;
                return false;
            }
            pivot(*leave, *e);
        }
    }

    Rational objective(const RVec& cost) const
    {
        Rational v(0);
        for (std::size_t i = 0; i < m_; ++i)
            v += cost[basis_[i]] * T_[i][cols_];
        return v;
    }

    /// Pivots artificial variables out of the basis and disables their columns.
    void drop_artificials()
    {
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < first_art_)
                continue;
            for (std::size_t j = 0; j < first_art_; ++j)
                if (T_[i][j] != 0) {
                    pivot(i, j);
                    break;
                }
        }
        artificials_dead_ = true;
    }

    RVec point() const
    {
        RVec v(cols_, Rational(0));
        for (std::size_t i = 0; i < m_; ++i)
            v[basis_[i]] = T_[i][cols_];
        return to_x(v);
    }

    RVec ray(std::size_t entering) const
    {
        RVec d(cols_, Rational(0));
        d[entering] = 1;
        for (std::size_t i = 0; i < m_; ++i)
            d[basis_[i]] = -T_[i][entering];
        return to_x(d);
    }

    std::size_t cols() const { return cols_; }
    std::size_t first_artificial() const { return first_art_; }
    std::size_t n() const { return n_; }

private:
    bool dead(std::size_t j) const { return artificials_dead_ && j >= first_art_; }

    RVec to_x(const RVec& v) const
    {
        RVec x(n_);
        for (std::size_t j = 0; j < n_; ++j)
            x[j] = v[j] - v[n_ + j];
        return x;
    }

    RVec reduced_costs(const RVec& cost) const
    {
        RVec red = cost;
        for (std::size_t i = 0; i < m_; ++i) {
            const Rational& cb = cost[basis_[i]];
            if (cb == 0)
                continue;
            for (std::size_t j = 0; j < cols_; ++j)
                if (T_[i][j] != 0)
                    red[j] -= cb * T_[i][j];
        }
        for (std::size_t i = 0; i < m_; ++i)
            red[basis_[i]] = 0;
        return red;
    }

    void pivot(std::size_t r, std::size_t c)
    {
        const Rational p = T_[r][c];
        for (auto& v : T_[r])
            if (v != 0)
                v /= p;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r || T_[i][c] == 0)
                continue;
            const Rational f = T_[i][c];
            for (std::size_t j = 0; j <= cols_; ++j)
                if (T_[r][j] != 0)
                    T_[i][j] -= f * T_[r][j];
        }
        basis_[r] = c;
    }

    std::size_t m_, n_, cols_ = 0, first_art_ = 0;
    bool artificials_dead_ = false;
    RMat T_;
    std::vector<std::size_t> basis_;
};

} // namespace detail

/// maximize c.x subject to A x <= b, x free.
inline LpResult lp_maximize(const RVec& c, const RMat& A, const RVec& b)
{
    if (A.size() != b.size())
        throw std::invalid_argument("lp: row count mismatch");
    const std::size_t n = c.size();
    for (const auto& row : A)
        if (row.size() != n)
            throw std::invalid_argument("lp: column count mismatch");
    LpResult res;
    detail::Tableau T(A, b);
    std::size_t entering = 0;
    RVec phase1(T.cols(), Rational(0));
    for (std::size_t j = T.first_artificial(); j < T.cols(); ++j)
        phase1[j] = -1;
    T.optimize(phase1, entering); // bounded above by zero
    if (T.objective(phase1) < 0) {
        res.status = LpStatus::infeasible;
        return res;
    }
    T.drop_artificials();
    RVec cost(T.cols(), Rational(0));
    for (std::size_t j = 0; j < n; ++j) {
        cost[j] = c[j];
        cost[n + j] = -c[j];
    }
    const bool bounded = T.optimize(cost, entering);
    res.x = T.point();
    if (!bounded) {
        res.status = LpStatus::unbounded;
        res.ray = T.ray(entering);
        return res;
    }
    res.status = LpStatus::optimal;
    res.value = T.objective(cost);
    return res;
}

inline bool lp_feasible(const RMat& A, const RVec& b)
{
    const std::size_t n = A.empty() ? 0 : A[0].size();
    return lp_maximize(RVec(n, Rational(0)), A, b).status != LpStatus::infeasible;
}

/// Indices of inequalities that hold with equality on the whole (nonempty) polyhedron.
/// Repeatedly maximizes the total slack of the undecided rows, each slack capped at 1.
inline std::optional<std::vector<std::size_t>> implicit_equalities(const RMat& A, const RVec& b)
{
    const std::size_t m = A.size();
    const std::size_t n = A.empty() ? 0 : A[0].size();
    std::vector<bool> decided(m, false);
    for (;;) {
        std::vector<std::size_t> undecided;
        for (std::size_t i = 0; i < m; ++i)
            if (!decided[i])
                undecided.push_back(i);
        if (undecided.empty())
            return std::vector<std::size_t>{};
        const std::size_t e = undecided.size();
        // Variables (x, eps); rows: A x + eps_u <= b, eps <= 1, -eps <= 0.
        RMat G;
        RVec h;
        for (std::size_t i = 0; i < m; ++i) {
            RVec row(n + e, Rational(0));
            for (std::size_t j = 0; j < n; ++j)
                row[j] = A[i][j];
            for (std::size_t u = 0; u < e; ++u)
                if (undecided[u] == i)
                    row[n + u] = 1;
            G.push_back(std::move(row));
            h.push_back(b[i]);
        }
        for (std::size_t u = 0; u < e; ++u) {
            RVec up(n + e, Rational(0)), lo(n + e, Rational(0));
            up[n + u] = 1;
            lo[n + u] = -1;
            G.push_back(std::move(up));
            h.push_back(Rational(1));
            G.push_back(std::move(lo));
            h.push_back(Rational(0));
        }
        RVec c(n + e, Rational(0));
        for (std::size_t u = 0; u < e; ++u)
            c[n + u] = 1;
        const LpResult r = lp_maximize(c, G, h);
        if (r.status == LpStatus::infeasible)
            return std::nullopt;
        if (r.value == 0)
            return undecided;
        for (std::size_t u = 0; u < e; ++u)
            if (r.x[n + u] > 0)
                decided[undecided[u]] = true;
    }
}

} // namespace qqtrop
