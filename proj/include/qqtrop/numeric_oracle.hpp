#pragma once

// Machine-precision cross-check of lifted branches: damped Newton on the finite system at a
// fixed small t, written against plain complex arithmetic rather than the exact series code.

#include "qqtrop/lifting.hpp"
#include "qqtrop/systems.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace qqtrop::numeric {

using cd = std::complex<double>;
using CPoly = std::vector<cd>; // lowest degree first

inline CPoly mul(const CPoly& a, const CPoly& b)
{
    if (a.empty() || b.empty())
        return {};
    CPoly r(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] += a[i] * b[j];
    return r;
}

inline CPoly from_shifts(const std::vector<cd>& shifts)
{
    CPoly p{1.0};
    for (const auto& s : shifts)
        p = mul(p, CPoly{s, 1.0});
    return p;
}

inline CPoly deriv(const CPoly& p)
{
    CPoly r;
    for (std::size_t k = 1; k < p.size(); ++k)
        r.push_back(p[k] * static_cast<double>(k));
    return r;
}

inline CPoly dilate(const CPoly& p, cd q)
{
    CPoly r = p;
    cd qk = 1.0;
    for (auto& c : r) {
        c *= qk;
        qk *= q;
    }
    return r;
}

inline cd at(const CPoly& p, std::size_t k) { return k < p.size() ? p[k] : cd(0.0); }

/// Residual components of the finite system at unknowns X = (x, y) and parameter t.
inline std::vector<cd> residual(const ProblemSpec& spec, const std::vector<cd>& X, cd t)
{
    const std::size_t m = static_cast<std::size_t>(spec.m);
    const std::size_t D = static_cast<std::size_t>(spec.size());
    CPoly P = from_shifts(std::vector<cd>(X.begin(), X.begin() + static_cast<std::ptrdiff_t>(m)));
    CPoly Q = from_shifts(std::vector<cd>(X.begin() + static_cast<std::ptrdiff_t>(m), X.end()));
    std::vector<cd> shifts;
    for (const auto& a : spec.lambda.root_shifts())
        shifts.push_back(a.to_complex());
    CPoly L = from_shifts(shifts);
    CPoly E(D + 1, 0.0);
    if (spec.mode == Mode::differential) {
        CPoly PQ = mul(P, Q), A = mul(P, deriv(Q)), B = mul(Q, deriv(P));
        for (std::size_t k = 0; k <= D; ++k)
            E[k] = at(PQ, k) + t * (at(A, k) - at(B, k)) - at(L, k);
    } else {
        const cd q = spec.q.to_complex();
        CPoly U = mul(dilate(P, q), Q), V = mul(P, dilate(Q, q));
        const cd clear = std::pow(q, spec.m) - t * std::pow(q, spec.n);
        for (std::size_t k = 0; k <= D; ++k)
            E[k] = at(U, k) - t * at(V, k) - clear * at(L, k);
    }
    std::vector<cd> out;
    for (std::size_t k = 1; k <= D; ++k)
        out.push_back(E[D - k]);
    return out;
}

inline double norm(const std::vector<cd>& v)
{
    double s = 0;
    for (const auto& c : v)
        s += std::norm(c);
    return std::sqrt(s);
}

/// Solves A x = b by Gaussian elimination with partial pivoting; false if singular.
inline bool linear_solve(std::vector<std::vector<cd>> A, std::vector<cd> b, std::vector<cd>& x)
{
    const std::size_t n = b.size();
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t p = j;
        for (std::size_t i = j + 1; i < n; ++i)
            if (std::abs(A[i][j]) > std::abs(A[p][j]))
                p = i;
        if (std::abs(A[p][j]) < 1e-300)
            return false;
        std::swap(A[p], A[j]);
        std::swap(b[p], b[j]);
        for (std::size_t i = j + 1; i < n; ++i) {
            const cd f = A[i][j] / A[j][j];
            for (std::size_t k = j; k < n; ++k)
                A[i][k] -= f * A[j][k];
            b[i] -= f * b[j];
        }
    }
    x.assign(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        cd s = b[i];
        for (std::size_t k = i + 1; k < n; ++k)
            s -= A[i][k] * x[k];
        x[i] = s / A[i][i];
    }
    return true;
}

struct NewtonResult {
    bool converged = false;
    std::vector<cd> X;
    double residual_norm = 0;
    int iterations = 0;
};

/// Damped Newton with a forward-difference Jacobian and Levenberg-Marquardt fallback.
inline NewtonResult damped_newton(const ProblemSpec& spec, cd t, std::vector<cd> X, int max_iter = 200)
{
    const std::size_t D = X.size();
    NewtonResult res;
    auto F = [&](const std::vector<cd>& Y) { return residual(spec, Y, t); };
    std::vector<cd> r = F(X);
    double nr = norm(r);
    double mu = 1e-3;
    for (int it = 0; it < max_iter; ++it) {
        res.iterations = it;
        if (nr == 0)
            break;
        std::vector<std::vector<cd>> J(D, std::vector<cd>(D));
        for (std::size_t j = 0; j < D; ++j) {
            const double h = 1e-7 * (1 + std::abs(X[j]));
            std::vector<cd> Y = X;
            Y[j] += h;
            const auto rj = F(Y);
            for (std::size_t i = 0; i < D; ++i)
                J[i][j] = (rj[i] - r[i]) / h;
        }
        std::vector<cd> minus_r(D);
        for (std::size_t i = 0; i < D; ++i)
            minus_r[i] = -r[i];
        std::vector<cd> step;
        const std::vector<cd> previous = X;
        bool accepted = false;
        if (linear_solve(J, minus_r, step)) {
            double lambda = 1;
            for (int bt = 0; bt < 30 && !accepted; ++bt, lambda *= 0.5) {
                std::vector<cd> Y = X;
                for (std::size_t j = 0; j < D; ++j)
                    Y[j] += lambda * step[j];
                const auto ry = F(Y);
                const double ny = norm(ry);
                if (ny < nr * (1 - 1e-4 * lambda) || ny == 0) {
                    X = Y;
                    r = ry;
                    nr = ny;
                    accepted = true;
                }
            }
        }
        for (int tries = 0; tries < 40 && !accepted; ++tries, mu *= 10) {
            // (J^H J + mu I) d = -J^H r
            std::vector<std::vector<cd>> A(D, std::vector<cd>(D, 0.0));
            std::vector<cd> g(D, 0.0);
            for (std::size_t i = 0; i < D; ++i)
                for (std::size_t k = 0; k < D; ++k) {
                    for (std::size_t j = 0; j < D; ++j)
                        A[i][k] += std::conj(J[j][i]) * J[j][k];
                    if (i == k)
                        A[i][k] += mu;
                }
            for (std::size_t i = 0; i < D; ++i)
                for (std::size_t j = 0; j < D; ++j)
                    g[i] -= std::conj(J[j][i]) * r[j];
            if (!linear_solve(A, g, step))
                continue;
            std::vector<cd> Y = X;
            for (std::size_t j = 0; j < D; ++j)
                Y[j] += step[j];
            const auto ry = F(Y);
            const double ny = norm(ry);
            if (ny < nr) {
                X = Y;
                r = ry;
                nr = ny;
                accepted = true;
                mu = std::max(mu / 100, 1e-12);
            }
        }
        if (!accepted)
            break;
        // Stop once the update is at rounding level.
        double step_norm = 0, scale = 1;
        for (std::size_t j = 0; j < D; ++j) {
            step_norm = std::max(step_norm, std::abs(X[j] - previous[j]));
            scale = std::max(scale, std::abs(X[j]));
        }
        if (step_norm < 1e-15 * scale)
            break;
    }
    double scale = 1;
    for (const auto& x : X)
        scale = std::max(scale, std::abs(x));
    res.X = X;
    res.residual_norm = nr;
    res.converged = nr < 1e-10 * std::pow(scale, static_cast<double>(D));
    return res;
}

/// The branch evaluated at s0 = t0^(1/N) (principal root).
inline std::vector<cd> evaluate_branch(const LiftedSolution& ls, cd t0)
{
    const cd s0 = std::pow(t0, 1.0 / ls.N);
    std::vector<cd> out;
    for (const auto* v : {&ls.point.x, &ls.point.y})
        for (const auto& s : *v)
            out.push_back(s.evaluate_at(s0));
    return out;
}

struct OracleCheck {
    bool converged = false;
    double max_diff = 0;
    double tolerance = 0;
    bool agrees = false;
};

/// Newton seeded at the branch value must land within 10 |t0|^((K+1)/N) of it.
inline OracleCheck check_branch(const LiftedSolution& ls, const ProblemSpec& spec, double t0)
{
    OracleCheck c;
    const auto seed = evaluate_branch(ls, t0);
    const auto nr = damped_newton(spec, t0, seed);
    c.converged = nr.converged;
    for (std::size_t j = 0; j < seed.size(); ++j)
        c.max_diff = std::max(c.max_diff, std::abs(nr.X[j] - seed[j]));
    c.tolerance = 10 * std::pow(std::abs(t0), static_cast<double>(ls.K + 1) / ls.N);
    c.agrees = c.converged && c.max_diff <= c.tolerance;
    return c;
}

/// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Solves the finite system near the base at each t and fits the exponent of |X_j(t) - X_j(0)|.
/// Seeds are nudged off the base so that symmetric starts do not stay on the diagonal.
inline std::vector<double> fit_exponents(const ProblemSpec& spec, const std::vector<cd>& base,
                                         const std::vector<double>& ts)
{
    const std::size_t D = base.size();
    std::vector<std::vector<double>> dev(D);
    for (double t : ts) {
        std::vector<cd> seed = base;
        for (std::size_t j = 0; j < D; ++j)
            seed[j] += t * cd(0.3 + 0.1 * static_cast<double>(j), 0.2 - 0.05 * static_cast<double>(j));
        const auto nr = damped_newton(spec, t, seed);
        for (std::size_t j = 0; j < D; ++j)
            dev[j].push_back(std::max(std::abs(nr.X[j] - base[j]), 1e-300));
    }
    std::vector<double> slopes;
    for (std::size_t j = 0; j < D; ++j)
        slopes.push_back(loglog_slope(ts, dev[j]));
    return slopes;
}

} // namespace qqtrop::numeric
