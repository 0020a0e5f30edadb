#pragma once

// Lifting infinite solutions to truncated series solutions of the finite system.

#include "qqtrop/infinite.hpp"
#include "qqtrop/matrix.hpp"
#include "qqtrop/mpoly.hpp"
#include "qqtrop/roots.hpp"
#include "qqtrop/series.hpp"
#include "qqtrop/systems.hpp"

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qqtrop {

struct LiftError : std::runtime_error {
    LiftError(std::string code, const std::string& detail)
        : std::runtime_error(code + ": " + detail), code(std::move(code))
    {
    }
    std::string code;
};

struct Certificate {
    std::optional<Rational> valuation; // nullopt: residual is identically zero
    Rational bound;                    // (K+1)/N
    bool passes = false;
    bool identically_zero() const { return !valuation.has_value(); }
};

struct LiftedSolution {
    CandidatePoint point;
    Series alpha; // difference mode only
    int N = 1;
    long K = 0; // order in s, where t = s^N
    InfiniteSolution base;
    std::string method; // "newton" or "ramified"
    Certificate cert;
};

/// alpha(t) = 1/(q^m - t q^n) as a jet in s through order K.
inline Series alpha_series(const ProblemSpec& spec, int N, long K)
{
    std::vector<Scalar> c(static_cast<std::size_t>(N) + 1);
    c[0] = pow(spec.q, spec.m);
    c[static_cast<std::size_t>(N)] = -pow(spec.q, spec.n);
    return Series(N, 0, std::move(c), K).reciprocal();
}

/// Minimum residual valuation of the point read as a polynomial in s; passes iff >= (K+1)/N.
inline Certificate certify_point(const CandidatePoint& p, const ProblemSpec& spec, int N, long K)
{
    Certificate c;
    c.bound = Rational(K + 1, N);
    c.bound.canonicalize();
    for (const auto& r : evaluate_residual(p.exact(), spec)) {
        auto v = r.valuation();
        if (v && (!c.valuation || *v < *c.valuation))
            c.valuation = v;
    }
    c.passes = !c.valuation || *c.valuation >= c.bound;
    return c;
}

inline Certificate certify_residual(const LiftedSolution& ls, const ProblemSpec& spec)
{
    return certify_point(ls.point, spec, ls.N, ls.K);
}

namespace detail {

using Coeffs = std::vector<std::vector<Scalar>>; // coeffs[k][j]: s^k coefficient of unknown j

inline LiftedSolution assemble(const ProblemSpec& spec, const InfiniteSolution& base, const Coeffs& c,
                               int N, long K, std::string method)
{
    const std::size_t D = static_cast<std::size_t>(spec.size());
    LiftedSolution ls;
    for (std::size_t j = 0; j < D; ++j) {
        std::vector<Scalar> col;
        for (long k = 0; k <= K; ++k)
            col.push_back(c[static_cast<std::size_t>(k)][j]);
        Series s(N, 0, std::move(col), K);
        (static_cast<int>(j) < spec.m ? ls.point.x : ls.point.y).push_back(std::move(s));
    }
    ls.N = N;
    ls.K = K;
    ls.base = base;
    ls.method = std::move(method);
    if (spec.mode == Mode::difference)
        ls.alpha = alpha_series(spec, N, K);
    ls.cert = certify_point(ls.point, spec, N, K);
    return ls;
}

/// Indices of rows of J forming a basis of its row space.
inline std::vector<std::size_t> independent_rows(const Matrix<Scalar>& J)
{
    std::vector<std::size_t> rows;
    std::size_t r = 0;
    for (std::size_t i = 0; i < J.rows(); ++i) {
        Matrix<Scalar> trial(rows.size() + 1, J.cols());
        for (std::size_t a = 0; a < rows.size(); ++a)
            for (std::size_t j = 0; j < J.cols(); ++j)
                trial(a, j) = J(rows[a], j);
        for (std::size_t j = 0; j < J.cols(); ++j)
            trial(rows.size(), j) = J(i, j);
        const std::size_t rk = rank(trial);
        if (rk > r) {
            rows.push_back(i);
            r = rk;
        }
    }
    return rows;
}

/// Order-by-order Newton: fills coeffs[start..K] given coeffs[0..start-1], using rows with
/// invertible Jacobian J0. eval maps jets through order k to residual jets.
inline void hensel(const std::function<std::vector<Series>(const std::vector<Series>&)>& eval,
                   const Matrix<Scalar>& J0, const std::vector<std::size_t>& rows, Coeffs& coeffs,
                   long start, long K)
{
    const std::size_t D = J0.cols();
    Matrix<Scalar> A(D, D);
    for (std::size_t a = 0; a < D; ++a)
        for (std::size_t j = 0; j < D; ++j)
            A(a, j) = J0(rows[a], j);
    for (long k = start; k <= K; ++k) {
        std::vector<Series> W;
        for (std::size_t j = 0; j < D; ++j) {
            std::vector<Scalar> col;
            for (long e = 0; e < k; ++e)
                col.push_back(coeffs[static_cast<std::size_t>(e)][j]);
            W.emplace_back(1, 0, std::move(col), k);
        }
        const auto R = eval(W);
        std::vector<Scalar> rhs;
        for (std::size_t a = 0; a < D; ++a)
            rhs.push_back(-R[rows[a]].coeff(k));
        auto x = solve(A, rhs);
        if (!x)
            throw std::logic_error("singular Hensel system");
        coeffs.push_back(std::move(*x));
    }
}

} // namespace detail

/// Newton lift of a generic base: N = 1, order spec.K.
inline LiftedSolution lift_newton(const InfiniteSolution& sol, const ProblemSpec& spec)
{
    const std::size_t D = static_cast<std::size_t>(spec.size());
    const Matrix<Scalar> J0 = residual_jacobian(spec, sol.x0, sol.y0);
    if (rank(J0) != D)
        throw LiftError("singular_jacobian", "base is degenerate; use lift_ramified");
    detail::Coeffs coeffs;
    std::vector<Scalar> X0 = sol.x0;
    X0.insert(X0.end(), sol.y0.begin(), sol.y0.end());
    coeffs.push_back(X0);
    std::vector<std::size_t> rows(D);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    const std::size_t m = static_cast<std::size_t>(spec.m);
    auto eval = [&](const std::vector<Series>& W) {
        std::vector<Series> x(W.begin(), W.begin() + static_cast<std::ptrdiff_t>(m));
        std::vector<Series> y(W.begin() + static_cast<std::ptrdiff_t>(m), W.end());
        return mode_residual<Series>(spec, x, y, Series::t(1));
    };
    detail::hensel(eval, J0, rows, coeffs, 1, spec.K);
    return detail::assemble(spec, sol, coeffs, 1, spec.K, "newton");
}

/// Counters from the branch search, reported when no branch certifies.
struct SearchDiagnostics {
    int N_tried = 0;
    long nodes = 0;
    long infeasible = 0;
    long unrepresentable_roots = 0;
    long unsupported_kernels = 0; // free dimension >= 3
    long positive_dimensional = 0;
    long uncertified = 0;
    long capped = 0;

    std::string summary() const
    {
        return "N<=" + std::to_string(N_tried) + " nodes=" + std::to_string(nodes) +
               " infeasible=" + std::to_string(infeasible) +
               " unrepresentable_roots=" + std::to_string(unrepresentable_roots) +
               " kernel_dimension_unsupported=" + std::to_string(unsupported_kernels) +
               " positive_dimensional=" + std::to_string(positive_dimensional) +
               " uncertified=" + std::to_string(uncertified) + " capped=" + std::to_string(capped);
    }
};

struct BranchSearch {
    std::vector<LiftedSolution> branches;
    SearchDiagnostics diagnostics;
};

namespace detail {

inline MPoly at_s_zero(const MPoly& p, std::size_t s)
{
    MPoly r;
    for (const auto& [u, c] : p.terms())
        if (s >= u.size() || u[s] == 0)
            r += MPoly::term(u, c);
    return r;
}

/// Blow-up search for series solutions of H(W, s) = 0 with W(0) = center.
class BranchExplorer {
public:
    BranchExplorer(std::size_t D, long K, SearchDiagnostics& diag) : D_(D), K_(K), diag_(diag) {}

    std::vector<Coeffs> run(const std::vector<MPoly>& H, const std::vector<Scalar>& center)
    {
        out_.clear();
        Coeffs prefix;
        explore(H, center, prefix);
        return out_;
    }

private:
    static constexpr std::size_t kMaxBranches = 64;

    Matrix<Scalar> jacobian(const std::vector<MPoly>& H, const std::vector<Scalar>& W0) const
    {
        std::vector<Scalar> pt = W0;
        pt.push_back(Scalar(0));
        Matrix<Scalar> J(H.size(), D_);
        for (std::size_t i = 0; i < H.size(); ++i)
            for (std::size_t j = 0; j < D_; ++j)
                J(i, j) = H[i].derivative(j).evaluate(pt);
        return J;
    }

    void explore(const std::vector<MPoly>& H, const std::vector<Scalar>& W0, Coeffs prefix)
    {
        ++diag_.nodes;
        if (out_.size() >= kMaxBranches) {
            ++diag_.capped;
            return;
        }
        prefix.push_back(W0);
        const long d = static_cast<long>(prefix.size()) - 1;
        if (d == K_) {
            out_.push_back(std::move(prefix));
            return;
        }
        const Matrix<Scalar> J = jacobian(H, W0);
        if (rank(J) == D_) {
            // Local coordinates: H(W0 + Z, s) solved for the tail Z = sum_{k>0} Z_k s^k.
            const auto rows = independent_rows(J);
            auto eval = [&](const std::vector<Series>& Z) {
                std::vector<Series> vals;
                for (std::size_t j = 0; j < D_; ++j)
                    vals.push_back(Z[j] + Series(W0[j]));
                vals.push_back(Series::t(1));
                std::vector<Series> r;
                for (const auto& h : H)
                    r.push_back(h.evaluate(vals));
                return r;
            };
            Coeffs tail;
            tail.push_back(std::vector<Scalar>(D_, Scalar(0)));
            hensel(eval, J, rows, tail, 1, K_ - d);
            for (long k = 1; k <= K_ - d; ++k)
                prefix.push_back(tail[static_cast<std::size_t>(k)]);
            out_.push_back(std::move(prefix));
            return;
        }
        // Blow up: W = W0 + s W'.
        std::vector<MPoly> subs;
        const MPoly s = MPoly::var(D_);
        for (std::size_t j = 0; j < D_; ++j)
            subs.push_back(MPoly(W0[j]) + s * MPoly::var(j));
        std::vector<MPoly> next;
        for (const auto& h : H)
            next.push_back(h.substitute(subs));
        if (!saturate(next)) {
            ++diag_.infeasible;
            return;
        }
        for (auto& W1 : initial_solutions(next))
            explore(next, W1, prefix);
    }

    /// Divides rows by powers of s and cancels linearly dependent initial forms, so that the
    /// initial system sees the next order wherever two rows agree to leading order.
    /// Returns false when the initial system is inconsistent.
    bool saturate(std::vector<MPoly>& H)
    {
        const long cap = 8 * static_cast<long>(D_ + 1) * (K_ + 2);
        for (long iter = 0; iter < cap; ++iter) {
            std::vector<MPoly> rows;
            for (auto& h : H) {
                if (h.is_zero())
                    continue;
                const int e = h.min_degree_in(D_);
                rows.push_back(e > 0 ? h.divide_by_var(D_, e) : h);
            }
            H = std::move(rows);
            std::vector<MPoly> init;
            std::map<Monomial, std::size_t> index;
            for (const auto& h : H) {
                init.push_back(at_s_zero(h, D_));
                if (init.back().total_degree() == 0)
                    return false;
                for (const auto& [u, c] : init.back().terms())
                    index.emplace(u, index.size());
            }
            Matrix<Scalar> L(index.size(), H.size());
            for (std::size_t a = 0; a < H.size(); ++a)
                for (const auto& [u, c] : init[a].terms())
                    L(index.at(u), a) = c;
            const auto dep = nullspace(L);
            if (dep.empty())
                return true;
            const auto& c = dep.front();
            std::size_t lead = H.size();
            for (std::size_t a = H.size(); a-- > 0;)
                if (!c[a].is_zero()) {
                    lead = a;
                    break;
                }
            MPoly combo;
            for (std::size_t a = 0; a < H.size(); ++a)
                if (!c[a].is_zero())
                    combo += H[a] * c[a];
            H[lead] = combo;
        }
        ++diag_.capped;
        return false;
    }

    static Monomial unit(std::size_t j)
    {
        Monomial u(j + 1, 0);
        u[j] = 1;
        return u;
    }

    /// Points W with every initial form vanishing; affine forms are solved first.
    std::vector<std::vector<Scalar>> initial_solutions(const std::vector<MPoly>& H)
    {
        std::vector<MPoly> affine, nonlinear;
        for (const auto& h : H) {
            MPoly p = at_s_zero(h, D_);
            (p.total_degree() == 1 ? affine : nonlinear).push_back(std::move(p));
        }
        Matrix<Scalar> A(affine.size(), D_ + 1);
        for (std::size_t a = 0; a < affine.size(); ++a) {
            for (std::size_t j = 0; j < D_; ++j)
                A(a, j) = affine[a].coeff(unit(j));
            A(a, D_) = affine[a].constant_term();
        }
        const auto E = rref(A);
        std::vector<bool> pivot(D_, false);
        for (auto p : E.pivots)
            pivot[p] = true;
        std::vector<std::size_t> free;
        for (std::size_t j = 0; j < D_; ++j)
            if (!pivot[j])
                free.push_back(j);
        // Pivot variables as affine functions of the free ones.
        std::vector<MPoly> subs(D_);
        for (std::size_t j = 0; j < D_; ++j)
            subs[j] = MPoly::var(j);
        for (std::size_t r = 0; r < E.pivots.size(); ++r) {
            MPoly e(-E.reduced(r, D_));
            for (auto f : free)
                e -= MPoly::var(f) * E.reduced(r, f);
            subs[E.pivots[r]] = e;
        }
        std::vector<MPoly> reduced;
        for (const auto& p : nonlinear) {
            MPoly g = p.substitute(subs);
            if (g.is_zero())
                continue;
            if (g.total_degree() == 0)
                return {};
            reduced.push_back(std::move(g));
        }
        std::vector<std::vector<Scalar>> free_points;
        if (free.empty()) {
            free_points.push_back({});
        } else if (free.size() == 1) {
            free_points = univariate_points(reduced, free[0]);
        } else if (free.size() == 2) {
            free_points = bivariate_points(reduced, free[0], free[1]);
        } else {
            ++diag_.unsupported_kernels;
            return {};
        }
        std::vector<std::vector<Scalar>> out;
        for (const auto& fp : free_points) {
            std::vector<Scalar> vals(D_, Scalar(0));
            for (std::size_t k = 0; k < free.size(); ++k)
                vals[free[k]] = fp[k];
            std::vector<Scalar> W(D_);
            for (std::size_t j = 0; j < D_; ++j)
                W[j] = subs[j].evaluate(vals);
            out.push_back(std::move(W));
        }
        return out;
    }

    std::vector<std::vector<Scalar>> univariate_points(const std::vector<MPoly>& polys, std::size_t v)
    {
        Poly<Scalar> g;
        for (const auto& p : polys)
            g = gcd(g, p.as_univariate(v));
        if (g.is_zero()) {
            ++diag_.positive_dimensional;
            return {};
        }
        const RootSet rs = gaussian_roots(g);
        diag_.unrepresentable_roots += static_cast<long>(rs.unrepresentable);
        std::vector<std::vector<Scalar>> out;
        for (const auto& r : rs.roots)
            out.push_back({r});
        return out;
    }

    std::vector<std::vector<Scalar>> bivariate_points(const std::vector<MPoly>& polys, std::size_t u,
                                                      std::size_t v)
    {
        // Eliminate v with a resultant, interpolated in u from exact samples.
        Poly<Scalar> R;
        for (std::size_t a = 0; a < polys.size() && R.is_zero(); ++a)
            for (std::size_t b = a + 1; b < polys.size() && R.is_zero(); ++b)
                R = resultant_in(polys[a], polys[b], u, v);
        if (R.is_zero()) {
            ++diag_.positive_dimensional;
            return {};
        }
        const RootSet ru = gaussian_roots(R);
        diag_.unrepresentable_roots += static_cast<long>(ru.unrepresentable);
        std::vector<std::vector<Scalar>> out;
        for (const auto& u0 : ru.roots) {
            std::vector<MPoly> fiber;
            for (const auto& p : polys)
                fiber.push_back(p.substitute(partial(u, u0)));
            for (auto& pt : univariate_points(fiber, v))
                out.push_back({u0, pt[0]});
        }
        return out;
    }

    std::vector<MPoly> partial(std::size_t u, const Scalar& value) const
    {
        std::vector<MPoly> subs;
        for (std::size_t j = 0; j < D_; ++j)
            subs.push_back(j == u ? MPoly(value) : MPoly::var(j));
        return subs;
    }

    Poly<Scalar> resultant_in(const MPoly& a, const MPoly& b, std::size_t u, std::size_t v) const
    {
        const int da = a.degree_in(v), db = b.degree_in(v);
        const int bound = a.total_degree() * b.total_degree();
        std::vector<Scalar> xs, ys;
        for (int k = 0; k <= bound; ++k) {
            const Scalar x(k);
            xs.push_back(x);
            ys.push_back(resultant(a.substitute(partial(u, x)).as_univariate(v),
                                   b.substitute(partial(u, x)).as_univariate(v), da, db));
        }
        return interpolate(xs, ys);
    }

    std::size_t D_;
    long K_;
    SearchDiagnostics& diag_;
    std::vector<Coeffs> out_;
};

/// Reduces the ramification index when all exponents share a factor.
inline LiftedSolution normalize_index(const LiftedSolution& ls, const ProblemSpec& spec)
{
    int g = ls.N;
    for (const auto* v : {&ls.point.x, &ls.point.y})
        for (const auto& s : *v)
            for (std::size_t i = 0; i < s.coeffs().size(); ++i)
                if (!s.coeffs()[i].is_zero())
                    g = std::gcd(g, static_cast<int>(s.offset() + static_cast<long>(i)));
    if (g <= 1)
        return ls;
    const long K = ls.K / g;
    Coeffs c(static_cast<std::size_t>(K + 1), std::vector<Scalar>(static_cast<std::size_t>(spec.size())));
    std::size_t j = 0;
    for (const auto* v : {&ls.point.x, &ls.point.y})
        for (const auto& s : *v) {
            for (long k = 0; k <= K; ++k)
                c[static_cast<std::size_t>(k)][j] = s.coeff(k * g);
            ++j;
        }
    return assemble(spec, ls.base, c, ls.N / g, K, ls.method);
}

/// s -> omega s for omega in Q(i) with omega^N = 1.
inline std::vector<Scalar> conjugating_roots(int N)
{
    std::vector<Scalar> out;
    for (const Scalar& w : {Scalar(1), Scalar(-1), Scalar::i(), -Scalar::i()})
        if (pow(w, N).is_one())
            out.push_back(w);
    return out;
}

inline Series conjugate(const Series& s, const Scalar& w)
{
    std::vector<Scalar> c = s.coeffs();
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] *= pow(w, s.offset() + static_cast<long>(i));
    return Series(s.ram_index(), s.offset(), std::move(c), s.order());
}

/// Same Puiseux branch up to s -> omega s and permutations among entries with equal base value.
inline bool same_branch(const LiftedSolution& a, const LiftedSolution& b)
{
    if (a.N != b.N)
        return false;
    auto entries = [](const LiftedSolution& l) {
        std::vector<Series> e = l.point.x;
        e.insert(e.end(), l.point.y.begin(), l.point.y.end());
        return e;
    };
    const std::vector<Series> ea = entries(a);
    const std::size_t mx = a.point.x.size();
    for (const auto& w : conjugating_roots(a.N)) {
        std::vector<Series> eb = entries(b);
        for (auto& s : eb)
            s = conjugate(s, w);
        // Greedy matching within equal-base groups; groups are tiny.
        std::vector<bool> used(eb.size(), false);
        bool ok = true;
        for (std::size_t i = 0; i < ea.size() && ok; ++i) {
            bool found = false;
            for (std::size_t j = 0; j < eb.size(); ++j) {
                if (used[j] || (i < mx) != (j < mx))
                    continue;
                if (agree(ea[i], eb[j])) {
                    used[j] = true;
                    found = true;
                    break;
                }
            }
            ok = found;
        }
        if (ok)
            return true;
    }
    return false;
}

} // namespace detail

/// All certified branches over t = s^N for N = 1..N_max, deduplicated.
inline BranchSearch search_branches(const InfiniteSolution& sol, const ProblemSpec& spec, int N_max)
{
    BranchSearch out;
    const std::size_t D = static_cast<std::size_t>(spec.size());
    std::vector<Scalar> X0 = sol.x0;
    X0.insert(X0.end(), sol.y0.begin(), sol.y0.end());
    const std::vector<MPoly> F = symbolic_residual(spec);
    for (int N = 1; N <= N_max; ++N) {
        out.diagnostics.N_tried = N;
        std::vector<MPoly> subs;
        for (std::size_t j = 0; j < D; ++j)
            subs.push_back(MPoly::var(j));
        Monomial sN(D + 1, 0);
        sN[D] = N;
        subs.push_back(MPoly::term(sN, Scalar(1)));
        std::vector<MPoly> H;
        for (const auto& f : F)
            H.push_back(f.substitute(subs));
        detail::BranchExplorer ex(D, spec.K, out.diagnostics);
        for (const auto& coeffs : ex.run(H, X0)) {
            LiftedSolution ls = detail::assemble(spec, sol, coeffs, N, spec.K, "ramified");
            ls = detail::normalize_index(ls, spec);
            if (!ls.cert.passes) {
                ++out.diagnostics.uncertified;
                continue;
            }
            bool dup = false;
            for (const auto& b : out.branches)
                dup = dup || detail::same_branch(b, ls);
            if (!dup)
                out.branches.push_back(std::move(ls));
        }
    }
    return out;
}

/// Branches of a degenerate base; a generic base is delegated to lift_newton.
inline std::vector<LiftedSolution> lift_ramified(const InfiniteSolution& sol, const ProblemSpec& spec,
                                                 int N_max)
{
    if (sol.tier == Tier::generic)
        return {lift_newton(sol, spec)};
    BranchSearch bs = search_branches(sol, spec, N_max);
    if (bs.branches.empty())
        throw LiftError("ramification_bound_exceeded", bs.diagnostics.summary());
    return bs.branches;
}

/// Truncates a lift to a lower order and recertifies it.
inline LiftedSolution truncate_lift(const LiftedSolution& ls, const ProblemSpec& spec, long K)
{
    LiftedSolution r = ls;
    r.K = std::min(K, ls.K);
    for (auto* v : {&r.point.x, &r.point.y})
        for (auto& s : *v)
            s = s.truncated(r.K);
    if (spec.mode == Mode::difference)
        r.alpha = alpha_series(spec, r.N, r.K);
    r.cert = certify_point(r.point, spec, r.N, r.K);
    return r;
}

} // namespace qqtrop
