#pragma once

// The rank-one qq- and QQ-systems: problem data, residuals, Jacobians and supports.

#include "qqtrop/matrix.hpp"
#include "qqtrop/mpoly.hpp"
#include "qqtrop/poly.hpp"
#include "qqtrop/scalar.hpp"
#include "qqtrop/series.hpp"
#include "qqtrop/tropical_support.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qqtrop {

/// Validation failure with a machine-readable reason code.
struct SpecError : std::invalid_argument {
    SpecError(std::string code, const std::string& detail)
        : std::invalid_argument(code + ": " + detail), code(std::move(code)), detail(detail)
    {
    }
    std::string code;
    std::string detail;
};

enum class Mode { differential, difference };

inline const char* mode_name(Mode m) { return m == Mode::differential ? "qq" : "QQ"; }

struct ShiftMultiplicity {
    Scalar a;
    int mult = 1;
    friend bool operator==(const ShiftMultiplicity&, const ShiftMultiplicity&) = default;
};

/// Lambda(z) = prod_k (z + a_k)^(m_k), with d_k the coefficient of z^(deg - k).
struct MasterData {
    std::vector<ShiftMultiplicity> shifts;
    std::vector<Scalar> d;

    /// Sorts the shifts and derives d.
    static MasterData from_shifts(std::vector<ShiftMultiplicity> shifts)
    {
        std::sort(shifts.begin(), shifts.end(),
                  [](const auto& l, const auto& r) { return l.a < r.a; });
        MasterData md;
        md.shifts = std::move(shifts);
        md.d = descending_coeffs(poly_from_shifts(md.root_shifts()));
        return md;
    }

    int degree() const
    {
        int s = 0;
        for (const auto& sm : shifts)
            s += sm.mult;
        return s;
    }
    /// The shifts repeated by multiplicity, sorted.
    std::vector<Scalar> root_shifts() const
    {
        std::vector<Scalar> out;
        for (const auto& sm : shifts)
            for (int k = 0; k < sm.mult; ++k)
                out.push_back(sm.a);
        std::sort(out.begin(), out.end());
        return out;
    }
    Poly<Scalar> lambda() const
    {
        std::vector<Scalar> c(d.rbegin(), d.rend());
        c.push_back(Scalar(1));
        return Poly<Scalar>(std::move(c));
    }
    int multiplicity_of(const Scalar& a) const
    {
        for (const auto& sm : shifts)
            if (sm.a == a)
                return sm.mult;
        return 0;
    }

    /// Throws SpecError when the stored data is inconsistent.
    void check() const
    {
        std::set<Scalar> seen;
        for (const auto& sm : shifts) {
            if (sm.mult < 1)
                throw SpecError("nonpositive_multiplicity", "multiplicity of shift " + sm.a.str());
            if (!seen.insert(sm.a).second)
                throw SpecError("duplicate_shift", "shift " + sm.a.str() + " listed twice");
        }
        if (d != descending_coeffs(poly_from_shifts(root_shifts())))
            throw SpecError("lambda_coeff_mismatch", "coefficients disagree with the shifts");
    }
};

/// Root-of-unity bound for q: exponents up to 2(m+n)+4 are checked.
inline int root_of_unity_bound(int m, int n) { return 2 * (m + n) + 4; }

/// Smallest k in [1, bound] with q^k = 1, or 0 if none.
inline int root_of_unity_order(const Scalar& q, int bound)
{
    Scalar p = q;
    for (int k = 1; k <= bound; ++k) {
        if (p.is_one())
            return k;
        p *= q;
    }
    return 0;
}

struct ProblemSpec {
    Mode mode = Mode::differential;
    MasterData lambda;
    int m = 0;
    int n = 0;
    Scalar q{1};
    long K = 0;
    int N_max = 0; // 0 selects the default m + n
    int size_cap = 6;

    int size() const { return m + n; }
    int effective_N_max() const { return N_max > 0 ? N_max : std::max(1, m + n); }
    bool has_zero_shift() const { return lambda.multiplicity_of(Scalar(0)) > 0; }

    /// Checks the invariants; lifting and Bethe routines require require_nonzero_origin.
    void validate(bool require_nonzero_origin = true) const
    {
        if (m < 0 || n < 0)
            throw SpecError("negative_degree", "m and n must be nonnegative");
        lambda.check();
        if (lambda.degree() != m + n)
            throw SpecError("degree_mismatch", "deg Lambda = " + std::to_string(lambda.degree()) +
                                                   " but m + n = " + std::to_string(m + n));
        if (K < 0)
            throw SpecError("negative_order", "K must be nonnegative");
        if (N_max < 0)
            throw SpecError("invalid_N_max", "N_max must be positive");
        if (size_cap < 1)
            throw SpecError("invalid_size_cap", "size cap must be positive");
        if (require_nonzero_origin && has_zero_shift())
            throw SpecError("lambda_root_at_origin", "Lambda(0) = 0");
        if (mode == Mode::difference) {
            if (q.is_zero())
                throw SpecError("q_zero", "q must be nonzero");
            const int B = root_of_unity_bound(m, n);
            if (int k = root_of_unity_order(q, B))
                throw SpecError("q_root_of_unity", "q^" + std::to_string(k) + " = 1");
        }
    }

    /// Pole of alpha(t) = 1/(q^m - t q^n) in t.
    Scalar alpha_pole() const { return mode == Mode::difference ? pow(q, m - n) : Scalar(0); }
};

/// A candidate solution: m plus-shifts and n minus-shifts sharing (N, K).
struct CandidatePoint {
    std::vector<Series> x;
    std::vector<Series> y;

    int ram_index() const
    {
        int N = 1;
        for (const auto* v : {&x, &y})
            for (const auto& s : *v)
                if (!s.is_constant())
                    N = s.ram_index();
        return N;
    }
    long order() const
    {
        long K = Series::kExact;
        for (const auto* v : {&x, &y})
            for (const auto& s : *v)
                K = std::min(K, s.order());
        return K;
    }
    void check(const ProblemSpec& spec) const
    {
        if (static_cast<int>(x.size()) != spec.m || static_cast<int>(y.size()) != spec.n)
            throw std::invalid_argument("candidate point has the wrong number of entries");
        const int N = ram_index();
        for (const auto* v : {&x, &y})
            for (const auto& s : *v)
                if (!s.is_constant() && s.ram_index() != N)
                    throw RamificationMismatch(s.ram_index(), N);
    }
    /// Polynomial view of the jets (unknown higher coefficients taken as zero).
    CandidatePoint exact() const
    {
        CandidatePoint p = *this;
        for (auto* v : {&p.x, &p.y})
            for (auto& s : *v)
                s = s.exact();
        return p;
    }
};

enum class Tier { generic, degenerate };

inline const char* tier_name(Tier t) { return t == Tier::generic ? "generic" : "degenerate"; }

/// A solution of the t = 0 system.
struct InfiniteSolution {
    std::vector<Scalar> x0;
    std::vector<Scalar> y0;
    std::vector<Scalar> split; // the Lambda shifts assigned to the plus side (x0 / q in difference mode)
    std::size_t l = 0;
    Tier tier = Tier::generic;
    bool scaled_overlap = false; // difference mode: some x0 entry equals some y0 entry

    friend bool operator==(const InfiniteSolution& a, const InfiniteSolution& b)
    {
        return a.x0 == b.x0 && a.y0 == b.y0;
    }
};

// Residual assembly, generic over the coefficient ring.

template <CoefficientRing R>
Poly<R> lift_poly(const Poly<Scalar>& p)
{
    std::vector<R> c;
    for (const auto& a : p.coeffs())
        c.push_back(R(a));
    return Poly<R>(std::move(c));
}

/// Components k = 1..m+n of q+ q- + t W(q+, q-) - Lambda.
template <CoefficientRing R>
std::vector<R> qq_residual(const std::vector<R>& x, const std::vector<R>& y, const R& t,
                           const MasterData& lambda)
{
    const int deg = static_cast<int>(x.size() + y.size());
    Poly<R> P = poly_from_shifts(x);
    Poly<R> Q = poly_from_shifts(y);
    Poly<R> E = P * Q + wronskian(P, Q).scaled(t) - lift_poly<R>(lambda.lambda());
    std::vector<R> out;
    for (int k = 1; k <= deg; ++k)
        out.push_back(E.coeff(deg - k));
    return out;
}

/// Components of the cleared form Q+(qz) Q-(z) - t Q+(z) Q-(qz) - Lambda (q^m - t q^n).
template <CoefficientRing R>
std::vector<R> QQ_residual(const std::vector<R>& x, const std::vector<R>& y, const R& t,
                           const MasterData& lambda, const Scalar& q)
{
    const int m = static_cast<int>(x.size());
    const int n = static_cast<int>(y.size());
    Poly<R> P = poly_from_shifts(x);
    Poly<R> Q = poly_from_shifts(y);
    const R clear = R(pow(q, m)) - t * pow(q, n);
    Poly<R> E = P.dilate(q) * Q - (P * Q.dilate(q)).scaled(t) - lift_poly<R>(lambda.lambda()).scaled(clear);
    std::vector<R> out;
    for (int k = 1; k <= m + n; ++k)
        out.push_back(E.coeff(m + n - k));
    return out;
}

template <CoefficientRing R>
std::vector<R> mode_residual(const ProblemSpec& spec, const std::vector<R>& x, const std::vector<R>& y,
                             const R& t)
{
    if (spec.mode == Mode::differential)
        return qq_residual(x, y, t, spec.lambda);
    if (spec.q.is_zero())
        throw SpecError("q_zero", "q must be nonzero");
    return QQ_residual(x, y, t, spec.lambda, spec.q);
}

inline std::vector<Series> evaluate_qq_residual(const CandidatePoint& p, const ProblemSpec& spec)
{
    if (spec.mode != Mode::differential)
        throw std::invalid_argument("evaluate_qq_residual needs differential mode");
    p.check(spec);
    return qq_residual(p.x, p.y, Series::t(p.ram_index()), spec.lambda);
}

inline std::vector<Series> evaluate_QQ_residual(const CandidatePoint& p, const ProblemSpec& spec)
{
    if (spec.mode != Mode::difference)
        throw std::invalid_argument("evaluate_QQ_residual needs difference mode");
    if (spec.q.is_zero())
        throw SpecError("q_zero", "q must be nonzero");
    p.check(spec);
    return QQ_residual(p.x, p.y, Series::t(p.ram_index()), spec.lambda, spec.q);
}

inline std::vector<Series> evaluate_residual(const CandidatePoint& p, const ProblemSpec& spec)
{
    return spec.mode == Mode::differential ? evaluate_qq_residual(p, spec) : evaluate_QQ_residual(p, spec);
}

/// Residual at t = 0 of a scalar point.
inline std::vector<Scalar> residual_at_zero(const ProblemSpec& spec, const std::vector<Scalar>& x,
                                            const std::vector<Scalar>& y)
{
    return mode_residual<Scalar>(spec, x, y, Scalar(0));
}

/// The residual components as polynomials in x_1..x_m, y_1..y_n and t (variable index m+n).
inline std::vector<MPoly> symbolic_residual(const ProblemSpec& spec)
{
    std::vector<MPoly> x, y;
    for (int i = 0; i < spec.m; ++i)
        x.push_back(MPoly::var(static_cast<std::size_t>(i)));
    for (int j = 0; j < spec.n; ++j)
        y.push_back(MPoly::var(static_cast<std::size_t>(spec.m + j)));
    return mode_residual<MPoly>(spec, x, y, MPoly::var(static_cast<std::size_t>(spec.m + spec.n)));
}

struct Jacobian {
    Matrix<Scalar> J;
    std::size_t rank = 0;
    std::size_t l = 0; // distinct values among the linearization points
};

/// Derivative of the t = 0 residual at (x, y), by symbolic differentiation.
inline Matrix<Scalar> residual_jacobian(const ProblemSpec& spec, const std::vector<Scalar>& x,
                                        const std::vector<Scalar>& y)
{
    const std::size_t D = static_cast<std::size_t>(spec.m + spec.n);
    std::vector<MPoly> f = symbolic_residual(spec);
    std::vector<Scalar> point = x;
    point.insert(point.end(), y.begin(), y.end());
    point.push_back(Scalar(0));
    Matrix<Scalar> J(D, D);
    for (std::size_t k = 0; k < D; ++k)
        for (std::size_t j = 0; j < D; ++j)
            J(k, j) = f[k].derivative(j).evaluate(point);
    return J;
}

inline std::size_t count_distinct(std::vector<Scalar> v)
{
    std::sort(v.begin(), v.end());
    return static_cast<std::size_t>(std::unique(v.begin(), v.end()) - v.begin());
}

/// The t = 0 Jacobian at an infinite solution with its exact rank.
/// Differential: column j holds the coefficients of Lambda(z)/(z + b_j).
/// Difference: derivative of g = g~/q^m, whose rows are the gradients of e_k(x/q, y).
inline Jacobian jacobian_at_zero(const InfiniteSolution& sol, const ProblemSpec& spec)
{
    if (static_cast<int>(sol.x0.size()) != spec.m || static_cast<int>(sol.y0.size()) != spec.n)
        throw std::invalid_argument("solution does not match the spec degrees");
    for (const auto& r : residual_at_zero(spec, sol.x0, sol.y0))
        if (!r.is_zero())
            throw std::invalid_argument("not a solution of the infinite system");
    const std::size_t D = static_cast<std::size_t>(spec.m + spec.n);
    Jacobian out;
    std::vector<Scalar> b = sol.x0;
    if (spec.mode == Mode::differential) {
        b.insert(b.end(), sol.y0.begin(), sol.y0.end());
        out.J = Matrix<Scalar>(D, D);
        const Poly<Scalar> L = spec.lambda.lambda();
        for (std::size_t j = 0; j < D; ++j) {
            auto [quo, rem] = divmod(L, Poly<Scalar>{b[j], Scalar(1)});
            for (std::size_t i = 0; i < D; ++i)
                out.J(i, j) = quo.coeff(static_cast<int>(D - 1 - i));
        }
    } else {
        for (auto& v : b)
            v /= spec.q;
        b.insert(b.end(), sol.y0.begin(), sol.y0.end());
        out.J = residual_jacobian(spec, sol.x0, sol.y0);
        const Scalar scale = pow(spec.q, -spec.m);
        for (std::size_t i = 0; i < D; ++i)
            for (std::size_t j = 0; j < D; ++j)
                out.J(i, j) *= scale;
    }
    out.rank = rank(out.J);
    out.l = count_distinct(b);
    return out;
}

/// Full support of each residual component in x, y, with coefficients collected by t-degree.
inline std::vector<TropicalSupport> symbolic_support(const ProblemSpec& spec)
{
    if (spec.size() > spec.size_cap)
        throw SpecError("size_cap_exceeded", "m + n = " + std::to_string(spec.size()) +
                                                 " exceeds the cap " + std::to_string(spec.size_cap));
    const std::size_t D = static_cast<std::size_t>(spec.size());
    std::vector<TropicalSupport> out;
    for (const MPoly& f : symbolic_residual(spec)) {
        std::map<std::vector<int>, std::vector<Scalar>> grouped;
        for (const auto& [u, c] : f.terms()) {
            std::vector<int> key(D, 0);
            int tdeg = 0;
            for (std::size_t j = 0; j < u.size(); ++j) {
                if (j < D)
                    key[j] = u[j];
                else
                    tdeg = u[j];
            }
            auto& coeff = grouped[key];
            if (static_cast<int>(coeff.size()) <= tdeg)
                coeff.resize(static_cast<std::size_t>(tdeg + 1));
            coeff[static_cast<std::size_t>(tdeg)] += c;
        }
        TropicalSupport s;
        s.dim = D;
        for (auto& [u, c] : grouped) {
            Poly<Scalar> tc(std::move(c));
            if (tc.is_zero())
                continue;
            int v = 0;
            while (tc.coeff(v).is_zero())
                ++v;
            s.items.push_back({u, Rational(v), std::move(tc)});
        }
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace qqtrop
