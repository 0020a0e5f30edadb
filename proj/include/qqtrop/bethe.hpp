#pragma once

// Bethe roots of lifted solutions, nondegeneracy flags, and the Gaudin and XXZ Bethe-equation
// residuals as truncated series. Dictionary: w_l = -x_l, z_j = -a_j, n_j = multiplicity of a_j.

#include "qqtrop/lifting.hpp"
#include "qqtrop/systems.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qqtrop {

struct BetheError : std::runtime_error {
    BetheError(std::string code, const std::string& detail)
        : std::runtime_error(code + ": " + detail), code(std::move(code))
    {
    }
    std::string code;
};

/// Smallest-magnitude k with q^k = r, decided exactly; requires |q| != 1.
/// The modulus fixes k (|r|^2 = |q|^(2k)), so at most one candidate is tested.
inline std::optional<long> q_exponent(const Scalar& r, const Scalar& q)
{
    if (r.is_zero())
        return std::nullopt;
    const Rational nq = q.norm(), nr = r.norm();
    if (nq == 1)
        throw BetheError("undecidable_q_distinctness", "|q| = 1 and q is not a root of unity");
    const double est = std::log(nr.get_d()) / std::log(nq.get_d());
    const long k0 = std::lround(est);
    for (long k : {k0, k0 - 1, k0 + 1}) {
        if (pow(Scalar(nq), k) != Scalar(nr))
            continue;
        return pow(q, k) == r ? std::optional<long>(k) : std::nullopt;
    }
    return std::nullopt;
}

/// a == c * b through the common known order.
inline bool series_proportional(const Series& a, const Series& b, const Scalar& c)
{
    return (a - b * c).is_zero();
}

/// Some k with a == q^k b through the common known order.
inline std::optional<long> series_q_collision(const Series& a, const Series& b, const Scalar& q)
{
    const auto vb = b.s_valuation();
    if (!vb) {
        if ((a - b).is_zero())
            return 0;
        return std::nullopt;
    }
    if (a.is_zero() || *a.s_valuation() != *vb)
        return std::nullopt;
    if (*vb > std::min(a.order(), b.order()))
        return std::nullopt;
    const auto k = q_exponent(a.coeff(*vb) / b.coeff(*vb), q);
    if (k && series_proportional(a, b, pow(q, *k)))
        return k;
    return std::nullopt;
}

struct NondegeneracyFlags {
    bool simple_zeros = true;
    bool disjoint_from_lambda = true;
    std::optional<bool> q_distinct; // difference mode only
    int window = 0;                 // exponent window reported for q-distinctness
    std::vector<std::string> collisions;

    bool passes() const { return simple_zeros && disjoint_from_lambda && q_distinct.value_or(true); }
};

/// Flags on the plus-side series; a flag fails when two quantities agree through the known order.
inline NondegeneracyFlags nondegeneracy_check(const std::vector<Series>& x, const ProblemSpec& spec)
{
    NondegeneracyFlags f;
    const auto shifts = spec.lambda.shifts;
    for (std::size_t l = 0; l < x.size(); ++l)
        for (std::size_t s = l + 1; s < x.size(); ++s)
            if ((x[l] - x[s]).is_zero()) {
                f.simple_zeros = false;
                f.collisions.push_back("x" + std::to_string(l + 1) + " = x" + std::to_string(s + 1));
            }
    for (std::size_t l = 0; l < x.size(); ++l)
        for (const auto& sm : shifts)
            if ((x[l] - Series(sm.a)).is_zero()) {
                f.disjoint_from_lambda = false;
                f.collisions.push_back("x" + std::to_string(l + 1) + " = " + sm.a.str());
            }
    if (spec.mode == Mode::difference) {
        f.window = root_of_unity_bound(spec.m, spec.n);
        bool ok = true;
        for (std::size_t l = 0; l < x.size(); ++l) {
            for (const auto& sm : shifts)
                if (auto k = series_q_collision(x[l], Series(sm.a), spec.q)) {
                    ok = false;
                    f.collisions.push_back("x" + std::to_string(l + 1) + " = q^" + std::to_string(*k) +
                                           " * " + sm.a.str());
                }
            for (std::size_t s = l + 1; s < x.size(); ++s)
                if (auto k = series_q_collision(x[l], x[s], spec.q)) {
                    ok = false;
                    f.collisions.push_back("x" + std::to_string(l + 1) + " = q^" + std::to_string(*k) +
                                           " * x" + std::to_string(s + 1));
                }
        }
        f.q_distinct = ok;
    }
    return f;
}

inline NondegeneracyFlags nondegeneracy_check(const LiftedSolution& ls, const ProblemSpec& spec)
{
    return nondegeneracy_check(ls.point.x, spec);
}

/// Plus-side values read as exact polynomials in s and extended to the given order.
inline std::vector<Series> extended_roots(const LiftedSolution& ls, long order)
{
    std::vector<Series> out;
    for (const auto& x : ls.point.x)
        out.push_back(x.exact().truncated(order));
    return out;
}

struct ResidualSet {
    std::vector<Series> values;
    Rational bound; // valuation lower bound in t that each value must meet
    bool passes = true;
    std::vector<std::optional<Rational>> valuations; // nullopt: zero through the known order
};

inline void grade(ResidualSet& r, long bound_s, int N)
{
    r.bound = Rational(bound_s, N);
    r.bound.canonicalize();
    for (const auto& v : r.values) {
        r.valuations.push_back(v.valuation());
        for (long e = std::min(0l, v.valuation_bound()); e < bound_s; ++e)
            if (e <= v.order() && !v.coeff(e).is_zero())
                r.passes = false;
    }
}

/// R_l = 1 + t (sum_j n_j / (w_l - z_j) - sum_{s != l} 2 / (w_l - w_s)), i.e. the Gaudin
/// equation with 2 zeta = 1/t multiplied by t. Bound in s-units: K + N - 2 v_max, where v_max is
/// the largest valuation among the denominators.
inline ResidualSet gaudin_residual(const LiftedSolution& ls, const ProblemSpec& spec)
{
    if (spec.mode != Mode::differential)
        throw std::invalid_argument("gaudin_residual needs the differential system");
    ResidualSet out;
    const std::size_t m = ls.point.x.size();
    if (m == 0) {
        grade(out, 0, ls.N);
        return out;
    }
    // Denominator valuations from the exact polynomial point.
    long v_max = 0;
    const auto exact = extended_roots(ls, Series::kExact);
    auto check = [&](const Series& d, const std::string& what) {
        if (d.is_zero())
            throw BetheError("non_invertible_denominator", what);
        v_max = std::max(v_max, *d.s_valuation());
    };
    for (std::size_t l = 0; l < m; ++l) {
        for (const auto& sm : spec.lambda.shifts)
            check(Series(sm.a) - exact[l], "w" + std::to_string(l + 1) + " - z(" + sm.a.str() + ")");
        for (std::size_t s = 0; s < m; ++s)
            if (s != l)
                check(exact[s] - exact[l], "w" + std::to_string(l + 1) + " - w" + std::to_string(s + 1));
    }
    const auto x = extended_roots(ls, ls.K + 2 * v_max);
    const Series t = Series::t(ls.N);
    for (std::size_t l = 0; l < m; ++l) {
        Series sum = Series::zero(ls.N, Series::kExact);
        for (const auto& sm : spec.lambda.shifts)
            sum = sum + (Series(sm.a) - x[l]).reciprocal() * Scalar(sm.mult);
        for (std::size_t s = 0; s < m; ++s)
            if (s != l)
                sum = sum - (x[s] - x[l]).reciprocal() * Scalar(2);
        out.values.push_back(Series(1) + t * sum);
    }
    grade(out, ls.K + ls.N - 2 * v_max, ls.N);
    return out;
}

/// C_l = Q+(q w_l) Lambda(w_l / q) + t Q+(w_l / q) Lambda(w_l): the XXZ equation with
/// zeta^2 = 1/t, cleared of denominators. Exact on the polynomial point; bound K in s-units.
inline ResidualSet xxz_residual(const LiftedSolution& ls, const ProblemSpec& spec)
{
    if (spec.mode != Mode::difference)
        throw std::invalid_argument("xxz_residual needs the difference system");
    ResidualSet out;
    const auto x = extended_roots(ls, Series::kExact);
    const Scalar q = spec.q, qi = q.inverse();
    const Series t = Series::t(ls.N);
    auto Qplus = [&](const Series& z) {
        Series p(1);
        for (const auto& xi : x)
            p = p * (z + xi);
        return p;
    };
    auto Lam = [&](const Series& z) {
        Series p(1);
        for (const auto& sm : spec.lambda.shifts)
            p = p * pow(z + Series(sm.a), sm.mult);
        return p;
    };
    for (const auto& xl : x) {
        const Series w = xl * Scalar(-1);
        out.values.push_back(Qplus(w * q) * Lam(w * qi) + t * Qplus(w * qi) * Lam(w));
    }
    grade(out, ls.K, ls.N);
    return out;
}

/// |C_l(t0)| from the lift evaluated in double precision, for decay-rate fits.
inline std::vector<double> xxz_residual_numeric(const LiftedSolution& ls, const ProblemSpec& spec, double t0)
{
    using cd = std::complex<double>;
    const cd s0 = std::pow(cd(t0), 1.0 / ls.N);
    std::vector<cd> x;
    for (const auto& s : ls.point.x)
        x.push_back(s.evaluate_at(s0));
    const cd q = spec.q.to_complex();
    auto Qplus = [&](cd z) {
        cd p = 1;
        for (const auto& xi : x)
            p *= z + xi;
        return p;
    };
    auto Lam = [&](cd z) {
        cd p = 1;
        for (const auto& sm : spec.lambda.shifts)
            p *= std::pow(z + sm.a.to_complex(), sm.mult);
        return p;
    };
    std::vector<double> out;
    for (const auto& xl : x) {
        const cd w = -xl;
        out.push_back(std::abs(Qplus(q * w) * Lam(w / q) + t0 * Qplus(w / q) * Lam(w)));
    }
    return out;
}

/// A maximal chain of Lambda zeros z, z/q, ..., z q^(1-r).
struct QString {
    Scalar top; // zero z_p (the shift is -z_p)
    int length = 0;
};

/// Decomposes the Lambda zeros into maximal q-strings. Every multiset admits such a
/// decomposition (strings of length one), so this is informational.
inline std::vector<QString> q_strings(const MasterData& lambda, const Scalar& q)
{
    std::vector<Scalar> zeros;
    for (const auto& a : lambda.root_shifts())
        zeros.push_back(-a);
    std::vector<QString> out;
    while (!zeros.empty()) {
        auto top = std::find_if(zeros.begin(), zeros.end(), [&](const Scalar& z) {
            return std::find(zeros.begin(), zeros.end(), z * q) == zeros.end();
        });
        if (top == zeros.end())
            top = zeros.begin();
        QString s{*top, 0};
        Scalar z = *top;
        for (;;) {
            auto it = std::find(zeros.begin(), zeros.end(), z);
            if (it == zeros.end())
                break;
            zeros.erase(it);
            ++s.length;
            z = z / q;
        }
        out.push_back(s);
    }
    return out;
}

/// Literal XXZ form at scalar data: q^r prod_p (w - q^(1-r_p) z_p) / (w - q z_p)
/// + zeta^2 q^m prod_j (q w - w_j) / (w - q w_j), with zeta^2 = 1/t.
inline Scalar xxz_literal(const Scalar& w, const std::vector<Scalar>& roots, const std::vector<QString>& strings,
                          const Scalar& q, const Scalar& t)
{
    Scalar lhs(1);
    for (const auto& s : strings)
        lhs *= pow(q, s.length) * (w - pow(q, 1 - s.length) * s.top) / (w - q * s.top);
    Scalar rhs = pow(q, static_cast<long>(roots.size())) / t;
    for (const auto& wj : roots)
        rhs *= (q * w - wj) / (w - q * wj);
    return lhs + rhs;
}

/// Two-point cleared form at scalar data: Q(q w) Lambda(w / q) + t Q(w / q) Lambda(w).
inline Scalar xxz_two_point(const Scalar& w, const std::vector<Scalar>& roots, const MasterData& lambda,
                            const Scalar& q, const Scalar& t)
{
    auto Q = [&](const Scalar& z) {
        Scalar p(1);
        for (const auto& wj : roots)
            p *= z - wj;
        return p;
    };
    const Poly<Scalar> L = lambda.lambda();
    return Q(q * w) * L(w / q) + t * Q(w / q) * L(w);
}

struct BetheReport {
    Mode mode = Mode::differential;
    std::vector<Series> roots; // w_l = -x_l
    std::string twist;
    NondegeneracyFlags flags;
    bool emitted = false; // residuals are reported only when the flags pass
    ResidualSet residuals;
    std::vector<QString> strings; // difference mode
};

inline BetheReport bethe_report(const LiftedSolution& ls, const ProblemSpec& spec)
{
    BetheReport r;
    r.mode = spec.mode;
    for (const auto& x : ls.point.x)
        r.roots.push_back(x * Scalar(-1));
    r.twist = spec.mode == Mode::differential ? "2*zeta = 1/t" : "zeta^2 = 1/t";
    r.flags = nondegeneracy_check(ls, spec);
    if (spec.mode == Mode::difference)
        r.strings = q_strings(spec.lambda, spec.q);
    if (!r.flags.passes())
        return r;
    r.emitted = true;
    r.residuals = spec.mode == Mode::differential ? gaudin_residual(ls, spec) : xxz_residual(ls, spec);
    return r;
}

} // namespace qqtrop
