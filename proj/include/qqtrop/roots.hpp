#pragma once

// Roots in Q(i) of univariate polynomials, resultants and interpolation.

#include "qqtrop/matrix.hpp"
#include "qqtrop/poly.hpp"
#include "qqtrop/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

namespace qqtrop {

/// Distinct roots that lie in Q(i), and how many distinct roots do not.
struct RootSet {
    std::vector<Scalar> roots;
    std::size_t unrepresentable = 0;
};

inline Poly<Scalar> squarefree_part(const Poly<Scalar>& p)
{
    if (p.degree() <= 1)
        return make_monic(p);
    Poly<Scalar> g = gcd(p, p.derivative());
    return make_monic(divmod(p, g).quotient);
}

/// All complex roots by Aberth iteration in extended precision.
inline std::vector<std::complex<long double>> numeric_roots(const Poly<Scalar>& p)
{
    using C = std::complex<long double>;
    const int d = p.degree();
    if (d < 1)
        return {};
    std::vector<C> a(static_cast<std::size_t>(d + 1));
    for (int k = 0; k <= d; ++k) {
        const Scalar& c = p.coeffs()[static_cast<std::size_t>(k)];
        a[static_cast<std::size_t>(k)] = C(c.re().get_d(), c.im().get_d());
    }
    const C lead = a.back();
    for (auto& c : a)
        c /= lead;
    // Cauchy bound for the initial circle.
    long double radius = 0;
    for (int k = 0; k < d; ++k)
        radius = std::max(radius, std::abs(a[static_cast<std::size_t>(k)]));
    radius = 1 + radius;
    std::vector<C> z(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) {
        const long double phi = 2 * std::numbers::pi_v<long double> * k / d + 0.4L;
        z[static_cast<std::size_t>(k)] = std::polar(radius * 0.5L, phi);
    }
    auto eval = [&](C x, C& dp) {
        C v = a.back();
        dp = 0;
        for (int k = d - 1; k >= 0; --k) {
            dp = dp * x + v;
            v = v * x + a[static_cast<std::size_t>(k)];
        }
        return v;
    };
    for (int iter = 0; iter < 2000; ++iter) {
        long double worst = 0;
        for (int i = 0; i < d; ++i) {
            C dp;
            C v = eval(z[static_cast<std::size_t>(i)], dp);
            if (v == C(0))
                continue;
            C ratio = v / dp;
            C sum = 0;
            for (int j = 0; j < d; ++j)
                if (j != i)
                    sum += C(1) / (z[static_cast<std::size_t>(i)] - z[static_cast<std::size_t>(j)]);
            C step = ratio / (C(1) - ratio * sum);
            z[static_cast<std::size_t>(i)] -= step;
            worst = std::max(worst, std::abs(step) / (1 + std::abs(z[static_cast<std::size_t>(i)])));
        }
        if (worst < 1e-18L)
            break;
    }
    return z;
}

namespace detail {

inline mpz_class round_to_integer(long double v)
{
    mpz_class r;
    mpz_set_d(r.get_mpz_t(), static_cast<double>(std::floor(v + 0.5L)));
    return r;
}

/// Least common multiple of all real and imaginary denominators.
inline mpz_class denominator_lcm(const Poly<Scalar>& p)
{
    mpz_class l = 1;
    for (const auto& c : p.coeffs()) {
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.re().get_den_mpz_t());
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.im().get_den_mpz_t());
    }
    return l;
}

/// Best rational approximation with denominator at most bound.
inline Rational continued_fraction(long double v, long bound)
{
    mpz_class h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    long double x = v;
    for (int it = 0; it < 64; ++it) {
        const long double fl = std::floor(x);
        mpz_class a = round_to_integer(fl);
        mpz_class h2 = a * h1 + h0;
        mpz_class k2 = a * k1 + k0;
        if (k2 > bound)
            break;
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        const long double frac = x - fl;
        if (frac < 1e-15L)
            break;
        x = 1 / frac;
    }
    Rational r(h1, k1);
    r.canonicalize();
    return r;
}

} // namespace detail

/// Distinct roots of p in Q(i), sorted; p must be nonzero.
inline RootSet gaussian_roots(const Poly<Scalar>& p)
{
    if (p.is_zero())
        throw std::invalid_argument("roots of the zero polynomial");
    RootSet out;
    Poly<Scalar> f = squarefree_part(p);
    if (f.degree() >= 1 && f.coeff(0).is_zero()) {
        out.roots.emplace_back(0);
        f = divmod(f, Poly<Scalar>::z()).quotient;
    }
    while (f.degree() >= 3) {
        // After scaling by D, D*root is a root of a monic Z[i] polynomial, so it is a Gaussian integer.
        const mpz_class D = detail::denominator_lcm(f);
        const auto approx = numeric_roots(f);
        bool found = false;
        for (const auto& z : approx) {
            const long double dd = mpz_get_d(D.get_mpz_t());
            Rational re(detail::round_to_integer(z.real() * dd), D);
            Rational im(detail::round_to_integer(z.imag() * dd), D);
            re.canonicalize();
            im.canonicalize();
            Scalar cand(re, im);
            if (!f(cand).is_zero()) {
                cand = Scalar(detail::continued_fraction(z.real(), 1000000),
                              detail::continued_fraction(z.imag(), 1000000));
                if (!f(cand).is_zero())
                    continue;
            }
            out.roots.push_back(cand);
            f = divmod(f, Poly<Scalar>{-cand, Scalar(1)}).quotient;
            found = true;
            break;
        }
        if (!found)
            break;
    }
    if (f.degree() == 1) {
        out.roots.push_back(-f.coeff(0) / f.coeff(1));
    } else if (f.degree() == 2) {
        const Scalar a = f.coeff(2), b = f.coeff(1), c = f.coeff(0);
        const Scalar disc = b * b - Scalar(4) * a * c;
        Scalar r;
        if (gaussian_sqrt(disc, r)) {
            const Scalar two_a = Scalar(2) * a;
            out.roots.push_back((-b + r) / two_a);
            out.roots.push_back((-b - r) / two_a);
        } else {
            out.unrepresentable += 2;
        }
    } else if (f.degree() >= 3) {
        out.unrepresentable += static_cast<std::size_t>(f.degree());
    }
    std::sort(out.roots.begin(), out.roots.end());
    out.roots.erase(std::unique(out.roots.begin(), out.roots.end()), out.roots.end());
    return out;
}

/// Sylvester resultant with formal degrees da >= deg a and db >= deg b.
inline Scalar resultant(const Poly<Scalar>& a, const Poly<Scalar>& b, int da, int db)
{
    if (da < 0 || db < 0)
        throw std::invalid_argument("negative formal degree");
    if (da == 0 && db == 0)
        return Scalar(1);
    const std::size_t n = static_cast<std::size_t>(da + db);
    Matrix<Scalar> S(n, n);
    for (int r = 0; r < db; ++r)
        for (int k = 0; k <= da; ++k)
            S(static_cast<std::size_t>(r), static_cast<std::size_t>(r + k)) = a.coeff(da - k);
    for (int r = 0; r < da; ++r)
        for (int k = 0; k <= db; ++k)
            S(static_cast<std::size_t>(db + r), static_cast<std::size_t>(r + k)) = b.coeff(db - k);
    return determinant(std::move(S));
}

inline Scalar resultant(const Poly<Scalar>& a, const Poly<Scalar>& b)
{
    return resultant(a, b, std::max(a.degree(), 0), std::max(b.degree(), 0));
}

/// The unique polynomial of degree < xs.size() through the given points (Newton form).
inline Poly<Scalar> interpolate(const std::vector<Scalar>& xs, const std::vector<Scalar>& ys)
{
    if (xs.size() != ys.size())
        throw std::invalid_argument("interpolation sizes differ");
    const std::size_t n = xs.size();
    std::vector<Scalar> dd = ys;
    for (std::size_t j = 1; j < n; ++j)
        for (std::size_t i = n - 1; i >= j; --i) {
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j]);
            if (i == j)
                break;
        }
    Poly<Scalar> p;
    Poly<Scalar> basis = Poly<Scalar>::one();
    for (std::size_t j = 0; j < n; ++j) {
        p += basis * dd[j];
        basis *= Poly<Scalar>{-xs[j], Scalar(1)};
    }
    return p;
}

} // namespace qqtrop
