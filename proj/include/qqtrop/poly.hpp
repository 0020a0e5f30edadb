#pragma once

// Dense univariate polynomials over an exact coefficient ring.

#include "qqtrop/scalar.hpp"

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <ostream>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qqtrop {

/// Coefficient rings used throughout: Scalar, Series and MPoly. A ring element
/// must embed the scalars and must say whether it is an exact zero.
template <class R>
concept CoefficientRing = std::copy_constructible<R> && requires(R a, R b, Scalar c) {
    { a + b } -> std::convertible_to<R>;
    { a - b } -> std::convertible_to<R>;
    { a * b } -> std::convertible_to<R>;
    { -a } -> std::convertible_to<R>;
    { a * c } -> std::convertible_to<R>;
    R(c);
    { is_exact_zero(a) } -> std::convertible_to<bool>;
};

inline bool is_exact_zero(const Scalar& s) { return s.is_zero(); }

template <CoefficientRing R>
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<R> coeffs) : c_(std::move(coeffs)) { trim(); }
    Poly(std::initializer_list<R> coeffs) : c_(coeffs) { trim(); }

    static Poly constant(R c) { return Poly(std::vector<R>{std::move(c)}); }
    static Poly one() { return constant(R(Scalar(1))); }
    /// The monomial z.
    static Poly z() { return Poly(std::vector<R>{R(Scalar(0)), R(Scalar(1))}); }

    /// Returns deg, or -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    std::size_t size() const { return c_.size(); }

    /// Coefficient of z^k; an exact zero outside the stored range.
    R coeff(int k) const
    {
        if (k < 0 || k >= static_cast<int>(c_.size()))
            return R(Scalar(0));
        return c_[static_cast<std::size_t>(k)];
    }
    const std::vector<R>& coeffs() const { return c_; }
    const R& leading() const
    {
        if (c_.empty())
            throw std::domain_error("leading coefficient of zero polynomial");
        return c_.back();
    }

    Poly& operator+=(const Poly& o)
    {
        if (o.c_.size() > c_.size())
            c_.resize(o.c_.size(), R(Scalar(0)));
        for (std::size_t k = 0; k < o.c_.size(); ++k)
            c_[k] = c_[k] + o.c_[k];
        trim();
        return *this;
    }
    Poly& operator-=(const Poly& o)
    {
        if (o.c_.size() > c_.size())
            c_.resize(o.c_.size(), R(Scalar(0)));
        for (std::size_t k = 0; k < o.c_.size(); ++k)
            c_[k] = c_[k] - o.c_[k];
        trim();
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator-(const Poly& a)
    {
        std::vector<R> out;
        out.reserve(a.c_.size());
        for (const auto& c : a.c_)
            out.push_back(-c);
        return Poly(std::move(out));
    }

    friend Poly operator*(const Poly& a, const Poly& b)
    {
        if (a.c_.empty() || b.c_.empty())
            return Poly();
        std::vector<R> out(a.c_.size() + b.c_.size() - 1, R(Scalar(0)));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                out[i + j] = out[i + j] + a.c_[i] * b.c_[j];
        return Poly(std::move(out));
    }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    friend Poly operator*(const Poly& a, const Scalar& s)
    {
        std::vector<R> out;
        out.reserve(a.c_.size());
        for (const auto& c : a.c_)
            out.push_back(c * s);
        return Poly(std::move(out));
    }

    /// Multiplies every coefficient by a ring element.
    Poly scaled(const R& r) const
    {
        std::vector<R> out;
        out.reserve(c_.size());
        for (const auto& c : c_)
            out.push_back(c * r);
        return Poly(std::move(out));
    }

    Poly derivative() const
    {
        if (c_.size() <= 1)
            return Poly();
        std::vector<R> out;
        out.reserve(c_.size() - 1);
        for (std::size_t k = 1; k < c_.size(); ++k)
            out.push_back(c_[k] * Scalar(static_cast<long>(k)));
        return Poly(std::move(out));
    }

    /// p(q z): the coefficient of z^k is multiplied by q^k.
    Poly dilate(const Scalar& q) const
    {
        std::vector<R> out;
        out.reserve(c_.size());
        Scalar qk(1);
        for (const auto& c : c_) {
            out.push_back(c * qk);
            qk *= q;
        }
        return Poly(std::move(out));
    }

    /// Horner evaluation at a ring element.
    R operator()(const R& x) const
    {
        R acc(Scalar(0));
        for (auto it = c_.rbegin(); it != c_.rend(); ++it)
            acc = acc * x + *it;
        return acc;
    }

    bool is_monic() const
    {
        if constexpr (std::same_as<R, Scalar>)
            return !c_.empty() && c_.back().is_one();
        else
            return !c_.empty();
    }

    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

private:
    void trim()
    {
        while (!c_.empty() && is_exact_zero(c_.back()))
            c_.pop_back();
    }

    std::vector<R> c_; // lowest degree first
};

/// The monic polynomial prod_k (z + shift_k); the empty product is 1.
template <CoefficientRing R>
Poly<R> poly_from_shifts(std::span<const R> shifts)
{
    Poly<R> p = Poly<R>::one();
    for (const auto& s : shifts)
        p *= Poly<R>(std::vector<R>{s, R(Scalar(1))});
    return p;
}

template <CoefficientRing R>
Poly<R> poly_from_shifts(const std::vector<R>& shifts)
{
    return poly_from_shifts(std::span<const R>(shifts));
}

template <CoefficientRing R>
Poly<R> poly_dilate(const Poly<R>& p, const Scalar& q)
{
    return p.dilate(q);
}

/// W(f, g) = f g' - g f'.
template <CoefficientRing R>
Poly<R> wronskian(const Poly<R>& f, const Poly<R>& g)
{
    return f * g.derivative() - g * f.derivative();
}

template <CoefficientRing R>
std::ostream& operator<<(std::ostream& os, const Poly<R>& p)
{
    if (p.is_zero())
        return os << "0";
    bool first = true;
    for (int k = p.degree(); k >= 0; --k) {
        const R c = p.coeff(k);
        if (is_exact_zero(c))
            continue;
        if (!first)
            os << " + ";
        first = false;
        os << "(" << c << ")";
        if (k > 0)
            os << "*z^" << k;
    }
    return os;
}

// Field-only operations on Poly<Scalar>.

struct PolyDivision {
    Poly<Scalar> quotient;
    Poly<Scalar> remainder;
};

inline PolyDivision divmod(const Poly<Scalar>& a, const Poly<Scalar>& b)
{
    if (b.is_zero())
        throw std::domain_error("polynomial division by zero");
    std::vector<Scalar> rem = a.coeffs();
    const int db = b.degree();
    const Scalar lead_inv = b.leading().inverse();
    if (a.degree() < db)
        return {Poly<Scalar>(), a};
    std::vector<Scalar> quo(static_cast<std::size_t>(a.degree() - db + 1));
    for (int k = a.degree(); k >= db; --k) {
        Scalar c = rem[static_cast<std::size_t>(k)] * lead_inv;
        quo[static_cast<std::size_t>(k - db)] = c;
        if (c.is_zero())
            continue;
        for (int j = 0; j <= db; ++j)
            rem[static_cast<std::size_t>(k - db + j)] -= c * b.coeff(j);
    }
    rem.resize(static_cast<std::size_t>(db));
    return {Poly<Scalar>(std::move(quo)), Poly<Scalar>(std::move(rem))};
}

inline Poly<Scalar> make_monic(const Poly<Scalar>& p)
{
    if (p.is_zero())
        return p;
    return p * p.leading().inverse();
}

/// Monic gcd; gcd(0, 0) = 0.
inline Poly<Scalar> gcd(Poly<Scalar> a, Poly<Scalar> b)
{
    while (!b.is_zero()) {
        Poly<Scalar> r = divmod(a, b).remainder;
        a = std::move(b);
        b = std::move(r);
    }
    return make_monic(a);
}

/// Coefficients d_1..d_deg of a monic polynomial: d_k multiplies z^(deg-k).
inline std::vector<Scalar> descending_coeffs(const Poly<Scalar>& p)
{
    std::vector<Scalar> d;
    for (int k = 1; k <= p.degree(); ++k)
        d.push_back(p.coeff(p.degree() - k));
    return d;
}

} // namespace qqtrop
