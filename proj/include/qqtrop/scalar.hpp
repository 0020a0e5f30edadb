#pragma once

// Exact Gaussian-rational scalars: re + i*im with re, im in Q.

#include <gmpxx.h>

#include <compare>
#include <complex>
#include <concepts>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qqtrop {

using Rational = mpq_class;

inline bool is_zero(const Rational& r) { return sgn(r) == 0; }

/// Parses "p", "-p", "p/q". The result is canonicalized.
inline Rational parse_rational(std::string_view text)
{
    std::string s(text);
    if (s.empty())
        throw std::invalid_argument("empty rational literal");
    if (s.front() == '+')
        s.erase(s.begin());
    Rational r;
    if (r.set_str(s, 10) != 0)
        throw std::invalid_argument("malformed rational literal '" + std::string(text) + "'");
    if (sgn(r.get_den()) == 0)
        throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    r.canonicalize();
    return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

class Scalar {
public:
    Scalar() = default;
    template <std::integral I>
    Scalar(I v) : re_(static_cast<long>(v)) {}
    Scalar(Rational re) : re_(std::move(re)) { re_.canonicalize(); }
    Scalar(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im))
    {
        re_.canonicalize();
        im_.canonicalize();
    }

    static Scalar i() { return Scalar(Rational(0), Rational(1)); }

    const Rational& re() const { return re_; }
    const Rational& im() const { return im_; }

    bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
    bool is_real() const { return sgn(im_) == 0; }
    bool is_one() const { return re_ == 1 && sgn(im_) == 0; }

    /// |z|^2, exact.
    Rational norm() const
    {
        Rational r = re_ * re_ + im_ * im_;
        return r;
    }
    Scalar conj() const { return Scalar(re_, Rational(-im_)); }

    Scalar inverse() const
    {
        if (is_zero())
            throw std::domain_error("division by zero scalar");
        Rational n = norm();
        Rational a = re_ / n;
        Rational b = -im_ / n;
        return Scalar(std::move(a), std::move(b));
    }

    Scalar& operator+=(const Scalar& o)
    {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    Scalar& operator-=(const Scalar& o)
    {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    Scalar& operator*=(const Scalar& o)
    {
        if (is_real() && o.is_real()) {
            re_ *= o.re_;
            return *this;
        }
        Rational a = re_ * o.re_ - im_ * o.im_;
        Rational b = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(a);
        im_ = std::move(b);
        return *this;
    }
    Scalar& operator/=(const Scalar& o)
    {
        if (o.is_real()) {
            if (sgn(o.re_) == 0)
                throw std::domain_error("division by zero scalar");
            re_ /= o.re_;
            im_ /= o.re_;
            return *this;
        }
        return *this *= o.inverse();
    }

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
    friend Scalar operator-(const Scalar& a) { return Scalar(Rational(-a.re_), Rational(-a.im_)); }

    friend bool operator==(const Scalar& a, const Scalar& b) { return a.re_ == b.re_ && a.im_ == b.im_; }

    /// Lexicographic on (re, im); used only for canonical ordering of multisets.
    friend std::strong_ordering operator<=>(const Scalar& a, const Scalar& b)
    {
        int c = cmp(a.re_, b.re_);
        if (c == 0)
            c = cmp(a.im_, b.im_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }

    std::string str() const
    {
        if (is_real())
            return re_.get_str();
        std::string out;
        if (sgn(re_) != 0)
            out = re_.get_str();
        if (sgn(im_) > 0 && !out.empty())
            out += "+";
        if (im_ == 1)
            out += "i";
        else if (im_ == -1)
            out += "-i";
        else
            out += im_.get_str() + "*i";
        return out;
    }

private:
    Rational re_{0};
    Rational im_{0};
};

inline bool is_zero(const Scalar& s) { return s.is_zero(); }

inline std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

inline Scalar pow(const Scalar& base, long e)
{
    if (e < 0)
        return pow(base.inverse(), -e);
    Scalar result(1);
    Scalar b = base;
    while (e > 0) {
        if (e & 1)
            result *= b;
        e >>= 1;
        if (e > 0)
            b *= b;
    }
    return result;
}

/// Parses "p/q" or "a+b*i"-free forms: only real literals; Gaussian values come as pairs.
inline Scalar parse_scalar(std::string_view re, std::string_view im = "0")
{
    return Scalar(parse_rational(re), parse_rational(im));
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
inline bool rational_sqrt(const Rational& r, Rational& out)
{
    if (sgn(r) < 0)
        return false;
    mpz_class num = r.get_num();
    mpz_class den = r.get_den();
    if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
        return false;
    mpz_class a, b;
    mpz_sqrt(a.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(b.get_mpz_t(), den.get_mpz_t());
    out = Rational(a, b);
    out.canonicalize();
    return true;
}

/// Exact square root in Q(i), if one exists. Returns the root with re > 0, or re == 0 and im >= 0.
inline bool gaussian_sqrt(const Scalar& z, Scalar& out)
{
    if (z.is_zero()) {
        out = Scalar(0);
        return true;
    }
    Rational modulus;
    if (!rational_sqrt(z.norm(), modulus))
        return false;
    Rational x2 = (modulus + z.re()) / 2;
    Rational y2 = (modulus - z.re()) / 2;
    Rational x, y;
    if (!rational_sqrt(x2, x) || !rational_sqrt(y2, y))
        return false;
    if (sgn(z.im()) < 0)
        y = -y;
    if (sgn(x) == 0 && sgn(y) < 0)
        y = -y;
    out = Scalar(x, y);
    return true;
}

} // namespace qqtrop
