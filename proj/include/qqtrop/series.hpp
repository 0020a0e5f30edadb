#pragma once

// Truncated Laurent jets in s, where t = s^N.

#include "qqtrop/scalar.hpp"

#include <algorithm>
#include <climits>
#include <complex>
#include <cstddef>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qqtrop {

struct RamificationMismatch : std::invalid_argument {
    RamificationMismatch(int a, int b)
        : std::invalid_argument("ramification mismatch: N=" + std::to_string(a) + " vs N=" +
                                std::to_string(b) + "; re-ramify one operand first")
    {
    }
};

struct NonInvertibleSeries : std::domain_error {
    NonInvertibleSeries() : std::domain_error("non-invertible series") {}
    explicit NonInvertibleSeries(const std::string& what) : std::domain_error(what) {}
};

/// A jet sum_e c_e s^e, known through s^order. Exact series have order kExact.
class Series {
public:
    static constexpr long kExact = LONG_MAX / 4;

    /// The exact zero.
    Series() = default;
    /// An exact constant; compatible with every ramification index.
    Series(Scalar c) : N_(1), order_(kExact)
    {
        if (!c.is_zero())
            c_.push_back(std::move(c));
    }
    template <std::integral I>
    Series(I v) : Series(Scalar(v))
    {
    }

    /// coeffs[i] multiplies s^(offset + i); entries beyond order are dropped.
    Series(int N, long offset, std::vector<Scalar> coeffs, long order)
        : N_(N), offset_(offset), order_(clamp(order)), c_(std::move(coeffs))
    {
        if (N < 1)
            throw std::invalid_argument("ramification index must be positive");
        normalize();
    }

    /// s^e exactly (t = s^N, so monomial(N, N) is t).
    static Series monomial(int N, long e, Scalar c = Scalar(1))
    {
        return Series(N, e, std::vector<Scalar>{std::move(c)}, kExact);
    }
    static Series t(int N = 1) { return monomial(N, N); }
    /// The zero jet known through s^order.
    static Series zero(int N, long order) { return Series(N, 0, {}, order); }
    /// Integer t-power coefficients c_0 + c_1 t + ..., known through t^K.
    static Series from_t_coeffs(const std::vector<Scalar>& c, long K, int N = 1)
    {
        std::vector<Scalar> s;
        for (std::size_t k = 0; k < c.size(); ++k) {
            if (k > 0)
                for (int j = 1; j < N; ++j)
                    s.emplace_back(0);
            s.push_back(c[k]);
        }
        return Series(N, 0, std::move(s), K == kExact ? kExact : (K + 1) * N - 1);
    }

    int ram_index() const { return N_; }
    long order() const { return order_; }
    bool is_exact() const { return order_ >= kExact; }
    /// Exponent of the first stored coefficient; equals the s-valuation when nonzero.
    long offset() const { return c_.empty() ? 0 : offset_; }
    const std::vector<Scalar>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    /// Exact constant term only (no positive or negative powers).
    bool is_constant() const { return is_exact() && (c_.empty() || (offset_ == 0 && c_.size() == 1)); }

    /// Valuation in s-units; nullopt for a zero jet.
    std::optional<long> s_valuation() const
    {
        if (c_.empty())
            return std::nullopt;
        return offset_;
    }
    /// s-valuation, or order+1 for a zero jet (the best lower bound known).
    long valuation_bound() const
    {
        if (c_.empty())
            return sat_add(order_, 1);
        return offset_;
    }
    /// Puiseux valuation in t; nullopt means the jet is zero through its order.
    std::optional<Rational> valuation() const
    {
        if (c_.empty())
            return std::nullopt;
        Rational v(offset_, N_);
        v.canonicalize();
        return v;
    }

    /// Coefficient of s^e; throws if e lies beyond the known order.
    Scalar coeff(long e) const
    {
        if (e > order_)
            throw std::out_of_range("coefficient s^" + std::to_string(e) + " beyond order " +
                                    std::to_string(order_));
        if (c_.empty() || e < offset_ || e >= offset_ + static_cast<long>(c_.size()))
            return Scalar(0);
        return c_[static_cast<std::size_t>(e - offset_)];
    }
    /// Coefficient of t^k, i.e. of s^(kN).
    Scalar t_coeff(long k) const { return coeff(k * N_); }

    Series truncated(long order) const
    {
        Series r = *this;
        r.order_ = std::min(order_, clamp(order));
        r.normalize();
        return r;
    }
    /// Treats unknown coefficients through the new order as zero.
    Series extended(long order) const
    {
        Series r = *this;
        r.order_ = std::max(order_, clamp(order));
        return r;
    }
    Series exact() const { return extended(kExact); }

    /// Reinterprets in s' with s = s'^f: the new index is N*f.
    Series reramify(int f) const
    {
        if (f < 1)
            throw std::invalid_argument("re-ramification factor must be positive");
        if (f == 1)
            return *this;
        std::vector<Scalar> out;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (i > 0)
                for (int j = 1; j < f; ++j)
                    out.emplace_back(0);
            out.push_back(c_[i]);
        }
        long order = is_exact() ? kExact : (order_ + 1) * f - 1;
        return Series(N_ * f, offset_ * f, std::move(out), order);
    }
    /// Re-ramifies to index target, which must be a multiple of N.
    Series at_index(int target) const
    {
        if (target == N_)
            return *this;
        if (is_constant()) {
            Series r = *this;
            r.N_ = target;
            return r;
        }
        if (target % N_ != 0)
            throw RamificationMismatch(N_, target);
        return reramify(target / N_);
    }

    Series& operator+=(const Series& o) { return *this = combine(*this, o, false); }
    Series& operator-=(const Series& o) { return *this = combine(*this, o, true); }
    friend Series operator+(const Series& a, const Series& b) { return combine(a, b, false); }
    friend Series operator-(const Series& a, const Series& b) { return combine(a, b, true); }
    friend Series operator-(const Series& a)
    {
        Series r = a;
        for (auto& c : r.c_)
            c = -c;
        return r;
    }

    friend Series operator*(const Series& a, const Series& b)
    {
        const int N = common_index(a, b);
        const long order =
            std::min(sat_add(a.order_, b.valuation_bound()), sat_add(b.order_, a.valuation_bound()));
        if (a.c_.empty() || b.c_.empty())
            return Series(N, 0, {}, order);
        const long base = a.offset_ + b.offset_;
        long top = a.offset_ + static_cast<long>(a.c_.size()) + b.offset_ +
                   static_cast<long>(b.c_.size()) - 2;
        top = std::min(top, order);
        if (top < base)
            return Series(N, 0, {}, order);
        std::vector<Scalar> out(static_cast<std::size_t>(top - base + 1));
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i].is_zero())
                continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) {
                const long e = static_cast<long>(i + j);
                if (base + e > top)
                    break;
                out[static_cast<std::size_t>(e)] += a.c_[i] * b.c_[j];
            }
        }
        return Series(N, base, std::move(out), order);
    }
    Series& operator*=(const Series& o) { return *this = *this * o; }

    friend Series operator*(const Series& a, const Scalar& s)
    {
        if (s.is_zero())
            return Series(a.N_, 0, {}, a.order_);
        Series r = a;
        for (auto& c : r.c_)
            c *= s;
        return r;
    }
    friend Series operator*(const Scalar& s, const Series& a) { return a * s; }

    /// 1/a with valuation -val(a); known through order K - 2 val(a).
    Series reciprocal() const
    {
        if (c_.empty())
            throw NonInvertibleSeries();
        const long v = offset_;
        if (is_exact()) {
            if (c_.size() != 1)
                throw NonInvertibleSeries("reciprocal of an exact non-monomial needs an order");
            return Series(N_, -v, {c_[0].inverse()}, kExact);
        }
        const long len = order_ - v + 1; // known coefficients of a / s^v
        const Scalar inv0 = c_[0].inverse();
        std::vector<Scalar> b(static_cast<std::size_t>(len));
        b[0] = inv0;
        for (long k = 1; k < len; ++k) {
            Scalar acc(0);
            for (long j = 1; j <= k && j < static_cast<long>(c_.size()); ++j)
                if (!c_[static_cast<std::size_t>(j)].is_zero())
                    acc += c_[static_cast<std::size_t>(j)] * b[static_cast<std::size_t>(k - j)];
            b[static_cast<std::size_t>(k)] = -(acc * inv0);
        }
        return Series(N_, -v, std::move(b), order_ - 2 * v);
    }
    friend Series operator/(const Series& a, const Series& b) { return a * b.reciprocal(); }

    /// Numeric value at s = s0, summing the stored jet.
    std::complex<double> evaluate_at(std::complex<double> s0) const
    {
        std::complex<double> acc = 0;
        for (std::size_t i = c_.size(); i-- > 0;)
            acc = acc * s0 + c_[i].to_complex();
        if (!c_.empty())
            acc *= std::pow(s0, static_cast<double>(offset_));
        return acc;
    }

    friend bool operator==(const Series& a, const Series& b)
    {
        if (a.c_.empty() || b.c_.empty())
            return a.c_.empty() && b.c_.empty() && a.order_ == b.order_;
        return a.offset_ == b.offset_ && a.order_ == b.order_ && a.c_ == b.c_ &&
               (a.N_ == b.N_ || (a.is_constant() && b.is_constant()));
    }

    /// Equal coefficients through min(order) after bringing both to a common index.
    friend bool agree(const Series& a, const Series& b)
    {
        Series d = a - b;
        return d.is_zero();
    }

    std::string str() const
    {
        std::string out;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i].is_zero())
                continue;
            if (!out.empty())
                out += " + ";
            out += "(" + c_[i].str() + ")";
            const long e = offset_ + static_cast<long>(i);
            if (e != 0)
                out += "*" + var_name() + "^" + std::to_string(e);
        }
        if (out.empty())
            out = "0";
        if (!is_exact())
            out += " + O(" + var_name() + "^" + std::to_string(order_ + 1) + ")";
        return out;
    }

private:
    static long clamp(long v) { return v >= kExact ? kExact : v; }
    static long sat_add(long a, long b)
    {
        if (a >= kExact || b >= kExact)
            return kExact;
        return clamp(a + b);
    }
    std::string var_name() const { return N_ == 1 ? "t" : "s"; }

    static int common_index(const Series& a, const Series& b)
    {
        if (a.N_ == b.N_)
            return a.N_;
        if (a.is_constant())
            return b.N_;
        if (b.is_constant())
            return a.N_;
        throw RamificationMismatch(a.N_, b.N_);
    }

    static Series combine(const Series& a, const Series& b, bool subtract)
    {
        const int N = common_index(a, b);
        const long order = std::min(a.order_, b.order_);
        if (a.c_.empty() && b.c_.empty())
            return Series(N, 0, {}, order);
        long lo = LONG_MAX;
        long hi = LONG_MIN;
        for (const Series* p : {&a, &b}) {
            if (p->c_.empty())
                continue;
            lo = std::min(lo, p->offset_);
            hi = std::max(hi, p->offset_ + static_cast<long>(p->c_.size()) - 1);
        }
        hi = std::min(hi, order);
        if (hi < lo)
            return Series(N, 0, {}, order);
        std::vector<Scalar> out(static_cast<std::size_t>(hi - lo + 1));
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            const long e = a.offset_ + static_cast<long>(i);
            if (e > hi)
                break;
            out[static_cast<std::size_t>(e - lo)] += a.c_[i];
        }
        for (std::size_t i = 0; i < b.c_.size(); ++i) {
            const long e = b.offset_ + static_cast<long>(i);
            if (e > hi)
                break;
            if (subtract)
                out[static_cast<std::size_t>(e - lo)] -= b.c_[i];
            else
                out[static_cast<std::size_t>(e - lo)] += b.c_[i];
        }
        return Series(N, lo, std::move(out), order);
    }

    void normalize()
    {
        if (!c_.empty() && offset_ + static_cast<long>(c_.size()) - 1 > order_) {
            const long keep = order_ - offset_ + 1;
            c_.resize(keep > 0 ? static_cast<std::size_t>(keep) : 0);
        }
        std::size_t lead = 0;
        while (lead < c_.size() && c_[lead].is_zero())
            ++lead;
        if (lead == c_.size()) {
            c_.clear();
            offset_ = 0;
            return;
        }
        if (lead > 0) {
            c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(lead));
            offset_ += static_cast<long>(lead);
        }
        while (c_.back().is_zero())
            c_.pop_back();
    }

    int N_ = 1;
    long offset_ = 0;
    long order_ = kExact;
    std::vector<Scalar> c_;
};

inline bool is_exact_zero(const Series& s) { return s.is_zero() && s.is_exact(); }

inline std::ostream& operator<<(std::ostream& os, const Series& s) { return os << s.str(); }

inline Series pow(const Series& base, long e)
{
    if (e < 0)
        return pow(base.reciprocal(), -e);
    Series r(Scalar(1));
    for (long k = 0; k < e; ++k)
        r *= base;
    return r;
}

} // namespace qqtrop
