#pragma once

// Sparse multivariate polynomials with Gaussian-rational coefficients.

#include "qqtrop/poly.hpp"
#include "qqtrop/scalar.hpp"

#include <algorithm>
#include <climits>
#include <cstddef>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qqtrop {

/// Exponent vector; trailing zeros are always trimmed so equal monomials compare equal.
using Monomial = std::vector<int>;

class MPoly {
public:
    using Terms = std::map<Monomial, Scalar>;

    MPoly() = default;
    MPoly(Scalar c)
    {
        if (!c.is_zero())
            terms_.emplace(Monomial{}, std::move(c));
    }
    template <std::integral I>
    MPoly(I v) : MPoly(Scalar(v))
    {
    }

    static MPoly var(std::size_t i, Scalar c = Scalar(1))
    {
        Monomial u(i + 1, 0);
        u[i] = 1;
        return term(std::move(u), std::move(c));
    }
    static MPoly term(Monomial u, Scalar c)
    {
        MPoly p;
        trim(u);
        if (!c.is_zero())
            p.terms_.emplace(std::move(u), std::move(c));
        return p;
    }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    Scalar coeff(Monomial u) const
    {
        trim(u);
        auto it = terms_.find(u);
        return it == terms_.end() ? Scalar(0) : it->second;
    }
    Scalar constant_term() const { return coeff({}); }

    /// Number of variables that actually occur (one past the highest index used).
    std::size_t num_vars() const
    {
        std::size_t n = 0;
        for (const auto& [u, c] : terms_)
            n = std::max(n, u.size());
        return n;
    }
    int degree_in(std::size_t i) const
    {
        int d = terms_.empty() ? -1 : 0;
        for (const auto& [u, c] : terms_)
            if (i < u.size())
                d = std::max(d, u[i]);
        return d;
    }
    int total_degree() const
    {
        int d = terms_.empty() ? -1 : 0;
        for (const auto& [u, c] : terms_) {
            int s = 0;
            for (int e : u)
                s += e;
            d = std::max(d, s);
        }
        return d;
    }
    /// Lowest power of variable i dividing every term.
    int min_degree_in(std::size_t i) const
    {
        if (terms_.empty())
            return 0;
        int d = INT_MAX;
        for (const auto& [u, c] : terms_)
            d = std::min(d, i < u.size() ? u[i] : 0);
        return d;
    }

    MPoly& operator+=(const MPoly& o)
    {
        for (const auto& [u, c] : o.terms_)
            add_term(u, c);
        return *this;
    }
    MPoly& operator-=(const MPoly& o)
    {
        for (const auto& [u, c] : o.terms_)
            add_term(u, -c);
        return *this;
    }
    friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
    friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }
    friend MPoly operator-(const MPoly& a)
    {
        MPoly r = a;
        for (auto& [u, c] : r.terms_)
            c = -c;
        return r;
    }
    friend MPoly operator*(const MPoly& a, const MPoly& b)
    {
        MPoly r;
        for (const auto& [u, c] : a.terms_)
            for (const auto& [v, d] : b.terms_)
                r.add_term(mul_monomial(u, v), c * d);
        return r;
    }
    MPoly& operator*=(const MPoly& o) { return *this = *this * o; }
    friend MPoly operator*(const MPoly& a, const Scalar& s)
    {
        if (s.is_zero())
            return MPoly();
        MPoly r = a;
        for (auto& [u, c] : r.terms_)
            c *= s;
        return r;
    }

    MPoly derivative(std::size_t i) const
    {
        MPoly r;
        for (const auto& [u, c] : terms_) {
            if (i >= u.size() || u[i] == 0)
                continue;
            Monomial v = u;
            --v[i];
            r.add_term(trimmed(std::move(v)), c * Scalar(u[i]));
        }
        return r;
    }

    /// Divides by var_i^k; every term must be divisible.
    MPoly divide_by_var(std::size_t i, int k) const
    {
        MPoly r;
        for (const auto& [u, c] : terms_) {
            if ((i < u.size() ? u[i] : 0) < k)
                throw std::domain_error("monomial not divisible");
            Monomial v = u;
            v[i] -= k;
            r.add_term(trimmed(std::move(v)), c);
        }
        return r;
    }

    /// Evaluates with variable j replaced by values[j] (missing variables must not occur).
    template <class R>
    R evaluate(const std::vector<R>& values) const
    {
        std::vector<std::vector<R>> powers(values.size());
        auto power = [&](std::size_t j, int e) -> const R& {
            auto& pw = powers[j];
            if (pw.empty())
                pw.push_back(R(Scalar(1)));
            while (static_cast<int>(pw.size()) <= e)
                pw.push_back(pw.back() * values[j]);
            return pw[static_cast<std::size_t>(e)];
        };
        R acc(Scalar(0));
        for (const auto& [u, c] : terms_) {
            if (u.size() > values.size())
                throw std::out_of_range("polynomial uses a variable with no value");
            R m(c);
            for (std::size_t j = 0; j < u.size(); ++j)
                if (u[j] > 0)
                    m = m * power(j, u[j]);
            acc = acc + m;
        }
        return acc;
    }

    /// Substitutes polynomials for variables; variables beyond subs.size() stay themselves.
    MPoly substitute(const std::vector<MPoly>& subs) const
    {
        std::vector<MPoly> vals = subs;
        for (std::size_t j = subs.size(); j < num_vars(); ++j)
            vals.push_back(var(j));
        return evaluate<MPoly>(vals);
    }

    /// Collects powers of variable i: result[k] is the coefficient of var_i^k.
    std::vector<MPoly> collect(std::size_t i) const
    {
        std::vector<MPoly> out(static_cast<std::size_t>(std::max(0, degree_in(i)) + 1));
        for (const auto& [u, c] : terms_) {
            Monomial v = u;
            int e = 0;
            if (i < v.size()) {
                e = v[i];
                v[i] = 0;
            }
            out[static_cast<std::size_t>(e)].add_term(trimmed(std::move(v)), c);
        }
        return out;
    }

    /// Univariate view when only variable i occurs.
    Poly<Scalar> as_univariate(std::size_t i) const
    {
        std::vector<Scalar> c(static_cast<std::size_t>(std::max(0, degree_in(i)) + 1));
        for (const auto& [u, a] : terms_) {
            for (std::size_t j = 0; j < u.size(); ++j)
                if (j != i && u[j] != 0)
                    throw std::invalid_argument("polynomial is not univariate");
            c[static_cast<std::size_t>(i < u.size() ? u[i] : 0)] += a;
        }
        return Poly<Scalar>(std::move(c));
    }

    friend bool operator==(const MPoly& a, const MPoly& b) { return a.terms_ == b.terms_; }

    std::string str() const
    {
        if (terms_.empty())
            return "0";
        std::string out;
        for (const auto& [u, c] : terms_) {
            if (!out.empty())
                out += " + ";
            out += "(" + c.str() + ")";
            for (std::size_t j = 0; j < u.size(); ++j)
                if (u[j] != 0)
                    out += "*v" + std::to_string(j) + (u[j] > 1 ? "^" + std::to_string(u[j]) : "");
        }
        return out;
    }

private:
    static void trim(Monomial& u)
    {
        while (!u.empty() && u.back() == 0)
            u.pop_back();
    }
    static Monomial trimmed(Monomial u)
    {
        trim(u);
        return u;
    }
    static Monomial mul_monomial(const Monomial& a, const Monomial& b)
    {
        Monomial r(std::max(a.size(), b.size()), 0);
        for (std::size_t j = 0; j < a.size(); ++j)
            r[j] += a[j];
        for (std::size_t j = 0; j < b.size(); ++j)
            r[j] += b[j];
        return r;
    }
    void add_term(const Monomial& u, const Scalar& c)
    {
        if (c.is_zero())
            return;
        auto [it, inserted] = terms_.try_emplace(u, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero())
                terms_.erase(it);
        }
    }

    Terms terms_;
};

inline bool is_exact_zero(const MPoly& p) { return p.is_zero(); }

inline std::ostream& operator<<(std::ostream& os, const MPoly& p) { return os << p.str(); }

} // namespace qqtrop
