#pragma once

// Supports of polynomials over the valued field of t-series.

#include "qqtrop/poly.hpp"
#include "qqtrop/scalar.hpp"

#include <cstddef>
#include <vector>

namespace qqtrop {

struct SupportItem {
    std::vector<int> u;  // exponent vector, one entry per unknown
    Rational v;          // valuation of the coefficient
    Poly<Scalar> coeff;  // exact coefficient as a polynomial in t
};

struct TropicalSupport {
    std::vector<SupportItem> items;
    std::size_t dim = 0;
};

using TropicalPoint = std::vector<Rational>;

} // namespace qqtrop
