#pragma once

// Tropical hypersurfaces of the residual components and their intersection (the prevariety),
// computed by enumerating cells of tied minimizing terms with exact LP.

#include "qqtrop/lp.hpp"
#include "qqtrop/matrix.hpp"
#include "qqtrop/systems.hpp"
#include "qqtrop/tropical_support.hpp"

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace qqtrop {

inline Rational tropical_value(const SupportItem& it, const TropicalPoint& w)
{
    Rational v = it.v;
    for (std::size_t i = 0; i < w.size(); ++i)
        if (it.u[i] != 0)
            v += it.u[i] * w[i];
    return v;
}

/// True iff the minimum of v + u.w over the support is attained at least twice.
inline bool hypersurface_contains(const TropicalSupport& s, const TropicalPoint& w)
{
    if (w.size() != s.dim)
        throw std::invalid_argument("tropical point has dimension " + std::to_string(w.size()) +
                                    ", support has " + std::to_string(s.dim));
    std::optional<Rational> best;
    int hits = 0;
    for (const auto& it : s.items) {
        const Rational v = tropical_value(it, w);
        if (!best || v < *best) {
            best = v;
            hits = 1;
        } else if (v == *best) {
            ++hits;
        }
    }
    return hits >= 2;
}

/// First component k (1-based) whose hypersurface misses w, if any.
inline std::optional<std::size_t> exclusion_witness(const std::vector<TropicalSupport>& supports,
                                                    const TropicalPoint& w)
{
    for (std::size_t k = 0; k < supports.size(); ++k)
        if (!hypersurface_contains(supports[k], w))
            return k + 1;
    return std::nullopt;
}

inline std::optional<std::size_t> exclusion_witness(const ProblemSpec& spec, const TropicalPoint& w)
{
    return exclusion_witness(symbolic_support(spec), w);
}

/// Throws unless every d_k is nonzero.
inline void check_theorem_hypothesis(const ProblemSpec& spec)
{
    const auto& d = spec.lambda.d;
    for (std::size_t k = 0; k < d.size(); ++k)
        if (d[k].is_zero())
            throw SpecError("zero_coefficient", "d_" + std::to_string(k + 1) + " = 0");
}

struct TropicalCell {
    std::vector<std::vector<std::size_t>> tied; // per component, items minimal on the whole cell
    std::size_t dimension = 0;
    std::vector<std::optional<Rational>> lower, upper; // coordinate bounds; nullopt if unbounded
    bool bounded = true;
    TropicalPoint sample;          // a point of the cell
    std::optional<TropicalPoint> ray; // recession direction when unbounded

    bool is_origin() const
    {
        for (std::size_t i = 0; i < lower.size(); ++i)
            if (!lower[i] || !upper[i] || *lower[i] != 0 || *upper[i] != 0)
                return false;
        return true;
    }
};

struct Prevariety {
    std::vector<TropicalCell> cells;
    bool points_bounded = true;
    bool is_origin_only = false;
    bool theorem_mode = false; // all d_k nonzero: the prevariety is the variety
    std::optional<TropicalPoint> ray_witness;
    std::optional<TropicalPoint> nonzero_point;
    long nodes = 0;
    long lp_calls = 0;
};

/// w lies in the cell iff, for every component, all tied items attain the minimum at w.
inline bool cell_contains(const TropicalCell& cell, const std::vector<TropicalSupport>& supports,
                          const TropicalPoint& w)
{
    for (std::size_t k = 0; k < cell.tied.size(); ++k) {
        const auto& items = supports[k].items;
        std::optional<Rational> best;
        for (const auto& it : items) {
            const Rational v = tropical_value(it, w);
            if (!best || v < *best)
                best = v;
        }
        for (auto c : cell.tied[k])
            if (tropical_value(items[c], w) != *best)
                return false;
    }
    return true;
}

namespace detail {

struct AffineHull {
    RVec w0;          // a point
    std::vector<RVec> basis; // directions spanning the hull
};

inline std::optional<AffineHull> affine_solve(const RMat& E, const RVec& e, std::size_t D)
{
    Matrix<Rational> A(E.size(), D);
    for (std::size_t i = 0; i < E.size(); ++i)
        for (std::size_t j = 0; j < D; ++j)
            A(i, j) = E[i][j];
    AffineHull h;
    if (E.empty()) {
        h.w0.assign(D, Rational(0));
    } else {
        auto x = solve(A, e);
        if (!x)
            return std::nullopt;
        h.w0 = std::move(*x);
    }
    if (E.empty()) {
        for (std::size_t j = 0; j < D; ++j) {
            RVec v(D, Rational(0));
            v[j] = 1;
            h.basis.push_back(std::move(v));
        }
    } else {
        h.basis = nullspace(A);
    }
    return h;
}

inline Rational dot(const RVec& a, const RVec& b)
{
    Rational s(0);
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0 && b[i] != 0)
            s += a[i] * b[i];
    return s;
}

class CellSearch {
public:
    CellSearch(const std::vector<TropicalSupport>& supports, Prevariety& out)
        : S_(supports), D_(supports.empty() ? 0 : supports[0].dim), out_(out)
    {
    }

    void run()
    {
        Node root;
        descend(root, 0);
    }

private:
    struct Node {
        RMat eq;
        RVec eqb;
        RMat ineq;
        RVec ineqb;
        std::vector<std::size_t> anchor; // one chosen item per processed component
    };

    RVec diff(const SupportItem& a, const SupportItem& b) const
    {
        RVec r(D_);
        for (std::size_t j = 0; j < D_; ++j)
            r[j] = a.u[j] - b.u[j];
        return r;
    }

    void descend(const Node& node, std::size_t k)
    {
        const auto& items = S_[k].items;
        for (std::size_t a = 0; a < items.size(); ++a)
            for (std::size_t b = a + 1; b < items.size(); ++b) {
                Node child = node;
                // v_a + u_a.w = v_b + u_b.w <= v_c + u_c.w
                child.eq.push_back(diff(items[a], items[b]));
                child.eqb.push_back(items[b].v - items[a].v);
                for (std::size_t c = 0; c < items.size(); ++c) {
                    if (c == a || c == b)
                        continue;
                    child.ineq.push_back(diff(items[a], items[c]));
                    child.ineqb.push_back(items[c].v - items[a].v);
                }
                child.anchor.push_back(a);
                visit(std::move(child), k);
            }
    }

    /// Inequalities in hull coordinates z, with w = w0 + sum z_i basis_i. Rows are scaled so
    /// their first nonzero entry is +-1 and only the tightest copy is kept. False if some
    /// constant row is violated.
    bool reduce(const Node& node, const AffineHull& hull, RMat& G, RVec& h, std::vector<std::size_t>& origin) const
    {
        std::map<RVec, std::pair<Rational, std::size_t>> rows;
        for (std::size_t i = 0; i < node.ineq.size(); ++i) {
            RVec row;
            for (const auto& v : hull.basis)
                row.push_back(dot(node.ineq[i], v));
            Rational rhs = node.ineqb[i] - dot(node.ineq[i], hull.w0);
            auto lead = std::find_if(row.begin(), row.end(), [](const Rational& x) { return x != 0; });
            if (lead == row.end()) {
                if (rhs < 0)
                    return false;
                continue;
            }
            const Rational scale = abs(*lead);
            for (auto& x : row)
                x /= scale;
            rhs /= scale;
            auto [it, fresh] = rows.try_emplace(std::move(row), rhs, i);
            if (!fresh && rhs < it->second.first)
                it->second = {rhs, i};
        }
        for (auto& [row, val] : rows) {
            G.push_back(row);
            h.push_back(val.first);
            origin.push_back(val.second);
        }
        return true;
    }

    void visit(Node node, std::size_t k)
    {
        ++out_.nodes;
        auto hull = affine_solve(node.eq, node.eqb, D_);
        if (!hull)
            return;
        RMat G;
        RVec h;
        std::vector<std::size_t> origin;
        if (!reduce(node, *hull, G, h, origin))
            return;
        if (!G.empty()) {
            ++out_.lp_calls;
            if (!lp_feasible(G, h))
                return;
            ++out_.lp_calls;
            const auto implicit = implicit_equalities(G, h);
            if (!implicit)
                return;
            if (!implicit->empty()) {
                for (auto r : *implicit) {
                    node.eq.push_back(node.ineq[origin[r]]);
                    node.eqb.push_back(node.ineqb[origin[r]]);
                }
                hull = affine_solve(node.eq, node.eqb, D_);
                G.clear();
                h.clear();
                origin.clear();
                if (!hull || !reduce(node, *hull, G, h, origin))
                    throw std::logic_error("implicit equalities changed feasibility");
            }
        }
        // The cell is determined by the items minimal on its whole affine hull.
        std::vector<std::vector<std::size_t>> tied;
        for (std::size_t j = 0; j <= k; ++j) {
            const auto& items = S_[j].items;
            const SupportItem& a = items[node.anchor[j]];
            std::vector<std::size_t> T;
            for (std::size_t c = 0; c < items.size(); ++c) {
                const RVec d = diff(items[c], a);
                bool flat = items[c].v - a.v + dot(d, hull->w0) == 0;
                for (const auto& v : hull->basis)
                    flat = flat && dot(d, v) == 0;
                if (flat)
                    T.push_back(c);
            }
            tied.push_back(std::move(T));
        }
        if (!seen_.insert(tied).second)
            return;
        if (k + 1 < S_.size()) {
            descend(node, k + 1);
            return;
        }
        out_.cells.push_back(make_cell(*hull, G, h, std::move(tied)));
    }

    TropicalCell make_cell(const AffineHull& hull, const RMat& G, const RVec& h,
                           std::vector<std::vector<std::size_t>> tied)
    {
        TropicalCell cell;
        cell.tied = std::move(tied);
        cell.dimension = hull.basis.size();
        cell.sample = hull.w0;
        const std::size_t r = hull.basis.size();
        for (std::size_t i = 0; i < D_; ++i) {
            RVec c(r);
            bool constant = true;
            for (std::size_t a = 0; a < r; ++a) {
                c[a] = hull.basis[a][i];
                constant = constant && c[a] == 0;
            }
            if (constant) {
                cell.lower.push_back(hull.w0[i]);
                cell.upper.push_back(hull.w0[i]);
                continue;
            }
            for (int sign : {1, -1}) {
                RVec cs = c;
                for (auto& v : cs)
                    v *= sign;
                ++out_.lp_calls;
                const LpResult res = lp_maximize(cs, G, h);
                std::optional<Rational> bound;
                if (res.status == LpStatus::optimal) {
                    bound = hull.w0[i] + sign * res.value;
                } else if (res.status == LpStatus::unbounded && !cell.ray) {
                    TropicalPoint dir(D_, Rational(0));
                    for (std::size_t a = 0; a < r; ++a)
                        for (std::size_t j = 0; j < D_; ++j)
                            dir[j] += res.ray[a] * hull.basis[a][j];
                    cell.ray = std::move(dir);
                }
                if (!bound)
                    cell.bounded = false;
                (sign > 0 ? cell.upper : cell.lower).push_back(bound);
                if (res.status != LpStatus::infeasible) {
                    // Keep a point where the coordinate is extreme as a sample.
                    TropicalPoint p = hull.w0;
                    for (std::size_t a = 0; a < r; ++a)
                        for (std::size_t j = 0; j < D_; ++j)
                            p[j] += res.x[a] * hull.basis[a][j];
                    if (std::any_of(p.begin(), p.end(), [](const Rational& x) { return x != 0; }))
                        cell.sample = std::move(p);
                }
            }
        }
        return cell;
    }

    const std::vector<TropicalSupport>& S_;
    std::size_t D_;
    Prevariety& out_;
    std::set<std::vector<std::vector<std::size_t>>> seen_;
};

} // namespace detail

/// Prevariety of the given supports (one per component, processed in order).
inline Prevariety prevariety(const std::vector<TropicalSupport>& supports)
{
    Prevariety out;
    if (supports.empty())
        return out;
    detail::CellSearch(supports, out).run();
    out.is_origin_only = !out.cells.empty();
    for (const auto& c : out.cells) {
        if (!c.bounded) {
            out.points_bounded = false;
            if (!out.ray_witness)
                out.ray_witness = c.ray;
        }
        if (!c.is_origin()) {
            out.is_origin_only = false;
            TropicalPoint p = c.sample;
            if (std::all_of(p.begin(), p.end(), [](const Rational& x) { return x == 0; }) && c.ray)
                for (std::size_t j = 0; j < p.size(); ++j)
                    p[j] += (*c.ray)[j];
            if (!out.nonzero_point)
                out.nonzero_point = std::move(p);
        }
    }
    return out;
}

/// Prevariety of the residual system. With theorem_mode every d_k must be nonzero.
inline Prevariety prevariety(const ProblemSpec& spec, bool theorem_mode = true)
{
    if (theorem_mode)
        check_theorem_hypothesis(spec);
    Prevariety out = prevariety(symbolic_support(spec));
    out.theorem_mode = theorem_mode;
    return out;
}

} // namespace qqtrop
