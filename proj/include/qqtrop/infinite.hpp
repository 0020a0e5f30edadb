#pragma once

// Solutions of the t = 0 system: splits of the Lambda root multiset.

#include "qqtrop/systems.hpp"

#include <algorithm>
#include <cstddef>
#include <functional>
#include <tuple>
#include <vector>

namespace qqtrop {

struct Classification {
    Tier tier = Tier::generic;
    std::size_t l = 0;
};

/// Genericity of the concatenated shift multiset b: generic iff all entries are distinct.
inline Classification classify_shifts(const std::vector<Scalar>& b)
{
    Classification c;
    c.l = count_distinct(b);
    c.tier = c.l == b.size() ? Tier::generic : Tier::degenerate;
    return c;
}

/// Classifies over x0 and y0 as given (the differential convention).
inline Classification classify_solution(const InfiniteSolution& sol)
{
    std::vector<Scalar> b = sol.x0;
    b.insert(b.end(), sol.y0.begin(), sol.y0.end());
    return classify_shifts(b);
}

/// Mode-aware classification: in difference mode the plus side enters as x0 / q.
inline Classification classify_solution(const InfiniteSolution& sol, const ProblemSpec& spec)
{
    if (spec.mode == Mode::differential)
        return classify_solution(sol);
    std::vector<Scalar> b;
    for (const auto& x : sol.x0)
        b.push_back(x / spec.q);
    b.insert(b.end(), sol.y0.begin(), sol.y0.end());
    return classify_shifts(b);
}

/// Builds a solution from the plus-side split S of the Lambda shifts.
inline InfiniteSolution make_infinite_solution(const ProblemSpec& spec, std::vector<Scalar> split,
                                               std::vector<Scalar> rest)
{
    std::sort(split.begin(), split.end());
    std::sort(rest.begin(), rest.end());
    InfiniteSolution sol;
    sol.split = split;
    sol.y0 = std::move(rest);
    for (const auto& a : split)
        sol.x0.push_back(spec.mode == Mode::difference ? spec.q * a : a);
    std::sort(sol.x0.begin(), sol.x0.end());
    const Classification c = classify_solution(sol, spec);
    sol.l = c.l;
    sol.tier = c.tier;
    if (spec.mode == Mode::difference)
        for (const auto& x : sol.x0)
            if (std::find(sol.y0.begin(), sol.y0.end(), x) != sol.y0.end())
                sol.scaled_overlap = true;
    return sol;
}

/// The identity the solution must satisfy, re-verified by polynomial multiplication.
inline bool satisfies_infinite_system(const InfiniteSolution& sol, const ProblemSpec& spec)
{
    const Poly<Scalar> P = poly_from_shifts(sol.x0);
    const Poly<Scalar> Q = poly_from_shifts(sol.y0);
    if (spec.mode == Mode::differential)
        return P * Q == spec.lambda.lambda();
    return P.dilate(spec.q) * Q * pow(spec.q, -spec.m) == spec.lambda.lambda();
}

/// One solution per size-m sub-multiset of the Lambda shifts, sorted by (x0, y0).
inline std::vector<InfiniteSolution> enumerate_infinite_solutions(const ProblemSpec& spec)
{
    if (spec.lambda.degree() != spec.m + spec.n)
        throw SpecError("degree_mismatch", "deg Lambda != m + n");
    const auto& sh = spec.lambda.shifts;
    std::vector<InfiniteSolution> out;
    std::vector<int> take(sh.size(), 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
        if (i == sh.size()) {
            if (left != 0)
                return;
            std::vector<Scalar> split, rest;
            for (std::size_t k = 0; k < sh.size(); ++k)
                for (int j = 0; j < sh[k].mult; ++j)
                    (j < take[k] ? split : rest).push_back(sh[k].a);
            out.push_back(make_infinite_solution(spec, std::move(split), std::move(rest)));
            return;
        }
        for (int c = std::min(left, sh[i].mult); c >= 0; --c) {
            take[i] = c;
            rec(i + 1, left - c);
        }
        take[i] = 0;
    };
    rec(0, spec.m);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return std::tie(a.x0, a.y0) < std::tie(b.x0, b.y0);
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// Solutions whose scaled plus side coincides with some minus-side shift.
inline std::size_t count_scaled_overlaps(const std::vector<InfiniteSolution>& sols)
{
    return static_cast<std::size_t>(
        std::count_if(sols.begin(), sols.end(), [](const auto& s) { return s.scaled_overlap; }));
}

} // namespace qqtrop
