#include "qqtrop/infinite.hpp"
#include "qqtrop/systems.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <random>

using namespace qqtrop;

namespace {

ProblemSpec make_spec(Mode mode, std::vector<ShiftMultiplicity> shifts, int m, int n, long K = 3,
                      Scalar q = Scalar(3))
{
    ProblemSpec s;
    s.mode = mode;
    s.lambda = MasterData::from_shifts(std::move(shifts));
    s.m = m;
    s.n = n;
    s.K = K;
    s.q = q;
    return s;
}

Series T(std::vector<Scalar> c) { return Series::from_t_coeffs(c, Series::kExact); }

CandidatePoint constant_point(const std::vector<Scalar>& x, const std::vector<Scalar>& y)
{
    CandidatePoint p;
    for (const auto& v : x)
        p.x.emplace_back(v);
    for (const auto& v : y)
        p.y.emplace_back(v);
    return p;
}

/// Elementary symmetric polynomial e_k of the given values, by direct subset enumeration.
Scalar elementary(const std::vector<Scalar>& v, int k)
{
    Scalar total(0);
    const std::size_t n = v.size();
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (std::popcount(mask) != k)
            continue;
        Scalar p(1);
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i))
                p *= v[i];
        total += p;
    }
    return total;
}

Scalar small_scalar(std::mt19937& rng)
{
    std::uniform_int_distribution<int> num(-6, 6), den(1, 3);
    Rational r(num(rng), den(rng));
    r.canonicalize();
    return Scalar(r, Rational(num(rng) % 2));
}

} // namespace

TEST(Residual, QqExamples)
{
    auto spec = make_spec(Mode::differential, {{1, 1}, {2, 1}}, 1, 1);
    auto r = evaluate_qq_residual(constant_point({1}, {2}), spec);
    ASSERT_EQ(r.size(), 2u);
    EXPECT_TRUE(r[0].is_zero());
    EXPECT_EQ(r[1], T({0, -1}));

    CandidatePoint p;
    p.x = {T({1, 1})};
    p.y = {T({2, -1})};
    r = evaluate_qq_residual(p, spec);
    EXPECT_TRUE(r[0].is_zero());
    EXPECT_EQ(r[1], T({0, 0, 1}));
    EXPECT_THROW(evaluate_QQ_residual(p, spec), std::invalid_argument);
}

TEST(Residual, QqExactSolutionVanishes)
{
    // x^2 - (3+2t)x + 3t + 2 = 0 with x(0) = 1, written to order 4.
    auto spec = make_spec(Mode::differential, {{1, 1}, {2, 1}}, 1, 1);
    CandidatePoint p;
    p.x = {Series::from_t_coeffs({1, 1, -1, 0, 1}, 4)};
    p.y = {Series::from_t_coeffs({2, -1, 1, 0, -1}, 4)};
    for (const auto& c : evaluate_qq_residual(p, spec)) {
        EXPECT_TRUE(c.is_zero()) << c;
        EXPECT_EQ(c.order(), 4);
    }
}

TEST(Residual, QQExamples)
{
    auto spec = make_spec(Mode::difference, {{1, 1}, {2, 1}}, 1, 1);
    auto r = evaluate_QQ_residual(constant_point({3}, {2}), spec);
    for (const auto& c : r)
        EXPECT_TRUE(c.t_coeff(0).is_zero());
    auto legal = evaluate_QQ_residual(constant_point({0}, {2}), spec);
    EXPECT_EQ(legal.size(), 2u);
    ProblemSpec bad = spec;
    bad.q = Scalar(0);
    EXPECT_THROW(evaluate_QQ_residual(constant_point({3}, {2}), bad), SpecError);
}

TEST(Residual, QQSecondComponentFactors)
{
    std::mt19937 rng(3);
    for (int trial = 0; trial < 5; ++trial) {
        const Scalar q = Scalar(2 + trial);
        auto spec = make_spec(Mode::difference, {{1, 1}, {Scalar(2 + trial), 1}}, 1, 1, 3, q);
        auto f = symbolic_residual(spec);
        MPoly x = MPoly::var(0), y = MPoly::var(1), t = MPoly::var(2);
        const Scalar d2 = spec.lambda.d[1];
        EXPECT_EQ(f[1], (MPoly(1) - t) * (x * y - MPoly(q * d2)));
    }
}

TEST(Residual, ReduceAtZeroToElementarySymmetric)
{
    std::mt19937 rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        const int m = static_cast<int>(rng() % 3), n = 1 + static_cast<int>(rng() % 3);
        std::vector<ShiftMultiplicity> sh;
        for (int k = 1; k <= m + n; ++k)
            sh.push_back({Scalar(k + static_cast<int>(rng() % 3) * 10), 1});
        const Mode mode = trial % 2 ? Mode::difference : Mode::differential;
        auto spec = make_spec(mode, sh, m, n, 2, Scalar(Rational(5, 2)));
        std::vector<Scalar> x, y;
        for (int i = 0; i < m; ++i)
            x.push_back(small_scalar(rng));
        for (int j = 0; j < n; ++j)
            y.push_back(small_scalar(rng));
        auto r = residual_at_zero(spec, x, y);
        std::vector<Scalar> b;
        const Scalar q = spec.q;
        for (const auto& v : x)
            b.push_back(mode == Mode::difference ? v / q : v);
        b.insert(b.end(), y.begin(), y.end());
        const Scalar scale = mode == Mode::difference ? pow(q, m) : Scalar(1);
        for (int k = 1; k <= m + n; ++k)
            EXPECT_EQ(r[static_cast<std::size_t>(k - 1)],
                      scale * (elementary(b, k) - spec.lambda.d[static_cast<std::size_t>(k - 1)]));
    }
}

TEST(Residual, PermutationInvariant)
{
    auto spec = make_spec(Mode::differential, {{1, 1}, {2, 1}, {3, 1}, {5, 1}}, 2, 2);
    CandidatePoint p;
    p.x = {T({1, 2, 3}), T({-1, Scalar(0, 1)})};
    p.y = {T({4, 0, 1}), T({Rational(1, 2), 7})};
    auto base = evaluate_qq_residual(p, spec);
    std::swap(p.x[0], p.x[1]);
    std::swap(p.y[0], p.y[1]);
    EXPECT_EQ(evaluate_qq_residual(p, spec), base);
}

TEST(Residual, LinearAndProductIdentities)
{
    for (int m = 0; m <= 3; ++m)
        for (int n = 0; n <= 3; ++n) {
            if (m + n == 0)
                continue;
            std::vector<ShiftMultiplicity> sh;
            for (int k = 1; k <= m + n; ++k)
                sh.push_back({k, 1});
            auto qq = make_spec(Mode::differential, sh, m, n);
            auto f = symbolic_residual(qq);
            MPoly lin(Scalar(n - m));
            lin *= MPoly::var(static_cast<std::size_t>(m + n));
            for (int j = 0; j < m + n; ++j)
                lin += MPoly::var(static_cast<std::size_t>(j));
            lin -= MPoly(qq.lambda.d[0]);
            EXPECT_EQ(f[0], lin) << m << "," << n;

            auto QQ = make_spec(Mode::difference, sh, m, n, 2, Scalar(3));
            auto g = symbolic_residual(QQ);
            MPoly t = MPoly::var(static_cast<std::size_t>(m + n));
            MPoly prod(1);
            for (int j = 0; j < m + n; ++j)
                prod *= MPoly::var(static_cast<std::size_t>(j));
            const Scalar q = QQ.q;
            MPoly want = (MPoly(1) - t) * prod -
                         (MPoly(pow(q, m)) - t * pow(q, n)) * QQ.lambda.d.back();
            EXPECT_EQ(g.back(), want) << m << "," << n;
        }
}

TEST(Residual, InfiniteSolutionsHavePositiveValuation)
{
    for (Mode mode : {Mode::differential, Mode::difference}) {
        auto spec = make_spec(mode, {{1, 2}, {2, 1}, {Scalar(0, 1), 1}}, 2, 2);
        for (const auto& sol : enumerate_infinite_solutions(spec)) {
            for (const auto& r : evaluate_residual(constant_point(sol.x0, sol.y0), spec)) {
                auto v = r.valuation();
                if (v) {
                    EXPECT_GE(*v, 1);
                }
            }
        }
    }
}

TEST(Jacobian, Examples)
{
    auto spec = make_spec(Mode::differential, {{1, 1}, {2, 1}}, 1, 1);
    InfiniteSolution sol = make_infinite_solution(spec, {1}, {2});
    auto j = jacobian_at_zero(sol, spec);
    EXPECT_EQ(j.J, (Matrix<Scalar>{{1, 1}, {2, 1}}));
    EXPECT_EQ(j.rank, 2u);

    auto sq = make_spec(Mode::differential, {{1, 2}}, 1, 1);
    auto j2 = jacobian_at_zero(make_infinite_solution(sq, {1}, {1}), sq);
    EXPECT_EQ(j2.J, (Matrix<Scalar>{{1, 1}, {1, 1}}));
    EXPECT_EQ(j2.rank, 1u);
    EXPECT_EQ(j2.l, 1u);

    auto dq = make_spec(Mode::difference, {{1, 1}, {2, 1}}, 1, 1);
    auto j3 = jacobian_at_zero(make_infinite_solution(dq, {1}, {2}), dq);
    EXPECT_EQ(j3.J, (Matrix<Scalar>{{Rational(1, 3), 1}, {Rational(2, 3), 1}}));
    EXPECT_EQ(j3.rank, 2u);

    InfiniteSolution wrong;
    wrong.x0 = {Scalar(5)};
    wrong.y0 = {Scalar(2)};
    EXPECT_THROW(jacobian_at_zero(wrong, spec), std::invalid_argument);
}

TEST(Jacobian, FormulaMatchesDerivativeAndRankEqualsDistinctCount)
{
    const std::vector<std::vector<ShiftMultiplicity>> lambdas = {
        {{1, 1}, {2, 1}, {3, 1}},
        {{1, 2}, {2, 1}},
        {{1, 3}},
        {{1, 2}, {Scalar(0, 1), 2}},
        {{-1, 1}, {2, 2}, {4, 1}},
    };
    for (const auto& sh : lambdas) {
        auto base = make_spec(Mode::differential, sh, 0, 0);
        const int D = base.lambda.degree();
        for (int m = 0; m <= D; ++m) {
            for (Mode mode : {Mode::differential, Mode::difference}) {
                auto spec = make_spec(mode, sh, m, D - m, 2, Scalar(Rational(7, 3)));
                for (const auto& sol : enumerate_infinite_solutions(spec)) {
                    auto j = jacobian_at_zero(sol, spec);
                    EXPECT_EQ(j.rank, j.l);
                    EXPECT_EQ(j.l, sol.l);
                    if (mode == Mode::differential) {
                        EXPECT_EQ(j.J, residual_jacobian(spec, sol.x0, sol.y0));
                    }
                }
            }
        }
    }
}

TEST(Support, Examples)
{
    auto spec = make_spec(Mode::differential, {{1, 1}, {2, 1}}, 1, 1);
    auto s = symbolic_support(spec);
    ASSERT_EQ(s.size(), 2u);
    auto has = [](const TropicalSupport& t, std::vector<int> u, int v) {
        for (const auto& it : t.items)
            if (it.u == u)
                return it.v == v;
        return false;
    };
    EXPECT_EQ(s[1].items.size(), 4u);
    EXPECT_TRUE(has(s[1], {1, 1}, 0));
    EXPECT_TRUE(has(s[1], {1, 0}, 1));
    EXPECT_TRUE(has(s[1], {0, 1}, 1));
    EXPECT_TRUE(has(s[1], {0, 0}, 0));
    EXPECT_EQ(s[0].items.size(), 3u);
    EXPECT_TRUE(has(s[0], {1, 0}, 0));
    EXPECT_TRUE(has(s[0], {0, 1}, 0));
    EXPECT_TRUE(has(s[0], {0, 0}, 0));

    auto dq = make_spec(Mode::difference, {{1, 1}, {2, 1}}, 1, 1);
    auto g = symbolic_support(dq);
    EXPECT_EQ(g[1].items.size(), 2u);
    EXPECT_TRUE(has(g[1], {1, 1}, 0));
    EXPECT_TRUE(has(g[1], {0, 0}, 0));

    auto big = make_spec(Mode::differential, {{1, 7}}, 4, 3);
    EXPECT_THROW(symbolic_support(big), SpecError);
}

TEST(Spec, ValidationCodes)
{
    auto code_of = [](const ProblemSpec& s, bool strict = true) -> std::string {
        try {
            s.validate(strict);
        } catch (const SpecError& e) {
            return e.code;
        }
        return "";
    };
    auto ok = make_spec(Mode::differential, {{1, 1}, {2, 1}}, 1, 1);
    EXPECT_EQ(code_of(ok), "");
    auto origin = make_spec(Mode::differential, {{0, 1}, {2, 1}}, 1, 1);
    EXPECT_EQ(code_of(origin), "lambda_root_at_origin");
    EXPECT_EQ(code_of(origin, false), "");
    EXPECT_EQ(code_of(make_spec(Mode::differential, {{1, 1}}, 1, 1)), "degree_mismatch");
    EXPECT_EQ(code_of(make_spec(Mode::difference, {{1, 1}, {2, 1}}, 1, 1, 3, Scalar(0))), "q_zero");
    EXPECT_EQ(code_of(make_spec(Mode::difference, {{1, 1}, {2, 1}}, 1, 1, 3, Scalar(-1))),
              "q_root_of_unity");
    EXPECT_EQ(code_of(make_spec(Mode::difference, {{1, 1}, {2, 1}}, 1, 1, 3, Scalar(0, 1))),
              "q_root_of_unity");
    auto dup = ok;
    dup.lambda.shifts.push_back({1, 1});
    EXPECT_EQ(code_of(dup), "duplicate_shift");
    auto neg = ok;
    neg.K = -1;
    EXPECT_EQ(code_of(neg), "negative_order");
    auto tampered = ok;
    tampered.lambda.d[0] = Scalar(4);
    EXPECT_EQ(code_of(tampered), "lambda_coeff_mismatch");
    EXPECT_EQ(ok.lambda.d, (std::vector<Scalar>{3, 2}));
}

TEST(Infinite, EnumerationExamples)
{
    auto spec = make_spec(Mode::differential, {{1, 1}, {2, 1}}, 1, 1);
    auto sols = enumerate_infinite_solutions(spec);
    ASSERT_EQ(sols.size(), 2u);
    EXPECT_EQ(sols[0].x0, std::vector<Scalar>{1});
    EXPECT_EQ(sols[0].y0, std::vector<Scalar>{2});
    EXPECT_EQ(sols[1].x0, std::vector<Scalar>{2});
    EXPECT_EQ(sols[1].y0, std::vector<Scalar>{1});

    auto sq = enumerate_infinite_solutions(make_spec(Mode::differential, {{1, 2}}, 1, 1));
    ASSERT_EQ(sq.size(), 1u);
    EXPECT_EQ(sq[0].tier, Tier::degenerate);

    auto dq = enumerate_infinite_solutions(make_spec(Mode::difference, {{1, 1}, {2, 1}}, 1, 1));
    ASSERT_EQ(dq.size(), 2u);
    EXPECT_EQ(dq[0].x0, std::vector<Scalar>{3});
    EXPECT_EQ(dq[0].y0, std::vector<Scalar>{2});
    EXPECT_EQ(dq[1].x0, std::vector<Scalar>{6});
    EXPECT_EQ(dq[1].y0, std::vector<Scalar>{1});
}

TEST(Infinite, Classification)
{
    InfiniteSolution a;
    a.x0 = {1};
    a.y0 = {2};
    EXPECT_EQ(classify_solution(a).tier, Tier::generic);
    EXPECT_EQ(classify_solution(a).l, 2u);
    a.y0 = {1};
    EXPECT_EQ(classify_solution(a).tier, Tier::degenerate);
    EXPECT_EQ(classify_solution(a).l, 1u);
    a.x0 = {1, 1};
    a.y0 = {2};
    EXPECT_EQ(classify_solution(a).tier, Tier::degenerate);
    EXPECT_EQ(classify_solution(a).l, 2u);
}

TEST(Infinite, CountsIdentitiesAndSymmetry)
{
    for (int D = 1; D <= 6; ++D) {
        std::vector<ShiftMultiplicity> sh;
        for (int k = 1; k <= D; ++k)
            sh.push_back({Scalar(Rational(k * k, 2)), 1});
        for (int m = 0; m <= D; ++m) {
            for (Mode mode : {Mode::differential, Mode::difference}) {
                auto spec = make_spec(mode, sh, m, D - m, 2, Scalar(5));
                auto sols = enumerate_infinite_solutions(spec);
                long binom = 1;
                for (int i = 0; i < m; ++i)
                    binom = binom * (D - i) / (i + 1);
                EXPECT_EQ(static_cast<long>(sols.size()), binom);
                for (const auto& s : sols) {
                    EXPECT_TRUE(satisfies_infinite_system(s, spec));
                    EXPECT_EQ(s.tier, Tier::generic);
                }
                if (mode == Mode::differential && 2 * m == D) {
                    for (const auto& s : sols) {
                        InfiniteSolution swapped;
                        swapped.x0 = s.y0;
                        swapped.y0 = s.x0;
                        EXPECT_NE(std::find(sols.begin(), sols.end(), swapped), sols.end());
                    }
                }
            }
        }
    }
}

TEST(Infinite, ScaledOverlapReported)
{
    // q = 2: the split {1} maps to x0 = 2, which is also a minus-side shift.
    auto spec = make_spec(Mode::difference, {{1, 1}, {2, 1}}, 1, 1, 2, Scalar(2));
    auto sols = enumerate_infinite_solutions(spec);
    ASSERT_EQ(sols.size(), 2u);
    EXPECT_TRUE(sols[0].scaled_overlap);
    EXPECT_EQ(sols[0].tier, Tier::generic);
    EXPECT_EQ(count_scaled_overlaps(sols), 1u);
}
