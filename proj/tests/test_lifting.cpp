#include "qqtrop/infinite.hpp"
#include "qqtrop/lifting.hpp"
#include "qqtrop/numeric_oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace qqtrop;

namespace {

ProblemSpec make_spec(Mode mode, std::vector<ShiftMultiplicity> shifts, int m, int n, long K,
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

std::vector<Scalar> ints(std::initializer_list<int> v)
{
    std::vector<Scalar> out;
    for (int x : v)
        out.emplace_back(x);
    return out;
}

InfiniteSolution base_with_split(const ProblemSpec& spec, const std::vector<Scalar>& x0)
{
    for (const auto& s : enumerate_infinite_solutions(spec))
        if (s.split == x0)
            return s;
    throw std::logic_error("no such split");
}

} // namespace

TEST(Lifting, QuadraticClosedForm)
{
    const auto spec = make_spec(Mode::differential, {{Scalar(1), 1}, {Scalar(2), 1}}, 1, 1, 4);
    const auto sol = base_with_split(spec, ints({1}));
    const auto ls = lift_newton(sol, spec);
    EXPECT_EQ(ls.N, 1);
    EXPECT_EQ(ls.method, "newton");
    const auto& x = ls.point.x[0];
    const auto want = ints({1, 1, -1, 0, 1});
    for (long k = 0; k <= 4; ++k)
        EXPECT_EQ(x.t_coeff(k), want[static_cast<std::size_t>(k)]) << k;
    for (long k = 0; k <= 4; ++k)
        EXPECT_EQ(ls.point.y[0].t_coeff(k), (k == 0 ? Scalar(3) : Scalar(0)) - x.t_coeff(k));
    EXPECT_TRUE(ls.cert.passes);

    // Independent oracle: x solves x^2 - (3 + 2t) x + 3t + 2 = 0 through t^4.
    const Series t = Series::t(1);
    const Series r = x * x - (Series(3) + t * Scalar(2)) * x + t * Scalar(3) + Series(2);
    for (long k = 0; k <= 4; ++k)
        EXPECT_TRUE(r.coeff(k).is_zero()) << k;
}

TEST(Lifting, OrderZeroIsTheBase)
{
    const auto spec = make_spec(Mode::differential, {{Scalar(1), 1}, {Scalar(2), 1}}, 1, 1, 0);
    const auto sol = base_with_split(spec, ints({2}));
    const auto ls = lift_newton(sol, spec);
    EXPECT_EQ(ls.point.x[0].coeffs(), ints({2}));
    EXPECT_EQ(ls.point.y[0].coeffs(), ints({1}));
    EXPECT_TRUE(ls.cert.passes);
}

TEST(Lifting, CertificateValuations)
{
    const auto spec = make_spec(Mode::differential, {{Scalar(1), 1}, {Scalar(2), 1}}, 1, 1, 4);
    const auto ls = lift_newton(base_with_split(spec, ints({1})), spec);
    const auto c1 = truncate_lift(ls, spec, 1).cert;
    ASSERT_TRUE(c1.valuation);
    EXPECT_EQ(*c1.valuation, Rational(2));
    EXPECT_TRUE(c1.passes);
    const auto c0 = truncate_lift(ls, spec, 0).cert;
    ASSERT_TRUE(c0.valuation);
    EXPECT_EQ(*c0.valuation, Rational(1));
    EXPECT_TRUE(c0.passes);
}

TEST(Lifting, TruncationIsMonotone)
{
    const auto spec = make_spec(Mode::differential, {{Scalar(1), 1}, {Scalar(2), 1}, {Scalar(4), 1}}, 2,
                                1, 5);
    for (const auto& sol : enumerate_infinite_solutions(spec)) {
        const auto ls = lift_newton(sol, spec);
        for (long K = 0; K <= spec.K; ++K) {
            const auto c = truncate_lift(ls, spec, K).cert;
            EXPECT_TRUE(c.passes) << K;
            if (c.valuation) {
                EXPECT_GE(*c.valuation, Rational(K + 1));
            }
        }
    }
}

TEST(Lifting, DifferenceModeProductIdentity)
{
    // m = n = 1: xy = q d_2 holds exactly at every order.
    const auto spec = make_spec(Mode::difference, {{Scalar(1), 1}, {Scalar(2), 1}}, 1, 1, 4);
    for (const auto& sol : enumerate_infinite_solutions(spec)) {
        const auto ls = lift_newton(sol, spec);
        ASSERT_TRUE(ls.cert.passes);
        const Series prod = ls.point.x[0] * ls.point.y[0];
        for (long k = 0; k <= spec.K; ++k)
            EXPECT_EQ(prod.coeff(k), k == 0 ? spec.q * spec.lambda.d[1] : Scalar(0)) << k;
        for (long k = 0; k <= spec.K; ++k)
            EXPECT_EQ(ls.alpha.coeff(k), pow(spec.q, -spec.m + (spec.n - spec.m) * k)) << k;
    }
}

TEST(Lifting, DifferentialLinearIdentity)
{
    const auto spec = make_spec(Mode::differential,
                                {{Scalar(-1), 1}, {Scalar(1), 1}, {Scalar(2), 1}, {Scalar(5), 1}}, 1, 3, 4);
    for (const auto& sol : enumerate_infinite_solutions(spec)) {
        const auto ls = lift_newton(sol, spec);
        Series e1;
        for (const auto* v : {&ls.point.x, &ls.point.y})
            for (const auto& s : *v)
                e1 = e1 + s;
        EXPECT_EQ(e1.coeff(0), spec.lambda.d[0]);
        EXPECT_EQ(e1.coeff(1), Scalar(-(spec.n - spec.m)));
        for (long k = 2; k <= spec.K; ++k)
            EXPECT_TRUE(e1.coeff(k).is_zero());
    }
}

TEST(Lifting, DistinctBasesGiveDistinctLifts)
{
    const auto spec = make_spec(Mode::difference, {{Scalar(1), 1}, {Scalar(2), 1}, {Scalar(-3), 1}}, 1, 2,
                                3, Scalar(2));
    std::vector<LiftedSolution> lifts;
    for (const auto& sol : enumerate_infinite_solutions(spec))
        lifts.push_back(lift_newton(sol, spec));
    for (std::size_t a = 0; a < lifts.size(); ++a)
        for (std::size_t b = a + 1; b < lifts.size(); ++b)
            EXPECT_FALSE(detail::same_branch(lifts[a], lifts[b]));
}

TEST(Lifting, DoubleRootBranches)
{
    const auto spec = make_spec(Mode::differential, {{Scalar(1), 2}}, 1, 1, 4);
    const auto sols = enumerate_infinite_solutions(spec);
    ASSERT_EQ(sols.size(), 1u);
    EXPECT_THROW(lift_newton(sols[0], spec), LiftError);
    const auto branches = lift_ramified(sols[0], spec, spec.effective_N_max());
    ASSERT_EQ(branches.size(), 2u);
    bool saw_constant = false, saw_moving = false;
    for (const auto& b : branches) {
        EXPECT_EQ(b.N, 1);
        EXPECT_TRUE(b.cert.identically_zero());
        const auto& x = b.point.x[0];
        const auto& y = b.point.y[0];
        if (x.coeff(1).is_zero()) {
            saw_constant = true;
            for (long k = 1; k <= spec.K; ++k)
                EXPECT_TRUE(x.coeff(k).is_zero() && y.coeff(k).is_zero());
        } else {
            saw_moving = true;
            EXPECT_EQ(x.coeff(1), Scalar(2));
            EXPECT_EQ(y.coeff(1), Scalar(-2));
            for (long k = 2; k <= spec.K; ++k)
                EXPECT_TRUE(x.coeff(k).is_zero() && y.coeff(k).is_zero());
        }
        for (long K = 0; K <= spec.K; ++K)
            EXPECT_TRUE(truncate_lift(b, spec, K).cert.identically_zero()) << K;
    }
    EXPECT_TRUE(saw_constant && saw_moving);
}

TEST(Lifting, GenericBaseDelegatesToNewton)
{
    const auto spec = make_spec(Mode::differential, {{Scalar(1), 1}, {Scalar(2), 1}}, 1, 1, 3);
    const auto sol = enumerate_infinite_solutions(spec).front();
    const auto r = lift_ramified(sol, spec, 2);
    ASSERT_EQ(r.size(), 1u);
    EXPECT_EQ(r[0].method, "newton");
}

TEST(Lifting, DegenerateBaseWithComplexBranch)
{
    // Lambda = (z+1)^2 (z+2), x0 = (1, 1), y0 = 2: x = 1 + t +- i t + ..., y = 2 - t + ...
    const auto spec = make_spec(Mode::differential, {{Scalar(1), 2}, {Scalar(2), 1}}, 2, 1, 3);
    const auto sol = base_with_split(spec, ints({1, 1}));
    EXPECT_EQ(sol.tier, Tier::degenerate);
    const auto branches = lift_ramified(sol, spec, spec.effective_N_max());
    ASSERT_EQ(branches.size(), 1u);
    const auto& b = branches[0];
    EXPECT_EQ(b.N, 1);
    EXPECT_TRUE(b.cert.passes);
    std::vector<Scalar> firsts{b.point.x[0].coeff(1), b.point.x[1].coeff(1)};
    std::sort(firsts.begin(), firsts.end());
    EXPECT_EQ(firsts, (std::vector<Scalar>{Scalar(1, -1), Scalar(1, 1)}));
    EXPECT_EQ(b.point.y[0].coeff(1), Scalar(-1));

    // Numeric oracle: deviations from the base scale like t^1.
    const auto slopes =
        numeric::fit_exponents(spec, {1.0, 1.0, 2.0}, {1e-2, 3e-3, 1e-3, 3e-4});
    for (double sl : slopes)
        EXPECT_NEAR(sl, 1.0, 0.1);
}

TEST(Lifting, IrrationalBranchesExceedBound)
{
    // (z+1)^3 with n = 0 forces cube roots of t with irrational coefficients.
    const auto spec = make_spec(Mode::differential, {{Scalar(1), 3}}, 3, 0, 3);
    const auto sol = enumerate_infinite_solutions(spec).front();
    try {
        lift_ramified(sol, spec, 3);
        ADD_FAILURE() << "expected failure";
    } catch (const LiftError& e) {
        EXPECT_EQ(e.code, "ramification_bound_exceeded");
        EXPECT_NE(std::string(e.what()).find("nodes="), std::string::npos);
    }
}

TEST(Lifting, OracleAgreesWithLifts)
{
    std::vector<ProblemSpec> specs{
        make_spec(Mode::differential, {{Scalar(1), 1}, {Scalar(2), 1}}, 1, 1, 4),
        make_spec(Mode::differential, {{Scalar(1), 1}, {Scalar(3), 1}, {Scalar(7), 1}}, 2, 1, 3),
    };
    for (const auto& spec : specs)
        for (const auto& sol : enumerate_infinite_solutions(spec)) {
            const auto ls = lift_newton(sol, spec);
            for (double t0 : {1e-2, 1e-3}) {
                const auto c = numeric::check_branch(ls, spec, t0);
                EXPECT_TRUE(c.agrees) << c.max_diff << " vs " << c.tolerance;
            }
        }
}

TEST(Lifting, OracleErrorDecaysAtTruncationOrder)
{
    // Coefficients here grow like 3^k, so only the decay rate is compared.
    const auto spec = make_spec(Mode::difference, {{Scalar(1), 1}, {Scalar(4), 1}}, 1, 1, 3, Scalar(3));
    for (const auto& sol : enumerate_infinite_solutions(spec)) {
        const auto ls = lift_newton(sol, spec);
        const auto a = numeric::check_branch(ls, spec, 1e-2);
        const auto b = numeric::check_branch(ls, spec, 1e-3);
        ASSERT_TRUE(a.converged && b.converged);
        EXPECT_NEAR(std::log10(a.max_diff / b.max_diff), spec.K + 1, 0.25);
    }
}

TEST(Lifting, NormalizeIndexReducesReramifiedLift)
{
    const auto spec = make_spec(Mode::differential, {{Scalar(1), 1}, {Scalar(2), 1}}, 1, 1, 2);
    const auto ls = lift_newton(enumerate_infinite_solutions(spec).front(), spec);
    LiftedSolution r = ls;
    for (auto* v : {&r.point.x, &r.point.y})
        for (auto& s : *v)
            s = s.reramify(2);
    r.N = 2;
    r.K = 5;
    const auto n = detail::normalize_index(r, spec);
    EXPECT_EQ(n.N, 1);
    EXPECT_EQ(n.K, 2);
    EXPECT_TRUE(detail::same_branch(n, ls));
}
