#include "cfdual/error.hpp"
#include "cfdual/eval.hpp"
#include "cfdual/jet.hpp"
#include "cfdual/jet_linalg.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace cfdual;

namespace {

using oracle::fd_partial;
using oracle::Real;

// Third partial: fourth-order stencil in axis a over the second-order
// difference in (b, c).
Real fd_partial3(const Expr& e, std::span<const double> p, std::size_t a, std::size_t b, std::size_t c)
{
    const Real h = 1e-3L;
    auto at = [&](Real d) {
        std::vector<double> q(p.begin(), p.end());
        q[a] += static_cast<double>(d);
        return fd_partial(e, q, {b, c});
    };
    return (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
}

TEST(Jet, SquareAtThree)
{
    const double p[] = {3.0};
    const Jet j = eval_jet(parse_expr("u1^2", 1), p, 2);
    EXPECT_DOUBLE_EQ(j.value(), 9.0);
    EXPECT_DOUBLE_EQ(j.partial({0}), 6.0);
    EXPECT_DOUBLE_EQ(j.partial({0, 0}), 2.0);
}

TEST(Jet, SineTaylorAtZero)
{
    const double p[] = {0.0};
    const Jet j = eval_jet(parse_expr("sin(u1)", 1), p, 3);
    EXPECT_DOUBLE_EQ(j.value(), 0.0);
    EXPECT_DOUBLE_EQ(j.partial({0}), 1.0);
    EXPECT_DOUBLE_EQ(j.partial({0, 0}), 0.0);
    EXPECT_DOUBLE_EQ(j.partial({0, 0, 0}), -1.0);
}

TEST(Jet, ExpOfProductMatchesFiniteDifferences)
{
    const Expr e = parse_expr("exp(u1*u2)", 2);
    const double p[] = {0.3, 0.7};
    const Jet j = eval_jet(e, p, 3);
    // Closed form of the partials as a second oracle.
    const double v = std::exp(0.21);
    EXPECT_NEAR(j.partial({0}), 0.7 * v, 1e-14);
    EXPECT_NEAR(j.partial({0, 1}), (1 + 0.21) * v, 1e-14);
    for (std::size_t a = 0; a < 2; ++a) {
        EXPECT_NEAR(j.partial({a}), static_cast<double>(fd_partial(e, p, {a}, 1e-4L)), 1e-6 * v);
        for (std::size_t b = 0; b < 2; ++b)
            EXPECT_NEAR(j.partial({a, b}), static_cast<double>(fd_partial(e, p, {a, b}, 1e-4L)), 1e-6 * v);
    }
}

TEST(Jet, MixedPartialsStoredOnce)
{
    const double p[] = {0.2, -0.4, 0.9};
    const Jet j = eval_jet(parse_expr("sin(u1*u2)*exp(u3) + u1^2*u2*u3", 3), p, 3);
    EXPECT_EQ(j.partial({0, 1, 2}), j.partial({2, 0, 1}));
    EXPECT_EQ(j.partial({0, 1}), j.partial({1, 0}));
    EXPECT_EQ(j.partial({1, 1, 0}), j.partial({0, 1, 1}));
}

TEST(Jet, LowerOrderIsPrefix)
{
    const Expr e = parse_expr("atan(u1 - u2^2)/(2 + cos(u2))", 2);
    const double p[] = {0.1, 0.6};
    const Jet hi = eval_jet(e, p, 5);
    const Jet lo = eval_jet(e, p, 2);
    ASSERT_LT(lo.size(), hi.size());
    for (std::size_t k = 0; k < lo.size(); ++k) EXPECT_EQ(lo.coefficients()[k], hi.coefficients()[k]);
    EXPECT_EQ(hi.truncated(2).size(), lo.size());
}

TEST(Jet, RandomExpressionsMatchFiniteDifferenceOracle)
{
    oracle::ExprGenerator gen(3, 42);
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> coord(-0.8, 0.8);
    int checked = 0;
    for (int i = 0; i < 100; ++i) {
        const Expr e = gen(3);
        const double p[] = {coord(rng), coord(rng), coord(rng)};
        const Jet j = eval_jet(e, p, 3);
        auto close = [&](double jet, Real fd, const char* what) {
            const double scale = std::max(1.0L, std::fabs(fd));
            EXPECT_NEAR(jet, static_cast<double>(fd), 1e-6 * scale) << what << " of " << to_string(e);
        };
        close(j.value(), oracle::reference_eval(e, p), "value");
        for (std::size_t a = 0; a < 3; ++a) {
            close(j.partial({a}), fd_partial(e, p, {a}), "first partial");
            for (std::size_t b = a; b < 3; ++b) {
                close(j.partial({a, b}), fd_partial(e, p, {a, b}), "second partial");
                for (std::size_t c = b; c < 3; ++c)
                    close(j.partial({a, b, c}), fd_partial3(e, p, a, b, c), "third partial");
            }
        }
        ++checked;
    }
    EXPECT_EQ(checked, 100);
}

TEST(Jet, EvaluationIsLinear)
{
    oracle::ExprGenerator gen(2, 99);
    const double p[] = {0.35, -0.25};
    for (int i = 0; i < 50; ++i) {
        const Expr e1 = gen(3), e2 = gen(3);
        const double a = 1.75, b = -0.5;
        const Jet lhs = eval_jet(Expr::number(a) * e1 + Expr::number(b) * e2, p, 3);
        const Jet rhs = a * eval_jet(e1, p, 3) + b * eval_jet(e2, p, 3);
        ASSERT_EQ(lhs.size(), rhs.size());
        for (std::size_t k = 0; k < lhs.size(); ++k) {
            const double s = std::max(1.0, std::abs(rhs.coefficients()[k]));
            EXPECT_NEAR(lhs.coefficients()[k], rhs.coefficients()[k], 1e-13 * s);
        }
    }
}

TEST(Jet, HighOrderPolynomialIsExact)
{
    const double p[] = {0.5, 2.0};
    const Jet j = eval_jet(parse_expr("u1^3*u2^2 + u1^6", 2), p, 6);
    EXPECT_DOUBLE_EQ(j.partial({0, 0, 0, 1, 1}), 12.0);
    EXPECT_DOUBLE_EQ(j.partial({0, 0, 0, 0, 0, 0}), 720.0);
    EXPECT_DOUBLE_EQ(j.partial({0, 0, 1}), 6 * 0.5 * 2 * 2.0);
}

TEST(Jet, DerivativeLowersOrder)
{
    const double p[] = {0.3, 0.4};
    const Jet j = eval_jet(parse_expr("sin(u1)*u2^2", 2), p, 3);
    const Jet d = j.derivative(0);
    EXPECT_EQ(d.order(), 2);
    EXPECT_NEAR(d.value(), std::cos(0.3) * 0.16, 1e-15);
    EXPECT_NEAR(d.partial({1, 1}), 2 * std::cos(0.3), 1e-15);
}

TEST(Jet, CompositionWithJetVariables)
{
    // u1 -> sin(v1 + v2) substituted into exp(u1).
    const double p[] = {0.2, 0.1};
    const std::vector<Jet> vars = {eval_jet(parse_expr("sin(u1 + u2)", 2), p, 3)};
    const Jet composed = eval_jet(parse_expr("exp(u1)", 1), vars);
    const Jet direct = eval_jet(parse_expr("exp(sin(u1 + u2))", 2), p, 3);
    for (std::size_t k = 0; k < direct.size(); ++k)
        EXPECT_NEAR(composed.coefficients()[k], direct.coefficients()[k], 1e-14);
}

TEST(Jet, ElementaryFunctionsOutsideDomainThrow)
{
    const Jet neg(1, 2, -1.0), zero(1, 2, 0.0);
    EXPECT_THROW(log(neg), DomainError);
    EXPECT_THROW(sqrt(neg), DomainError);
    EXPECT_THROW(reciprocal(zero), DomainError);
    EXPECT_THROW(pow(neg, 0.5), DomainError);
}

TEST(JetMatrix, InverseAndDeterminantMatchFiniteDifferences)
{
    const double p[] = {0.2, -0.3};
    const Expr e00 = parse_expr("2 + u1^2", 2), e01 = parse_expr("sin(u1*u2)", 2),
               e11 = parse_expr("3 + exp(u2)", 2);
    JetMatrix m(2, 2, Jet(2, 3, 0.0));
    m(0, 0) = eval_jet(e00, p, 3);
    m(0, 1) = m(1, 0) = eval_jet(e01, p, 3);
    m(1, 1) = eval_jet(e11, p, 3);
    const Expr det = e00 * e11 - e01 * e01;
    const Jet d = determinant(m);
    for (std::size_t a = 0; a < 2; ++a) {
        EXPECT_NEAR(d.partial({a}), static_cast<double>(fd_partial(det, p, {a})), 1e-10);
        for (std::size_t b = 0; b < 2; ++b)
            EXPECT_NEAR(d.partial({a, b}), static_cast<double>(fd_partial(det, p, {a, b})), 1e-9);
    }
    const Expr inv00 = e11 / det;
    const JetMatrix mi = inverse(m);
    EXPECT_NEAR(mi(0, 0).value(), static_cast<double>(oracle::reference_eval(inv00, p)), 1e-14);
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b)
            EXPECT_NEAR(mi(0, 0).partial({a, b}), static_cast<double>(fd_partial(inv00, p, {a, b})), 1e-9);
    const Eigen::MatrixXd id = (m * mi).value();
    EXPECT_LT((id - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-15);
    const JetMatrix prod = m * mi;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 1; k < prod(i, j).size(); ++k) EXPECT_NEAR(prod(i, j).coefficients()[k], 0.0, 1e-13);
}

} // namespace
