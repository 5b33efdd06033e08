#include "cfdual/error.hpp"
#include "cfdual/eval.hpp"
#include "cfdual/expr.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace cfdual;

namespace {

ParseError parse_failure(std::string_view src, std::size_t dim)
{
    try {
        parse_expr(src, dim);
    } catch (const ParseError& e) {
        return e;
    }
    ADD_FAILURE() << "no ParseError for \"" << src << "\"";
    return ParseError(ParseError::Kind::Syntax, 0, "");
}

TEST(Parse, SineSquaredPlusVariable)
{
    const Expr e = parse_expr("sin(u1)^2 + u2", 2);
    EXPECT_EQ(e.kind(), Expr::Kind::Add);
    EXPECT_EQ(e.depth(), 3u);
    EXPECT_EQ(e.min_dimension(), 2u);
    const double p[] = {0.4, -1.5};
    EXPECT_NEAR(eval_value(e, p), std::sin(0.4) * std::sin(0.4) - 1.5, 1e-15);
}

TEST(Parse, VariableOutOfRange)
{
    const ParseError e = parse_failure("u3", 2);
    EXPECT_EQ(e.kind(), ParseError::Kind::VariableOutOfRange);
    EXPECT_EQ(e.offset(), 0u);
}

TEST(Parse, UnbalancedParenthesisReportsOffset)
{
    const ParseError e = parse_failure("u1*(", 1);
    EXPECT_EQ(e.kind(), ParseError::Kind::Syntax);
    EXPECT_EQ(e.offset(), 4u);
}

TEST(Parse, UnknownIdentifier)
{
    const ParseError e = parse_failure("2*foo(u1)", 1);
    EXPECT_EQ(e.kind(), ParseError::Kind::UnknownIdentifier);
    EXPECT_EQ(e.offset(), 2u);
}

TEST(Parse, PowerIsRightAssociative)
{
    const double p[] = {0.0};
    EXPECT_DOUBLE_EQ(eval_value(parse_expr("2^3^2", 1), p), 512.0);
    EXPECT_DOUBLE_EQ(eval_value(parse_expr("-2^2", 1), p), -4.0);
    EXPECT_DOUBLE_EQ(eval_value(parse_expr("2*pi - e", 1), p), 2 * M_PI - M_E);
}

TEST(Parse, Constants)
{
    EXPECT_TRUE(parse_expr("pi*e", 3).is_constant());
    EXPECT_FALSE(parse_expr("u3", 3).is_constant());
}

TEST(Parse, MalformedInputs)
{
    for (const char* s : {"", "u1+", "(u1", "u1)", "1..2", "sin u1", "u0", "*u1"})
        EXPECT_THROW(parse_expr(s, 2), ParseError) << s;
}

TEST(Parse, PrintParseRoundTripOnRandomTrees)
{
    oracle::ExprGenerator gen(3, 20261015);
    for (int i = 0; i < 100; ++i) {
        const Expr e = gen(4);
        const std::string text = to_string(e);
        const Expr back = parse_expr(text, 3);
        EXPECT_TRUE(back == e) << text;
        EXPECT_EQ(to_string(back), text);
    }
}

TEST(Parse, RoundTripOfHandWrittenText)
{
    for (const char* s : {"sin(u1)^2 + u2", "-(u1 - 2.5e-3)/u2", "exp(u1*u2)^-1", "atan(tanh(u1))*sqrt(u2)"}) {
        const Expr e = parse_expr(s, 2);
        EXPECT_TRUE(parse_expr(to_string(e), 2) == e) << s;
    }
}

TEST(Eval, AgreesWithReferenceEvaluator)
{
    oracle::ExprGenerator gen(3, 7);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> coord(-0.9, 0.9);
    for (int i = 0; i < 100; ++i) {
        const Expr e = gen(4);
        const double p[] = {coord(rng), coord(rng), coord(rng)};
        const long double ref = oracle::reference_eval(e, p);
        EXPECT_NEAR(eval_value(e, p), static_cast<double>(ref), 1e-12 * std::max(1.0L, std::fabs(ref))) << to_string(e);
    }
}

TEST(Eval, DomainErrorNamesFunctionAndPoint)
{
    const double p[] = {-1.0, 2.0};
    try {
        eval_value(parse_expr("u2 + log(u1)", 2), p);
        FAIL() << "log of a negative number evaluated";
    } catch (const DomainError& e) {
        EXPECT_EQ(e.function(), "log");
        ASSERT_EQ(e.point().size(), 2u);
        EXPECT_EQ(e.point()[0], -1.0);
    }
    EXPECT_THROW(eval_jet(parse_expr("sqrt(u1)", 2), p, 2), DomainError);
    EXPECT_THROW(eval_jet(parse_expr("1/(u1+1)", 2), p, 1), DomainError);
}

} // namespace
