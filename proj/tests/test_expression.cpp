#include "npisim/engine/expression.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace npisim::engine;

TEST(Expression, PrecedenceMultiplicationBindsTighter)
{
    const Expr e = parse_expression("a + 2*b");
    ASSERT_EQ(e.kind, NodeKind::binary);
    EXPECT_EQ(e.op, BinaryOp::add);
    EXPECT_EQ(e.children[0].kind, NodeKind::reference);
    EXPECT_EQ(e.children[0].name, "a");
    const Expr& rhs = e.children[1];
    ASSERT_EQ(rhs.kind, NodeKind::binary);
    EXPECT_EQ(rhs.op, BinaryOp::mul);
    EXPECT_EQ(rhs.children[0].kind, NodeKind::constant);
    EXPECT_EQ(rhs.children[0].value, 2.0);
    EXPECT_EQ(rhs.children[1].name, "b");
    EXPECT_EQ(to_string(e), "(a + (2 * b))");
}

TEST(Expression, CallNode)
{
    const Expr e = parse_expression("min(flow_mult, 1)");
    ASSERT_EQ(e.kind, NodeKind::call);
    EXPECT_EQ(e.func, Function::min);
    ASSERT_EQ(e.children.size(), 2u);
    EXPECT_EQ(e.children[0].name, "flow_mult");
    EXPECT_EQ(e.children[1].value, 1.0);
}

TEST(Expression, TrailingOperatorReportsOffset)
{
    try {
        parse_expression("a + ");
        FAIL() << "expected ParseError";
    }
    catch (const ParseError& e) {
        EXPECT_EQ(e.offset(), 4u);
    }
}

TEST(Expression, SyntaxErrors)
{
    EXPECT_THROW(parse_expression(""), ParseError);
    EXPECT_THROW(parse_expression("(a + b"), ParseError);
    EXPECT_THROW(parse_expression("a b"), ParseError);
    EXPECT_THROW(parse_expression("a $ b"), ParseError);
    EXPECT_THROW(parse_expression("clamp(1, 2)"), ParseError);
    EXPECT_THROW(parse_expression("1.2.3"), ParseError);
}

TEST(Expression, UnknownFunction)
{
    try {
        parse_expression("x + exp(2)");
        FAIL() << "expected ParseError";
    }
    catch (const ParseError& e) {
        EXPECT_EQ(e.offset(), 4u);
        EXPECT_NE(std::string(e.what()).find("exp"), std::string::npos);
    }
}

TEST(Expression, EvaluatesArithmetic)
{
    EXPECT_EQ(eval_expression(parse_expression("(2*3)+1"), {}), 7.0);
    EXPECT_EQ(eval_expression(parse_expression("clamp(-0.2, 0, 1)"), {}), 0.0);
    EXPECT_EQ(eval_expression(parse_expression("clamp(1.7, 0, 1)"), {}), 1.0);
    EXPECT_EQ(eval_expression(parse_expression("max(2, 3) - min(2, 3)"), {}), 1.0);
    EXPECT_EQ(eval_expression(parse_expression("-2 * -3"), {}), 6.0);
    EXPECT_EQ(eval_expression(parse_expression("8 / 2 / 2"), {}), 2.0);
    EXPECT_EQ(eval_expression(parse_expression("10 - 2 - 3"), {}), 5.0);
    EXPECT_EQ(eval_expression(parse_expression("1.5e2 + 2E-1"), {}), 150.2);
}

TEST(Expression, EvaluatesReference)
{
    EXPECT_EQ(eval_expression(parse_expression("x"), {{"x", 0.207}}), 0.207);
}

TEST(Expression, EvalErrors)
{
    EXPECT_THROW(eval_expression(parse_expression("1 / (x - x)"), {{"x", 3.0}}), EvalError);
    EXPECT_THROW(eval_expression(parse_expression("y + 1"), {{"x", 3.0}}), EvalError);
}

TEST(Expression, ReferencedNames)
{
    const auto names = referenced_names(parse_expression("a * max(b, a) / (c - 1)"));
    EXPECT_EQ(names, (std::set<std::string>{"a", "b", "c"}));
}

// Random trees rendered fully parenthesised must parse back to the same value.
TEST(Expression, RenderParseRoundTripProperty)
{
    std::mt19937 rng(42);
    std::uniform_int_distribution<int> pick(0, 5);
    std::uniform_real_distribution<double> num(0.5, 9.5);
    const std::map<std::string, double, std::less<>> env{{"p", 1.25}, {"q", -3.5}, {"r", 7.0}};
    const char* vars[] = {"p", "q", "r"};

    auto gen = [&](auto&& self, int depth) -> Expr {
        const int k = depth == 0 ? pick(rng) % 2 : pick(rng);
        switch (k) {
        case 0: return Expr::constant(num(rng));
        case 1: return Expr::reference(vars[pick(rng) % 3]);
        case 2: return Expr::negate(self(self, depth - 1));
        case 3: return Expr::binary(BinaryOp::add, self(self, depth - 1), self(self, depth - 1));
        case 4: return Expr::binary(BinaryOp::mul, self(self, depth - 1), self(self, depth - 1));
        default: return Expr::call(Function::max, {self(self, depth - 1), self(self, depth - 1)});
        }
    };
    for (int i = 0; i < 300; ++i) {
        const Expr e = gen(gen, 4);
        const Expr back = parse_expression(to_string(e));
        EXPECT_EQ(eval_expression(e, env), eval_expression(back, env)) << to_string(e);
    }
}
