#pragma once

// Independent reference computations for the tests: a long-double tree
// walker (shares nothing with the jet evaluator), central differences on it,
// and a seeded random expression generator.

#include "cfdual/expr.hpp"

#include <cmath>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace cfdual::oracle {

using Real = long double;

inline Real reference_eval(const Expr& e, std::span<const Real> u)
{
    switch (e.kind()) {
    case Expr::Kind::Number: return e.number_value();
    case Expr::Kind::Pi: return 3.141592653589793238462643383279502884L;
    case Expr::Kind::E: return 2.718281828459045235360287471352662498L;
    case Expr::Kind::Variable: return u[e.variable_index()];
    case Expr::Kind::Negate: return -reference_eval(e.child(0), u);
    case Expr::Kind::Add: return reference_eval(e.child(0), u) + reference_eval(e.child(1), u);
    case Expr::Kind::Sub: return reference_eval(e.child(0), u) - reference_eval(e.child(1), u);
    case Expr::Kind::Mul: return reference_eval(e.child(0), u) * reference_eval(e.child(1), u);
    case Expr::Kind::Div: return reference_eval(e.child(0), u) / reference_eval(e.child(1), u);
    case Expr::Kind::Pow: return std::pow(reference_eval(e.child(0), u), reference_eval(e.child(1), u));
    case Expr::Kind::Call: {
        const Real a = reference_eval(e.child(0), u);
        switch (e.func()) {
        case Func::Sin: return std::sin(a);
        case Func::Cos: return std::cos(a);
        case Func::Tan: return std::tan(a);
        case Func::Exp: return std::exp(a);
        case Func::Log: return std::log(a);
        case Func::Sqrt: return std::sqrt(a);
        case Func::Sinh: return std::sinh(a);
        case Func::Cosh: return std::cosh(a);
        case Func::Tanh: return std::tanh(a);
        case Func::Atan: return std::atan(a);
        }
    }
    }
    throw std::logic_error("reference_eval: unknown node");
}

inline Real reference_eval(const Expr& e, std::span<const double> p)
{
    std::vector<Real> u(p.begin(), p.end());
    return reference_eval(e, u);
}

/// Central difference of order 1 or 2 in the listed axes (fourth-order
/// stencils), evaluated in long double.
inline Real fd_partial(const Expr& e, std::span<const double> p, std::vector<std::size_t> axes, Real h = 1e-3L)
{
    std::vector<Real> u(p.begin(), p.end());
    auto f = [&](std::size_t a, Real da, std::size_t b, Real db) {
        std::vector<Real> v = u;
        v[a] += da;
        v[b] += db;
        return reference_eval(e, v);
    };
    if (axes.empty()) return reference_eval(e, u);
    if (axes.size() == 1) {
        const std::size_t a = axes[0];
        return (-f(a, 2 * h, a, 0) + 8 * f(a, h, a, 0) - 8 * f(a, -h, a, 0) + f(a, -2 * h, a, 0)) / (12 * h);
    }
    if (axes.size() == 2) {
        const std::size_t a = axes[0], b = axes[1];
        if (a == b)
            return (-f(a, 2 * h, a, 0) + 16 * f(a, h, a, 0) - 30 * f(a, 0, a, 0) + 16 * f(a, -h, a, 0)
                    - f(a, -2 * h, a, 0))
                   / (12 * h * h);
        auto d1 = [&](Real db) {
            return (-f(a, 2 * h, b, db) + 8 * f(a, h, b, db) - 8 * f(a, -h, b, db) + f(a, -2 * h, b, db)) / (12 * h);
        };
        return (-d1(2 * h) + 8 * d1(h) - 8 * d1(-h) + d1(-2 * h)) / (12 * h);
    }
    throw std::invalid_argument("fd_partial: order above 2");
}

/// Random smooth expressions in u1..u_dim, built so that every function is
/// applied inside its domain on [-1, 1]^dim.
class ExprGenerator {
public:
    ExprGenerator(std::size_t dim, std::uint64_t seed) : dim_(dim), rng_(seed) {}

    Expr operator()(int depth = 3) { return build(depth); }

private:
    Expr leaf()
    {
        std::uniform_int_distribution<int> pick(0, 3);
        if (pick(rng_) == 0) {
            std::uniform_int_distribution<int> k(-9, 9);
            return Expr::number(0.25 * k(rng_));
        }
        std::uniform_int_distribution<std::size_t> var(0, dim_ - 1);
        return Expr::variable(var(rng_));
    }

    Expr build(int depth)
    {
        if (depth == 0) return leaf();
        std::uniform_int_distribution<int> pick(0, 11);
        const Expr a = build(depth - 1);
        switch (pick(rng_)) {
        case 0: return a + build(depth - 1);
        case 1: return a - build(depth - 1);
        case 2:
        case 3: return a * build(depth - 1);
        case 4: return a / (Expr::number(2) + Expr::call(Func::Sin, build(depth - 1)));
        case 5: return Expr::call(Func::Sin, a);
        case 6: return Expr::call(Func::Cos, a);
        case 7: return Expr::call(Func::Exp, Expr::call(Func::Tanh, a));
        case 8: return Expr::call(Func::Atan, a);
        case 9: return Expr::call(Func::Log, Expr::number(1.5) + Expr::call(Func::Cos, a));
        case 10: return Expr::call(Func::Sqrt, Expr::number(1) + a * a);
        default: return pow(Expr::number(1.25) + Expr::call(Func::Sin, a), Expr::number(3));
        }
    }

    std::size_t dim_;
    std::mt19937_64 rng_;
};

} // namespace cfdual::oracle
