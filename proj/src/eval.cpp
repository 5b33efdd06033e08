#include "cfdual/eval.hpp"

#include "cfdual/error.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cfdual {

namespace {

double apply(Func f, double x)
{
    switch (f) {
    case Func::Sin: return std::sin(x);
    case Func::Cos: return std::cos(x);
    case Func::Tan:
        if (std::abs(std::cos(x)) < 1e-300) throw DomainError("tan", {});
        return std::tan(x);
    case Func::Exp: return std::exp(x);
    case Func::Log:
        if (!(x > 0.0)) throw DomainError("log", {});
        return std::log(x);
    case Func::Sqrt:
        if (!(x > 0.0)) throw DomainError("sqrt", {});
        return std::sqrt(x);
    case Func::Sinh: return std::sinh(x);
    case Func::Cosh: return std::cosh(x);
    case Func::Tanh: return std::tanh(x);
    case Func::Atan: return std::atan(x);
    }
    throw std::logic_error("unknown function");
}

Jet apply(Func f, const Jet& x)
{
    switch (f) {
    case Func::Sin: return sin(x);
    case Func::Cos: return cos(x);
    case Func::Tan: return tan(x);
    case Func::Exp: return exp(x);
    case Func::Log: return log(x);
    case Func::Sqrt: return sqrt(x);
    case Func::Sinh: return sinh(x);
    case Func::Cosh: return cosh(x);
    case Func::Tanh: return tanh(x);
    case Func::Atan: return atan(x);
    }
    throw std::logic_error("unknown function");
}

double value_rec(const Expr& e, std::span<const double> p)
{
    using K = Expr::Kind;
    switch (e.kind()) {
    case K::Number: return e.number_value();
    case K::Pi: return std::numbers::pi;
    case K::E: return std::numbers::e;
    case K::Variable: return p[e.variable_index()];
    case K::Negate: return -value_rec(e.child(0), p);
    case K::Add: return value_rec(e.child(0), p) + value_rec(e.child(1), p);
    case K::Sub: return value_rec(e.child(0), p) - value_rec(e.child(1), p);
    case K::Mul: return value_rec(e.child(0), p) * value_rec(e.child(1), p);
    case K::Div: {
        const double d = value_rec(e.child(1), p);
        if (d == 0.0) throw DomainError("division", {});
        return value_rec(e.child(0), p) / d;
    }
    case K::Pow: {
        const double b = value_rec(e.child(0), p);
        const double x = value_rec(e.child(1), p);
        if (x != std::trunc(x) && !(b > 0.0)) throw DomainError("pow", {});
        if (x < 0.0 && b == 0.0) throw DomainError("division", {});
        return std::pow(b, x);
    }
    case K::Call: return apply(e.func(), value_rec(e.child(0), p));
    }
    throw std::logic_error("unknown expression kind");
}

struct JetEval {
    std::span<const Jet> vars;
    std::size_t dim;
    int order;

    Jet constant(double v) const { return Jet(dim, order, v); }

    Jet operator()(const Expr& e) const
    {
        using K = Expr::Kind;
        switch (e.kind()) {
        case K::Number: return constant(e.number_value());
        case K::Pi: return constant(std::numbers::pi);
        case K::E: return constant(std::numbers::e);
        case K::Variable: return vars[e.variable_index()];
        case K::Negate: return -(*this)(e.child(0));
        case K::Add: return (*this)(e.child(0)) + (*this)(e.child(1));
        case K::Sub: return (*this)(e.child(0)) - (*this)(e.child(1));
        case K::Mul: return (*this)(e.child(0)) * (*this)(e.child(1));
        case K::Div: return (*this)(e.child(0)) / (*this)(e.child(1));
        case K::Pow: {
            const Expr& ex = e.child(1);
            if (ex.is_constant()) return pow((*this)(e.child(0)), value_rec(ex, {}));
            return pow((*this)(e.child(0)), (*this)(ex));
        }
        case K::Call: return apply(e.func(), (*this)(e.child(0)));
        }
        throw std::logic_error("unknown expression kind");
    }
};

} // namespace

double eval_value(const Expr& e, std::span<const double> point)
{
    if (point.size() < e.min_dimension()) throw std::invalid_argument("eval: point has too few coordinates");
    try {
        return value_rec(e, point);
    } catch (const DomainError& err) {
        throw DomainError(err.function(), {point.begin(), point.end()});
    }
}

Jet eval_jet(const Expr& e, std::span<const double> point, int order)
{
    if (point.size() < e.min_dimension()) throw std::invalid_argument("eval: point has too few coordinates");
    if (point.empty()) throw std::invalid_argument("eval: empty point");
    std::vector<Jet> vars;
    vars.reserve(point.size());
    for (std::size_t i = 0; i < point.size(); ++i) vars.push_back(Jet::variable(point.size(), order, i, point[i]));
    try {
        return JetEval{vars, point.size(), order}(e);
    } catch (const DomainError& err) {
        throw DomainError(err.function(), {point.begin(), point.end()});
    }
}

Jet eval_jet(const Expr& e, std::span<const Jet> vars)
{
    if (vars.empty()) throw std::invalid_argument("eval: no variables");
    if (vars.size() < e.min_dimension()) throw std::invalid_argument("eval: too few variables");
    int order = vars[0].order();
    for (const auto& v : vars) order = std::min(order, v.order());
    try {
        return JetEval{vars, vars[0].dim(), order}(e);
    } catch (const DomainError& err) {
        std::vector<double> p;
        for (const auto& v : vars) p.push_back(v.value());
        throw DomainError(err.function(), p);
    }
}

} // namespace cfdual
