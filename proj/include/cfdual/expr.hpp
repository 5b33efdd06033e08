#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace cfdual {

enum class Func { Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh, Tanh, Atan };

std::string_view func_name(Func f) noexcept;

/// Immutable expression tree over coordinates u1..un.
///
/// Nodes are shared; copying an Expr is cheap and never aliases mutable
/// state. Variables are stored zero-based (`u1` has index 0).
class Expr {
public:
    enum class Kind { Number, Pi, E, Variable, Negate, Add, Sub, Mul, Div, Pow, Call };

    Expr();  // the number 0

    static Expr number(double v);
    static Expr pi();
    static Expr e();
    static Expr variable(std::size_t index);
    static Expr call(Func f, Expr arg);
    static Expr binary(Kind op, Expr lhs, Expr rhs);
    static Expr negate(Expr arg);

    Kind kind() const noexcept;
    double number_value() const noexcept;
    std::size_t variable_index() const noexcept;
    Func func() const noexcept;
    std::size_t arity() const noexcept;
    const Expr& child(std::size_t i) const;

    /// Height of the tree; a leaf has depth 0.
    std::size_t depth() const noexcept;
    /// One more than the largest variable index used (0 for constants).
    std::size_t min_dimension() const noexcept;
    bool is_constant() const noexcept { return min_dimension() == 0; }

    /// Structural equality.
    friend bool operator==(const Expr& a, const Expr& b) noexcept;

private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> node);
    std::shared_ptr<const Node> node_;
};

Expr operator+(Expr a, Expr b);
Expr operator-(Expr a, Expr b);
Expr operator*(Expr a, Expr b);
Expr operator/(Expr a, Expr b);
Expr operator-(Expr a);
Expr pow(Expr base, Expr exponent);

/// Parses standard infix notation: + - * / ^ (right-associative), unary
/// minus, parentheses, numeric literals, `pi`, `e`, variables `u1..u<dim>`
/// and the functions sin cos tan exp log sqrt sinh cosh tanh atan.
/// Throws ParseError on any failure.
Expr parse_expr(std::string_view src, std::size_t dim);

/// Fully parenthesized text that parses back to a structurally equal tree.
std::string to_string(const Expr& e);

} // namespace cfdual
