#include "cfdual/expr.hpp"

#include "cfdual/error.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>
#include <system_error>

namespace cfdual {

ParseError::ParseError(Kind kind, std::size_t offset, const std::string& what)
    : std::runtime_error(what + " at offset " + std::to_string(offset)), kind_(kind), offset_(offset)
{
}

std::string format_point(const std::vector<double>& p)
{
    std::ostringstream os;
    os.precision(17);
    os << '(';
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) os << ", ";
        os << p[i];
    }
    os << ')';
    return os.str();
}

DomainError::DomainError(std::string function, std::vector<double> point)
    : std::runtime_error(function + ": argument outside domain"
                         + (point.empty() ? std::string{} : " at " + format_point(point))),
      function_(std::move(function)), point_(std::move(point))
{
}

DegenerateMetricError::DegenerateMetricError(std::vector<double> point, const std::string& detail)
    : std::runtime_error("degenerate metric at " + format_point(point)
                         + (detail.empty() ? std::string{} : ": " + detail)),
      point_(std::move(point))
{
}

namespace {

constexpr std::array<std::pair<std::string_view, Func>, 10> kFuncs{{
    {"sin", Func::Sin},   {"cos", Func::Cos},   {"tan", Func::Tan},   {"exp", Func::Exp},
    {"log", Func::Log},   {"sqrt", Func::Sqrt}, {"sinh", Func::Sinh}, {"cosh", Func::Cosh},
    {"tanh", Func::Tanh}, {"atan", Func::Atan},
}};

} // namespace

std::string_view func_name(Func f) noexcept
{
    for (const auto& [name, fn] : kFuncs)
        if (fn == f) return name;
    return "?";
}

struct Expr::Node {
    Kind kind = Kind::Number;
    double value = 0.0;
    std::size_t index = 0;
    Func func = Func::Sin;
    std::vector<Expr> children;
    std::size_t depth = 0;
    std::size_t min_dim = 0;
};

Expr::Expr() : Expr(number(0.0)) {}

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::number(double v)
{
    if (!std::isfinite(v)) throw std::invalid_argument("Expr::number: non-finite literal");
    if (std::signbit(v) && v != 0.0) return negate(number(-v));
    auto n = std::make_shared<Node>();
    n->kind = Kind::Number;
    n->value = v == 0.0 ? 0.0 : v;
    return Expr(std::move(n));
}

Expr Expr::pi()
{
    auto n = std::make_shared<Node>();
    n->kind = Kind::Pi;
    return Expr(std::move(n));
}

Expr Expr::e()
{
    auto n = std::make_shared<Node>();
    n->kind = Kind::E;
    return Expr(std::move(n));
}

Expr Expr::variable(std::size_t index)
{
    auto n = std::make_shared<Node>();
    n->kind = Kind::Variable;
    n->index = index;
    n->min_dim = index + 1;
    return Expr(std::move(n));
}

namespace {

template <class NodeT>
void finish(NodeT& n)
{
    for (const auto& c : n.children) {
        n.depth = std::max(n.depth, c.depth() + 1);
        n.min_dim = std::max(n.min_dim, c.min_dimension());
    }
}

} // namespace

Expr Expr::call(Func f, Expr arg)
{
    auto n = std::make_shared<Node>();
    n->kind = Kind::Call;
    n->func = f;
    n->children = {std::move(arg)};
    finish(*n);
    return Expr(std::move(n));
}

Expr Expr::binary(Kind op, Expr lhs, Expr rhs)
{
    switch (op) {
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Div:
    case Kind::Pow: break;
    default: throw std::invalid_argument("Expr::binary: not a binary operator");
    }
    auto n = std::make_shared<Node>();
    n->kind = op;
    n->children = {std::move(lhs), std::move(rhs)};
    finish(*n);
    return Expr(std::move(n));
}

Expr Expr::negate(Expr arg)
{
    auto n = std::make_shared<Node>();
    n->kind = Kind::Negate;
    n->children = {std::move(arg)};
    finish(*n);
    return Expr(std::move(n));
}

Expr::Kind Expr::kind() const noexcept { return node_->kind; }
double Expr::number_value() const noexcept { return node_->value; }
std::size_t Expr::variable_index() const noexcept { return node_->index; }
Func Expr::func() const noexcept { return node_->func; }
std::size_t Expr::arity() const noexcept { return node_->children.size(); }
const Expr& Expr::child(std::size_t i) const { return node_->children.at(i); }
std::size_t Expr::depth() const noexcept { return node_->depth; }
std::size_t Expr::min_dimension() const noexcept { return node_->min_dim; }

bool operator==(const Expr& a, const Expr& b) noexcept
{
    if (a.node_ == b.node_) return true;
    const auto& x = *a.node_;
    const auto& y = *b.node_;
    if (x.kind != y.kind || x.children.size() != y.children.size()) return false;
    switch (x.kind) {
    case Expr::Kind::Number:
        if (x.value != y.value) return false;
        break;
    case Expr::Kind::Variable:
        if (x.index != y.index) return false;
        break;
    case Expr::Kind::Call:
        if (x.func != y.func) return false;
        break;
    default: break;
    }
    for (std::size_t i = 0; i < x.children.size(); ++i)
        if (!(x.children[i] == y.children[i])) return false;
    return true;
}

Expr operator+(Expr a, Expr b) { return Expr::binary(Expr::Kind::Add, std::move(a), std::move(b)); }
Expr operator-(Expr a, Expr b) { return Expr::binary(Expr::Kind::Sub, std::move(a), std::move(b)); }
Expr operator*(Expr a, Expr b) { return Expr::binary(Expr::Kind::Mul, std::move(a), std::move(b)); }
Expr operator/(Expr a, Expr b) { return Expr::binary(Expr::Kind::Div, std::move(a), std::move(b)); }
Expr operator-(Expr a) { return Expr::negate(std::move(a)); }
Expr pow(Expr base, Expr exponent)
{
    return Expr::binary(Expr::Kind::Pow, std::move(base), std::move(exponent));
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
public:
    Parser(std::string_view src, std::size_t dim) : src_(src), dim_(dim) {}

    Expr parse()
    {
        skip_ws();
        if (pos_ == src_.size()) fail(ParseError::Kind::Syntax, pos_, "empty expression");
        Expr e = parse_sum();
        skip_ws();
        if (pos_ != src_.size()) fail(ParseError::Kind::Syntax, pos_, "unexpected character");
        return e;
    }

private:
    [[noreturn]] void fail(ParseError::Kind kind, std::size_t at, const std::string& msg) const
    {
        throw ParseError(kind, at, msg);
    }

    void skip_ws()
    {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c)
    {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!accept(c)) {
            std::string msg = "expected '";
            msg += c;
            msg += '\'';
            fail(ParseError::Kind::Syntax, pos_, msg);
        }
    }

    Expr parse_sum()
    {
        Expr lhs = parse_product();
        for (;;) {
            if (accept('+'))
                lhs = std::move(lhs) + parse_product();
            else if (accept('-'))
                lhs = std::move(lhs) - parse_product();
            else
                return lhs;
        }
    }

    Expr parse_product()
    {
        Expr lhs = parse_unary();
        for (;;) {
            if (accept('*'))
                lhs = std::move(lhs) * parse_unary();
            else if (accept('/'))
                lhs = std::move(lhs) / parse_unary();
            else
                return lhs;
        }
    }

    Expr parse_unary()
    {
        if (accept('-')) return Expr::negate(parse_unary());
        return parse_power();
    }

    // base ^ exponent, right-associative; the exponent may carry a sign.
    Expr parse_power()
    {
        Expr base = parse_primary();
        if (accept('^')) return pow(std::move(base), parse_unary());
        return base;
    }

    Expr parse_primary()
    {
        skip_ws();
        if (pos_ == src_.size()) fail(ParseError::Kind::Syntax, pos_, "unexpected end of input");
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            Expr inner = parse_sum();
            expect(')');
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
        fail(ParseError::Kind::Syntax, pos_, std::string("unexpected character '") + c + "'");
    }

    Expr parse_number()
    {
        const std::size_t start = pos_;
        auto digits = [&] {
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        };
        digits();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            digits();
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            // Only an exponent if followed by [+-]digit; otherwise "2e" is 2 then identifier e.
            std::size_t look = pos_ + 1;
            if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
            if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
                pos_ = look;
                digits();
            }
        }
        double v = 0.0;
        const auto* first = src_.data() + start;
        const auto* last = src_.data() + pos_;
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc{} || ptr != last || !std::isfinite(v))
            fail(ParseError::Kind::Syntax, start, "malformed number");
        return Expr::number(v);
    }

    Expr parse_identifier()
    {
        const std::size_t start = pos_;
        while (pos_ < src_.size()
               && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            ++pos_;
        const std::string_view name = src_.substr(start, pos_ - start);

        if (name == "pi") return Expr::pi();
        if (name == "e") return Expr::e();
        for (const auto& [fname, fn] : kFuncs) {
            if (name == fname) {
                skip_ws();
                if (pos_ >= src_.size() || src_[pos_] != '(')
                    fail(ParseError::Kind::Syntax, pos_, "expected '(' after function name");
                ++pos_;
                Expr arg = parse_sum();
                expect(')');
                return Expr::call(fn, std::move(arg));
            }
        }
        if (name.size() > 1 && name[0] == 'u'
            && std::all_of(name.begin() + 1, name.end(),
                           [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })
            && name[1] != '0') {
            std::size_t idx = 0;
            auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), idx);
            if (ec != std::errc{} || idx == 0 || idx > dim_)
                fail(ParseError::Kind::VariableOutOfRange, start,
                     "variable " + std::string(name) + " out of range for dimension " + std::to_string(dim_));
            return Expr::variable(idx - 1);
        }
        fail(ParseError::Kind::UnknownIdentifier, start, "unknown identifier '" + std::string(name) + "'");
    }

    std::string_view src_;
    std::size_t dim_;
    std::size_t pos_ = 0;
};

void print(const Expr& e, std::string& out)
{
    using K = Expr::Kind;
    switch (e.kind()) {
    case K::Number: {
        std::array<char, 64> buf{};
        auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), e.number_value());
        (void)ec;
        out.append(buf.data(), ptr);
        return;
    }
    case K::Pi: out += "pi"; return;
    case K::E: out += "e"; return;
    case K::Variable:
        out += 'u';
        out += std::to_string(e.variable_index() + 1);
        return;
    case K::Negate:
        out += "(-";
        print(e.child(0), out);
        out += ')';
        return;
    case K::Call:
        out += func_name(e.func());
        out += '(';
        print(e.child(0), out);
        out += ')';
        return;
    default: break;
    }
    const char* op = e.kind() == K::Add   ? " + "
                     : e.kind() == K::Sub ? " - "
                     : e.kind() == K::Mul ? " * "
                     : e.kind() == K::Div ? " / "
                                          : " ^ ";
    out += '(';
    print(e.child(0), out);
    out += op;
    print(e.child(1), out);
    out += ')';
}

} // namespace

Expr parse_expr(std::string_view src, std::size_t dim)
{
    return Parser(src, dim).parse();
}

std::string to_string(const Expr& e)
{
    std::string out;
    print(e, out);
    return out;
}

} // namespace cfdual
