#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace cfdual {

inline constexpr int kMaxJetOrder = 6;
inline constexpr std::size_t kMaxJetDim = 12;

namespace detail {
struct MonomialTable;
const MonomialTable& monomial_table(std::size_t dim);
} // namespace detail

/// Truncated multivariate Taylor expansion of a smooth function about a
/// point: all partial derivatives up to a fixed order.
///
/// Coefficients are Taylor coefficients stored once per monomial in graded
/// order (degree 0, then degree 1, ...), so a jet of order k is a prefix of
/// the same function's jet of order k+1. `partial()` converts to derivatives.
///
/// Binary operations on jets of different orders truncate to the smaller
/// order; this is how products such as Γ·∂Γ naturally lose one order.
class Jet {
public:
    Jet() = default;
    /// Constant jet.
    Jet(std::size_t dim, int order, double value);
    /// Coordinate function u_axis about a point whose axis-th coordinate is `value`.
    static Jet variable(std::size_t dim, int order, std::size_t axis, double value);

    bool empty() const noexcept { return table_ == nullptr; }
    std::size_t dim() const noexcept;
    int order() const noexcept { return order_; }
    std::size_t size() const noexcept { return c_.size(); }

    double value() const noexcept { return c_.empty() ? 0.0 : c_[0]; }
    std::span<const double> coefficients() const noexcept { return c_; }
    std::span<double> coefficients() noexcept { return c_; }

    /// ∂^k f / ∂u_{a1} ... ∂u_{ak} at the base point, zero-based axes.
    double partial(std::initializer_list<std::size_t> axes) const;
    double partial(std::span<const std::size_t> axes) const;

    /// ∂f/∂u_axis as a jet of one lower order.
    Jet derivative(std::size_t axis) const;
    Jet truncated(int order) const;

    /// Substitutes the jet into a univariate series: Σ c_k (f - f(p))^k.
    /// `taylor` holds c_0..c_m with m >= order().
    Jet compose(std::span<const double> taylor) const;

    Jet operator-() const;
    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet& operator*=(const Jet& o);
    Jet& operator/=(const Jet& o);
    Jet& operator+=(double s);
    Jet& operator-=(double s);
    Jet& operator*=(double s);
    Jet& operator/=(double s);

private:
    void check_compatible(const Jet& o) const;
    Jet multiply(const Jet& o) const;

    const detail::MonomialTable* table_ = nullptr;
    int order_ = 0;
    std::vector<double> c_;
};

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);
Jet operator+(Jet a, double s);
Jet operator+(double s, Jet a);
Jet operator-(Jet a, double s);
Jet operator-(double s, const Jet& a);
Jet operator*(Jet a, double s);
Jet operator*(double s, Jet a);
Jet operator/(Jet a, double s);
Jet operator/(double s, const Jet& a);

// Elementary functions. Each throws DomainError (without a point) when the
// base value lies outside the open domain where the function is smooth.
Jet reciprocal(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet tan(const Jet& a);
Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sqrt(const Jet& a);
Jet sinh(const Jet& a);
Jet cosh(const Jet& a);
Jet tanh(const Jet& a);
Jet atan(const Jet& a);
Jet pow(const Jet& a, int n);
Jet pow(const Jet& a, double r);
Jet pow(const Jet& a, const Jet& b);

} // namespace cfdual
