#include "cfdual/jet.hpp"

#include "cfdual/error.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace cfdual {

namespace detail {

struct MonomialTable {
    struct Product {
        std::uint32_t a, b, c;
    };

    std::size_t dim = 0;
    std::vector<std::uint8_t> exps;            // monomial m occupies [m*dim, (m+1)*dim)
    std::array<std::size_t, kMaxJetOrder + 2> count_upto{};  // count_upto[k] = #monomials of degree < k
    std::vector<double> factorial_weight;      // α!
    std::vector<Product> products;             // sorted by deg(a)+deg(b)
    std::array<std::size_t, kMaxJetOrder + 1> products_upto{};  // #products with total degree <= k
    std::vector<std::vector<std::int32_t>> shift;  // shift[axis][m] = index of m + e_axis
    std::unordered_map<std::uint64_t, std::uint32_t> index;

    std::size_t size(int order) const { return count_upto[static_cast<std::size_t>(order) + 1]; }

    static std::uint64_t key(const std::uint8_t* e, std::size_t dim)
    {
        std::uint64_t k = 0;
        for (std::size_t i = 0; i < dim; ++i) k = k * (kMaxJetOrder + 1) + e[i];
        return k;
    }

    explicit MonomialTable(std::size_t d) : dim(d)
    {
        std::vector<std::uint8_t> cur(dim, 0);
        std::vector<std::size_t> degree_of;
        // Graded enumeration: all exponents of total degree `deg`, lexicographic.
        auto emit = [&](auto&& self, std::size_t pos, int remaining, int deg) -> void {
            if (pos + 1 == dim) {
                cur[pos] = static_cast<std::uint8_t>(remaining);
                exps.insert(exps.end(), cur.begin(), cur.end());
                degree_of.push_back(static_cast<std::size_t>(deg));
                return;
            }
            for (int v = remaining; v >= 0; --v) {
                cur[pos] = static_cast<std::uint8_t>(v);
                self(self, pos + 1, remaining - v, deg);
            }
        };
        count_upto[0] = 0;
        for (int deg = 0; deg <= kMaxJetOrder; ++deg) {
            emit(emit, 0, deg, deg);
            count_upto[static_cast<std::size_t>(deg) + 1] = degree_of.size();
        }
        const std::size_t total = degree_of.size();

        factorial_weight.resize(total);
        for (std::size_t m = 0; m < total; ++m) {
            double w = 1.0;
            for (std::size_t i = 0; i < dim; ++i)
                for (int f = 2; f <= exps[m * dim + i]; ++f) w *= f;
            factorial_weight[m] = w;
            index.emplace(key(&exps[m * dim], dim), static_cast<std::uint32_t>(m));
        }

        shift.assign(dim, std::vector<std::int32_t>(total, -1));
        std::vector<std::uint8_t> tmp(dim);
        for (std::size_t m = 0; m < count_upto[kMaxJetOrder]; ++m) {
            for (std::size_t ax = 0; ax < dim; ++ax) {
                std::copy_n(&exps[m * dim], dim, tmp.begin());
                ++tmp[ax];
                shift[ax][m] = static_cast<std::int32_t>(index.at(key(tmp.data(), dim)));
            }
        }

        for (int s = 0; s <= kMaxJetOrder; ++s) {
            for (int da = 0; da <= s; ++da) {
                const int db = s - da;
                for (std::size_t a = count_upto[da]; a < count_upto[da + 1]; ++a) {
                    for (std::size_t b = count_upto[db]; b < count_upto[db + 1]; ++b) {
                        for (std::size_t i = 0; i < dim; ++i) tmp[i] = exps[a * dim + i] + exps[b * dim + i];
                        products.push_back({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b),
                                            index.at(key(tmp.data(), dim))});
                    }
                }
            }
            products_upto[static_cast<std::size_t>(s)] = products.size();
        }
    }
};

const MonomialTable& monomial_table(std::size_t dim)
{
    if (dim == 0 || dim > kMaxJetDim)
        throw std::invalid_argument("jet dimension must be in 1.." + std::to_string(kMaxJetDim));
    static std::array<std::once_flag, kMaxJetDim + 1> flags;
    static std::array<std::unique_ptr<MonomialTable>, kMaxJetDim + 1> tables;
    std::call_once(flags[dim], [dim] { tables[dim] = std::make_unique<MonomialTable>(dim); });
    return *tables[dim];
}

} // namespace detail

namespace {

void check_order(int order)
{
    if (order < 0 || order > kMaxJetOrder)
        throw std::invalid_argument("jet order must be in 0.." + std::to_string(kMaxJetOrder));
}

} // namespace

Jet::Jet(std::size_t dim, int order, double value) : table_(&detail::monomial_table(dim)), order_(order)
{
    check_order(order);
    c_.assign(table_->size(order), 0.0);
    c_[0] = value;
}

Jet Jet::variable(std::size_t dim, int order, std::size_t axis, double value)
{
    if (axis >= dim) throw std::invalid_argument("Jet::variable: axis out of range");
    Jet j(dim, order, value);
    if (order >= 1) j.c_[1 + axis] = 1.0;  // degree-1 monomials are e_0, e_1, ... in order
    return j;
}

std::size_t Jet::dim() const noexcept { return table_ ? table_->dim : 0; }

double Jet::partial(std::initializer_list<std::size_t> axes) const
{
    return partial(std::span<const std::size_t>(axes.begin(), axes.size()));
}

double Jet::partial(std::span<const std::size_t> axes) const
{
    if (empty()) throw std::logic_error("Jet::partial on empty jet");
    if (static_cast<int>(axes.size()) > order_)
        throw std::out_of_range("Jet::partial: derivative order exceeds jet order");
    std::vector<std::uint8_t> e(table_->dim, 0);
    for (auto a : axes) {
        if (a >= table_->dim) throw std::out_of_range("Jet::partial: axis out of range");
        ++e[a];
    }
    const auto m = table_->index.at(detail::MonomialTable::key(e.data(), table_->dim));
    return table_->factorial_weight[m] * c_[m];
}

Jet Jet::derivative(std::size_t axis) const
{
    if (empty()) throw std::logic_error("Jet::derivative on empty jet");
    if (order_ == 0) throw std::logic_error("Jet::derivative of an order-0 jet");
    if (axis >= table_->dim) throw std::out_of_range("Jet::derivative: axis out of range");
    Jet r;
    r.table_ = table_;
    r.order_ = order_ - 1;
    const std::size_t n = table_->size(r.order_);
    r.c_.resize(n);
    const auto& sh = table_->shift[axis];
    const auto& ex = table_->exps;
    for (std::size_t m = 0; m < n; ++m)
        r.c_[m] = (ex[m * table_->dim + axis] + 1.0) * c_[static_cast<std::size_t>(sh[m])];
    return r;
}

Jet Jet::truncated(int order) const
{
    check_order(order);
    if (order > order_) throw std::invalid_argument("Jet::truncated: cannot raise order");
    Jet r = *this;
    r.order_ = order;
    r.c_.resize(table_->size(order));
    return r;
}

void Jet::check_compatible(const Jet& o) const
{
    if (table_ != o.table_) throw std::invalid_argument("jet dimension mismatch");
}

Jet Jet::multiply(const Jet& o) const
{
    check_compatible(o);
    Jet r;
    r.table_ = table_;
    r.order_ = std::min(order_, o.order_);
    r.c_.assign(table_->size(r.order_), 0.0);
    const auto end = table_->products_upto[static_cast<std::size_t>(r.order_)];
    const auto* p = table_->products.data();
    const double* a = c_.data();
    const double* b = o.c_.data();
    double* out = r.c_.data();
    for (std::size_t k = 0; k < end; ++k) out[p[k].c] += a[p[k].a] * b[p[k].b];
    return r;
}

Jet Jet::compose(std::span<const double> taylor) const
{
    if (taylor.size() < static_cast<std::size_t>(order_) + 1)
        throw std::invalid_argument("Jet::compose: series too short");
    Jet delta = *this;
    delta.c_[0] = 0.0;
    Jet r(table_->dim, order_, taylor[static_cast<std::size_t>(order_)]);
    for (int k = order_ - 1; k >= 0; --k) {
        r = r.multiply(delta);
        r.c_[0] += taylor[static_cast<std::size_t>(k)];
    }
    return r;
}

Jet Jet::operator-() const
{
    Jet r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
}

Jet& Jet::operator+=(const Jet& o)
{
    check_compatible(o);
    if (o.order_ < order_) *this = truncated(o.order_);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

Jet& Jet::operator-=(const Jet& o)
{
    check_compatible(o);
    if (o.order_ < order_) *this = truncated(o.order_);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

Jet& Jet::operator*=(const Jet& o)
{
    *this = multiply(o);
    return *this;
}

Jet& Jet::operator/=(const Jet& o)
{
    *this = multiply(reciprocal(o));
    return *this;
}

Jet& Jet::operator+=(double s)
{
    c_.at(0) += s;
    return *this;
}

Jet& Jet::operator-=(double s)
{
    c_.at(0) -= s;
    return *this;
}

Jet& Jet::operator*=(double s)
{
    for (auto& v : c_) v *= s;
    return *this;
}

Jet& Jet::operator/=(double s)
{
    if (s == 0.0) throw DomainError("division", {});
    for (auto& v : c_) v /= s;
    return *this;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }
Jet operator*(const Jet& a, const Jet& b)
{
    Jet r = a;
    r *= b;
    return r;
}
Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
Jet operator+(Jet a, double s) { return a += s; }
Jet operator+(double s, Jet a) { return a += s; }
Jet operator-(Jet a, double s) { return a -= s; }
Jet operator-(double s, const Jet& a) { return (-a) += s; }
Jet operator*(Jet a, double s) { return a *= s; }
Jet operator*(double s, Jet a) { return a *= s; }
Jet operator/(Jet a, double s) { return a /= s; }
Jet operator/(double s, const Jet& a) { return reciprocal(a) *= s; }

// ---------------------------------------------------------------------------
// Elementary functions via univariate Taylor coefficients about the base value.

namespace {

using Series = std::vector<double>;

Series series(int order) { return Series(static_cast<std::size_t>(order) + 1, 0.0); }

double inv_factorial(int k)
{
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return 1.0 / f;
}

// Coefficients of (a0 + t)^r, generalized binomial series.
Series power_series(double a0, double r, int order)
{
    Series c = series(order);
    double binom = 1.0;
    for (int k = 0; k <= order; ++k) {
        c[static_cast<std::size_t>(k)] = binom * std::pow(a0, r - k);
        binom *= (r - k) / (k + 1.0);
    }
    return c;
}

} // namespace

Jet reciprocal(const Jet& a)
{
    const double a0 = a.value();
    if (a0 == 0.0 || !std::isfinite(a0)) throw DomainError("division", {});
    Series c = series(a.order());
    double p = 1.0 / a0;
    for (int k = 0; k <= a.order(); ++k) {
        c[static_cast<std::size_t>(k)] = (k % 2 ? -p : p);
        p /= a0;
    }
    return a.compose(c);
}

Jet sin(const Jet& a)
{
    const double s = std::sin(a.value()), co = std::cos(a.value());
    const std::array<double, 4> cyc{s, co, -s, -co};
    Series c = series(a.order());
    for (int k = 0; k <= a.order(); ++k) c[static_cast<std::size_t>(k)] = cyc[k % 4] * inv_factorial(k);
    return a.compose(c);
}

Jet cos(const Jet& a)
{
    const double s = std::sin(a.value()), co = std::cos(a.value());
    const std::array<double, 4> cyc{co, -s, -co, s};
    Series c = series(a.order());
    for (int k = 0; k <= a.order(); ++k) c[static_cast<std::size_t>(k)] = cyc[k % 4] * inv_factorial(k);
    return a.compose(c);
}

Jet tan(const Jet& a)
{
    const double t0 = std::tan(a.value());
    if (!std::isfinite(t0) || std::abs(std::cos(a.value())) < 1e-300) throw DomainError("tan", {});
    // T' = 1 + T^2 as a recurrence on Taylor coefficients.
    Series t = series(a.order());
    t[0] = t0;
    for (int k = 0; k < a.order(); ++k) {
        double conv = 0.0;
        for (int i = 0; i <= k; ++i) conv += t[static_cast<std::size_t>(i)] * t[static_cast<std::size_t>(k - i)];
        t[static_cast<std::size_t>(k + 1)] = ((k == 0 ? 1.0 : 0.0) + conv) / (k + 1);
    }
    return a.compose(t);
}

Jet tanh(const Jet& a)
{
    Series t = series(a.order());
    t[0] = std::tanh(a.value());
    for (int k = 0; k < a.order(); ++k) {
        double conv = 0.0;
        for (int i = 0; i <= k; ++i) conv += t[static_cast<std::size_t>(i)] * t[static_cast<std::size_t>(k - i)];
        t[static_cast<std::size_t>(k + 1)] = ((k == 0 ? 1.0 : 0.0) - conv) / (k + 1);
    }
    return a.compose(t);
}

Jet exp(const Jet& a)
{
    const double e0 = std::exp(a.value());
    if (!std::isfinite(e0)) throw DomainError("exp", {});
    Series c = series(a.order());
    for (int k = 0; k <= a.order(); ++k) c[static_cast<std::size_t>(k)] = e0 * inv_factorial(k);
    return a.compose(c);
}

Jet log(const Jet& a)
{
    const double a0 = a.value();
    if (!(a0 > 0.0) || !std::isfinite(a0)) throw DomainError("log", {});
    Series c = series(a.order());
    c[0] = std::log(a0);
    double p = 1.0 / a0;
    for (int k = 1; k <= a.order(); ++k) {
        c[static_cast<std::size_t>(k)] = (k % 2 ? p : -p) / k;
        p /= a0;
    }
    return a.compose(c);
}

Jet sqrt(const Jet& a)
{
    if (!(a.value() > 0.0) || !std::isfinite(a.value())) throw DomainError("sqrt", {});
    return a.compose(power_series(a.value(), 0.5, a.order()));
}

Jet sinh(const Jet& a)
{
    const double s = std::sinh(a.value()), co = std::cosh(a.value());
    Series c = series(a.order());
    for (int k = 0; k <= a.order(); ++k) c[static_cast<std::size_t>(k)] = (k % 2 ? co : s) * inv_factorial(k);
    return a.compose(c);
}

Jet cosh(const Jet& a)
{
    const double s = std::sinh(a.value()), co = std::cosh(a.value());
    Series c = series(a.order());
    for (int k = 0; k <= a.order(); ++k) c[static_cast<std::size_t>(k)] = (k % 2 ? s : co) * inv_factorial(k);
    return a.compose(c);
}

Jet atan(const Jet& a)
{
    const double a0 = a.value();
    const int n = a.order();
    // d/dt atan(a0 + t) = 1 / s(t), s(t) = (1 + a0^2) + 2 a0 t + t^2.
    const std::array<double, 3> s{1.0 + a0 * a0, 2.0 * a0, 1.0};
    Series r = series(n);
    r[0] = 1.0 / s[0];
    for (int k = 1; k < n; ++k) {
        double acc = 0.0;
        for (int j = 1; j <= std::min(k, 2); ++j) acc += s[static_cast<std::size_t>(j)] * r[static_cast<std::size_t>(k - j)];
        r[static_cast<std::size_t>(k)] = -acc / s[0];
    }
    Series c = series(n);
    c[0] = std::atan(a0);
    for (int k = 1; k <= n; ++k) c[static_cast<std::size_t>(k)] = r[static_cast<std::size_t>(k - 1)] / k;
    return a.compose(c);
}

Jet pow(const Jet& a, int n)
{
    if (n < 0) return reciprocal(pow(a, -n));
    Jet result(a.dim(), a.order(), 1.0);
    Jet base = a;
    unsigned e = static_cast<unsigned>(n);
    while (e) {
        if (e & 1u) result *= base;
        e >>= 1u;
        if (e) base *= base;
    }
    return result;
}

Jet pow(const Jet& a, double r)
{
    if (r == std::trunc(r) && std::abs(r) <= 64.0) return pow(a, static_cast<int>(r));
    if (!(a.value() > 0.0) || !std::isfinite(a.value())) throw DomainError("pow", {});
    return a.compose(power_series(a.value(), r, a.order()));
}

Jet pow(const Jet& a, const Jet& b)
{
    if (!(a.value() > 0.0)) throw DomainError("pow", {});
    return exp(b * log(a));
}

} // namespace cfdual
