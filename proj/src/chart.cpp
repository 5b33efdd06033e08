#include "cfdual/chart.hpp"

#include "cfdual/error.hpp"
#include "cfdual/eval.hpp"

#include <cmath>
#include <stdexcept>

namespace cfdual {

Box Box::cube(std::size_t dim, double lo, double hi)
{
    return Box{std::vector<double>(dim, lo), std::vector<double>(dim, hi)};
}

bool Box::contains(std::span<const double> p) const
{
    if (p.size() != dim()) return false;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (!(p[i] > lo[i] && p[i] < hi[i])) return false;
    return true;
}

void Box::validate() const
{
    if (lo.size() != hi.size() || lo.empty()) throw std::invalid_argument("box: bounds must have equal, nonzero length");
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (!(lo[i] < hi[i]) || !std::isfinite(lo[i]) || !std::isfinite(hi[i]))
            throw std::invalid_argument("box: empty or unbounded interval on axis " + std::to_string(i + 1));
}

std::vector<Point> sample_lattice(const Box& box, std::size_t count, double offset)
{
    box.validate();
    const std::size_t n = box.dim();
    // phi_n is the positive root of x^{n+1} = x + 1.
    double phi = 2.0;
    for (int it = 0; it < 64; ++it) phi = std::pow(1.0 + phi, 1.0 / static_cast<double>(n + 1));
    std::vector<double> alpha(n);
    for (std::size_t i = 0; i < n; ++i) alpha[i] = std::fmod(std::pow(1.0 / phi, static_cast<double>(i + 1)), 1.0);

    std::vector<Point> pts;
    pts.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        Point p(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double t = std::fmod(offset + static_cast<double>(k + 1) * alpha[i], 1.0);
            p[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * (0.05 + 0.9 * t);
        }
        pts.push_back(std::move(p));
    }
    return pts;
}

std::size_t default_sample_count(std::size_t dim)
{
    std::size_t c = 1;
    for (std::size_t i = 0; i < std::min<std::size_t>(dim, 3); ++i) c *= 10;
    return c;
}

std::vector<Jet> coordinate_jets(std::span<const double> p, int order)
{
    std::vector<Jet> v;
    v.reserve(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) v.push_back(Jet::variable(p.size(), order, i, p[i]));
    return v;
}

ChartMap::ChartMap(Box box, std::size_t components, Evaluator eval)
    : box_(std::move(box)), m_(components), eval_(std::move(eval))
{
    box_.validate();
}

ChartMap::ChartMap(Box box, std::vector<Expr> components) : box_(std::move(box)), m_(components.size())
{
    box_.validate();
    for (const auto& e : components)
        if (e.min_dimension() > box_.dim()) throw std::invalid_argument("map component uses a variable beyond the dimension");
    eval_ = [exprs = components](std::span<const double> p, int order) {
        std::vector<Jet> out;
        out.reserve(exprs.size());
        for (const auto& e : exprs) out.push_back(eval_jet(e, p, order));
        return out;
    };
    exprs_ = std::move(components);
}

std::vector<Jet> ChartMap::jets(std::span<const double> p, int order) const
{
    if (!box_.contains(p)) throw PreconditionError("point " + format_point({p.begin(), p.end()}) + " outside chart box");
    std::vector<Jet> v = eval_(p, order);
    if (v.size() != m_) throw std::logic_error("map evaluator returned wrong number of components");
    return v;
}

Eigen::VectorXd ChartMap::value(std::span<const double> p) const
{
    const auto v = jets(p, 0);
    return values(v);
}

Eigen::MatrixXd ChartMap::differential(std::span<const double> p) const
{
    const auto v = jets(p, 1);
    return cfdual::differential(v);
}

Eigen::VectorXd values(std::span<const Jet> v)
{
    Eigen::VectorXd r(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) r(static_cast<Eigen::Index>(i)) = v[i].value();
    return r;
}

Eigen::MatrixXd differential(std::span<const Jet> v)
{
    const std::size_t n = v.empty() ? 0 : v[0].dim();
    Eigen::MatrixXd d(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t a = 0; a < n; ++a)
            d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a)) = v[i].partial({a});
    return d;
}

} // namespace cfdual
