#pragma once

#include "cfdual/expr.hpp"
#include "cfdual/jet.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace cfdual {

using Point = std::vector<double>;

/// Open coordinate box, one interval per axis.
struct Box {
    std::vector<double> lo, hi;

    static Box cube(std::size_t dim, double lo, double hi);
    std::size_t dim() const noexcept { return lo.size(); }
    bool contains(std::span<const double> p) const;
    void validate() const;
};

/// Deterministic quasi-random samples strictly inside the box: an additive
/// recurrence lattice (golden-ratio generalization) shifted by `offset`,
/// kept 5% away from every face.
std::vector<Point> sample_lattice(const Box& box, std::size_t count, double offset = 0.5);

/// Default sample count 10^min(n,3).
std::size_t default_sample_count(std::size_t dim);

/// Coordinate jets u_1..u_n about p.
std::vector<Jet> coordinate_jets(std::span<const double> p, int order);

/// Smooth map from a coordinate box into R^m, evaluated as jets.
class ChartMap {
public:
    using Evaluator = std::function<std::vector<Jet>(std::span<const double>, int)>;

    ChartMap() = default;
    ChartMap(Box box, std::size_t components, Evaluator eval);
    ChartMap(Box box, std::vector<Expr> components);

    std::size_t dim() const noexcept { return box_.dim(); }
    std::size_t components() const noexcept { return m_; }
    const Box& box() const noexcept { return box_; }
    const std::optional<std::vector<Expr>>& expressions() const noexcept { return exprs_; }

    /// Throws PreconditionError outside the box.
    std::vector<Jet> jets(std::span<const double> p, int order) const;
    Eigen::VectorXd value(std::span<const double> p) const;
    /// m × n matrix of first partials.
    Eigen::MatrixXd differential(std::span<const double> p) const;

private:
    Box box_;
    std::size_t m_ = 0;
    Evaluator eval_;
    std::optional<std::vector<Expr>> exprs_;
};

Eigen::VectorXd values(std::span<const Jet> v);
/// m × n matrix of first partials of a vector of jets.
Eigen::MatrixXd differential(std::span<const Jet> v);

} // namespace cfdual
