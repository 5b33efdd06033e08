#pragma once

#include "cfdual/expr.hpp"
#include "cfdual/jet.hpp"

#include <span>
#include <vector>

namespace cfdual {

/// Plain evaluation at a point.
double eval_value(const Expr& e, std::span<const double> point);

/// Value and all partials through `order` at `point`. Domain failures are
/// rethrown as DomainError carrying the point.
Jet eval_jet(const Expr& e, std::span<const double> point, int order);

/// Evaluates with each variable u_k replaced by the jet `vars[k-1]`
/// (all of the same dimension); used to compose expressions with maps.
Jet eval_jet(const Expr& e, std::span<const Jet> vars);

} // namespace cfdual
