#pragma once

#include "cfdual/chart.hpp"
#include "cfdual/expr.hpp"
#include "cfdual/jet_linalg.hpp"

#include <Eigen/Dense>

#include <span>

namespace cfdual {

/// x̃ = e^σ (1, p) over the stereographic chart of S^n, its dual computed two
/// ways and its second fundamental form computed two ways.
struct ConformalChange {
    Point point;
    Eigen::VectorXd x;
    Eigen::VectorXd y_explicit;   // closed form in σ, |dσ|² and α
    Eigen::VectorXd y_laplace;    // -(1/n) Δx̃ - ⟨Δx̃,Δx̃⟩/(2n²) x̃, Δ of the induced metric
    Eigen::MatrixXd second_closed;   // Hess σ - dσ⊗dσ - ((1 - |dσ|²)/2) g
    Eigen::MatrixXd second_pairing;  // -⟨dx̃, dỹ⟩ symmetrized
    double route_discrepancy = 0.0;  // max |y_explicit - y_laplace|
    double second_mismatch = 0.0;    // max |second_closed - second_pairing|
    double codazzi = 0.0;            // Codazzi residual of second_closed for the induced metric
};

ConformalChange conformal_change(const Expr& sigma, std::size_t n, std::span<const double> p);

/// Closed-form second fundamental form of e^σ (1, p) as jets of `order`
/// (needs σ through order + 2).
JetMatrix conformal_second_form(const Expr& sigma, std::span<const double> p, int order);

} // namespace cfdual
