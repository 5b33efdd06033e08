#pragma once

#include "cfdual/check.hpp"
#include "cfdual/curvature.hpp"
#include "cfdual/expr.hpp"

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <span>
#include <vector>

namespace cfdual {

/// Holomorphic function φ = Re φ + i Im φ of z = u1 + i u2.
struct HoloSeed {
    Expr re, im;
};

inline constexpr double kCauchyRiemannTolerance = 1e-6;

/// |∂₁Re φ - ∂₂Im φ| + |∂₂Re φ + ∂₁Im φ|.
double cauchy_riemann_residual(const HoloSeed& s, std::span<const double> p);

/// B = 2 Re(φ dz²) as jets: [[2a, -2b], [-2b, -2a]] for φ = a + ib. Evaluation
/// throws PreconditionError where the Cauchy-Riemann residual exceeds 1e-6.
MatrixField seed_tensor(const HoloSeed& s);

/// B at p, checked traceless and Codazzi for g (a conformally flat 2-metric).
Eigen::Matrix2d codazzi_from_holomorphic(const HoloSeed& s, const ChartMetric& g, std::span<const double> p);

/// For g = e^{2σ} δ: II_K = -(dσ⊗dσ - Hess σ - ½|dσ|² δ), a Codazzi tensor
/// with Trace_g(-II_K) = K. Equals -(K/2) g when K is constant. Requires g
/// diagonal with equal entries.
MatrixField default_base_form(const ChartMetric& g);

/// |K + Trace_g(II)| at p.
double trace_condition_residual(const ChartMetric& g, const MatrixField& second, std::span<const double> p);

/// II = B + II_K. A supplied base form is checked against the trace
/// condition (1e-8) at `validate_at`; PreconditionError if it fails.
MatrixField second_form_from_seed(const HoloSeed& s, const ChartMetric& g, std::optional<MatrixField> base = {},
                                  std::span<const Point> validate_at = {});

/// Rectangular node lattice origin + (i h, j h), 0 <= i < nodes[0], 0 <= j < nodes[1].
struct Grid {
    std::array<double, 2> origin{0.0, 0.0};
    std::array<std::size_t, 2> nodes{2, 2};
    double h = 0.01;

    /// Lattice covering [lo, hi] with step as close to h as divides it evenly.
    static Grid covering(std::array<double, 2> lo, std::array<double, 2> hi, double h);
    Point node(std::size_t i, std::size_t j) const;
};

struct RealizationNode {
    Point u;
    Eigen::Vector4d x, y, xi1, xi2;
};

struct RealizationResult {
    Grid grid;
    std::vector<RealizationNode> nodes;  // row-major in (i, j)
    double drift = 0.0;             // null, pairing and 1-form conditions
    double path_dependence = 0.0;   // far corner: u1-then-u2 vs u2-then-u1
    double first_error = 0.0;       // max |⟨ξ_i,ξ_j⟩ - g_ij|
    double second_error = 0.0;      // max |-⟨ξ_i, ∂_j y⟩ - II_ij|
    Point drift_point, first_point, second_point;  // nodes attaining the three maxima
    ResidualCheck trace_condition{"trace_condition"};
    ResidualCheck codazzi{"codazzi"};

    const RealizationNode& at(std::size_t i, std::size_t j) const { return nodes[i * grid.nodes[1] + j]; }
};

inline constexpr double kIntegrabilityTolerance = 1e-6;

/// Integrates ∂_i x = ξ_i, ∂_i ξ_j = Γ^k_ij ξ_k + II_ij x - g_ij y,
/// ∂_i y = -II_ik g^{kj} ξ_j by RK4 along the u1 spine, then along u2 fibers.
/// Throws PreconditionError when the trace or Codazzi condition fails on the
/// grid, or when the drift exceeds `drift_bound`.
RealizationResult realize_in_Q3(const ChartMetric& g, const MatrixField& second, const Grid& grid,
                                double drift_bound = 1e-3);

/// Forms of the realized surface at every node: I = ⟨ξ,ξ⟩,
/// II = -⟨ξ_i, ∂_j y⟩, III = ⟨∂_i y, ∂_j y⟩ with ∂y from the frame equations.
struct NodeForms {
    Eigen::Matrix2d first, second, third;
};
NodeForms realized_forms(const ChartMetric& g, const MatrixField& second, const RealizationNode& node);

struct FlatDualityReport {
    std::size_t samples = 0;
    std::vector<Point> degenerate;    // ǧ degenerate
    ResidualCheck dual_curvature{"dual_gaussian_curvature"};
    ResidualCheck dual_traceless{"traceless_wrt_dual"};
    ResidualCheck dual_codazzi{"codazzi_wrt_dual"};

    bool passed() const noexcept { return dual_curvature.pass && dual_traceless.pass && dual_codazzi.pass; }
};

/// ǧ = II g^{-1} II for flat g and traceless Codazzi II; flatness of ǧ and
/// the traceless Codazzi property of II with respect to ǧ where ǧ is
/// nondegenerate. Throws PreconditionError when g is not flat, II is not
/// traceless Codazzi, or ǧ degenerates at every sample.
FlatDualityReport flat_duality_check(const ChartMetric& g, const MatrixField& second, std::span<const Point> samples,
                                     double tol = 1e-6);

} // namespace cfdual
