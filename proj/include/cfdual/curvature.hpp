#pragma once

#include "cfdual/chart.hpp"
#include "cfdual/expr.hpp"
#include "cfdual/jet_linalg.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cfdual {

/// Symmetric 2-tensor field evaluated as jets: (point, order) -> matrix.
using MatrixField = std::function<JetMatrix(std::span<const double>, int)>;

/// Riemannian metric on a coordinate box, either from component
/// expressions or from a jet-valued evaluator (for derived metrics).
class ChartMetric {
public:
    ChartMetric(Box box, std::vector<std::vector<Expr>> components, std::string label = {});
    ChartMetric(Box box, MatrixField evaluator, std::string label = {});

    static ChartMetric flat(Box box);
    /// e^{2σ} δ.
    static ChartMetric conformally_flat(const Expr& sigma, Box box);
    /// Unit round sphere in the stereographic chart: 4 (1+|u|²)^{-2} δ.
    static ChartMetric round_sphere(Box box);
    /// Poincaré ball: 4 (1-|u|²)^{-2} δ.
    static ChartMetric hyperbolic(Box box);
    /// Product of two unit 2-spheres, each in its stereographic chart (n = 4).
    static ChartMetric sphere_product(Box box);

    std::size_t dim() const noexcept { return box_.dim(); }
    const Box& box() const noexcept { return box_; }
    const std::string& label() const noexcept { return label_; }
    const std::optional<std::vector<std::vector<Expr>>>& components() const noexcept { return components_; }

    /// Jets of g_ij at p. Throws PreconditionError outside the box and
    /// DegenerateMetricError unless λ_min > 1e-12 λ_max.
    JetMatrix jets(std::span<const double> p, int order) const;
    Eigen::MatrixXd at(std::span<const double> p) const;

private:
    Box box_;
    MatrixField eval_;
    std::optional<std::vector<std::vector<Expr>>> components_;
    std::string label_;
};

/// Throws DegenerateMetricError unless g is symmetric positive definite
/// with λ_min > 1e-12 λ_max.
void require_positive_definite(const Eigen::MatrixXd& g, std::span<const double> p);

/// Curvature of a metric given as jets of order k about a point. Orders:
/// Γ k-1, everything else k-2.
struct CurvatureJets {
    JetMatrix g, ginv;
    JetTensor christoffel;          // (k, i, j) = Γ^k_ij
    JetTensor riemann;              // (i, j, k, l) = g(R(∂i,∂j)∂k, ∂l)
    JetMatrix ricci;
    Jet scalar;
    std::optional<JetMatrix> schouten;  // n >= 3
    std::optional<JetTensor> weyl;      // n >= 4
};

CurvatureJets curvature_jets(const JetMatrix& g);
JetTensor christoffel_jets(const JetMatrix& g, const JetMatrix& ginv);

/// (k, i, j) = ∇_k T_ij, one order below min(order T, order Γ + 1).
JetTensor covariant_derivative(const JetMatrix& t, const JetTensor& christoffel);
/// max |∇_k T_ij - ∇_i T_kj| at the base point.
double codazzi_residual(const JetMatrix& t, const JetTensor& christoffel);

struct CurvaturePack {
    Point point;
    Eigen::MatrixXd g, ginv;
    Tensor christoffel;
    Tensor riemann;
    Eigen::MatrixXd ricci;
    double scalar = 0.0;
    std::optional<Eigen::MatrixXd> schouten;
    std::optional<Tensor> weyl;
};

CurvaturePack to_pack(const CurvatureJets& c, Point p);

Tensor christoffel(const ChartMetric& m, std::span<const double> p);
CurvaturePack curvature_pack(const ChartMetric& m, std::span<const double> p);

double codazzi_residual(const ChartMetric& m, const MatrixField& t, std::span<const double> p);
double codazzi_residual(const ChartMetric& m, const std::vector<std::vector<Expr>>& t, std::span<const double> p);

/// Expression table as a jet field (components must be square and symmetric).
MatrixField expr_field(std::vector<std::vector<Expr>> t);

// Diagnostics on a pack.
double riemann_symmetry_residual(const CurvaturePack& c);
double bianchi_residual(const CurvaturePack& c);
/// Largest g-trace of W over all index pairs; 0 when W is absent.
double weyl_trace_residual(const CurvaturePack& c);
/// sqrt(W_ijkl W^ijkl); 0 when W is absent.
double weyl_norm(const CurvaturePack& c);
/// sqrt(R_ijkl R^ijkl).
double riemann_norm(const CurvaturePack& c);
/// sqrt(T_ijkl T^ijkl) for a covariant 4-tensor, indices raised with g.
double invariant_norm(const Tensor& t, const Eigen::MatrixXd& g);
/// max |∂_k g_ij - Γ^m_ki g_mj - Γ^m_kj g_im|.
double metric_compatibility_residual(const ChartMetric& m, std::span<const double> p);

struct FlatnessCertificate {
    enum class Criterion { Automatic, Codazzi, Weyl };

    bool certified = true;
    Criterion criterion = Criterion::Automatic;
    double worst_residual = 0.0;
    Point worst_point;
    std::size_t samples = 0;
};

std::string_view criterion_name(FlatnessCertificate::Criterion c) noexcept;

/// n = 2 always certifies; n = 3 checks the Codazzi residual of the
/// Schouten tensor; n >= 4 checks ‖W‖.
FlatnessCertificate conformal_flatness_certificate(const ChartMetric& m, std::span<const Point> samples,
                                                   double tol = 1e-8);

} // namespace cfdual
