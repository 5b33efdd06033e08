#pragma once

#include "cfdual/check.hpp"
#include "cfdual/curvature.hpp"

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

namespace cfdual {

inline constexpr double kParabolicThreshold = 1e-10;

struct DualityReport {
    Point point;
    Eigen::MatrixXd hat_a;        // Â^i_j = g^{ia} A_aj
    Eigen::MatrixXd dual_metric;  // ǧ_ij = A_ia g^{ab} A_bj
    double det_hat_a = 0.0;
    Eigen::VectorXd eigenvalues;  // of Â, ascending
    bool parabolic = false;

    bool regular() const noexcept { return !parabolic; }
};

/// |det Â| <= threshold · (max |λ|)^n. The zero operator is parabolic.
bool is_parabolic(const Eigen::VectorXd& eigenvalues, double threshold = kParabolicThreshold);

Eigen::MatrixXd hat_A(const ChartMetric& m, std::span<const double> p);
DualityReport dual_metric(const ChartMetric& m, std::span<const double> p, double threshold = kParabolicThreshold);

/// ǧ = A g^{-1} A from metric jets of order k; the result has order k - 2.
JetMatrix dual_metric_jets(const JetMatrix& g);
/// Same for a metric whose Schouten tensor is replaced by `a`.
JetMatrix dual_metric_jets(const JetMatrix& g, const JetMatrix& a);

/// ǧ as a metric in its own right (positive definite only off the parabolic set).
ChartMetric dual_chart_metric(const ChartMetric& m);

struct DualityTolerances {
    double schouten = 1e-6;
    double spectrum = 1e-7;    // relative
    double involution = 1e-7;  // relative to max |g_ij|
    double flatness = 1e-7;    // ‖W(ǧ)‖ / max(1, ‖R(ǧ)‖), or relative Codazzi residual at n = 3
    double input_flatness = 1e-8;
    double parabolic = kParabolicThreshold;
};

/// What happens at a parabolic sample; no verdict attaches to it.
struct ParabolicSample {
    Point point;
    double det_hat_a = 0.0;
    Eigen::VectorXd eigenvalues;
    double dual_min_eigenvalue = 0.0;  // smallest eigenvalue of g^{-1} ǧ
};

struct DualityVerification {
    FlatnessCertificate input;
    ResidualCheck schouten_invariance{"schouten_invariance"};
    ResidualCheck eigen_inversion{"eigen_inversion"};
    ResidualCheck involution{"involution"};
    ResidualCheck dual_conformal_flatness{"dual_conformal_flatness"};
    std::vector<ParabolicSample> parabolic;
    std::size_t regular_samples = 0;

    bool passed() const noexcept
    {
        return input.certified && schouten_invariance.pass && eigen_inversion.pass && involution.pass
               && dual_conformal_flatness.pass;
    }
};

/// Checks Schouten(ǧ) = A, reciprocal spectra, A ǧ^{-1} A = g and the
/// flatness certificate of ǧ at every non-parabolic sample. Throws
/// PreconditionError when the input fails its own certificate (n >= 3).
DualityVerification verify_duality(const ChartMetric& m, std::span<const Point> samples,
                                   const DualityTolerances& tol = {});

} // namespace cfdual
