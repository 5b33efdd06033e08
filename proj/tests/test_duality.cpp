#include "cfdual/duality.hpp"
#include "cfdual/error.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace cfdual;

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

ChartMetric conformal(const std::string& sigma, std::size_t n, double half = 1.0)
{
    return ChartMetric::conformally_flat(parse_expr(sigma, n), Box::cube(n, -half, half));
}

ChartMetric hyperbolic(std::size_t n)
{
    const double h = 0.9 / std::sqrt(static_cast<double>(n));
    return ChartMetric::hyperbolic(Box::cube(n, -h, h));
}

TEST(HatA, ClosedFormSpaceForms)
{
    for (std::size_t n = 3; n <= 5; ++n) {
        const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
        const ChartMetric sphere = ChartMetric::round_sphere(Box::cube(n, -1, 1));
        const ChartMetric hyp = hyperbolic(n);
        const ChartMetric flat = ChartMetric::flat(Box::cube(n, -1, 1));
        for (const auto& p : sample_lattice(Box::cube(n, -0.3, 0.3), 10)) {
            EXPECT_LE(max_abs(hat_A(sphere, p) - 0.5 * id), 1e-10);
            EXPECT_LE(max_abs(hat_A(hyp, p) + 0.5 * id), 1e-9);
            EXPECT_EQ(max_abs(hat_A(flat, p)), 0.0);
        }
    }
}

TEST(DualMetric, SpaceFormsGiveQuarterMetric)
{
    for (std::size_t n = 3; n <= 5; ++n) {
        const ChartMetric sphere = ChartMetric::round_sphere(Box::cube(n, -1, 1));
        const ChartMetric hyp = hyperbolic(n);
        for (const auto& p : sample_lattice(Box::cube(n, -0.3, 0.3), 10)) {
            for (const ChartMetric* m : {&sphere, &hyp}) {
                const DualityReport r = dual_metric(*m, p);
                const Eigen::MatrixXd g = m->at(p);
                EXPECT_LE(max_abs(r.dual_metric - 0.25 * g) / max_abs(g), 1e-9);
                EXPECT_FALSE(r.parabolic);
                EXPECT_TRUE(r.regular());
            }
        }
    }
}

TEST(DualMetric, FlatIsParabolic)
{
    const double p[] = {0.1, 0.2, 0.3};
    const DualityReport r = dual_metric(ChartMetric::flat(Box::cube(3, -1, 1)), p);
    EXPECT_TRUE(r.parabolic);
    EXPECT_EQ(max_abs(r.dual_metric), 0.0);
    EXPECT_EQ(r.det_hat_a, 0.0);
}

TEST(DualMetric, AlgebraicStructure)
{
    // ǧ = Âᵀ g Â, symmetric, positive semidefinite; Â is g-self-adjoint.
    const ChartMetric m = conformal("0.4*u1 + 0.2*u2*u3 - 0.1*u4^2 + 0.3*sin(u2)", 4);
    for (const auto& p : sample_lattice(m.box(), 40)) {
        const DualityReport r = dual_metric(m, p);
        const Eigen::MatrixXd g = m.at(p);
        const Eigen::MatrixXd& a = r.hat_a;
        const double scale = std::max(1.0, max_abs(r.dual_metric));
        EXPECT_LE(max_abs(r.dual_metric - a.transpose() * g * a) / scale, 1e-12);
        EXPECT_LE(max_abs(r.dual_metric - r.dual_metric.transpose()), 1e-12 * scale);
        EXPECT_LE(max_abs(g * a - (g * a).transpose()) / std::max(1.0, max_abs(g * a)), 1e-10);
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r.dual_metric);
        EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12 * scale);
        EXPECT_NEAR(r.det_hat_a, a.determinant(), 1e-12 * std::max(1.0, std::fabs(r.det_hat_a)));
    }
}

TEST(DualMetric, ParabolicFlagIsMonotoneInThreshold)
{
    Eigen::VectorXd ev(3);
    ev << 1e-6, 0.5, 1.0;  // |det| = 5e-7, scale 1
    EXPECT_FALSE(is_parabolic(ev, 1e-8));
    EXPECT_TRUE(is_parabolic(ev, 1e-6));
    EXPECT_TRUE(is_parabolic(Eigen::VectorXd::Zero(3)));
    const ChartMetric m = conformal("0.3*u1^2 - 0.2*u2 + 0.1*u1*u3", 3);
    for (const auto& p : sample_lattice(m.box(), 100)) {
        bool previous = false;
        for (double t : {1e-14, 1e-12, 1e-10, 1e-8, 1e-6, 1e-4, 1e-2}) {
            const bool now = dual_metric(m, p, t).parabolic;
            EXPECT_TRUE(!previous || now) << "threshold " << t;
            previous = now;
        }
    }
}

TEST(VerifyDuality, SphereSpectraAreReciprocal)
{
    const ChartMetric m = ChartMetric::round_sphere(Box::cube(4, -1, 1));
    const auto pts = sample_lattice(m.box(), 20);
    const DualityVerification v = verify_duality(m, pts);
    EXPECT_TRUE(v.passed());
    EXPECT_EQ(v.regular_samples, 20u);
    EXPECT_TRUE(v.parabolic.empty());
    // Independent oracle: eigenvalues of Â against g are 1/2, against ǧ = g/4 they are 2.
    for (const auto& p : pts) {
        const DualityReport r = dual_metric(m, p);
        for (int i = 0; i < 4; ++i) EXPECT_NEAR(r.eigenvalues(i), 0.5, 1e-10);
        const Eigen::MatrixXd a = m.at(p) * r.hat_a;  // A_ij
        const Eigen::MatrixXd wrt_dual = r.dual_metric.inverse() * a;
        const Eigen::EigenSolver<Eigen::MatrixXd> es(wrt_dual);
        for (int i = 0; i < 4; ++i) EXPECT_NEAR(es.eigenvalues()(i).real(), 2.0, 1e-9);
        // A ǧ^{-1} A = g.
        EXPECT_LE(max_abs(a * r.dual_metric.inverse() * a - m.at(p)) / max_abs(m.at(p)), 1e-10);
    }
}

TEST(VerifyDuality, LinearConformalFactorFourDimensions)
{
    const ChartMetric m = conformal("0.3*u1", 4);
    const auto pts = sample_lattice(m.box(), 50);
    const DualityVerification v = verify_duality(m, pts);
    EXPECT_TRUE(v.input.certified);
    EXPECT_TRUE(v.passed());
    EXPECT_LE(v.schouten_invariance.worst, 1e-6);
    EXPECT_LE(v.eigen_inversion.worst, 1e-7);
    EXPECT_LE(v.involution.worst, 1e-7);
    EXPECT_LE(v.dual_conformal_flatness.worst, 1e-7);
    EXPECT_EQ(v.regular_samples + v.parabolic.size(), 50u);
}

double eigen_ratio(const ChartMetric& m, const Point& p)
{
    const Eigen::VectorXd ev = dual_metric(m, p).eigenvalues.cwiseAbs();
    return ev.minCoeff() / ev.maxCoeff();
}

TEST(VerifyDuality, GenericThreeDimensional)
{
    // This σ crosses the parabolic set inside the box; keep samples where
    // Â is well conditioned.
    const ChartMetric m = conformal("0.5*sin(u1) + 0.3*u2*u3 + 0.2*u3^2", 3, 0.8);
    std::vector<Point> pts;
    for (const auto& p : sample_lattice(m.box(), 200))
        if (eigen_ratio(m, p) >= 2e-2) pts.push_back(p);
    ASSERT_GT(pts.size(), 100u);
    const DualityVerification v = verify_duality(m, pts);
    EXPECT_EQ(v.input.criterion, FlatnessCertificate::Criterion::Codazzi);
    EXPECT_TRUE(v.passed()) << v.schouten_invariance.worst << ' ' << v.eigen_inversion.worst << ' '
                            << v.involution.worst << ' ' << v.dual_conformal_flatness.worst;
    EXPECT_EQ(v.regular_samples, pts.size());
}

TEST(VerifyDuality, ResidualsDegradeOnlyNearTheParabolicSet)
{
    // The curvature of ǧ goes through ǧ^{-1}, whose smallest eigenvalue is
    // about ratio² of the largest, so roundoff grows as the Â spectrum
    // approaches zero. Well-conditioned samples stay at roundoff.
    const ChartMetric m = conformal("0.5*sin(u1) + 0.3*u2*u3 + 0.2*u3^2", 3, 0.8);
    double far = 0.0, near = 0.0;
    for (const auto& p : sample_lattice(m.box(), 200)) {
        const std::vector<Point> one{p};
        const double r = verify_duality(m, one).schouten_invariance.worst;
        const double q = eigen_ratio(m, p);
        if (q >= 5e-2) far = std::max(far, r);
        if (q < 5e-3) near = std::max(near, r);
    }
    EXPECT_LE(far, 1e-10);
    EXPECT_GT(near, 100 * far);
}

TEST(VerifyDuality, ParabolicSamplesAreExcludedAndReported)
{
    const ChartMetric flat = ChartMetric::flat(Box::cube(4, -1, 1));
    const auto pts = sample_lattice(flat.box(), 10);
    const DualityVerification v = verify_duality(flat, pts);
    EXPECT_EQ(v.regular_samples, 0u);
    EXPECT_EQ(v.parabolic.size(), 10u);
    EXPECT_EQ(v.schouten_invariance.evaluated, 0u);
}

TEST(VerifyDuality, NonConformallyFlatInputRejected)
{
    const ChartMetric m = ChartMetric::sphere_product(Box::cube(4, -1, 1));
    const auto pts = sample_lattice(m.box(), 10);
    EXPECT_THROW(verify_duality(m, pts), PreconditionError);
}

TEST(DualChartMetric, InvolutionOfTheSphere)
{
    // ǧ = g/4 as a metric in its own right.
    const ChartMetric m = ChartMetric::round_sphere(Box::cube(3, -1, 1));
    const ChartMetric d = dual_chart_metric(m);
    for (const auto& p : sample_lattice(m.box(), 10)) {
        EXPECT_LE(max_abs(d.at(p) - 0.25 * m.at(p)), 1e-10);
        // Schouten of ǧ is A = g/2, so Â against ǧ is 2·I.
        EXPECT_LE(max_abs(hat_A(d, p) - 2.0 * Eigen::MatrixXd::Identity(3, 3)), 1e-8);
    }
}

} // namespace
