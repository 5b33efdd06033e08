#include "cfdual/error.hpp"
#include "cfdual/surface2d.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace cfdual;

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

HoloSeed seed(const char* re, const char* im) { return {parse_expr(re, 2), parse_expr(im, 2)}; }

Eigen::MatrixXd at(const MatrixField& f, std::span<const double> p) { return f(p, 0).value(); }

const ChartMetric kFlat = ChartMetric::flat(Box::cube(2, -2, 2));

TEST(Seed, ExpansionOfDzSquared)
{
    const double p[] = {0.3, -0.7};
    Eigen::Matrix2d one, i;
    one << 2, 0, 0, -2;
    i << 0, -2, -2, 0;
    EXPECT_LE(max_abs(codazzi_from_holomorphic(seed("1", "0"), kFlat, p) - one), 1e-15);
    EXPECT_LE(max_abs(codazzi_from_holomorphic(seed("0", "1"), kFlat, p) - i), 1e-15);
    EXPECT_EQ(max_abs(codazzi_from_holomorphic(seed("0", "0"), kFlat, p)), 0.0);
}

TEST(Seed, TracelessAndCodazziForConformalMetrics)
{
    // φ = z² = (u1² - u2²) + i 2u1u2 and φ = e^z.
    const ChartMetric g = ChartMetric::conformally_flat(parse_expr("0.3*u1 - 0.2*u1*u2", 2), Box::cube(2, -1, 1));
    for (const HoloSeed& s : {seed("u1^2 - u2^2", "2*u1*u2"), seed("exp(u1)*cos(u2)", "exp(u1)*sin(u2)")}) {
        const MatrixField b = seed_tensor(s);
        for (const auto& p : sample_lattice(g.box(), 30)) {
            EXPECT_LE(cauchy_riemann_residual(s, p), 1e-12);
            const Eigen::Matrix2d m = codazzi_from_holomorphic(s, g, p);
            EXPECT_LE(std::fabs((g.at(p).inverse() * m).trace()), 1e-9);
            EXPECT_LE(codazzi_residual(g, b, p), 1e-7);
        }
    }
}

TEST(Seed, LinearityIsExact)
{
    const HoloSeed a = seed("u1^2 - u2^2", "2*u1*u2"), b = seed("exp(u1)*cos(u2)", "exp(u1)*sin(u2)");
    const HoloSeed combo{Expr::number(2) * a.re - Expr::number(3) * b.re, Expr::number(2) * a.im - Expr::number(3) * b.im};
    for (const auto& p : sample_lattice(Box::cube(2, -1, 1), 20)) {
        const Eigen::Matrix2d lhs = codazzi_from_holomorphic(combo, kFlat, p);
        const Eigen::Matrix2d rhs =
            2 * codazzi_from_holomorphic(a, kFlat, p) - 3 * codazzi_from_holomorphic(b, kFlat, p);
        EXPECT_LE(max_abs(lhs - rhs), 1e-14);
    }
}

TEST(Seed, CauchyRiemannViolationRejected)
{
    const double p[] = {0.2, 0.4};
    const HoloSeed bad = seed("u1", "0");
    EXPECT_NEAR(cauchy_riemann_residual(bad, p), 1.0, 1e-15);
    EXPECT_THROW(codazzi_from_holomorphic(bad, kFlat, p), PreconditionError);
    EXPECT_THROW(seed_tensor(bad)(p, 1), PreconditionError);
    const HoloSeed conj = seed("u1", "-u2");  // conjugate of z
    EXPECT_NEAR(cauchy_riemann_residual(conj, p), 2.0, 1e-15);
    EXPECT_THROW(second_form_from_seed(conj, kFlat)(p, 0), PreconditionError);
}

TEST(SecondForm, FlatSeedHasZeroTrace)
{
    const MatrixField ii = second_form_from_seed(seed("1", "0"), kFlat);
    const double p[] = {0.5, 0.5};
    Eigen::Matrix2d b;
    b << 2, 0, 0, -2;
    EXPECT_LE(max_abs(at(ii, p) - b), 1e-15);
    EXPECT_LE(trace_condition_residual(kFlat, ii, p), 1e-15);
}

TEST(SecondForm, SphereCentredChoice)
{
    const ChartMetric g = ChartMetric::round_sphere(Box::cube(2, -1, 1));
    const MatrixField ii = second_form_from_seed(seed("0", "0"), g);
    for (const auto& p : sample_lattice(g.box(), 20)) {
        EXPECT_LE(max_abs(at(ii, p) + 0.5 * g.at(p)), 1e-13);
        EXPECT_NEAR((g.at(p).inverse() * at(ii, p)).trace(), -1.0, 1e-13);
    }
}

TEST(SecondForm, TraceConditionForRandomFactors)
{
    oracle::ExprGenerator gen(2, 77);
    for (int i = 0; i < 5; ++i) {
        const Expr sigma = Expr::number(0.4) * gen(2);
        const ChartMetric g = ChartMetric::conformally_flat(sigma, Box::cube(2, -1, 1));
        const MatrixField ii = second_form_from_seed(seed("0", "0"), g);
        const MatrixField ii_z = second_form_from_seed(seed("u1", "u2"), g);
        for (const auto& p : sample_lattice(g.box(), 100)) {
            EXPECT_LE(trace_condition_residual(g, ii, p), 1e-8) << to_string(sigma);
            EXPECT_LE(trace_condition_residual(g, ii_z, p), 1e-8) << to_string(sigma);
            EXPECT_LE(codazzi_residual(g, ii_z, p), 1e-7) << to_string(sigma);
        }
    }
}

TEST(SecondForm, BadBaseFormRejected)
{
    const ChartMetric g = ChartMetric::round_sphere(Box::cube(2, -1, 1));
    const auto pts = sample_lattice(g.box(), 5);
    // Zero does not satisfy the trace condition for K = 1.
    const MatrixField zero = [](std::span<const double>, int order) { return JetMatrix(2, 2, Jet(2, order, 0.0)); };
    EXPECT_THROW(second_form_from_seed(seed("0", "0"), g, zero, pts), PreconditionError);
    // The sphere's -g/2 does.
    const MatrixField half = [g](std::span<const double> p, int order) {
        JetMatrix m = g.jets(p, order);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) m(i, j) = -0.5 * m(i, j);
        return m;
    };
    EXPECT_NO_THROW(second_form_from_seed(seed("0", "0"), g, half, pts));
}

TEST(Realization, FlatPlaneSection)
{
    const MatrixField zero = [](std::span<const double>, int order) { return JetMatrix(2, 2, Jet(2, order, 0.0)); };
    const ChartMetric g = ChartMetric::flat(Box::cube(2, -0.1, 1.1));
    const RealizationResult r = realize_in_Q3(g, zero, Grid::covering({0, 0}, {1, 1}, 0.01));
    EXPECT_EQ(r.grid.nodes[0], 101u);
    EXPECT_LE(r.drift, 1e-9);
    EXPECT_LE(r.first_error, 1e-8);
    EXPECT_LE(r.second_error, 1e-9);
    EXPECT_LE(r.path_dependence, 1e-9);
    // y is constant and x(u) = x0 + u1 ξ1 + u2 ξ2 - (|u|²/2) y: the section of
    // the lightcone by the null hyperplane ⟨·, y⟩ = 1.
    const auto& a = r.at(0, 0);
    const auto& b = r.at(100, 100);
    EXPECT_LE((a.y - b.y).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((b.x - (a.x + a.xi1 + a.xi2 - a.y)).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Realization, SphereMatchesSphereSectionForms)
{
    const ChartMetric g = ChartMetric::round_sphere(Box::cube(2, -1, 1));
    const MatrixField ii = second_form_from_seed(seed("0", "0"), g);
    const RealizationResult r = realize_in_Q3(g, ii, Grid::covering({-0.4, -0.4}, {0.4, 0.4}, 0.02));
    EXPECT_LE(r.drift, 1e-6);
    for (const auto& node : r.nodes) {
        const NodeForms f = realized_forms(g, ii, node);
        const Eigen::MatrixXd gp = g.at(node.u);
        EXPECT_LE(max_abs(f.first - gp), 1e-6);
        EXPECT_LE(max_abs(f.second + 0.5 * gp), 1e-6);
        EXPECT_LE(max_abs(f.third - 0.25 * gp), 1e-6);
    }
}

TEST(Realization, FourthOrderConvergenceForConstantSeed)
{
    const ChartMetric g = ChartMetric::flat(Box::cube(2, -0.1, 1.1));
    const MatrixField ii = second_form_from_seed(seed("1", "0"), g);
    std::vector<RealizationResult> runs;
    for (double h : {0.1, 0.05, 0.025}) runs.push_back(realize_in_Q3(g, ii, Grid::covering({0, 0}, {1, 1}, h)));
    for (std::size_t k = 1; k < runs.size(); ++k) {
        EXPECT_GE(std::log2(runs[k - 1].drift / runs[k].drift), 3.5);
        EXPECT_GE(std::log2(runs[k - 1].first_error / runs[k].first_error), 3.5);
        EXPECT_GE(std::log2(runs[k - 1].second_error / runs[k].second_error), 3.5);
        EXPECT_LE(runs[k].path_dependence, 1e-12);
    }
    // Self-convergence of the far corner.
    auto corner = [](const RealizationResult& r) { return r.at(r.grid.nodes[0] - 1, r.grid.nodes[1] - 1).x; };
    const double e1 = (corner(runs[0]) - corner(runs[1])).norm();
    const double e2 = (corner(runs[1]) - corner(runs[2])).norm();
    EXPECT_GE(std::log2(e1 / e2), 3.5);
}

TEST(Realization, IntegrabilityFailureRejected)
{
    // II = 0 on the round sphere violates K + tr II = 0.
    const ChartMetric g = ChartMetric::round_sphere(Box::cube(2, -1, 1));
    const MatrixField zero = [](std::span<const double>, int order) { return JetMatrix(2, 2, Jet(2, order, 0.0)); };
    EXPECT_THROW(realize_in_Q3(g, zero, Grid::covering({0, 0}, {0.2, 0.2}, 0.05)), PreconditionError);
    // A drift bound below what the step can reach.
    const ChartMetric flat = ChartMetric::flat(Box::cube(2, -0.1, 1.1));
    const MatrixField ii = second_form_from_seed(seed("1", "0"), flat);
    EXPECT_THROW(realize_in_Q3(flat, ii, Grid::covering({0, 0}, {1, 1}, 0.25), 1e-8), PreconditionError);
}

TEST(FlatDuality, ConstantSeed)
{
    const MatrixField ii = second_form_from_seed(seed("1", "0"), kFlat);
    const auto pts = sample_lattice(Box::cube(2, -1, 1), 30);
    const FlatDualityReport r = flat_duality_check(kFlat, ii, pts);
    EXPECT_TRUE(r.passed());
    EXPECT_TRUE(r.degenerate.empty());
    // ǧ = II δ II = 4δ.
    for (const auto& p : pts) {
        const Eigen::MatrixXd b = at(ii, p);
        EXPECT_LE(max_abs(b * b - 4 * Eigen::MatrixXd::Identity(2, 2)), 1e-14);
    }
}

TEST(FlatDuality, ZeroSeedIsDegenerateEverywhere)
{
    const MatrixField ii = second_form_from_seed(seed("0", "0"), kFlat);
    EXPECT_THROW(flat_duality_check(kFlat, ii, sample_lattice(Box::cube(2, -1, 1), 10)), PreconditionError);
}

TEST(FlatDuality, IdentitySeedFlagsOrigin)
{
    const MatrixField ii = second_form_from_seed(seed("u1", "u2"), kFlat);
    std::vector<Point> pts = sample_lattice(Box::cube(2, -1, 1), 50);
    pts.push_back({0.0, 0.0});
    const FlatDualityReport r = flat_duality_check(kFlat, ii, pts);
    EXPECT_TRUE(r.passed()) << r.dual_curvature.worst << ' ' << r.dual_traceless.worst << ' ' << r.dual_codazzi.worst;
    ASSERT_EQ(r.degenerate.size(), 1u);
    EXPECT_EQ(r.degenerate[0], (Point{0.0, 0.0}));
    EXPECT_EQ(r.dual_curvature.evaluated, 50u);
}

TEST(FlatDuality, NonFlatMetricRejected)
{
    const ChartMetric g = ChartMetric::round_sphere(Box::cube(2, -1, 1));
    const MatrixField ii = second_form_from_seed(seed("1", "0"), g);
    EXPECT_THROW(flat_duality_check(g, ii, sample_lattice(g.box(), 5)), PreconditionError);
}

TEST(Grid, Covering)
{
    const Grid g = Grid::covering({-0.5, 0.0}, {0.5, 0.3}, 0.1);
    EXPECT_EQ(g.nodes[0], 11u);
    EXPECT_EQ(g.nodes[1], 4u);
    EXPECT_NEAR(g.h, 0.1, 1e-15);
    EXPECT_NEAR(g.node(10, 3)[0], 0.5, 1e-15);
    EXPECT_NEAR(g.node(10, 3)[1], 0.3, 1e-15);
}

} // namespace
