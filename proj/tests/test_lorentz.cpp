#include "cfdual/error.hpp"
#include "cfdual/gallery.hpp"
#include "cfdual/lorentz.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace cfdual;

namespace {

constexpr double kRt2 = std::numbers::sqrt2;

MinkVec vec(std::initializer_list<double> v)
{
    MinkVec z(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double c : v) z(i++) = c;
    return z;
}

// Unit vector p in R^{n+1} from a seeded generator.
Eigen::VectorXd unit(std::size_t m, std::mt19937_64& rng)
{
    std::normal_distribution<double> d;
    Eigen::VectorXd p(static_cast<Eigen::Index>(m));
    for (Eigen::Index i = 0; i < p.size(); ++i) p(i) = d(rng);
    return p.normalized();
}

MinkVec with_time(double t, const Eigen::VectorXd& p)
{
    MinkVec z(p.size() + 1);
    z(0) = t;
    z.tail(p.size()) = p;
    return z;
}

TEST(MinkInner, Examples)
{
    EXPECT_EQ(mink_inner(vec({1, 0, 0, 0}), vec({1, 0, 0, 0})), -1.0);
    EXPECT_EQ(mink_inner(vec({1, 1, 0, 0}), vec({1, 1, 0, 0})), 0.0);
    std::mt19937_64 rng(7);
    for (int k = 0; k < 20; ++k) {
        const Eigen::VectorXd p = unit(4, rng);
        EXPECT_NEAR(mink_inner(with_time(1, p), with_time(-1, p) / 2), 1.0, 1e-15);
    }
    EXPECT_THROW(mink_inner(vec({1, 0, 0}), vec({1, 0, 0, 0})), std::invalid_argument);
}

TEST(Conversions, SphereSectionToHyperbolicPair)
{
    std::mt19937_64 rng(11);
    for (int k = 0; k < 20; ++k) {
        const Eigen::VectorXd p = unit(4, rng);
        const auto x = make_model_point(with_time(1, p), Model::LightconePlus);
        const auto y = make_model_point(with_time(-1, p) / 2, Model::LightconeMinus);
        const auto [f, nu] = to_hyperbolic_pair(x, y);
        EXPECT_EQ(f.model, Model::Hyperbolic);
        EXPECT_EQ(nu.model, Model::DeSitter);
        EXPECT_LE((f.z - with_time(3, p) / (2 * kRt2)).cwiseAbs().maxCoeff(), 1e-15);
        EXPECT_LE((nu.z - with_time(1, 3 * p) / (2 * kRt2)).cwiseAbs().maxCoeff(), 1e-15);
        EXPECT_NEAR(mink_inner(f.z, f.z), -1.0, 1e-9);
        EXPECT_NEAR(mink_inner(nu.z, nu.z), 1.0, 1e-9);
        EXPECT_NEAR(mink_inner(f.z, nu.z), 0.0, 1e-9);
    }
}

TEST(Conversions, AxisPairToLightcone)
{
    const auto f = make_model_point(vec({1, 0, 0, 0, 0}), Model::Hyperbolic);
    const auto nu = make_model_point(vec({0, 1, 0, 0, 0}), Model::DeSitter);
    const auto [x, y] = to_lightcone_pair(f, nu);
    EXPECT_LE((x.z - vec({1, 1, 0, 0, 0}) / kRt2).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LE((y.z - vec({-1, 1, 0, 0, 0}) / kRt2).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_EQ(x.model, Model::LightconePlus);
    EXPECT_EQ(y.model, Model::LightconeMinus);
    EXPECT_NEAR(mink_inner(x.z, y.z), 1.0, 1e-15);
}

TEST(Conversions, PreconditionsEnforced)
{
    // ⟨f, ν⟩ = 0.1 with ν unit spacelike.
    const double a = std::asinh(0.1);
    const auto f = make_model_point(vec({1, 0, 0, 0}), Model::Hyperbolic);
    const auto nu = make_model_point(vec({std::sinh(-a), std::cosh(a), 0, 0}), Model::DeSitter);
    EXPECT_NEAR(mink_inner(f.z, nu.z), 0.1, 1e-15);
    EXPECT_THROW(to_lightcone_pair(f, nu), PreconditionError);

    const auto x = make_model_point(vec({1, 1, 0, 0}), Model::LightconePlus);
    const auto y = make_model_point(vec({-1, 1, 0, 0}), Model::LightconeMinus);  // ⟨x, y⟩ = 2
    EXPECT_THROW(to_hyperbolic_pair(x, y), PreconditionError);
    EXPECT_THROW(make_model_point(vec({1, 0.5, 0, 0}), Model::LightconePlus), PreconditionError);
    EXPECT_THROW(make_model_point(vec({-1, 1, 0, 0}), Model::LightconePlus), PreconditionError);
    EXPECT_THROW(make_model_point(vec({-1, 0, 0, 0}), Model::Hyperbolic), PreconditionError);
}

TEST(Conversions, RoundTripsAreExactInverses)
{
    // Random lightcone pairs: x = s(1, p), y = (1/s)(-1, q)/(1 + p·q) needs ⟨x, y⟩ = 1.
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> scale(0.2, 5.0);
    for (int k = 0; k < 200; ++k) {
        const Eigen::VectorXd p = unit(5, rng), q = unit(5, rng);
        if (1 + p.dot(q) < 0.1) continue;
        const double s = scale(rng);
        const MinkVec xz = s * with_time(1, p);
        const MinkVec yz = with_time(-1, q) / (s * (1 + p.dot(q)));
        const auto x = make_model_point(xz, Model::LightconePlus, 1e-9);
        const auto y = make_model_point(yz, Model::LightconeMinus, 1e-9);
        ASSERT_NEAR(mink_inner(xz, yz), 1.0, 1e-12);
        const auto [f, nu] = to_hyperbolic_pair(x, y);
        EXPECT_NEAR(mink_inner(f.z, f.z), -1.0, 1e-9);
        EXPECT_NEAR(mink_inner(nu.z, nu.z), 1.0, 1e-9);
        const auto [x2, y2] = to_lightcone_pair(f, nu);
        const double sc = std::max(xz.cwiseAbs().maxCoeff(), yz.cwiseAbs().maxCoeff());
        EXPECT_LE((x2.z - xz).cwiseAbs().maxCoeff(), 1e-12 * sc);
        EXPECT_LE((y2.z - yz).cwiseAbs().maxCoeff(), 1e-12 * sc);
        const auto [f2, nu2] = to_hyperbolic_pair(x2, y2);
        EXPECT_LE((f2.z - f.z).cwiseAbs().maxCoeff(), 1e-12 * sc);
        EXPECT_LE((nu2.z - nu.z).cwiseAbs().maxCoeff(), 1e-12 * sc);
    }
}

TEST(Projection, IdempotentAndSignChecked)
{
    std::mt19937_64 rng(5);
    for (int k = 0; k < 20; ++k) {
        const Eigen::VectorXd p = unit(3, rng);
        const MinkVec z = 2.5 * with_time(1, p);
        const MinkVec once = project_plus(z);
        EXPECT_EQ(once(0), 1.0);
        EXPECT_LE((project_plus(once) - once).cwiseAbs().maxCoeff(), 0.0);
        EXPECT_NEAR(once.tail(3).norm(), 1.0, 1e-15);
        const MinkVec m = project_minus(-0.3 * with_time(1, p));
        EXPECT_EQ(m(0), -1.0);
        EXPECT_LE((project_minus(m) - m).cwiseAbs().maxCoeff(), 0.0);
    }
    EXPECT_THROW(project_plus(vec({0, 1, 0})), DomainError);
    EXPECT_THROW(project_plus(vec({-1, 1, 0})), DomainError);
    EXPECT_THROW(project_minus(vec({1, 1, 0})), DomainError);
}

TEST(GaussMaps, SectionAndConformalFactorAgree)
{
    const FrontalPair section = gallery("sphere_section", 3);
    GalleryParams gp;
    gp.sigma = parse_expr("0.4*u1 - 0.3*u2*u3 + 0.2*sin(u3)", 3);
    const FrontalPair graph = gallery("conformal_graph", 3, gp);
    for (const auto& p : sample_lattice(section.box(), 25)) {
        const GaussMaps a = gauss_maps(section.x, section.y, p);
        const GaussMaps b = gauss_maps(graph.x, graph.y, p);
        EXPECT_LE((a.plus - section.x.value(p)).cwiseAbs().maxCoeff(), 1e-15);
        EXPECT_LE((b.plus - a.plus).cwiseAbs().maxCoeff(), 1e-14);
        EXPECT_EQ(a.plus(0), 1.0);
        EXPECT_EQ(a.minus(0), -1.0);
        EXPECT_NEAR(a.plus.tail(4).norm(), 1.0, 1e-10);
        EXPECT_NEAR(b.minus.tail(4).norm(), 1.0, 1e-10);
    }
}

TEST(GaussMaps, SublightconeGaussMapIsNotAnImmersion)
{
    for (std::size_t n = 2; n <= 4; ++n) {
        const FrontalPair s = gallery("sublightcone", n);
        for (const auto& p : sample_lattice(s.box(), 20)) {
            EXPECT_EQ(immersion_rank(s.x, p), static_cast<int>(n));
            EXPECT_EQ(numerical_rank(gauss_map_differential(s.x, p)), static_cast<int>(n) - 1);
        }
    }
}

TEST(Rank, SectionIsImmersive)
{
    const FrontalPair s = gallery("sphere_section", 2);
    for (const auto& p : sample_lattice(s.box(), 20)) EXPECT_EQ(immersion_rank(s.x, p), 2);
    EXPECT_EQ(numerical_rank(Eigen::MatrixXd::Zero(3, 2)), 0);
    Eigen::MatrixXd m(3, 2);
    m << 1, 2, 2, 4, 3, 6 + 1e-12;
    EXPECT_EQ(numerical_rank(m), 1);
    EXPECT_EQ(gram_rank(m.transpose() * m), 1);
}

TEST(Rank, GaussMapRankEqualsGramRankOnGallery)
{
    struct Case {
        std::string name;
        std::size_t n;
    };
    for (const Case& c : {Case{"sphere_section", 3}, Case{"equatorial_nonfront", 3}, Case{"conformal_graph", 2},
                          Case{"clifford_ball", 4}, Case{"equatorial_nonfront", 2}}) {
        const FrontalPair pair = gallery(c.name, c.n);
        for (const auto& p : sample_lattice(pair.box(), 50)) {
            const Eigen::MatrixXd dx = pair.x.differential(p);
            EXPECT_EQ(numerical_rank(gauss_map_differential(pair.x, p)), gram_rank(mink_gram(dx, dx)))
                << c.name << " at " << format_point(p);
        }
    }
}

TEST(Models, ResidualsAndMembership)
{
    EXPECT_TRUE(in_model(vec({1, 0, 1}), Model::LightconePlus));
    EXPECT_FALSE(in_model(vec({1, 0, 1}), Model::LightconeMinus));
    EXPECT_TRUE(in_model(vec({std::cosh(0.7), std::sinh(0.7), 0}), Model::Hyperbolic));
    EXPECT_TRUE(in_model(vec({std::sinh(0.7), std::cosh(0.7), 0}), Model::DeSitter));
    EXPECT_NEAR(model_residual(vec({1, 0, 0}), Model::DeSitter), 2.0, 1e-15);
    EXPECT_EQ(model_name(Model::Hyperbolic), "H");
}

} // namespace
