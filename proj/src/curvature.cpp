#include "cfdual/curvature.hpp"

#include "cfdual/error.hpp"
#include "cfdual/eval.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace cfdual {

namespace {

Expr squared_radius(std::size_t n)
{
    Expr r = pow(Expr::variable(0), Expr::number(2));
    for (std::size_t i = 1; i < n; ++i) r = r + pow(Expr::variable(i), Expr::number(2));
    return r;
}

std::vector<std::vector<Expr>> diagonal(std::size_t n, std::span<const Expr> diag)
{
    std::vector<std::vector<Expr>> g(n, std::vector<Expr>(n, Expr::number(0)));
    for (std::size_t i = 0; i < n; ++i) g[i][i] = diag[i];
    return g;
}

} // namespace

MatrixField expr_field(std::vector<std::vector<Expr>> t)
{
    const std::size_t n = t.size();
    for (const auto& row : t)
        if (row.size() != n) throw std::invalid_argument("tensor components must form a square table");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (!(t[i][j] == t[j][i]))
                throw std::invalid_argument("tensor components are not symmetric at (" + std::to_string(i + 1) + ","
                                            + std::to_string(j + 1) + ")");
    return [t = std::move(t), n](std::span<const double> p, int order) {
        JetMatrix m(n, n, Jet(p.size(), order, 0.0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                m(i, j) = eval_jet(t[i][j], p, order);
                if (j != i) m(j, i) = m(i, j);
            }
        return m;
    };
}

ChartMetric::ChartMetric(Box box, std::vector<std::vector<Expr>> components, std::string label)
    : box_(std::move(box)), label_(std::move(label))
{
    box_.validate();
    if (box_.dim() < 2) throw std::invalid_argument("metric dimension must be at least 2");
    if (components.size() != box_.dim()) throw std::invalid_argument("metric table size does not match dimension");
    for (const auto& row : components)
        for (const auto& e : row)
            if (e.min_dimension() > box_.dim())
                throw std::invalid_argument("metric component uses a variable beyond the dimension");
    eval_ = expr_field(components);
    components_ = std::move(components);
}

ChartMetric::ChartMetric(Box box, MatrixField evaluator, std::string label)
    : box_(std::move(box)), eval_(std::move(evaluator)), label_(std::move(label))
{
    box_.validate();
    if (box_.dim() < 2) throw std::invalid_argument("metric dimension must be at least 2");
}

ChartMetric ChartMetric::flat(Box box)
{
    const std::size_t n = box.dim();
    std::vector<Expr> d(n, Expr::number(1));
    return ChartMetric(std::move(box), diagonal(n, d), "flat");
}

ChartMetric ChartMetric::conformally_flat(const Expr& sigma, Box box)
{
    const std::size_t n = box.dim();
    const Expr f = Expr::call(Func::Exp, Expr::number(2) * sigma);
    std::vector<Expr> d(n, f);
    return ChartMetric(std::move(box), diagonal(n, d), "conformally_flat");
}

ChartMetric ChartMetric::round_sphere(Box box)
{
    const std::size_t n = box.dim();
    const Expr f = Expr::number(4) / pow(Expr::number(1) + squared_radius(n), Expr::number(2));
    std::vector<Expr> d(n, f);
    return ChartMetric(std::move(box), diagonal(n, d), "round_sphere");
}

ChartMetric ChartMetric::hyperbolic(Box box)
{
    const std::size_t n = box.dim();
    const Expr f = Expr::number(4) / pow(Expr::number(1) - squared_radius(n), Expr::number(2));
    std::vector<Expr> d(n, f);
    return ChartMetric(std::move(box), diagonal(n, d), "hyperbolic");
}

ChartMetric ChartMetric::sphere_product(Box box)
{
    if (box.dim() != 4) throw std::invalid_argument("sphere_product is four-dimensional");
    auto sq = [](std::size_t i) { return pow(Expr::variable(i), Expr::number(2)); };
    const Expr f1 = Expr::number(4) / pow(Expr::number(1) + sq(0) + sq(1), Expr::number(2));
    const Expr f2 = Expr::number(4) / pow(Expr::number(1) + sq(2) + sq(3), Expr::number(2));
    const std::vector<Expr> d{f1, f1, f2, f2};
    return ChartMetric(std::move(box), diagonal(4, d), "sphere_product");
}

void require_positive_definite(const Eigen::MatrixXd& g, std::span<const double> p)
{
    const Point pt(p.begin(), p.end());
    if (!g.allFinite()) throw DegenerateMetricError(pt, "non-finite components");
    if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, g.cwiseAbs().maxCoeff()))
        throw DegenerateMetricError(pt, "matrix not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues().minCoeff();
    const double lmax = es.eigenvalues().maxCoeff();
    if (!(lmax > 0.0) || !(lmin > 1e-12 * lmax))
        throw DegenerateMetricError(pt, "smallest eigenvalue " + std::to_string(lmin));
}

JetMatrix ChartMetric::jets(std::span<const double> p, int order) const
{
    if (!box_.contains(p)) throw PreconditionError("point " + format_point({p.begin(), p.end()}) + " outside chart box");
    JetMatrix g = eval_(p, order);
    if (g.rows() != dim() || g.cols() != dim()) throw std::logic_error("metric evaluator returned wrong shape");
    require_positive_definite(g.value(), p);
    return g;
}

Eigen::MatrixXd ChartMetric::at(std::span<const double> p) const { return jets(p, 0).value(); }

JetTensor christoffel_jets(const JetMatrix& g, const JetMatrix& ginv)
{
    const std::size_t n = g.rows();
    std::vector<JetMatrix> dg;
    for (std::size_t a = 0; a < n; ++a) dg.push_back(g.derivative(a));
    const int order = dg[0].order();
    JetTensor first(n, 3, Jet(g.dim(), order, 0.0));  // (i, j, l) = Γ_ijl
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t l = 0; l < n; ++l)
                first(i, j, l) = 0.5 * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
    JetTensor gamma(n, 3, Jet(g.dim(), order, 0.0));
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                Jet s(g.dim(), order, 0.0);
                for (std::size_t l = 0; l < n; ++l) s += ginv(k, l) * first(i, j, l);
                gamma(k, i, j) = s;
                gamma(k, j, i) = std::move(s);
            }
    return gamma;
}

CurvatureJets curvature_jets(const JetMatrix& g)
{
    const std::size_t n = g.rows();
    if (n < 2 || g.cols() != n) throw std::invalid_argument("curvature: metric must be square with n >= 2");
    if (g.order() < 2) throw std::invalid_argument("curvature: metric jets of order >= 2 required");
    const std::size_t dim = g.dim();

    CurvatureJets c;
    c.g = g;
    c.ginv = inverse(g);
    c.christoffel = christoffel_jets(g, c.ginv);
    const JetTensor& G = c.christoffel;
    const int ko = g.order() - 2;
    const Jet zero(dim, ko, 0.0);

    std::vector<JetTensor> dG;
    for (std::size_t a = 0; a < n; ++a) {
        JetTensor d(n, 3, zero);
        for (std::size_t k = 0; k < G.size(); ++k) d.flat(k) = G.flat(k).derivative(a);
        dG.push_back(std::move(d));
    }

    // (l, i, j, k) = R^l_ijk
    JetTensor rup(n, 4, zero);
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k) {
                    Jet s = dG[i](l, j, k) - dG[j](l, i, k);
                    for (std::size_t m = 0; m < n; ++m) s += G(l, i, m) * G(m, j, k) - G(l, j, m) * G(m, i, k);
                    rup(l, j, i, k) = -s;
                    rup(l, i, j, k) = std::move(s);
                }

    c.riemann = JetTensor(n, 4, zero);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < n; ++l) {
                    Jet s = zero;
                    for (std::size_t m = 0; m < n; ++m) s += rup(m, i, j, k) * g(m, l);
                    c.riemann(i, j, k, l) = std::move(s);
                }

    c.ricci = JetMatrix(n, n, zero);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
            Jet s = zero;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t l = 0; l < n; ++l) s += c.ginv(i, l) * c.riemann(i, j, k, l);
            c.ricci(j, k) = std::move(s);
        }
    c.scalar = zero;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) c.scalar += c.ginv(j, k) * c.ricci(j, k);

    if (n >= 3) {
        const double nn = static_cast<double>(n);
        JetMatrix a(n, n, zero);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                a(i, j) = (c.ricci(i, j) - c.scalar * g(i, j) / (2.0 * (nn - 1.0))) / (nn - 2.0);
        c.schouten = std::move(a);
    }
    if (n >= 4) {
        const JetMatrix& A = *c.schouten;
        JetTensor w(n, 4, zero);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k)
                    for (std::size_t l = 0; l < n; ++l)
                        w(i, j, k, l) = c.riemann(i, j, k, l) + A(i, k) * g(j, l) - A(i, l) * g(j, k)
                                        + A(j, l) * g(i, k) - A(j, k) * g(i, l);
        c.weyl = std::move(w);
    }
    return c;
}

JetTensor covariant_derivative(const JetMatrix& t, const JetTensor& gamma)
{
    const std::size_t n = t.rows();
    std::vector<JetMatrix> dt;
    for (std::size_t k = 0; k < n; ++k) dt.push_back(t.derivative(k));
    const int order = std::min(dt[0].order(), gamma.flat(0).order());
    JetTensor r(n, 3, Jet(t.dim(), order, 0.0));
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                Jet s = dt[k](i, j);
                for (std::size_t m = 0; m < n; ++m) s -= gamma(m, k, i) * t(m, j) + gamma(m, k, j) * t(i, m);
                r(k, i, j) = std::move(s);
            }
    return r;
}

double codazzi_residual(const JetMatrix& t, const JetTensor& christoffel)
{
    const JetTensor d = covariant_derivative(t, christoffel);
    const std::size_t n = t.rows();
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                worst = std::max(worst, std::abs(d(k, i, j).value() - d(i, k, j).value()));
    return worst;
}

CurvaturePack to_pack(const CurvatureJets& c, Point p)
{
    CurvaturePack r;
    r.point = std::move(p);
    r.g = c.g.value();
    r.ginv = c.ginv.value();
    r.christoffel = value(c.christoffel);
    r.riemann = value(c.riemann);
    r.ricci = c.ricci.value();
    r.scalar = c.scalar.value();
    if (c.schouten) r.schouten = c.schouten->value();
    if (c.weyl) r.weyl = value(*c.weyl);
    return r;
}

Tensor christoffel(const ChartMetric& m, std::span<const double> p)
{
    const JetMatrix g = m.jets(p, 1);
    return value(christoffel_jets(g, inverse(g)));
}

CurvaturePack curvature_pack(const ChartMetric& m, std::span<const double> p)
{
    return to_pack(curvature_jets(m.jets(p, 2)), Point(p.begin(), p.end()));
}

double codazzi_residual(const ChartMetric& m, const MatrixField& t, std::span<const double> p)
{
    const JetMatrix g = m.jets(p, 1);
    const JetMatrix tj = t(p, 1);
    if (tj.rows() != m.dim() || tj.cols() != m.dim()) throw std::invalid_argument("codazzi: tensor shape mismatch");
    const Eigen::MatrixXd tv = tj.value();
    if ((tv - tv.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, tv.cwiseAbs().maxCoeff()))
        throw PreconditionError("codazzi: tensor is not symmetric");
    return codazzi_residual(tj, christoffel_jets(g, inverse(g)));
}

double codazzi_residual(const ChartMetric& m, const std::vector<std::vector<Expr>>& t, std::span<const double> p)
{
    return codazzi_residual(m, expr_field(t), p);
}

double riemann_symmetry_residual(const CurvaturePack& c)
{
    const Tensor& R = c.riemann;
    const std::size_t n = R.dim();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < n; ++l) {
                    const double r = R(i, j, k, l);
                    worst = std::max({worst, std::abs(r + R(j, i, k, l)), std::abs(r + R(i, j, l, k)),
                                      std::abs(r - R(k, l, i, j))});
                }
    return worst;
}

double bianchi_residual(const CurvaturePack& c)
{
    const Tensor& R = c.riemann;
    const std::size_t n = R.dim();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < n; ++l)
                    worst = std::max(worst, std::abs(R(i, j, k, l) + R(j, k, i, l) + R(k, i, j, l)));
    return worst;
}

double weyl_trace_residual(const CurvaturePack& c)
{
    if (!c.weyl) return 0.0;
    const Tensor& W = *c.weyl;
    const std::size_t n = W.dim();
    double worst = 0.0;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            // Contract (1,3), (1,4), (2,3), (2,4); the remaining two vanish by antisymmetry.
            double t13 = 0, t14 = 0, t23 = 0, t24 = 0;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t k = 0; k < n; ++k) {
                    const double h = c.ginv(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
                    t13 += h * W(i, a, k, b);
                    t14 += h * W(i, a, b, k);
                    t23 += h * W(a, i, k, b);
                    t24 += h * W(a, i, b, k);
                }
            worst = std::max({worst, std::abs(t13), std::abs(t14), std::abs(t23), std::abs(t24)});
        }
    return worst;
}

double weyl_norm(const CurvaturePack& c) { return c.weyl ? invariant_norm(*c.weyl, c.g) : 0.0; }

double riemann_norm(const CurvaturePack& c) { return invariant_norm(c.riemann, c.g); }

double invariant_norm(const Tensor& w, const Eigen::MatrixXd& g)
{
    const std::size_t n = w.dim();
    // Components in a g-orthonormal frame: W(e_a, e_b, e_c, e_d) with e = L^{-T} columns, g = L L^T.
    const Eigen::MatrixXd linv = g.llt().matrixL().solve(Eigen::MatrixXd::Identity(
        static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
    Tensor t = w;
    for (std::size_t slot = 0; slot < 4; ++slot) {
        Tensor next(n, 4);
        std::array<std::size_t, 4> idx{};
        for (std::size_t f = 0; f < t.size(); ++f) {
            std::size_t r = f;
            for (std::size_t s = 4; s-- > 0;) {
                idx[s] = r % n;
                r /= n;
            }
            double sum = 0.0;
            std::array<std::size_t, 4> src = idx;
            for (std::size_t m = 0; m < n; ++m) {
                src[slot] = m;
                sum += linv(static_cast<Eigen::Index>(idx[slot]), static_cast<Eigen::Index>(m))
                       * t(src[0], src[1], src[2], src[3]);
            }
            next.flat(f) = sum;
        }
        t = std::move(next);
    }
    double s = 0.0;
    for (std::size_t f = 0; f < t.size(); ++f) s += t.flat(f) * t.flat(f);
    return std::sqrt(s);
}

double metric_compatibility_residual(const ChartMetric& m, std::span<const double> p)
{
    const JetMatrix g = m.jets(p, 1);
    const JetTensor gamma = christoffel_jets(g, inverse(g));
    const std::size_t n = m.dim();
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                double r = g(i, j).partial({k});
                for (std::size_t a = 0; a < n; ++a)
                    r -= gamma(a, k, i).value() * g(a, j).value() + gamma(a, k, j).value() * g(i, a).value();
                worst = std::max(worst, std::abs(r));
            }
    return worst;
}

std::string_view criterion_name(FlatnessCertificate::Criterion c) noexcept
{
    switch (c) {
    case FlatnessCertificate::Criterion::Automatic: return "automatic";
    case FlatnessCertificate::Criterion::Codazzi: return "schouten_codazzi";
    case FlatnessCertificate::Criterion::Weyl: return "weyl_norm";
    }
    return "?";
}

FlatnessCertificate conformal_flatness_certificate(const ChartMetric& m, std::span<const Point> samples, double tol)
{
    FlatnessCertificate cert;
    cert.samples = samples.size();
    const std::size_t n = m.dim();
    if (n == 2) {
        for (const auto& p : samples) m.jets(p, 0);
        return cert;
    }
    cert.criterion = n == 3 ? FlatnessCertificate::Criterion::Codazzi : FlatnessCertificate::Criterion::Weyl;
    for (const auto& p : samples) {
        double r;
        if (n == 3) {
            const CurvatureJets c = curvature_jets(m.jets(p, 3));
            r = codazzi_residual(*c.schouten, c.christoffel);
        } else {
            r = weyl_norm(curvature_pack(m, p));
        }
        if (cert.worst_point.empty() || r > cert.worst_residual) {
            cert.worst_residual = r;
            cert.worst_point = p;
        }
    }
    cert.certified = !(cert.worst_residual > tol);
    return cert;
}

} // namespace cfdual
