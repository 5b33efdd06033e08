#include "cfdual/duality.hpp"

#include "cfdual/error.hpp"

#include <algorithm>
#include <cmath>

namespace cfdual {

namespace {

Eigen::VectorXd generalized_eigenvalues(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b)
{
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(a, b, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

void require_schouten(const ChartMetric& m)
{
    if (m.dim() < 3) throw PreconditionError("the Schouten tensor requires n >= 3");
}

} // namespace

bool is_parabolic(const Eigen::VectorXd& eigenvalues, double threshold)
{
    const double big = eigenvalues.cwiseAbs().maxCoeff();
    double det = 1.0;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) det *= eigenvalues(i);
    return std::abs(det) <= threshold * std::pow(big, static_cast<double>(eigenvalues.size()));
}

Eigen::MatrixXd hat_A(const ChartMetric& m, std::span<const double> p)
{
    require_schouten(m);
    const CurvaturePack c = curvature_pack(m, p);
    return c.ginv * *c.schouten;
}

JetMatrix dual_metric_jets(const JetMatrix& g, const JetMatrix& a)
{
    return a * inverse(g) * a;
}

JetMatrix dual_metric_jets(const JetMatrix& g)
{
    const CurvatureJets c = curvature_jets(g);
    if (!c.schouten) throw PreconditionError("the Schouten tensor requires n >= 3");
    return *c.schouten * c.ginv * *c.schouten;
}

DualityReport dual_metric(const ChartMetric& m, std::span<const double> p, double threshold)
{
    require_schouten(m);
    const CurvaturePack c = curvature_pack(m, p);
    const Eigen::MatrixXd& a = *c.schouten;
    DualityReport r;
    r.point.assign(p.begin(), p.end());
    r.hat_a = c.ginv * a;
    r.dual_metric = a * c.ginv * a;
    r.dual_metric = 0.5 * (r.dual_metric + r.dual_metric.transpose()).eval();
    r.det_hat_a = r.hat_a.determinant();
    r.eigenvalues = generalized_eigenvalues(a, c.g);
    r.parabolic = is_parabolic(r.eigenvalues, threshold);
    return r;
}

ChartMetric dual_chart_metric(const ChartMetric& m)
{
    require_schouten(m);
    return ChartMetric(
        m.box(),
        [m](std::span<const double> p, int order) {
            if (order + 2 > kMaxJetOrder) throw PreconditionError("dual metric: requested jet order too high");
            return dual_metric_jets(m.jets(p, order + 2));
        },
        m.label().empty() ? "dual" : "dual(" + m.label() + ")");
}

DualityVerification verify_duality(const ChartMetric& m, std::span<const Point> samples,
                                   const DualityTolerances& tol)
{
    require_schouten(m);
    DualityVerification v;
    v.input = conformal_flatness_certificate(m, samples, tol.input_flatness);
    if (!v.input.certified)
        throw PreconditionError("metric is not conformally flat: residual " + std::to_string(v.input.worst_residual)
                                + " at " + format_point(v.input.worst_point));

    const std::size_t n = m.dim();
    std::vector<Point> regular;
    for (const auto& p : samples) {
        const DualityReport d = dual_metric(m, p, tol.parabolic);
        if (d.parabolic) {
            ParabolicSample ps;
            ps.point = p;
            ps.det_hat_a = d.det_hat_a;
            ps.eigenvalues = d.eigenvalues;
            ps.dual_min_eigenvalue = generalized_eigenvalues(d.dual_metric, curvature_pack(m, p).g).minCoeff();
            v.parabolic.push_back(std::move(ps));
            continue;
        }
        regular.push_back(p);

        // Schouten tensor of ǧ against A.
        const JetMatrix g = m.jets(p, n == 3 ? 5 : 4);
        const CurvatureJets cg = curvature_jets(g);
        const JetMatrix gd = *cg.schouten * cg.ginv * *cg.schouten;
        const CurvatureJets cd = curvature_jets(gd);
        const Eigen::MatrixXd a = cg.schouten->value();
        const Eigen::MatrixXd ad = cd.schouten->value();
        v.schouten_invariance.record((ad - a).cwiseAbs().maxCoeff(), p);

        // Reciprocal spectra.
        const Eigen::MatrixXd gv = g.value();
        const Eigen::MatrixXd gdv = gd.value();
        Eigen::VectorXd inv = generalized_eigenvalues(a, gv).cwiseInverse();
        std::sort(inv.begin(), inv.end());
        const Eigen::VectorXd dual_spec = generalized_eigenvalues(a, gdv);
        double spec = 0.0;
        for (Eigen::Index i = 0; i < inv.size(); ++i)
            spec = std::max(spec, std::abs(dual_spec(i) - inv(i)) / std::abs(inv(i)));
        v.eigen_inversion.record(spec, p);

        // Double dual.
        const Eigen::MatrixXd back = a * gdv.inverse() * a;
        v.involution.record((back - gv).cwiseAbs().maxCoeff() / std::max(1.0, gv.cwiseAbs().maxCoeff()), p);

        // Flatness of ǧ, relative to the size of its curvature: near parabolic
        // points ǧ^{-1} and with it every curvature quantity of ǧ blow up.
        if (n >= 4) {
            const CurvaturePack pd = to_pack(cd, p);
            v.dual_conformal_flatness.record(weyl_norm(pd) / std::max(1.0, riemann_norm(pd)), p);
        } else if (n == 3) {
            const Tensor nabla = value(covariant_derivative(*cd.schouten, cd.christoffel));
            double scale = 1.0;
            for (std::size_t k = 0; k < nabla.size(); ++k) scale = std::max(scale, std::abs(nabla.flat(k)));
            v.dual_conformal_flatness.record(codazzi_residual(*cd.schouten, cd.christoffel) / scale, p);
        } else {
            v.dual_conformal_flatness.record(0.0, p);
        }
    }
    v.regular_samples = regular.size();
    v.schouten_invariance.finish(tol.schouten);
    v.eigen_inversion.finish(tol.spectrum);
    v.involution.finish(tol.involution);
    v.dual_conformal_flatness.finish(tol.flatness);
    return v;
}

} // namespace cfdual
