#include "cfdual/conformal_change.hpp"

#include "cfdual/curvature.hpp"
#include "cfdual/eval.hpp"
#include "cfdual/gallery.hpp"
#include "cfdual/lorentz.hpp"

#include <stdexcept>

namespace cfdual {

JetMatrix conformal_second_form(const Expr& sigma, std::span<const double> p, int order)
{
    const std::size_t n = p.size();
    const auto u = coordinate_jets(p, order + 2);
    const Jet sg = eval_jet(sigma, u);
    Jet r = u[0] * u[0];
    for (std::size_t i = 1; i < n; ++i) r += u[i] * u[i];
    const Jet conf = 4.0 * reciprocal((1.0 + r) * (1.0 + r));
    const Jet zero(n, order + 2, 0.0);
    JetMatrix g(n, n, zero);
    for (std::size_t i = 0; i < n; ++i) g(i, i) = conf;
    const JetMatrix ginv = inverse(g);
    const JetTensor gamma = christoffel_jets(g, ginv);

    std::vector<Jet> ds;
    for (std::size_t j = 0; j < n; ++j) ds.push_back(sg.derivative(j));
    Jet grad2(n, order + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) grad2 += ginv(i, j) * ds[i] * ds[j];

    JetMatrix second(n, n, Jet(n, order, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Jet hess = ds[j].derivative(i);
            for (std::size_t k = 0; k < n; ++k) hess -= gamma(k, i, j) * ds[k];
            second(i, j) = hess - ds[i] * ds[j] - 0.5 * (1.0 - grad2) * g(i, j);
        }
    return second;
}

ConformalChange conformal_change(const Expr& sigma, std::size_t n, std::span<const double> p)
{
    if (p.size() != n) throw std::invalid_argument("conformal_change: point dimension does not match n");
    const FrontalPair pair = conformal_graph(sigma, n, Box::cube(n, -1e6, 1e6));
    ConformalChange c;
    c.point.assign(p.begin(), p.end());

    const auto x = pair.x.jets(p, 2);
    c.x = values(x);
    c.y_explicit = pair.y.value(p);

    // Laplace route with the induced metric of x̃.
    std::vector<std::vector<Jet>> dx(n);
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& e : x) dx[i].push_back(e.derivative(i));
    JetMatrix gt(n, n, Jet(n, 1, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) gt(i, j) = mink_inner(dx[i], dx[j]);
    require_positive_definite(gt.value(), p);
    const JetMatrix gtinv = inverse(gt);
    const Tensor gamma = value(christoffel_jets(gt, gtinv));
    const Eigen::MatrixXd hinv = gtinv.value();
    Eigen::VectorXd lap = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n + 2));
    for (std::size_t comp = 0; comp < n + 2; ++comp) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                double h = x[comp].partial({i, j});
                for (std::size_t k = 0; k < n; ++k) h -= gamma(k, i, j) * x[comp].partial({k});
                s += hinv(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * h;
            }
        lap(static_cast<Eigen::Index>(comp)) = s;
    }
    const double nn = static_cast<double>(n);
    c.y_laplace = -lap / nn - mink_inner(lap, lap) / (2.0 * nn * nn) * c.x;
    c.route_discrepancy = (c.y_explicit - c.y_laplace).cwiseAbs().maxCoeff();

    const Eigen::MatrixXd dxv = pair.x.differential(p);
    const Eigen::MatrixXd dyv = pair.y.differential(p);
    const Eigen::MatrixXd xy = mink_gram(dxv, dyv);
    c.second_pairing = -0.5 * (xy + xy.transpose());
    const JetMatrix closed = conformal_second_form(sigma, p, 1);
    c.second_closed = closed.value();
    c.second_mismatch = (c.second_closed - c.second_pairing).cwiseAbs().maxCoeff();

    c.codazzi = codazzi_residual(closed, christoffel_jets(gt, gtinv));
    return c;
}

} // namespace cfdual
