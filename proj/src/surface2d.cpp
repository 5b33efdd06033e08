#include "cfdual/surface2d.hpp"

#include "cfdual/error.hpp"
#include "cfdual/eval.hpp"
#include "cfdual/lorentz.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cfdual {

namespace {

void require_surface(const ChartMetric& g)
{
    if (g.dim() != 2) throw PreconditionError("surface metric must be two-dimensional");
}

void require_isotropic(const Eigen::MatrixXd& g, std::span<const double> p)
{
    const double scale = g.cwiseAbs().maxCoeff();
    if (std::abs(g(0, 0) - g(1, 1)) > 1e-12 * scale || std::abs(g(0, 1)) > 1e-12 * scale)
        throw PreconditionError("metric is not of the form e^{2σ}δ at " + format_point({p.begin(), p.end()}));
}

double lorentz(const Eigen::Vector4d& a, const Eigen::Vector4d& b) { return -a(0) * b(0) + a.tail<3>().dot(b.tail<3>()); }

struct Coefficients {
    Eigen::Matrix2d g, ginv, second;
    double gamma[2][2][2];  // [k][i][j]
};

Coefficients coefficients(const ChartMetric& g, const MatrixField& second, std::span<const double> u)
{
    const JetMatrix gj = g.jets(u, 1);
    const JetMatrix ginv = inverse(gj);
    const Tensor gam = value(christoffel_jets(gj, ginv));
    Coefficients c;
    c.g = gj.value();
    c.ginv = c.g.inverse();
    c.second = second(u, 0).value();
    for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) c.gamma[k][i][j] = gam(k, i, j);
    return c;
}

// State layout: x, y, ξ1, ξ2.
using State = Eigen::Matrix<double, 16, 1>;

State rhs(const Coefficients& c, std::size_t dir, const State& s)
{
    const Eigen::Vector4d x = s.segment<4>(0), y = s.segment<4>(4);
    const Eigen::Vector4d xi[2] = {s.segment<4>(8), s.segment<4>(12)};
    State d;
    d.segment<4>(0) = xi[dir];
    Eigen::Vector4d dy = Eigen::Vector4d::Zero();
    for (std::size_t j = 0; j < 2; ++j) {
        double lam = 0.0;
        for (std::size_t k = 0; k < 2; ++k) lam += c.second(dir, k) * c.ginv(k, j);
        dy -= lam * xi[j];
    }
    d.segment<4>(4) = dy;
    for (std::size_t j = 0; j < 2; ++j) {
        Eigen::Vector4d v = c.second(dir, j) * x - c.g(dir, j) * y;
        for (std::size_t k = 0; k < 2; ++k) v += c.gamma[k][dir][j] * xi[k];
        d.segment<4>(8 + 4 * j) = v;
    }
    return d;
}

class Integrator {
public:
    Integrator(const ChartMetric& g, const MatrixField& second, double h) : g_(g), second_(second), h_(h) {}

    State step(const Point& u, std::size_t dir, const State& s) const
    {
        Point mid = u, end = u;
        mid[dir] += 0.5 * h_;
        end[dir] += h_;
        const Coefficients c0 = coefficients(g_, second_, u);
        const Coefficients cm = coefficients(g_, second_, mid);
        const Coefficients c1 = coefficients(g_, second_, end);
        const State k1 = rhs(c0, dir, s);
        const State k2 = rhs(cm, dir, s + 0.5 * h_ * k1);
        const State k3 = rhs(cm, dir, s + 0.5 * h_ * k2);
        const State k4 = rhs(c1, dir, s + h_ * k3);
        return s + h_ / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }

private:
    const ChartMetric& g_;
    const MatrixField& second_;
    double h_;
};

RealizationNode to_node(const Point& u, const State& s)
{
    return {u, s.segment<4>(0), s.segment<4>(4), s.segment<4>(8), s.segment<4>(12)};
}

} // namespace

double cauchy_riemann_residual(const HoloSeed& s, std::span<const double> p)
{
    if (p.size() != 2) throw std::invalid_argument("holomorphic seed lives on a 2-dimensional chart");
    const Jet a = eval_jet(s.re, p, 1);
    const Jet b = eval_jet(s.im, p, 1);
    return std::abs(a.partial({0}) - b.partial({1})) + std::abs(a.partial({1}) + b.partial({0}));
}

MatrixField seed_tensor(const HoloSeed& s)
{
    if (s.re.min_dimension() > 2 || s.im.min_dimension() > 2)
        throw std::invalid_argument("holomorphic seed may only use u1 and u2");
    return [s](std::span<const double> p, int order) {
        const double cr = cauchy_riemann_residual(s, p);
        if (cr > kCauchyRiemannTolerance)
            throw PreconditionError("seed violates the Cauchy-Riemann equations at " + format_point({p.begin(), p.end()})
                                    + " (residual " + std::to_string(cr) + ")");
        const Jet a = eval_jet(s.re, p, order);
        const Jet b = eval_jet(s.im, p, order);
        JetMatrix m(2, 2, a);
        m(0, 0) = 2.0 * a;
        m(1, 1) = -2.0 * a;
        m(0, 1) = m(1, 0) = -2.0 * b;
        return m;
    };
}

Eigen::Matrix2d codazzi_from_holomorphic(const HoloSeed& s, const ChartMetric& g, std::span<const double> p)
{
    require_surface(g);
    require_isotropic(g.at(p), p);
    return seed_tensor(s)(p, 0).value();
}

MatrixField default_base_form(const ChartMetric& g)
{
    require_surface(g);
    return [g](std::span<const double> p, int order) {
        const JetMatrix gj = g.jets(p, order + 2);
        require_isotropic(gj.value(), p);
        const Jet sigma = 0.5 * log(gj(0, 0));
        const Jet ds[2] = {sigma.derivative(0), sigma.derivative(1)};
        const Jet grad2 = ds[0] * ds[0] + ds[1] * ds[1];
        JetMatrix m(2, 2, Jet(2, order, 0.0));
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) {
                Jet a = ds[i] * ds[j] - ds[j].derivative(i);
                if (i == j) a -= 0.5 * grad2;
                m(i, j) = -a;
            }
        return m;
    };
}

double trace_condition_residual(const ChartMetric& g, const MatrixField& second, std::span<const double> p)
{
    require_surface(g);
    const CurvatureJets c = curvature_jets(g.jets(p, 2));
    const double k = 0.5 * c.scalar.value();
    const double tr = (c.ginv.value() * second(p, 0).value()).trace();
    return std::abs(k + tr);
}

MatrixField second_form_from_seed(const HoloSeed& s, const ChartMetric& g, std::optional<MatrixField> base,
                                  std::span<const Point> validate_at)
{
    require_surface(g);
    if (base) {
        for (const auto& p : validate_at) {
            const double r = trace_condition_residual(g, *base, p);
            if (r > 1e-8)
                throw PreconditionError("base form violates K + Trace(II) = 0 at " + format_point(p) + " (residual "
                                        + std::to_string(r) + ")");
        }
    }
    MatrixField b = seed_tensor(s);
    MatrixField k = base ? std::move(*base) : default_base_form(g);
    return [b = std::move(b), k = std::move(k)](std::span<const double> p, int order) { return b(p, order) + k(p, order); };
}

Grid Grid::covering(std::array<double, 2> lo, std::array<double, 2> hi, double h)
{
    if (!(h > 0.0)) throw std::invalid_argument("grid step must be positive");
    Grid g;
    g.origin = lo;
    g.h = h;
    for (std::size_t a = 0; a < 2; ++a) {
        if (!(hi[a] > lo[a])) throw std::invalid_argument("grid extent must be positive");
        g.nodes[a] = static_cast<std::size_t>(std::llround((hi[a] - lo[a]) / h)) + 1;
    }
    return g;
}

Point Grid::node(std::size_t i, std::size_t j) const
{
    return {origin[0] + static_cast<double>(i) * h, origin[1] + static_cast<double>(j) * h};
}

NodeForms realized_forms(const ChartMetric& g, const MatrixField& second, const RealizationNode& node)
{
    const Coefficients c = coefficients(g, second, node.u);
    const Eigen::Vector4d xi[2] = {node.xi1, node.xi2};
    Eigen::Vector4d dy[2];
    for (std::size_t i = 0; i < 2; ++i) {
        dy[i].setZero();
        for (std::size_t j = 0; j < 2; ++j) {
            double lam = 0.0;
            for (std::size_t k = 0; k < 2; ++k) lam += c.second(i, k) * c.ginv(k, j);
            dy[i] -= lam * xi[j];
        }
    }
    NodeForms f;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            f.first(i, j) = lorentz(xi[i], xi[j]);
            f.second(i, j) = -lorentz(xi[i], dy[j]);
            f.third(i, j) = lorentz(dy[i], dy[j]);
        }
    return f;
}

RealizationResult realize_in_Q3(const ChartMetric& g, const MatrixField& second, const Grid& grid, double drift_bound)
{
    require_surface(g);
    if (grid.nodes[0] < 2 || grid.nodes[1] < 2) throw std::invalid_argument("grid needs at least 2x2 nodes");
    RealizationResult res;
    res.grid = grid;
    const std::size_t n0 = grid.nodes[0], n1 = grid.nodes[1];

    for (std::size_t i = 0; i < n0; ++i)
        for (std::size_t j = 0; j < n1; ++j) {
            const Point u = grid.node(i, j);
            res.trace_condition.record(trace_condition_residual(g, second, u), u);
            res.codazzi.record(codazzi_residual(g, second, u), u);
        }
    res.trace_condition.finish(kIntegrabilityTolerance);
    res.codazzi.finish(kIntegrabilityTolerance);
    if (!res.trace_condition.pass || !res.codazzi.pass)
        throw PreconditionError("integrability conditions fail on the grid: trace " + std::to_string(res.trace_condition.worst)
                                + ", Codazzi " + std::to_string(res.codazzi.worst));

    // Initial frame at the base node.
    const Point base = grid.node(0, 0);
    const Eigen::Matrix2d g0 = g.at(base);
    const Eigen::Matrix2d l = g0.llt().matrixL();
    State s0;
    s0.segment<4>(0) = Eigen::Vector4d(1, 0, 0, 1);
    s0.segment<4>(4) = Eigen::Vector4d(-1, 0, 0, 1) / 2.0;
    const Eigen::Vector4d e[2] = {Eigen::Vector4d(0, 1, 0, 0), Eigen::Vector4d(0, 0, 1, 0)};
    for (std::size_t i = 0; i < 2; ++i) s0.segment<4>(8 + 4 * i) = l(i, 0) * e[0] + l(i, 1) * e[1];

    const Integrator rk(g, second, grid.h);
    std::vector<State> spine(n0);
    spine[0] = s0;
    for (std::size_t i = 1; i < n0; ++i) spine[i] = rk.step(grid.node(i - 1, 0), 0, spine[i - 1]);

    res.nodes.resize(n0 * n1);
    for (std::size_t i = 0; i < n0; ++i) {
        State s = spine[i];
        res.nodes[i * n1] = to_node(grid.node(i, 0), s);
        for (std::size_t j = 1; j < n1; ++j) {
            s = rk.step(grid.node(i, j - 1), 1, s);
            res.nodes[i * n1 + j] = to_node(grid.node(i, j), s);
        }
    }

    State alt = s0;
    for (std::size_t j = 1; j < n1; ++j) alt = rk.step(grid.node(0, j - 1), 1, alt);
    for (std::size_t i = 1; i < n0; ++i) alt = rk.step(grid.node(i - 1, n1 - 1), 0, alt);
    const RealizationNode& corner = res.nodes.back();
    State direct;
    direct << corner.x, corner.y, corner.xi1, corner.xi2;
    res.path_dependence = (direct - alt).cwiseAbs().maxCoeff();

    for (const auto& nd : res.nodes) {
        const Eigen::Vector4d xi[2] = {nd.xi1, nd.xi2};
        double d = std::max({std::abs(lorentz(nd.x, nd.x)), std::abs(lorentz(nd.y, nd.y)),
                             std::abs(lorentz(nd.x, nd.y) - 1.0)});
        for (const auto& v : xi) d = std::max({d, std::abs(lorentz(v, nd.x)), std::abs(lorentz(v, nd.y))});
        const NodeForms f = realized_forms(g, second, nd);
        const Coefficients c = coefficients(g, second, nd.u);
        const double e1 = (f.first - c.g).cwiseAbs().maxCoeff();
        const double e2 = (f.second - c.second).cwiseAbs().maxCoeff();
        if (res.drift_point.empty() || d > res.drift) res.drift = d, res.drift_point = nd.u;
        if (res.first_point.empty() || e1 > res.first_error) res.first_error = e1, res.first_point = nd.u;
        if (res.second_point.empty() || e2 > res.second_error) res.second_error = e2, res.second_point = nd.u;
    }
    if (!(res.drift <= drift_bound))
        throw PreconditionError("constraint drift " + std::to_string(res.drift) + " exceeds bound "
                                + std::to_string(drift_bound) + "; reduce the step");
    return res;
}

FlatDualityReport flat_duality_check(const ChartMetric& g, const MatrixField& second, std::span<const Point> samples,
                                     double tol)
{
    require_surface(g);
    constexpr double kPreTol = 1e-7;
    FlatDualityReport rep;
    rep.samples = samples.size();
    for (const auto& p : samples) {
        const CurvatureJets cg = curvature_jets(g.jets(p, 3));
        const double k = 0.5 * cg.scalar.value();
        if (std::abs(k) > kPreTol) throw PreconditionError("metric is not flat at " + format_point(p));
        const JetMatrix ii = second(p, 3);
        const JetMatrix gjet = cg.g;
        const double tr = (cg.ginv.value() * ii.value()).trace();
        const double scale = std::max(1.0, ii.value().cwiseAbs().maxCoeff());
        if (std::abs(tr) > kPreTol * scale) throw PreconditionError("II is not traceless at " + format_point(p));
        if (codazzi_residual(ii, cg.christoffel) > kPreTol * scale)
            throw PreconditionError("II is not a Codazzi tensor at " + format_point(p));

        const JetMatrix dual = ii * inverse(gjet) * ii;
        try {
            require_positive_definite(dual.value(), p);
        } catch (const DegenerateMetricError&) {
            rep.degenerate.push_back(p);
            continue;
        }
        const CurvatureJets cd = curvature_jets(dual);
        rep.dual_curvature.record(std::abs(0.5 * cd.scalar.value()), p);
        rep.dual_traceless.record(std::abs((cd.ginv.value() * ii.value()).trace()), p);
        rep.dual_codazzi.record(codazzi_residual(ii, cd.christoffel), p);
    }
    if (rep.degenerate.size() == samples.size())
        throw PreconditionError("dual metric is degenerate at every sample");
    rep.dual_curvature.finish(tol);
    rep.dual_traceless.finish(tol);
    rep.dual_codazzi.finish(tol);
    return rep;
}

} // namespace cfdual
