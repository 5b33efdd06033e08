#include "cfdual/lorentz.hpp"

#include "cfdual/error.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cfdual {

namespace {

constexpr double kPairingTolerance = 1e-8;

std::vector<double> as_point(const MinkVec& z) { return {z.data(), z.data() + z.size()}; }

MinkVec project(const MinkVec& z, double sign, const char* name)
{
    if (!(sign * z(0) > 0.0)) throw DomainError(name, as_point(z));
    return z / (sign * z(0));
}

} // namespace

std::string_view model_name(Model m) noexcept
{
    switch (m) {
    case Model::LightconePlus: return "Q+";
    case Model::LightconeMinus: return "Q-";
    case Model::Hyperbolic: return "H";
    case Model::DeSitter: return "S1";
    }
    return "?";
}

double mink_inner(const MinkVec& v, const MinkVec& w)
{
    if (v.size() != w.size() || v.size() < 1) throw std::invalid_argument("mink_inner: dimension mismatch");
    return -v(0) * w(0) + v.tail(v.size() - 1).dot(w.tail(w.size() - 1));
}

Jet mink_inner(std::span<const Jet> v, std::span<const Jet> w)
{
    if (v.size() != w.size() || v.empty()) throw std::invalid_argument("mink_inner: dimension mismatch");
    Jet s = -(v[0] * w[0]);
    for (std::size_t i = 1; i < v.size(); ++i) s += v[i] * w[i];
    return s;
}

Eigen::RowVectorXd mink_inner_partials(std::span<const Jet> v, std::span<const Jet> w)
{
    const Eigen::MatrixXd dv = differential(v);
    const Eigen::VectorXd wv = values(w);
    Eigen::RowVectorXd r(dv.cols());
    for (Eigen::Index i = 0; i < dv.cols(); ++i) r(i) = mink_inner(dv.col(i), wv);
    return r;
}

Eigen::MatrixXd mink_gram(const Eigen::MatrixXd& dv, const Eigen::MatrixXd& dw)
{
    if (dv.rows() != dw.rows()) throw std::invalid_argument("mink_gram: dimension mismatch");
    Eigen::MatrixXd eta = Eigen::MatrixXd::Identity(dv.rows(), dv.rows());
    eta(0, 0) = -1.0;
    return dv.transpose() * eta * dw;
}

double model_residual(const MinkVec& z, Model m)
{
    const double q = mink_inner(z, z);
    switch (m) {
    case Model::LightconePlus: return z(0) > 0.0 ? std::abs(q) : std::numeric_limits<double>::infinity();
    case Model::LightconeMinus: return z(0) < 0.0 ? std::abs(q) : std::numeric_limits<double>::infinity();
    case Model::Hyperbolic: return z(0) > 0.0 ? std::abs(q + 1.0) : std::numeric_limits<double>::infinity();
    case Model::DeSitter: return std::abs(q - 1.0);
    }
    return std::numeric_limits<double>::infinity();
}

bool in_model(const MinkVec& z, Model m, double tol) { return model_residual(z, m) <= tol; }

ModelPoint make_model_point(MinkVec z, Model m, double tol)
{
    if (!in_model(z, m, tol))
        throw PreconditionError("vector " + format_point(as_point(z)) + " is not in " + std::string(model_name(m)));
    return {std::move(z), m};
}

std::pair<ModelPoint, ModelPoint> to_hyperbolic_pair(const ModelPoint& x, const ModelPoint& y)
{
    if (x.model != Model::LightconePlus || y.model != Model::LightconeMinus)
        throw PreconditionError("to_hyperbolic_pair expects (Q+, Q-)");
    const double pairing = mink_inner(x.z, y.z);
    if (std::abs(pairing - 1.0) > kPairingTolerance)
        throw PreconditionError("pairing <x,y> = " + std::to_string(pairing) + ", expected 1");
    const double s = std::numbers::sqrt2 / 2.0;
    return {ModelPoint{s * (x.z - y.z), Model::Hyperbolic}, ModelPoint{s * (x.z + y.z), Model::DeSitter}};
}

std::pair<ModelPoint, ModelPoint> to_lightcone_pair(const ModelPoint& f, const ModelPoint& nu)
{
    if (f.model != Model::Hyperbolic || nu.model != Model::DeSitter)
        throw PreconditionError("to_lightcone_pair expects (H, S1)");
    const double o = mink_inner(f.z, nu.z);
    if (std::abs(o) > kPairingTolerance)
        throw PreconditionError("<f,nu> = " + std::to_string(o) + ", expected 0");
    const double s = std::numbers::sqrt2 / 2.0;
    return {ModelPoint{s * (f.z + nu.z), Model::LightconePlus}, ModelPoint{-s * (f.z - nu.z), Model::LightconeMinus}};
}

MinkVec project_plus(const MinkVec& z) { return project(z, 1.0, "projection to S^n_+"); }
MinkVec project_minus(const MinkVec& z) { return project(z, -1.0, "projection to S^n_-"); }

GaussMaps gauss_maps(const ChartMap& x, const ChartMap& y, std::span<const double> p)
{
    return {project_plus(x.value(p)), project_minus(y.value(p))};
}

Eigen::MatrixXd gauss_map_differential(const ChartMap& map, std::span<const double> p)
{
    const auto z = map.jets(p, 1);
    if (z[0].value() == 0.0) throw DomainError("projection", {p.begin(), p.end()});
    // Π(z) = z / |z^0| with the sign fixed by the sheet.
    const Jet inv = reciprocal(z[0]) * (z[0].value() > 0.0 ? 1.0 : -1.0);
    std::vector<Jet> g;
    g.reserve(z.size());
    for (const auto& c : z) g.push_back(c * inv);
    return differential(g);
}

int numerical_rank(const Eigen::MatrixXd& m, double tol)
{
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& s = svd.singularValues();
    if (!(s(0) > 0.0)) return 0;
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > tol * s(0)) ++r;
    return r;
}

int gram_rank(const Eigen::MatrixXd& gram, double tol)
{
    if (gram.size() == 0) return 0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (gram + gram.transpose()), Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    const double top = ev.cwiseAbs().maxCoeff();
    if (!(top > 0.0)) return 0;
    int r = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (std::abs(ev(i)) > tol * top) ++r;
    return r;
}

int immersion_rank(const ChartMap& map, std::span<const double> p, double tol)
{
    return numerical_rank(map.differential(p), tol);
}

} // namespace cfdual
