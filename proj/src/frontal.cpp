#include "cfdual/frontal.hpp"

#include "cfdual/curvature.hpp"
#include "cfdual/duality.hpp"
#include "cfdual/error.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cfdual {

namespace {

constexpr double kFormPairTolerance = 1e-6;

std::vector<std::vector<Jet>> partials(const std::vector<Jet>& v, std::size_t n)
{
    std::vector<std::vector<Jet>> d(n);
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& c : v) d[i].push_back(c.derivative(i));
    return d;
}

std::vector<Jet> scaled(const std::vector<Jet>& v, const Jet& s)
{
    std::vector<Jet> r;
    r.reserve(v.size());
    for (const auto& c : v) r.push_back(c * s);
    return r;
}

void axpy(std::vector<Jet>& y, const Jet& a, const std::vector<Jet>& x)
{
    for (std::size_t k = 0; k < y.size(); ++k) y[k] -= a * x[k];
}

double max_abs(const Eigen::MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

} // namespace

FrontalPair::FrontalPair(std::string n, ChartMap xm, ChartMap ym) : name(std::move(n)), x(std::move(xm)), y(std::move(ym))
{
    if (x.dim() != y.dim()) throw std::invalid_argument("frontal pair: x and y have different chart dimensions");
    if (x.box().lo != y.box().lo || x.box().hi != y.box().hi)
        throw std::invalid_argument("frontal pair: x and y have different chart boxes");
    if (x.components() != x.dim() + 2 || y.components() != y.dim() + 2)
        throw std::invalid_argument("frontal pair: maps must take values in L^{n+2}");
}

FrontalPair exchange_roles(const FrontalPair& pair)
{
    auto negate = [](const ChartMap& m) {
        return ChartMap(m.box(), m.components(), [m](std::span<const double> p, int order) {
            auto v = m.jets(p, order);
            for (auto& c : v) c = -c;
            return v;
        });
    };
    return FrontalPair(pair.name + ":exchanged", negate(pair.y), negate(pair.x));
}

double PairResiduals::max() const noexcept { return std::max({xx, yy, xy, dx_y, dy_x}); }

PairResiduals pair_residuals(const FrontalPair& pair, std::span<const double> p)
{
    const auto x = pair.x.jets(p, 1);
    const auto y = pair.y.jets(p, 1);
    PairResiduals r;
    r.xx = std::abs(mink_inner(x, x).value());
    r.yy = std::abs(mink_inner(y, y).value());
    r.xy = std::abs(mink_inner(x, y).value() - 1.0);
    r.dx_y = mink_inner_partials(x, y).cwiseAbs().maxCoeff();
    r.dy_x = mink_inner_partials(y, x).cwiseAbs().maxCoeff();
    return r;
}

FormJets form_jets(const FrontalPair& pair, std::span<const double> p, int order)
{
    const std::size_t n = pair.dim();
    const auto x = pair.x.jets(p, order);
    const auto y = pair.y.jets(p, order);
    const auto dx = partials(x, n);
    const auto dy = partials(y, n);
    const Jet zero(n, order - 1, 0.0);
    FormJets f{JetMatrix(n, n, zero), JetMatrix(n, n, zero), JetMatrix(n, n, zero)};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            f.first(i, j) = f.first(j, i) = mink_inner(dx[i], dx[j]);
            f.third(i, j) = f.third(j, i) = mink_inner(dy[i], dy[j]);
            f.second(i, j) = f.second(j, i) = -0.5 * (mink_inner(dx[i], dy[j]) + mink_inner(dx[j], dy[i]));
        }
    return f;
}

FormTriple fundamental_forms(const FrontalPair& pair, std::span<const double> p)
{
    const PairResiduals r = pair_residuals(pair, p);
    if (r.max() > kFormPairTolerance)
        throw PreconditionError("invalid frontal pair at " + format_point({p.begin(), p.end()}) + ": residual "
                                + std::to_string(r.max()));
    const Eigen::MatrixXd dx = pair.x.differential(p);
    const Eigen::MatrixXd dy = pair.y.differential(p);
    const Eigen::MatrixXd xy = mink_gram(dx, dy);
    FormTriple f;
    f.point.assign(p.begin(), p.end());
    f.first = mink_gram(dx, dx);
    f.third = mink_gram(dy, dy);
    f.second = -0.5 * (xy + xy.transpose());
    f.asymmetry = max_abs(xy - xy.transpose());
    return f;
}

double gauss_equation_residual(const FrontalPair& pair, std::span<const double> p)
{
    const std::size_t n = pair.dim();
    const auto x = pair.x.jets(p, 3);
    const auto y = pair.y.jets(p, 3);
    const auto dx = partials(x, n);
    const auto dy = partials(y, n);

    Eigen::MatrixXd first(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            first(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = mink_inner(dx[i], dx[j]).value();
    require_positive_definite(first, p);

    // Projection onto {x,y}^⊥ through the Gram matrix of (x, y).
    const Jet zero(n, 3, 0.0);
    JetMatrix gram(2, 2, zero);
    gram(0, 0) = mink_inner(x, x);
    gram(0, 1) = gram(1, 0) = mink_inner(x, y);
    gram(1, 1) = mink_inner(y, y);
    const JetMatrix ginv = inverse(gram);
    const std::vector<Jet>* basis[2] = {&x, &y};

    std::vector<std::vector<Jet>> frame;
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<Jet> w = dx[k];
        Jet c[2] = {mink_inner(w, x), mink_inner(w, y)};
        for (std::size_t a = 0; a < 2; ++a)
            for (std::size_t b = 0; b < 2; ++b) axpy(w, ginv(a, b) * c[b], *basis[a]);
        for (const auto& e : frame) axpy(w, mink_inner(w, e), e);
        const Jet norm2 = mink_inner(w, w);
        if (!(norm2.value() > 0.0)) throw DegenerateMetricError({p.begin(), p.end()}, "projected frame degenerates");
        frame.push_back(scaled(w, reciprocal(sqrt(norm2))));
    }

    // ω(i, a, b) = ⟨∂_i e_a, e_b⟩, order 1.
    JetTensor omega(n, 3, Jet(n, 1, 0.0));
    std::vector<std::vector<std::vector<Jet>>> de(n);
    for (std::size_t a = 0; a < n; ++a) de[a] = partials(frame[a], n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) omega(i, a, b) = mink_inner(de[a][i], frame[b]).truncated(1);

    auto val = [](const std::vector<Jet>& v) { return values(v); };
    std::vector<Eigen::VectorXd> xi(n), zeta(n), e(n);
    for (std::size_t i = 0; i < n; ++i) {
        xi[i] = val(dx[i]);
        zeta[i] = val(dy[i]);
        e[i] = val(frame[i]);
    }

    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b) {
                    double lhs = omega(j, a, b).partial({i}) - omega(i, a, b).partial({j});
                    for (std::size_t c = 0; c < n; ++c)
                        lhs += omega(j, a, c).value() * omega(i, c, b).value()
                               - omega(i, a, c).value() * omega(j, c, b).value();
                    const auto& v = e[a];
                    const auto& w = e[b];
                    const double rhs = mink_inner(xi[j], v) * mink_inner(zeta[i], w)
                                       - mink_inner(xi[j], w) * mink_inner(zeta[i], v)
                                       + mink_inner(zeta[j], v) * mink_inner(xi[i], w)
                                       - mink_inner(zeta[j], w) * mink_inner(xi[i], v);
                    worst = std::max(worst, std::abs(lhs - rhs));
                }
    return worst;
}

FrontTest front_test(const FrontalPair& pair, std::span<const double> p, double tol)
{
    const Eigen::MatrixXd dx = pair.x.differential(p);
    const Eigen::MatrixXd dy = pair.y.differential(p);
    Eigen::MatrixXd stacked(dx.rows() + dy.rows(), dx.cols());
    stacked << dx, dy;
    FrontTest t;
    t.rank = numerical_rank(stacked, tol);
    t.rank_dx = numerical_rank(dx, tol);
    t.rank_dy = numerical_rank(dy, tol);
    t.front = t.rank == static_cast<int>(pair.dim());
    return t;
}

SpacelikeTest spacelike_test(const FrontalPair& pair, std::span<const double> p, double tol)
{
    const Eigen::MatrixXd dx = pair.x.differential(p);
    const Eigen::MatrixXd first = mink_gram(dx, dx);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(first, Eigen::EigenvaluesOnly);
    SpacelikeTest t;
    t.gram_rank = gram_rank(first, tol);
    t.immersion_rank = numerical_rank(dx, tol);
    t.min_eigenvalue = es.eigenvalues().minCoeff();
    const double top = es.eigenvalues().cwiseAbs().maxCoeff();
    t.spacelike = t.gram_rank == t.immersion_rank && t.min_eigenvalue >= -tol * tol * top;
    return t;
}

double fold_indicator(const FrontalPair& pair, std::span<const double> p)
{
    const FormTriple f = fundamental_forms(pair, p);
    // ⟨df,df⟩ for f = (x - y)/√2 and ⟨dx, √2 df⟩ = I + II; their relative
    // eigenvalues are 1 - κ_i.
    const Eigen::MatrixXd gf = 0.5 * (f.first + 2.0 * f.second + f.third);
    require_positive_definite(gf, p);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(f.first + f.second, gf, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

std::optional<Point> locate_fold(const FrontalPair& pair, std::span<const double> a, std::span<const double> b,
                                 int iterations)
{
    if (a.size() != b.size()) throw std::invalid_argument("locate_fold: endpoint dimensions differ");
    auto at = [&](double t) {
        Point q(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) q[i] = a[i] + t * (b[i] - a[i]);
        return q;
    };
    double lo = 0.0, hi = 1.0;
    double flo = fold_indicator(pair, a);
    const double fhi = fold_indicator(pair, b);
    if (flo == 0.0) return Point(a.begin(), a.end());
    if (fhi == 0.0) return Point(b.begin(), b.end());
    if ((flo > 0) == (fhi > 0)) return std::nullopt;
    for (int it = 0; it < iterations; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = fold_indicator(pair, at(mid));
        if (fm == 0.0) return at(mid);
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return at(0.5 * (lo + hi));
}

bool GcfRecord::passed(const GcfTolerances& tol) const
{
    return regular > 0 && forms_pass_fraction >= tol.min_pass_fraction && ricci.pass && scalar.pass && izumiya.pass
           && gauss.pass && gauss_map_mismatches == 0;
}

GcfRecord gcf_from_frontal(const FrontalPair& pair, std::span<const Point> samples, const GcfTolerances& tol)
{
    const std::size_t n = pair.dim();
    const double nn = static_cast<double>(n);
    GcfRecord rec;
    rec.samples = samples.size();
    for (const auto& p : samples) {
        const FormJets f = form_jets(pair, p, 3);
        const Eigen::MatrixXd first = f.first.value();
        try {
            require_positive_definite(first, p);
        } catch (const DegenerateMetricError&) {
            rec.singular_points.push_back(p);
            continue;
        }
        ++rec.regular;
        const CurvatureJets c = curvature_jets(f.first);
        const Eigen::MatrixXd second = f.second.value();
        const Eigen::MatrixXd third = f.third.value();
        const Eigen::MatrixXd ginv = c.ginv.value();
        const double tr = (ginv * second).trace();

        const Eigen::MatrixXd ricci_res = c.ricci.value() + tr * first + (nn - 2.0) * second;
        rec.ricci.record(max_abs(ricci_res), p);
        rec.scalar.record(std::abs(c.scalar.value() + 2.0 * (nn - 1.0) * tr), p);
        if (n == 2) rec.izumiya.record(std::abs(0.5 * c.scalar.value() + tr), p);

        if (n >= 3) {
            const Eigen::MatrixXd a = c.schouten->value();
            const double rs = max_abs(a + second);
            const double rd = max_abs(a * ginv * a - third);
            rec.schouten.record(rs, p);
            rec.dual.record(rd, p);
            if (rs <= tol.forms && rd <= tol.forms) ++rec.forms_passed;
        } else {
            ++rec.forms_passed;
        }

        rec.gauss.record(gauss_equation_residual(pair, p), p);

        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(-second, first, Eigen::EigenvaluesOnly);
        const bool parabolic = is_parabolic(es.eigenvalues(), tol.parabolic);
        if (parabolic) {
            ++rec.parabolic;
            rec.parabolic_points.push_back(p);
        }
        const bool full = numerical_rank(gauss_map_differential(pair.x, p)) == static_cast<int>(n)
                          && numerical_rank(gauss_map_differential(pair.y, p)) == static_cast<int>(n);
        if (full == parabolic) {
            ++rec.gauss_map_mismatches;
            rec.gauss_map_mismatch_points.push_back(p);
        }
    }
    if (rec.regular == 0) throw PreconditionError("frontal pair has no regular samples");
    rec.regular_fraction = static_cast<double>(rec.regular) / static_cast<double>(rec.samples);
    rec.forms_pass_fraction = static_cast<double>(rec.forms_passed) / static_cast<double>(rec.regular);
    rec.schouten.finish(tol.forms);
    rec.dual.finish(tol.forms);
    rec.ricci.finish(tol.lemma);
    rec.scalar.finish(tol.lemma);
    rec.izumiya.finish(tol.izumiya);
    rec.gauss.finish(tol.gauss);
    return rec;
}

} // namespace cfdual
