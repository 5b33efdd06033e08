#include "experiments.hpp"

#include "cfdual/conformal_change.hpp"
#include "cfdual/duality.hpp"
#include "cfdual/error.hpp"
#include "cfdual/frontal.hpp"
#include "cfdual/gallery.hpp"
#include "cfdual/lorentz.hpp"
#include "cfdual/surface2d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cfdual::cli {

namespace {

using nlohmann::json;

constexpr std::size_t kListedPoints = 20;

std::vector<double> vec(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

json mat(const Eigen::MatrixXd& m)
{
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vec(m.row(i).transpose()));
    return rows;
}

json point_list(const std::vector<Point>& pts)
{
    json a = json::array();
    for (std::size_t i = 0; i < pts.size() && i < kListedPoints; ++i) a.push_back(pts[i]);
    return a;
}

Verdict from_check(const ResidualCheck& c, std::string name = {})
{
    Verdict v;
    v.name = name.empty() ? c.name : std::move(name);
    v.pass = c.pass;
    v.residual = c.worst;
    v.tolerance = c.tolerance;
    v.point = c.worst_point;
    if (c.evaluated == 0) v.note = "no samples evaluated";
    return v;
}

Verdict check_verdict(std::string name, ResidualCheck c, double tol)
{
    c.finish(tol);
    return from_check(c, std::move(name));
}

/// Count-type verdict: residual is the number of offending samples, the
/// point is the first of them.
Verdict count_verdict(std::string name, const std::vector<Point>& offending, std::string note = {})
{
    Verdict v;
    v.name = std::move(name);
    v.residual = static_cast<double>(offending.size());
    v.tolerance = 0.0;
    v.pass = offending.empty();
    if (!offending.empty()) v.point = offending.front();
    v.note = std::move(note);
    return v;
}

std::vector<Point> make_samples(const ExperimentConfig& cfg, const Box& box)
{
    const std::size_t count = cfg.samples.count.value_or(default_sample_count(box.dim()));
    std::vector<Point> pts = sample_lattice(box, count, cfg.samples.offset);
    for (std::size_t i = 0; i < cfg.samples.points.size(); ++i) {
        const Point& p = cfg.samples.points[i];
        if (!box.contains(p))
            throw ConfigError("samples.points[" + std::to_string(i) + "]: " + format_point(p)
                                  + " lies outside the chart box",
                              json{{"field", "samples.points[" + std::to_string(i) + "]"}});
        pts.push_back(p);
    }
    if (pts.empty()) throw ConfigError("samples: no sample points", json{{"field", "samples"}});
    return pts;
}

Box default_metric_box(const MetricSpec& m, std::size_t n)
{
    if (m.preset == "hyperbolic") {
        const double h = 0.9 / std::sqrt(static_cast<double>(n));
        return Box::cube(n, -h, h);
    }
    return Box::cube(n, -1.0, 1.0);
}

ChartMetric build_metric(const MetricSpec& m, const Box& box)
{
    if (m.preset == "flat") return ChartMetric::flat(box);
    if (m.preset == "round_sphere") return ChartMetric::round_sphere(box);
    if (m.preset == "hyperbolic") return ChartMetric::hyperbolic(box);
    if (m.preset == "sphere_product") return ChartMetric::sphere_product(box);
    if (m.preset == "conformally_flat") return ChartMetric::conformally_flat(*m.sigma, box);
    return ChartMetric(box, m.components, "components");
}

FrontalPair build_pair(const ExperimentConfig& cfg)
{
    const PairSpec& ps = *cfg.pair;
    try {
        if (ps.gallery) return gallery(*ps.gallery, cfg.dim, ps.params);
        const Box box = cfg.box.value_or(Box::cube(cfg.dim, -1.0, 1.0));
        return FrontalPair("custom", ChartMap(box, ps.x), ChartMap(box, ps.y));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("pair: ") + e.what(), json{{"field", "pair"}});
    }
}

void run_check_metric(const ExperimentConfig& cfg, ExperimentResult& r)
{
    const Box box = cfg.box.value_or(default_metric_box(*cfg.metric, cfg.dim));
    const ChartMetric m = build_metric(*cfg.metric, box);
    const auto samples = make_samples(cfg, box);
    r.sample_count = samples.size();

    const double tol = cfg.tolerances.at("flatness");
    const FlatnessCertificate cert = conformal_flatness_certificate(m, samples, tol);
    Verdict v{"conformally_flat", cert.certified, cert.worst_residual, tol, cert.worst_point, {}};
    v.note = std::string(criterion_name(cert.criterion));
    r.verdicts.push_back(v);

    double smin = std::numeric_limits<double>::infinity(), smax = -smin, bianchi = 0.0, symmetry = 0.0;
    for (const auto& p : samples) {
        const CurvaturePack c = curvature_pack(m, p);
        smin = std::min(smin, c.scalar);
        smax = std::max(smax, c.scalar);
        bianchi = std::max(bianchi, bianchi_residual(c));
        symmetry = std::max(symmetry, riemann_symmetry_residual(c));
    }
    r.details = {{"criterion", criterion_name(cert.criterion)},
                 {"scalar_curvature_range", {smin, smax}},
                 {"max_bianchi_residual", bianchi},
                 {"max_riemann_symmetry_residual", symmetry}};
}

void run_dualize(const ExperimentConfig& cfg, ExperimentResult& r)
{
    const Box box = cfg.box.value_or(default_metric_box(*cfg.metric, cfg.dim));
    const ChartMetric m = build_metric(*cfg.metric, box);
    const auto samples = make_samples(cfg, box);
    r.sample_count = samples.size();
    const auto& t = cfg.tolerances;

    DualityTolerances tol;
    tol.schouten = t.at("schouten");
    tol.spectrum = t.at("spectrum");
    tol.involution = t.at("involution");
    tol.flatness = t.at("flatness");
    tol.input_flatness = t.at("input_flatness");
    tol.parabolic = t.at("parabolic");

    const FlatnessCertificate cert = conformal_flatness_certificate(m, samples, tol.input_flatness);
    Verdict in{"conformally_flat", cert.certified, cert.worst_residual, tol.input_flatness, cert.worst_point, {}};
    in.note = std::string(criterion_name(cert.criterion));
    r.verdicts.push_back(in);
    if (!cert.certified) {
        r.details = {{"skipped", "input metric is not conformally flat; the dual metric is not defined"}};
        return;
    }

    const DualityVerification d = verify_duality(m, samples, tol);
    for (const ResidualCheck* c : {&d.schouten_invariance, &d.eigen_inversion, &d.involution, &d.dual_conformal_flatness})
        r.verdicts.push_back(from_check(*c));

    json parabolic = json::array();
    for (std::size_t i = 0; i < d.parabolic.size() && i < kListedPoints; ++i) {
        const auto& s = d.parabolic[i];
        parabolic.push_back({{"point", s.point},
                             {"det_hat_a", s.det_hat_a},
                             {"eigenvalues", vec(s.eigenvalues)},
                             {"dual_min_eigenvalue", s.dual_min_eigenvalue}});
    }
    // Admissibility (smooth extension of the dual across parabolic points)
    // is not decided from finite samples; the raw behaviour is listed.
    r.details = {{"regular_samples", d.regular_samples},
                 {"parabolic_samples", d.parabolic.size()},
                 {"regular_fraction", static_cast<double>(d.regular_samples) / static_cast<double>(samples.size())},
                 {"parabolic", parabolic}};
}

json cloud_line(const FrontalPair& pair, const Point& p)
{
    const Eigen::VectorXd x = pair.x.value(p), y = pair.y.value(p);
    const Eigen::VectorXd f = (x - y) / std::sqrt(2.0), nu = (x + y) / std::sqrt(2.0);
    return {{"u", p}, {"x", vec(x)}, {"y", vec(y)}, {"f", vec(f)}, {"nu", vec(nu)}};
}

void run_frontal_check(const ExperimentConfig& cfg, ExperimentResult& r)
{
    const FrontalPair pair = build_pair(cfg);
    const auto samples = make_samples(cfg, pair.box());
    r.sample_count = samples.size();
    const auto& t = cfg.tolerances;
    const double rank_tol = t.at("rank");

    ResidualCheck pr("pair_residuals");
    std::size_t fronts = 0, spacelike = 0, immersive = 0;
    for (const auto& p : samples) {
        pr.record(pair_residuals(pair, p).max(), p);
        const FrontTest ft = front_test(pair, p, rank_tol);
        const SpacelikeTest st = spacelike_test(pair, p, rank_tol);
        fronts += ft.front;
        spacelike += st.spacelike;
        immersive += ft.rank_dx == static_cast<int>(pair.dim());
        if (cfg.export_path) {
            json line = cloud_line(pair, p);
            line["front"] = ft.front;
            line["rank_dx"] = ft.rank_dx;
            line["spacelike"] = st.spacelike;
            r.export_lines.push_back(std::move(line));
        }
    }
    r.verdicts.push_back(check_verdict("pair_residuals", pr, t.at("pair")));
    r.details = {{"pair", pair.name},
                 {"front_samples", fronts},
                 {"spacelike_samples", spacelike},
                 {"immersive_samples", immersive}};

    GcfTolerances gt;
    gt.forms = t.at("forms");
    gt.lemma = t.at("lemma");
    gt.gauss = t.at("gauss");
    gt.izumiya = t.at("izumiya");
    gt.min_pass_fraction = t.at("min_pass_fraction");
    gt.parabolic = t.at("parabolic");
    const GcfRecord g = gcf_from_frontal(pair, samples, gt);

    if (pair.dim() >= 3) {
        Verdict v;
        v.name = "forms_pass_fraction";
        v.residual = 1.0 - g.forms_pass_fraction;
        v.tolerance = 1.0 - gt.min_pass_fraction;
        v.pass = g.forms_pass_fraction >= gt.min_pass_fraction;
        v.point = g.schouten.worst > g.dual.worst ? g.schouten.worst_point : g.dual.worst_point;
        v.note = "fraction of regular samples failing -II = A(I) or III = dual(I)";
        r.verdicts.push_back(v);
    } else {
        r.verdicts.push_back(from_check(g.izumiya));
    }
    r.verdicts.push_back(from_check(g.ricci));
    r.verdicts.push_back(from_check(g.scalar));
    r.verdicts.push_back(from_check(g.gauss));
    r.verdicts.push_back(count_verdict("gauss_map_rank", g.gauss_map_mismatch_points,
                                       "samples where joint full rank of dG+ and dG- disagrees with non-parabolic"));

    r.details["regular_samples"] = g.regular;
    r.details["regular_fraction"] = g.regular_fraction;
    r.details["parabolic_samples"] = g.parabolic;
    r.details["singular_points"] = point_list(g.singular_points);
    r.details["parabolic_points"] = point_list(g.parabolic_points);
    if (pair.dim() >= 3) {
        r.details["schouten_worst"] = g.schouten.worst;
        r.details["dual_worst"] = g.dual.worst;
    }
}

void run_gallery(const ExperimentConfig& cfg, ExperimentResult& r)
{
    const FrontalPair pair = build_pair(cfg);
    const auto samples = make_samples(cfg, pair.box());
    r.sample_count = samples.size();
    const auto& t = cfg.tolerances;
    const double rank_tol = t.at("rank");

    ResidualCheck pr("pair_residuals"), rt("round_trip"), model("model_constraints");
    std::vector<Point> rank_mismatch;
    for (const auto& p : samples) {
        pr.record(pair_residuals(pair, p).max(), p);

        const Eigen::VectorXd x = pair.x.value(p), y = pair.y.value(p);
        const auto [f, nu] = to_hyperbolic_pair({x, Model::LightconePlus}, {y, Model::LightconeMinus});
        const auto [x2, y2] = to_lightcone_pair(f, nu);
        const auto [f2, nu2] = to_hyperbolic_pair(x2, y2);
        const double scale = std::max({1.0, x.cwiseAbs().maxCoeff(), y.cwiseAbs().maxCoeff()});
        rt.record(std::max({(x2.z - x).cwiseAbs().maxCoeff(), (y2.z - y).cwiseAbs().maxCoeff(),
                            (f2.z - f.z).cwiseAbs().maxCoeff(), (nu2.z - nu.z).cwiseAbs().maxCoeff()})
                      / scale,
                  p);
        model.record(std::max({model_residual(f.z, Model::Hyperbolic), model_residual(nu.z, Model::DeSitter),
                               std::abs(mink_inner(f.z, nu.z))}),
                     p);

        const Eigen::MatrixXd dx = pair.x.differential(p);
        if (numerical_rank(gauss_map_differential(pair.x, p), rank_tol) != gram_rank(mink_gram(dx, dx), rank_tol))
            rank_mismatch.push_back(p);

        if (cfg.export_path) r.export_lines.push_back(cloud_line(pair, p));
    }
    r.verdicts.push_back(check_verdict("pair_residuals", pr, t.at("pair")));
    r.verdicts.push_back(check_verdict("round_trip", rt, t.at("round_trip")));
    r.verdicts.push_back(check_verdict("model_constraints", model, t.at("model")));
    r.verdicts.push_back(count_verdict("gauss_rank_equality", rank_mismatch, "rank dG+ vs rank of I"));

    const Point& p0 = samples.front();
    const FrontTest ft = front_test(pair, p0, rank_tol);
    const SpacelikeTest st = spacelike_test(pair, p0, rank_tol);
    r.details = {{"pair", pair.name},
                 {"first_sample", {{"point", p0}, {"front", ft.front}, {"rank", ft.rank}, {"rank_dx", ft.rank_dx},
                                   {"spacelike", st.spacelike}, {"gram_rank", st.gram_rank}}}};
}

void run_conformal_change(const ExperimentConfig& cfg, ExperimentResult& r)
{
    const Box box = cfg.box.value_or(Box::cube(cfg.dim, -1.0, 1.0));
    const auto samples = make_samples(cfg, box);
    r.sample_count = samples.size();
    ResidualCheck routes("route_agreement"), second("second_form_agreement"), codazzi("codazzi");
    for (const auto& p : samples) {
        const ConformalChange c = conformal_change(*cfg.sigma, cfg.dim, p);
        routes.record(c.route_discrepancy, p);
        second.record(c.second_mismatch, p);
        codazzi.record(c.codazzi, p);
        if (cfg.export_path)
            r.export_lines.push_back({{"u", p}, {"x", vec(c.x)}, {"y", vec(c.y_explicit)},
                                      {"y_laplace", vec(c.y_laplace)}, {"second", mat(c.second_closed)}});
    }
    r.verdicts.push_back(check_verdict("route_agreement", routes, cfg.tolerances.at("routes")));
    r.verdicts.push_back(check_verdict("second_form_agreement", second, cfg.tolerances.at("second_form")));
    r.verdicts.push_back(check_verdict("codazzi", codazzi, cfg.tolerances.at("codazzi")));
}

void run_realize2d(const ExperimentConfig& cfg, ExperimentResult& r)
{
    const GridSpec& gs = *cfg.grid;
    const Grid grid = Grid::covering(gs.lo, gs.hi, gs.h);
    const Point far = grid.node(grid.nodes[0] - 1, grid.nodes[1] - 1);
    Box box;
    if (cfg.box) {
        box = *cfg.box;
    } else {
        const double m0 = 0.1 * (far[0] - gs.lo[0]), m1 = 0.1 * (far[1] - gs.lo[1]);
        box.lo = {gs.lo[0] - m0, gs.lo[1] - m1};
        box.hi = {far[0] + m0, far[1] + m1};
    }
    if (!box.contains(grid.node(0, 0)) || !box.contains(far))
        throw ConfigError("grid: the grid must lie inside the open chart box", json{{"field", "grid"}});

    const ChartMetric g = build_metric(*cfg.metric, box);
    Box inner;
    inner.lo = {gs.lo[0], gs.lo[1]};
    inner.hi = {far[0], far[1]};
    const auto samples = make_samples(cfg, inner);
    r.sample_count = samples.size();
    const auto& t = cfg.tolerances;

    ResidualCheck cr("cauchy_riemann");
    for (const auto& p : samples) cr.record(cauchy_riemann_residual(*cfg.seed, p), p);
    cr.finish(kCauchyRiemannTolerance);
    r.verdicts.push_back(from_check(cr));
    if (!cr.pass) {
        r.details = {{"skipped", "seed is not holomorphic"}};
        return;
    }

    std::optional<MatrixField> base;
    if (cfg.base_form) base = expr_field(*cfg.base_form);
    const MatrixField second = second_form_from_seed(*cfg.seed, g, base, samples);

    const RealizationResult res = realize_in_Q3(g, second, grid, cfg.drift_bound);
    r.verdicts.push_back({"drift", res.drift <= t.at("drift"), res.drift, t.at("drift"), res.drift_point, {}});
    r.verdicts.push_back(
        {"first_form", res.first_error <= t.at("first_form"), res.first_error, t.at("first_form"), res.first_point, {}});
    r.verdicts.push_back({"second_form", res.second_error <= t.at("second_form"), res.second_error,
                          t.at("second_form"), res.second_point, {}});
    r.verdicts.push_back(check_verdict("trace_condition", res.trace_condition, t.at("trace")));
    r.verdicts.push_back(check_verdict("codazzi", res.codazzi, t.at("codazzi")));

    const Eigen::Vector4d& corner = res.nodes.back().x;
    r.details = {{"grid", {{"origin", {grid.origin[0], grid.origin[1]}},
                           {"nodes", {grid.nodes[0], grid.nodes[1]}},
                           {"h", grid.h}}},
                 {"path_dependence", res.path_dependence},
                 {"corner_x", vec(corner)}};

    if (cfg.metric->preset == "flat") {
        const FlatDualityReport fd = flat_duality_check(g, second, samples, t.at("flat_duality"));
        r.verdicts.push_back(from_check(fd.dual_curvature));
        r.verdicts.push_back(from_check(fd.dual_traceless));
        r.verdicts.push_back(from_check(fd.dual_codazzi));
        r.details["dual_degenerate_samples"] = fd.degenerate.size();
        r.details["dual_degenerate_points"] = point_list(fd.degenerate);
    }

    if (cfg.export_path) {
        for (std::size_t i = 0; i < grid.nodes[0]; ++i)
            for (std::size_t j = 0; j < grid.nodes[1]; ++j) {
                const RealizationNode& nd = res.at(i, j);
                const NodeForms f = realized_forms(g, second, nd);
                const Eigen::Matrix2d gij = g.at(nd.u);
                const Eigen::Matrix2d sij = second(nd.u, 0).value();
                r.export_lines.push_back({{"node", {i, j}},
                                          {"u", nd.u},
                                          {"x", vec(nd.x)},
                                          {"y", vec(nd.y)},
                                          {"first_error", (f.first - gij).cwiseAbs().maxCoeff()},
                                          {"second_error", (f.second - sij).cwiseAbs().maxCoeff()}});
            }
    }
}

Verdict evaluation_failure(const std::string& what, Point p = {})
{
    Verdict v;
    v.name = "evaluation";
    v.pass = false;
    v.residual = std::numeric_limits<double>::infinity();
    v.point = std::move(p);
    v.note = what;
    return v;
}

} // namespace

bool ExperimentResult::passed() const
{
    return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

ExperimentResult run_experiment(const ExperimentConfig& cfg)
{
    ExperimentResult r;
    try {
        switch (cfg.kind) {
        case ExperimentKind::CheckMetric: run_check_metric(cfg, r); break;
        case ExperimentKind::Dualize: run_dualize(cfg, r); break;
        case ExperimentKind::FrontalCheck: run_frontal_check(cfg, r); break;
        case ExperimentKind::ConformalChange: run_conformal_change(cfg, r); break;
        case ExperimentKind::Realize2d: run_realize2d(cfg, r); break;
        case ExperimentKind::Gallery: run_gallery(cfg, r); break;
        }
    } catch (const DomainError& e) {
        r.verdicts.push_back(evaluation_failure(e.what(), e.point()));
    } catch (const DegenerateMetricError& e) {
        r.verdicts.push_back(evaluation_failure(e.what(), e.point()));
    } catch (const PreconditionError& e) {
        r.verdicts.push_back(evaluation_failure(e.what()));
    } catch (const std::invalid_argument& e) {
        // Library argument checks (shapes, parameter ranges) trace back to the config.
        throw ConfigError(e.what());
    }
    return r;
}

} // namespace cfdual::cli
