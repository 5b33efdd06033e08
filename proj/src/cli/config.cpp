#include "config.hpp"

#include "cfdual/error.hpp"

#include <yaml-cpp/yaml.h>

#include <cstdlib>
#include <set>
#include <sstream>

namespace cfdual::cli {

namespace {

using nlohmann::json;

const std::map<std::string, ExperimentKind>& kind_table()
{
    static const std::map<std::string, ExperimentKind> t{
        {"check-metric", ExperimentKind::CheckMetric},
        {"dualize", ExperimentKind::Dualize},
        {"frontal-check", ExperimentKind::FrontalCheck},
        {"conformal-change", ExperimentKind::ConformalChange},
        {"realize2d", ExperimentKind::Realize2d},
        {"gallery", ExperimentKind::Gallery},
    };
    return t;
}

[[noreturn]] void fail(const std::string& where, const std::string& msg)
{
    throw ConfigError(where + ": " + msg, json{{"field", where}});
}

// Scalars become numbers or booleans when they read as such, so the echo
// keeps the user's types.
json to_json(const YAML::Node& n)
{
    switch (n.Type()) {
    case YAML::NodeType::Sequence: {
        json a = json::array();
        for (const auto& e : n) a.push_back(to_json(e));
        return a;
    }
    case YAML::NodeType::Map: {
        json o = json::object();
        for (const auto& kv : n) o[kv.first.as<std::string>()] = to_json(kv.second);
        return o;
    }
    case YAML::NodeType::Scalar: {
        const std::string s = n.Scalar();
        if (n.Tag() == "!") return s;  // quoted
        if (s == "true" || s == "false") return s == "true";
        try {
            std::size_t used = 0;
            const long long i = std::stoll(s, &used);
            if (used == s.size()) return i;
        } catch (...) {
        }
        try {
            std::size_t used = 0;
            const double d = std::stod(s, &used);
            if (used == s.size()) return d;
        } catch (...) {
        }
        return s;
    }
    default:
        return nullptr;
    }
}

double as_double(const YAML::Node& n, const std::string& where)
{
    if (!n.IsScalar()) fail(where, "expected a number");
    try {
        return n.as<double>();
    } catch (const YAML::Exception&) {
        fail(where, "expected a number, got '" + n.Scalar() + "'");
    }
}

long long as_int(const YAML::Node& n, const std::string& where)
{
    if (!n.IsScalar()) fail(where, "expected an integer");
    try {
        return n.as<long long>();
    } catch (const YAML::Exception&) {
        fail(where, "expected an integer, got '" + n.Scalar() + "'");
    }
}

std::string as_string(const YAML::Node& n, const std::string& where)
{
    if (!n.IsScalar()) fail(where, "expected a string");
    return n.Scalar();
}

std::vector<double> as_vector(const YAML::Node& n, const std::string& where)
{
    if (!n.IsSequence()) fail(where, "expected a list of numbers");
    std::vector<double> v;
    for (std::size_t i = 0; i < n.size(); ++i) v.push_back(as_double(n[i], where + "[" + std::to_string(i) + "]"));
    return v;
}

Expr as_expr(const YAML::Node& n, const std::string& where, std::size_t dim)
{
    // Plain numbers are accepted where an expression is expected.
    const std::string src = as_string(n, where);
    try {
        return parse_expr(src, dim);
    } catch (const ParseError& e) {
        std::ostringstream msg;
        msg << where << ": " << e.what() << " in \"" << src << "\"\n"
            << "    " << src << "\n    " << std::string(e.offset(), ' ') << '^';
        throw ConfigError(msg.str(), json{{"field", where}, {"expression", src}, {"offset", e.offset()},
                                          {"message", e.what()}});
    }
}

std::vector<Expr> as_expr_list(const YAML::Node& n, const std::string& where, std::size_t dim, std::size_t len)
{
    if (!n.IsSequence()) fail(where, "expected a list of expressions");
    if (n.size() != len)
        fail(where, "expected " + std::to_string(len) + " entries, got " + std::to_string(n.size()));
    std::vector<Expr> v;
    for (std::size_t i = 0; i < len; ++i) v.push_back(as_expr(n[i], where + "[" + std::to_string(i) + "]", dim));
    return v;
}

std::vector<std::vector<Expr>> as_table(const YAML::Node& n, const std::string& where, std::size_t rows,
                                        std::size_t dim)
{
    if (!n.IsSequence() || n.size() != rows)
        fail(where, "expected a " + std::to_string(rows) + "x" + std::to_string(rows) + " table");
    std::vector<std::vector<Expr>> t;
    for (std::size_t i = 0; i < rows; ++i)
        t.push_back(as_expr_list(n[i], where + "[" + std::to_string(i) + "]", dim, rows));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = i + 1; j < rows; ++j)
            if (!(t[i][j] == t[j][i]))
                fail(where, "entries [" + std::to_string(i) + "][" + std::to_string(j) + "] and [" + std::to_string(j)
                                + "][" + std::to_string(i) + "] differ; the table must be symmetric");
    return t;
}

void check_keys(const YAML::Node& n, const std::string& where, const std::set<std::string>& allowed)
{
    if (!n.IsMap()) fail(where, "expected a table");
    for (const auto& kv : n) {
        const std::string k = kv.first.as<std::string>();
        if (!allowed.count(k)) {
            std::string list;
            for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
            fail(where.empty() ? k : where + "." + k, "unknown key (expected one of: " + list + ")");
        }
    }
}

Box parse_box(const YAML::Node& n, std::size_t dim)
{
    Box b;
    if (n.IsSequence()) {
        const auto v = as_vector(n, "box");
        if (v.size() != 2) fail("box", "a list box must be [lo, hi]");
        b = Box::cube(dim, v[0], v[1]);
    } else {
        check_keys(n, "box", {"lo", "hi"});
        if (!n["lo"] || !n["hi"]) fail("box", "needs lo and hi");
        b.lo = as_vector(n["lo"], "box.lo");
        b.hi = as_vector(n["hi"], "box.hi");
        if (b.lo.size() != dim || b.hi.size() != dim)
            fail("box", "lo and hi need " + std::to_string(dim) + " entries");
    }
    try {
        b.validate();
    } catch (const std::exception& e) {
        fail("box", e.what());
    }
    return b;
}

MetricSpec parse_metric(const YAML::Node& n, std::size_t dim)
{
    check_keys(n, "metric", {"preset", "sigma", "components"});
    MetricSpec m;
    if (n["components"]) {
        if (n["preset"] || n["sigma"]) fail("metric", "components cannot be combined with preset or sigma");
        m.preset = "components";
        m.components = as_table(n["components"], "metric.components", dim, dim);
        return m;
    }
    m.preset = n["preset"] ? as_string(n["preset"], "metric.preset") : (n["sigma"] ? "conformally_flat" : "");
    static const std::set<std::string> presets{"flat", "round_sphere", "hyperbolic", "sphere_product",
                                               "conformally_flat"};
    if (!presets.count(m.preset))
        fail("metric.preset", "expected one of flat, round_sphere, hyperbolic, sphere_product, conformally_flat");
    if (m.preset == "conformally_flat") {
        if (!n["sigma"]) fail("metric", "conformally_flat needs sigma");
        m.sigma = as_expr(n["sigma"], "metric.sigma", dim);
    } else if (n["sigma"]) {
        fail("metric.sigma", "only used with preset conformally_flat");
    }
    if (m.preset == "sphere_product" && dim != 4) fail("metric.preset", "sphere_product needs dimension 4");
    return m;
}

PairSpec parse_pair(const YAML::Node& n, std::size_t dim)
{
    check_keys(n, "pair", {"gallery", "params", "x", "y"});
    PairSpec p;
    if (n["gallery"]) {
        if (n["x"] || n["y"]) fail("pair", "gallery cannot be combined with x and y");
        p.gallery = as_string(n["gallery"], "pair.gallery");
        bool known = false;
        for (const auto& e : gallery_list()) known = known || e.name == *p.gallery;
        if (!known) fail("pair.gallery", "unknown gallery entry '" + *p.gallery + "'");
        if (const auto& q = n["params"]) {
            check_keys(q, "pair.params", {"sigma", "radius", "scale", "orientation"});
            if (q["sigma"]) p.params.sigma = as_expr(q["sigma"], "pair.params.sigma", dim);
            if (q["radius"]) p.params.radius = as_double(q["radius"], "pair.params.radius");
            if (q["scale"]) p.params.scale = as_double(q["scale"], "pair.params.scale");
            if (q["orientation"]) p.params.orientation = static_cast<int>(as_int(q["orientation"], "pair.params.orientation"));
        }
        return p;
    }
    if (n["params"]) fail("pair.params", "only used with gallery");
    if (!n["x"] || !n["y"]) fail("pair", "needs either gallery or both x and y");
    p.x = as_expr_list(n["x"], "pair.x", dim, dim + 2);
    p.y = as_expr_list(n["y"], "pair.y", dim, dim + 2);
    return p;
}

SampleSpec parse_samples(const YAML::Node& n, std::size_t dim)
{
    check_keys(n, "samples", {"count", "offset", "points"});
    SampleSpec s;
    if (n["count"]) {
        const long long c = as_int(n["count"], "samples.count");
        if (c < 0) fail("samples.count", "must be non-negative");
        s.count = static_cast<std::size_t>(c);
    }
    if (n["offset"]) s.offset = as_double(n["offset"], "samples.offset");
    if (const auto& pts = n["points"]) {
        if (!pts.IsSequence()) fail("samples.points", "expected a list of points");
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const std::string w = "samples.points[" + std::to_string(i) + "]";
            auto p = as_vector(pts[i], w);
            if (p.size() != dim) fail(w, "expected " + std::to_string(dim) + " coordinates");
            s.points.push_back(std::move(p));
        }
    }
    return s;
}

GridSpec parse_grid(const YAML::Node& n)
{
    check_keys(n, "grid", {"lo", "hi", "h"});
    GridSpec g;
    auto pair2 = [&](const char* key, std::array<double, 2>& out) {
        if (!n[key]) return;
        const auto v = as_vector(n[key], std::string("grid.") + key);
        if (v.size() != 2) fail(std::string("grid.") + key, "expected 2 coordinates");
        out = {v[0], v[1]};
    };
    pair2("lo", g.lo);
    pair2("hi", g.hi);
    if (n["h"]) g.h = as_double(n["h"], "grid.h");
    if (!(g.h > 0.0)) fail("grid.h", "must be positive");
    if (!(g.lo[0] < g.hi[0]) || !(g.lo[1] < g.hi[1])) fail("grid", "lo must be below hi on both axes");
    return g;
}

} // namespace

std::string_view kind_name(ExperimentKind k) noexcept
{
    for (const auto& [name, kind] : kind_table())
        if (kind == k) return name;
    return "?";
}

std::map<std::string, double> default_tolerances(ExperimentKind k)
{
    switch (k) {
    case ExperimentKind::CheckMetric:
        return {{"flatness", 1e-8}};
    case ExperimentKind::Dualize:
        return {{"schouten", 1e-6}, {"spectrum", 1e-7},       {"involution", 1e-7},
                {"flatness", 1e-7}, {"input_flatness", 1e-8}, {"parabolic", 1e-10}};
    case ExperimentKind::FrontalCheck:
        return {{"pair", 1e-8},  {"forms", 1e-6},   {"lemma", 1e-6},   {"gauss", 1e-6},
                {"izumiya", 1e-7}, {"min_pass_fraction", 0.95}, {"parabolic", 1e-10}, {"rank", 1e-8}};
    case ExperimentKind::ConformalChange:
        return {{"routes", 1e-7}, {"second_form", 1e-8}, {"codazzi", 1e-7}};
    case ExperimentKind::Realize2d:
        return {{"drift", 1e-6},  {"first_form", 1e-6}, {"second_form", 1e-6},
                {"trace", 1e-8},  {"codazzi", 1e-6},    {"flat_duality", 1e-6}};
    case ExperimentKind::Gallery:
        return {{"pair", 1e-8}, {"round_trip", 1e-12}, {"model", 1e-9}, {"rank", 1e-8}};
    }
    return {};
}

std::filesystem::path output_directory()
{
    const char* env = std::getenv(kOutputDirEnv);
    return env && *env ? std::filesystem::path(env) : std::filesystem::path(".");
}

std::filesystem::path default_output(const std::filesystem::path& config_path)
{
    return output_directory() / (config_path.stem().string() + ".report.json");
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    YAML::Node root;
    try {
        root = YAML::LoadFile(path.string());
    } catch (const YAML::BadFile&) {
        throw ConfigError("cannot read config file " + path.string(), json{{"field", "file"}});
    } catch (const YAML::ParserException& e) {
        throw ConfigError("YAML syntax error at line " + std::to_string(e.mark.line + 1) + ", column "
                              + std::to_string(e.mark.column + 1) + ": " + e.msg,
                          json{{"field", "file"}, {"line", e.mark.line + 1}, {"column", e.mark.column + 1}});
    }
    if (!root.IsMap()) fail("config", "top level must be a table");

    ExperimentConfig c;
    c.echo = to_json(root);
    check_keys(root, "",
               {"kind", "name", "dimension", "box", "metric", "pair", "sigma", "seed", "base_form", "grid",
                "drift_bound", "samples", "tolerances", "output", "export"});

    if (!root["kind"]) fail("kind", "missing");
    const std::string kind = as_string(root["kind"], "kind");
    const auto it = kind_table().find(kind);
    if (it == kind_table().end())
        fail("kind", "unknown experiment kind '" + kind
                         + "' (expected check-metric, dualize, frontal-check, conformal-change, realize2d or gallery)");
    c.kind = it->second;
    c.name = root["name"] ? as_string(root["name"], "name") : path.stem().string();

    if (root["dimension"]) {
        const long long d = as_int(root["dimension"], "dimension");
        if (d < 2 || d > static_cast<long long>(kMaxJetDim))
            fail("dimension", "must be between 2 and " + std::to_string(kMaxJetDim));
        c.dim = static_cast<std::size_t>(d);
    } else if (c.kind == ExperimentKind::Realize2d) {
        c.dim = 2;
    } else {
        fail("dimension", "missing");
    }

    auto require = [&](const char* key) {
        if (!root[key]) fail(key, std::string("required for kind ") + kind);
    };
    auto forbid_except = [&](const char* key, std::initializer_list<ExperimentKind> kinds) {
        if (!root[key]) return;
        for (auto k : kinds)
            if (k == c.kind) return;
        fail(key, std::string("not used by kind ") + kind);
    };
    forbid_except("metric", {ExperimentKind::CheckMetric, ExperimentKind::Dualize, ExperimentKind::Realize2d});
    forbid_except("pair", {ExperimentKind::FrontalCheck, ExperimentKind::Gallery});
    forbid_except("sigma", {ExperimentKind::ConformalChange});
    forbid_except("seed", {ExperimentKind::Realize2d});
    forbid_except("base_form", {ExperimentKind::Realize2d});
    forbid_except("grid", {ExperimentKind::Realize2d});
    forbid_except("drift_bound", {ExperimentKind::Realize2d});
    forbid_except("export", {ExperimentKind::FrontalCheck, ExperimentKind::Gallery, ExperimentKind::ConformalChange,
                             ExperimentKind::Realize2d});

    switch (c.kind) {
    case ExperimentKind::CheckMetric:
    case ExperimentKind::Dualize:
        require("metric");
        break;
    case ExperimentKind::FrontalCheck:
    case ExperimentKind::Gallery:
        require("pair");
        break;
    case ExperimentKind::ConformalChange:
        require("sigma");
        break;
    case ExperimentKind::Realize2d:
        require("metric");
        require("seed");
        if (c.dim != 2) fail("dimension", "realize2d works on surfaces (dimension 2)");
        break;
    }

    if (root["box"]) c.box = parse_box(root["box"], c.dim);
    if (root["metric"]) c.metric = parse_metric(root["metric"], c.dim);
    if (root["pair"]) {
        c.pair = parse_pair(root["pair"], c.dim);
        if (c.pair->gallery) {
            for (const auto& e : gallery_list())
                if (e.name == *c.pair->gallery && c.dim < e.min_dim)
                    fail("dimension", *c.pair->gallery + " needs dimension >= " + std::to_string(e.min_dim));
            c.pair->params.box = c.box;
        }
    }
    if (root["sigma"]) c.sigma = as_expr(root["sigma"], "sigma", c.dim);
    if (const auto& s = root["seed"]) {
        check_keys(s, "seed", {"re", "im"});
        if (!s["re"] || !s["im"]) fail("seed", "needs re and im");
        c.seed = HoloSeed{as_expr(s["re"], "seed.re", 2), as_expr(s["im"], "seed.im", 2)};
    }
    if (root["base_form"]) c.base_form = as_table(root["base_form"], "base_form", 2, 2);
    if (root["grid"]) c.grid = parse_grid(root["grid"]);
    if (c.kind == ExperimentKind::Realize2d && !c.grid) c.grid = GridSpec{};
    if (root["drift_bound"]) {
        c.drift_bound = as_double(root["drift_bound"], "drift_bound");
        if (!(c.drift_bound > 0.0)) fail("drift_bound", "must be positive");
    }
    if (root["samples"]) c.samples = parse_samples(root["samples"], c.dim);

    c.tolerances = default_tolerances(c.kind);
    if (const auto& t = root["tolerances"]) {
        std::set<std::string> allowed;
        for (const auto& kv : c.tolerances) allowed.insert(kv.first);
        check_keys(t, "tolerances", allowed);
        for (const auto& kv : t) {
            const std::string k = kv.first.as<std::string>();
            const double v = as_double(kv.second, "tolerances." + k);
            if (!(v >= 0.0)) fail("tolerances." + k, "must be non-negative");
            c.tolerances[k] = v;
        }
    }

    const std::filesystem::path dir = output_directory();
    if (root["output"]) {
        std::filesystem::path o = as_string(root["output"], "output");
        c.output = o.is_absolute() ? o : dir / o;
    } else {
        c.output = dir / (path.stem().string() + ".report.json");
    }
    if (root["export"]) {
        std::filesystem::path o = as_string(root["export"], "export");
        c.export_path = o.is_absolute() ? o : dir / o;
    }
    return c;
}

} // namespace cfdual::cli
