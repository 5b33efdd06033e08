#include "cfdual/cli.hpp"
#include "cfdual/error.hpp"
#include "cfdual/gallery.hpp"

#include "config.hpp"
#include "experiments.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace cfdual::cli {

namespace {

using nlohmann::json;

std::string sci(double v)
{
    if (std::isinf(v)) return "inf";
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

std::string short_point(const Point& p)
{
    std::string s = "(";
    for (std::size_t i = 0; i < p.size(); ++i) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4g", p[i]);
        s += (i ? ", " : "") + std::string(buf);
    }
    return s + ")";
}

json verdict_json(const Verdict& v)
{
    json j = {{"name", v.name},
              {"pass", v.pass},
              {"residual", std::isfinite(v.residual) ? json(v.residual) : json(nullptr)},
              {"tolerance", v.tolerance},
              {"point", v.point.empty() ? json(nullptr) : json(v.point)}};
    if (!v.note.empty()) j["note"] = v.note;
    return j;
}

std::string verdict_line(const Verdict& v)
{
    std::string s = v.name + ": " + (v.pass ? "pass" : "fail") + " (residual " + sci(v.residual) + ", tolerance "
                    + sci(v.tolerance);
    if (!v.point.empty()) s += ", at " + short_point(v.point);
    s += ")";
    if (!v.note.empty()) s += " [" + v.note + "]";
    return s;
}

json header(const std::filesystem::path& config_path)
{
    return {{"schema", kReportSchema},
            {"tool", {{"name", "cfdual"}, {"version", version()}}},
            {"config", {{"path", config_path.generic_string()}, {"echo", nullptr}}}};
}

void write_json(const std::filesystem::path& path, const json& j)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << j.dump(2) << '\n';
}

void write_lines(const std::filesystem::path& path, const std::vector<json>& lines)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    for (const auto& l : lines) f << l.dump() << '\n';
}

RunOutcome config_failure(const std::filesystem::path& config_path, const std::filesystem::path& report_path,
                          const ConfigError& e, json echo, std::ostream& out)
{
    RunOutcome o;
    o.exit_code = kExitConfig;
    o.report_path = report_path;
    o.report = header(config_path);
    o.report["config"]["echo"] = std::move(echo);
    o.report["status"] = "config_error";
    o.report["exit_code"] = kExitConfig;
    o.report["verdicts"] = json::array();
    o.report["error"] = {{"message", e.what()}, {"detail", e.detail()}};
    out << "config error: " << e.what() << '\n';
    try {
        write_json(report_path, o.report);
        out << "report: " << report_path.generic_string() << '\n';
    } catch (const std::exception& w) {
        out << "error: " << w.what() << '\n';
    }
    return o;
}

} // namespace

std::string version() { return CFDUAL_VERSION; }

RunOutcome run(const std::filesystem::path& config_path, std::ostream& out)
{
    ExperimentConfig cfg;
    try {
        cfg = load_config(config_path);
    } catch (const ConfigError& e) {
        return config_failure(config_path, default_output(config_path), e, nullptr, out);
    }

    ExperimentResult res;
    try {
        res = run_experiment(cfg);
    } catch (const ConfigError& e) {
        return config_failure(config_path, cfg.output, e, cfg.echo, out);
    }

    RunOutcome o;
    o.exit_code = res.passed() ? kExitPass : kExitFail;
    o.report_path = cfg.output;

    json verdicts = json::array();
    for (const auto& v : res.verdicts) {
        verdicts.push_back(verdict_json(v));
        out << verdict_line(v) << '\n';
    }

    o.report = header(config_path);
    o.report["config"]["echo"] = cfg.echo;
    o.report["experiment"] = {{"kind", kind_name(cfg.kind)}, {"name", cfg.name}, {"dimension", cfg.dim}};
    o.report["status"] = o.exit_code == kExitPass ? "pass" : "fail";
    o.report["exit_code"] = o.exit_code;
    o.report["verdicts"] = std::move(verdicts);
    o.report["details"] = res.details;
    o.report["provenance"] = {
        {"tool_version", version()},
        {"tolerances", cfg.tolerances},
        {"samples",
         {{"count", res.sample_count},
          {"lattice", "additive recurrence, 5% face margin"},
          {"offset", cfg.samples.offset},
          {"extra_points", cfg.samples.points.size()}}},
        {"export", cfg.export_path ? json(cfg.export_path->generic_string()) : json(nullptr)}};

    try {
        if (cfg.export_path) {
            write_lines(*cfg.export_path, res.export_lines);
            out << "export: " << cfg.export_path->generic_string() << " (" << res.export_lines.size() << " lines)\n";
        }
        write_json(cfg.output, o.report);
    } catch (const std::exception& e) {
        out << "error: " << e.what() << '\n';
        o.exit_code = kExitConfig;
        return o;
    }
    out << "status: " << (o.exit_code == kExitPass ? "pass" : "fail") << '\n';
    out << "report: " << cfg.output.generic_string() << '\n';
    return o;
}

json gallery_json()
{
    json entries = json::array();
    for (const auto& e : gallery_list()) {
        json params = json::array();
        for (const auto& p : e.params)
            params.push_back(
                {{"name", p.name}, {"type", p.type}, {"default", p.default_value}, {"description", p.description}});
        entries.push_back({{"name", e.name},
                           {"description", e.description},
                           {"min_dimension", e.min_dim},
                           {"default_box", e.default_box},
                           {"params", params}});
    }
    return entries;
}

void print_gallery(std::ostream& out)
{
    for (const auto& e : gallery_list()) {
        out << e.name << "  (n >= " << e.min_dim << ", box " << e.default_box << ")\n";
        out << "    " << e.description << '\n';
        for (const auto& p : e.params)
            out << "    " << p.name << " : " << p.type << " = " << p.default_value << "  " << p.description << '\n';
    }
}

} // namespace cfdual::cli
