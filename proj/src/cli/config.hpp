#pragma once

#include "cfdual/chart.hpp"
#include "cfdual/cli.hpp"
#include "cfdual/curvature.hpp"
#include "cfdual/expr.hpp"
#include "cfdual/gallery.hpp"
#include "cfdual/surface2d.hpp"

#include <json.hpp>

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfdual::cli {

enum class ExperimentKind { CheckMetric, Dualize, FrontalCheck, ConformalChange, Realize2d, Gallery };

std::string_view kind_name(ExperimentKind k) noexcept;

/// Invalid configuration. `detail` carries structured context (expression
/// text, byte offset) for the report.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what, nlohmann::json detail = nlohmann::json::object())
        : std::runtime_error(what), detail_(std::move(detail))
    {
    }
    const nlohmann::json& detail() const noexcept { return detail_; }

private:
    nlohmann::json detail_;
};

struct MetricSpec {
    std::string preset;  // flat, round_sphere, hyperbolic, sphere_product, conformal, components
    std::optional<Expr> sigma;
    std::vector<std::vector<Expr>> components;
};

struct PairSpec {
    std::optional<std::string> gallery;
    GalleryParams params;
    std::vector<Expr> x, y;
};

struct SampleSpec {
    std::optional<std::size_t> count;
    double offset = 0.5;
    std::vector<Point> points;
};

struct GridSpec {
    std::array<double, 2> lo{0.0, 0.0}, hi{1.0, 1.0};
    double h = 0.01;
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::CheckMetric;
    std::string name;
    std::size_t dim = 0;
    std::optional<Box> box;
    std::optional<MetricSpec> metric;
    std::optional<PairSpec> pair;
    std::optional<Expr> sigma;
    std::optional<HoloSeed> seed;
    std::optional<std::vector<std::vector<Expr>>> base_form;
    std::optional<GridSpec> grid;
    double drift_bound = 1e-3;
    SampleSpec samples;
    std::map<std::string, double> tolerances;
    std::filesystem::path output;
    std::optional<std::filesystem::path> export_path;
    nlohmann::json echo;
};

/// Defaults of every tolerance key the kind accepts.
std::map<std::string, double> default_tolerances(ExperimentKind k);

/// Directory for relative report and export paths: $CFDUAL_OUTPUT_DIR or ".".
std::filesystem::path output_directory();
/// Report path used when the config cannot be read far enough to name one.
std::filesystem::path default_output(const std::filesystem::path& config_path);

ExperimentConfig load_config(const std::filesystem::path& path);

} // namespace cfdual::cli
