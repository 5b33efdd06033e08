#pragma once

#include <json.hpp>

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace cfdual::cli {

inline constexpr const char* kReportSchema = "cfdual.report/1";
inline constexpr const char* kOutputDirEnv = "CFDUAL_OUTPUT_DIR";

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitConfig = 2;

struct RunOutcome {
    int exit_code = kExitPass;
    std::filesystem::path report_path;
    nlohmann::json report;
};

/// Runs one experiment. Verdict lines ("name: pass|fail ...") go to `out`;
/// the JSON report is always written, even for a broken config.
RunOutcome run(const std::filesystem::path& config_path, std::ostream& out);

/// Built-in gallery as text, one entry per block.
void print_gallery(std::ostream& out);
nlohmann::json gallery_json();

std::string version();

} // namespace cfdual::cli
