#pragma once

#include "hazcrowd/scenario.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace hazcrowd {

enum ExitCode : int {
    exit_ok = 0,
    exit_validation = 1,
    exit_io = 2,
    exit_internal = 3,
};

struct RunConfig {
    std::filesystem::path scenario_path;
    std::filesystem::path output_dir;
    ScenarioOverrides overrides;
    double pixels_per_meter = 1.0;
    int float_digits = 9;
    unsigned threads = 1;
    bool overwrite = false;
};

/// Load, simulate and write every run output into config.output_dir.
/// Existing output files are left alone unless config.overwrite is set.
int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Prints each violation on its own line; exit_ok iff the file is valid.
int cmd_validate(const std::filesystem::path& scenario_path, std::ostream& out, std::ostream& err);

int cmd_presets(const std::string& name, const std::filesystem::path& output, bool overwrite, std::ostream& out,
                std::ostream& err);

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace hazcrowd
