#pragma once

#include "hazcrowd/engine.hpp"
#include "hazcrowd/metrics.hpp"
#include "hazcrowd/scenario.hpp"

#include <array>
#include <ostream>
#include <string>
#include <string_view>

namespace hazcrowd {

inline constexpr std::string_view trajectories_header = "step,agent_id,x,y,vx,vy,E,state";
inline constexpr std::string_view metrics_header = "agent_id,trajectory_length,max_speed";
inline constexpr std::string_view histogram_header = "step,bin0,bin1,bin2,bin3,bin4";

/// Files written by a run, relative to the output directory.
inline constexpr std::array<std::string_view, 6> run_output_files = {
    "trajectories.csv", "panic.csv", "metrics.csv", "panic_histogram.csv", "metrics.json", "manifest.json",
};

struct OutputOptions {
    /// Digits after the decimal point in every CSV number.
    int float_digits = 9;
    /// Applied to lengths and speeds in the metrics outputs only.
    double pixels_per_meter = 1.0;
};

/// Fixed-point, locale-independent formatting.
std::string format_fixed(double value, int digits);

/// One row per (recorded step, agent).
void write_trajectories_csv(std::ostream& out, const RunResult& result, const OutputOptions& options);

/// Panic matrix: one row per step, one column per agent.
void write_panic_csv(std::ostream& out, const RunResult& result, const OutputOptions& options);

void write_metrics_csv(std::ostream& out, const MetricsReport& report, const OutputOptions& options);
void write_histogram_csv(std::ostream& out, const MetricsReport& report);

std::string metrics_json(const MetricsReport& report, const OutputOptions& options);

/// Resolved scenario plus run facts; loading it as a scenario reproduces the run.
std::string manifest_json(const Scenario& scenario, const RunResult& result, const OutputOptions& options,
                          const std::string& source_path, unsigned threads);

} // namespace hazcrowd
