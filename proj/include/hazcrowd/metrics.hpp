#pragma once

#include "hazcrowd/engine.hpp"
#include "hazcrowd/scenario.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace hazcrowd {

/// Panic levels: E = 0, (0, 0.3], (0.3, 0.5], (0.5, 0.7], (0.7, 1].
inline constexpr std::size_t panic_bin_count = 5;

std::size_t panic_bin(double panic);

struct PanicBins {
    std::int64_t step = 0;
    std::array<int, panic_bin_count> counts{};
};

struct AgentMetrics {
    int id = 0;
    double trajectory_length = 0.0;
    double max_speed = 0.0;
};

struct MetricsReport {
    double window_start = 0.0;
    std::vector<AgentMetrics> agents;
    std::vector<PanicBins> histogram;
    double mean_trajectory_length = 0.0;
    double mean_max_speed = 0.0;
};

/// Start of the evaluation window: the earliest hazard onset, or 0 without hazards.
double metrics_window_start(const Scenario& scenario);

/// Path length over the segments that start at or after window_start.
/// Throws std::out_of_range for an unknown agent id.
double trajectory_length(std::span<const SimulationFrame> frames, int agent_id, double window_start = 0.0);

/// Largest recorded speed over the same window.
double max_speed(std::span<const SimulationFrame> frames, int agent_id, double window_start = 0.0);

/// Per-frame counts of living agents in each panic level.
std::vector<PanicBins> panic_histogram(std::span<const SimulationFrame> frames);

MetricsReport compute_metrics(const Scenario& scenario, std::span<const SimulationFrame> frames);

} // namespace hazcrowd
