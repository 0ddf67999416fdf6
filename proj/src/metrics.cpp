#include "hazcrowd/metrics.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace hazcrowd {

namespace {

constexpr double window_epsilon = 1e-9;

std::size_t agent_index(std::span<const SimulationFrame> frames, int agent_id)
{
    if (!frames.empty()) {
        const auto& agents = frames.front().agents;
        for (std::size_t i = 0; i < agents.size(); ++i) {
            if (agents[i].id == agent_id) {
                return i;
            }
        }
    }
    throw std::out_of_range("unknown agent id " + std::to_string(agent_id));
}

} // namespace

std::size_t panic_bin(double panic)
{
    if (panic <= 0.0) {
        return 0;
    }
    if (panic <= 0.3) {
        return 1;
    }
    if (panic <= 0.5) {
        return 2;
    }
    if (panic <= 0.7) {
        return 3;
    }
    return 4;
}

double metrics_window_start(const Scenario& scenario)
{
    if (scenario.hazards.empty()) {
        return 0.0;
    }
    double start = scenario.hazards.front().onset;
    for (const auto& h : scenario.hazards) {
        start = std::min(start, h.onset);
    }
    return start;
}

double trajectory_length(std::span<const SimulationFrame> frames, int agent_id, double window_start)
{
    const std::size_t idx = agent_index(frames, agent_id);
    double length = 0.0;
    for (std::size_t f = 0; f + 1 < frames.size(); ++f) {
        if (frames[f].time < window_start - window_epsilon) {
            continue;
        }
        length += distance(frames[f + 1].agents[idx].position, frames[f].agents[idx].position);
    }
    return length;
}

double max_speed(std::span<const SimulationFrame> frames, int agent_id, double window_start)
{
    const std::size_t idx = agent_index(frames, agent_id);
    double best = 0.0;
    for (std::size_t f = 1; f < frames.size(); ++f) {
        if (frames[f - 1].time < window_start - window_epsilon) {
            continue;
        }
        best = std::max(best, norm(frames[f].agents[idx].velocity));
    }
    return best;
}

std::vector<PanicBins> panic_histogram(std::span<const SimulationFrame> frames)
{
    std::vector<PanicBins> out;
    out.reserve(frames.size());
    for (const auto& frame : frames) {
        PanicBins bins;
        bins.step = frame.step;
        for (const auto& a : frame.agents) {
            if (a.alive()) {
                ++bins.counts[panic_bin(a.panic)];
            }
        }
        out.push_back(bins);
    }
    return out;
}

MetricsReport compute_metrics(const Scenario& scenario, std::span<const SimulationFrame> frames)
{
    MetricsReport report;
    report.window_start = metrics_window_start(scenario);
    for (const auto& agent : scenario.agents) {
        AgentMetrics m;
        m.id = agent.id;
        m.trajectory_length = trajectory_length(frames, agent.id, report.window_start);
        m.max_speed = max_speed(frames, agent.id, report.window_start);
        report.agents.push_back(m);
    }
    report.histogram = panic_histogram(frames);
    if (!report.agents.empty()) {
        double length_sum = 0.0;
        double speed_sum = 0.0;
        for (const auto& m : report.agents) {
            length_sum += m.trajectory_length;
            speed_sum += m.max_speed;
        }
        report.mean_trajectory_length = length_sum / static_cast<double>(report.agents.size());
        report.mean_max_speed = speed_sum / static_cast<double>(report.agents.size());
    }
    return report;
}

} // namespace hazcrowd
