#include "hazcrowd/output.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace hazcrowd {

using ordered_json = nlohmann::ordered_json;

std::string format_fixed(double value, int digits)
{
    if (!std::isfinite(value)) {
        return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
    }
    char buf[512];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, digits);
    if (res.ec != std::errc{}) {
        throw std::runtime_error("format_fixed: value does not fit the buffer");
    }
    return std::string(buf, res.ptr);
}

void write_trajectories_csv(std::ostream& out, const RunResult& result, const OutputOptions& options)
{
    const int d = options.float_digits;
    out << trajectories_header << '\n';
    for (const auto& frame : result.frames) {
        for (const auto& a : frame.agents) {
            out << frame.step << ',' << a.id << ',' << format_fixed(a.position.x, d) << ','
                << format_fixed(a.position.y, d) << ',' << format_fixed(a.velocity.x, d) << ','
                << format_fixed(a.velocity.y, d) << ',' << format_fixed(a.panic, d) << ',' << to_string(a.status)
                << '\n';
        }
    }
}

void write_panic_csv(std::ostream& out, const RunResult& result, const OutputOptions& options)
{
    out << "step";
    if (!result.frames.empty()) {
        for (const auto& a : result.frames.front().agents) {
            out << ",agent_" << a.id;
        }
    }
    out << '\n';
    for (const auto& frame : result.frames) {
        out << frame.step;
        for (const auto& a : frame.agents) {
            out << ',' << format_fixed(a.panic, options.float_digits);
        }
        out << '\n';
    }
}

void write_metrics_csv(std::ostream& out, const MetricsReport& report, const OutputOptions& options)
{
    const double ppm = options.pixels_per_meter;
    out << metrics_header << '\n';
    for (const auto& m : report.agents) {
        out << m.id << ',' << format_fixed(m.trajectory_length * ppm, options.float_digits) << ','
            << format_fixed(m.max_speed * ppm, options.float_digits) << '\n';
    }
}

void write_histogram_csv(std::ostream& out, const MetricsReport& report)
{
    out << histogram_header << '\n';
    for (const auto& row : report.histogram) {
        out << row.step;
        for (int c : row.counts) {
            out << ',' << c;
        }
        out << '\n';
    }
}

std::string metrics_json(const MetricsReport& report, const OutputOptions& options)
{
    const double ppm = options.pixels_per_meter;
    ordered_json j;
    j["pixels_per_meter"] = ppm;
    j["window_start"] = report.window_start;
    j["agent_count"] = report.agents.size();
    j["mean_trajectory_length"] = report.mean_trajectory_length * ppm;
    j["mean_max_speed"] = report.mean_max_speed * ppm;
    j["mean_trajectory_length_formatted"] = format_fixed(report.mean_trajectory_length * ppm, 4);
    j["mean_max_speed_formatted"] = format_fixed(report.mean_max_speed * ppm, 4);
    if (!report.histogram.empty()) {
        const auto& last = report.histogram.back();
        j["final_panic_bins"] = last.counts;
    }
    return j.dump(2) + "\n";
}

std::string manifest_json(const Scenario& scenario, const RunResult& result, const OutputOptions& options,
                          const std::string& source_path, unsigned threads)
{
    ordered_json j;
    j["source_scenario"] = source_path;
    j["seed"] = scenario.simulation.seed;
    j["threads"] = threads;
    j["float_digits"] = options.float_digits;
    j["pixels_per_meter"] = options.pixels_per_meter;
    j["frames"] = result.frames.size();
    j["final_step"] = result.frames.empty() ? 0 : result.frames.back().step;
    j["termination"] = to_string(result.reason);
    j["outputs"] = run_output_files;
    j["scenario"] = ordered_json::parse(scenario_to_json(scenario));
    return j.dump(2) + "\n";
}

} // namespace hazcrowd
