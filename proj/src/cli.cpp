#include "hazcrowd/cli.hpp"

#include "hazcrowd/engine.hpp"
#include "hazcrowd/metrics.hpp"
#include "hazcrowd/output.hpp"
#include "hazcrowd/presets.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <thread>

namespace hazcrowd {

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& contents)
{
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    file << contents;
    file.close();
    if (!file) {
        throw IoError("failed writing " + path.string());
    }
}

template <typename Writer>
std::string render(Writer&& writer)
{
    std::ostringstream buffer;
    writer(buffer);
    return buffer.str();
}

// Maps the library's exceptions onto exit codes, naming the failing file.
int guarded(const fs::path& subject, std::ostream& err, const std::function<int()>& body)
{
    try {
        return body();
    } catch (const ValidationError& e) {
        err << subject.string() << ": invalid scenario\n";
        for (const auto& v : e.violations()) {
            err << "  " << v << '\n';
        }
        return exit_validation;
    } catch (const ParseError& e) {
        err << subject.string() << ": " << e.what() << '\n';
        return exit_validation;
    } catch (const IoError& e) {
        err << e.what() << '\n';
        return exit_io;
    } catch (const fs::filesystem_error& e) {
        err << e.what() << '\n';
        return exit_io;
    } catch (const InvariantError& e) {
        err << "invariant breach: " << e.what() << '\n';
        return exit_internal;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return exit_internal;
    }
}

} // namespace

int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    return guarded(config.scenario_path, err, [&] {
        if (config.float_digits < 0 || config.float_digits > 17) {
            err << "--float-format must be between 0 and 17\n";
            return static_cast<int>(exit_validation);
        }
        if (!(config.pixels_per_meter > 0.0)) {
            err << "--ppm must be positive\n";
            return static_cast<int>(exit_validation);
        }
        const Scenario scenario = load_scenario(config.scenario_path, config.overrides);

        fs::create_directories(config.output_dir);
        if (!config.overwrite) {
            for (auto name : run_output_files) {
                const fs::path target = config.output_dir / name;
                if (fs::exists(target)) {
                    err << target.string() << " already exists (pass --overwrite to replace it)\n";
                    return static_cast<int>(exit_io);
                }
            }
        }

        EngineOptions engine_options;
        engine_options.threads = config.threads;
        const RunResult result = run(scenario, engine_options);
        const MetricsReport report = compute_metrics(scenario, result.frames);

        OutputOptions options;
        options.float_digits = config.float_digits;
        options.pixels_per_meter = config.pixels_per_meter;

        const fs::path& dir = config.output_dir;
        write_file(dir / "trajectories.csv",
                   render([&](std::ostream& s) { write_trajectories_csv(s, result, options); }));
        write_file(dir / "panic.csv", render([&](std::ostream& s) { write_panic_csv(s, result, options); }));
        write_file(dir / "metrics.csv", render([&](std::ostream& s) { write_metrics_csv(s, report, options); }));
        write_file(dir / "panic_histogram.csv", render([&](std::ostream& s) { write_histogram_csv(s, report); }));
        write_file(dir / "metrics.json", metrics_json(report, options));
        write_file(dir / "manifest.json",
                   manifest_json(scenario, result, options, config.scenario_path.string(), config.threads));

        out << "steps " << result.frames.back().step << ", " << to_string(result.reason) << ", seed "
            << scenario.simulation.seed << ", outputs in " << dir.string() << '\n';
        return static_cast<int>(exit_ok);
    });
}

int cmd_validate(const fs::path& scenario_path, std::ostream& out, std::ostream& err)
{
    return guarded(scenario_path, err, [&] {
        load_scenario(scenario_path);
        out << scenario_path.string() << ": ok\n";
        return static_cast<int>(exit_ok);
    });
}

int cmd_presets(const std::string& name, const fs::path& output, bool overwrite, std::ostream& out,
                std::ostream& err)
{
    return guarded(output, err, [&] {
        std::string text;
        try {
            text = preset_json(name);
        } catch (const std::invalid_argument& e) {
            err << e.what() << '\n';
            return static_cast<int>(exit_validation);
        }
        if (!overwrite && fs::exists(output)) {
            err << output.string() << " already exists (pass --overwrite to replace it)\n";
            return static_cast<int>(exit_io);
        }
        if (output.has_parent_path()) {
            fs::create_directories(output.parent_path());
        }
        write_file(output, text);
        out << "wrote preset " << name << " to " << output.string() << '\n';
        return static_cast<int>(exit_ok);
    });
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Deterministic 2-D crowd simulation under multiple hazards"};
    app.require_subcommand(1);

    RunConfig config;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> max_steps;
    std::string contagion;
    std::string model;
    bool deterministic_dose = false;

    auto* run_cmd = app.add_subcommand("run", "Simulate a scenario and write the outputs");
    run_cmd->add_option("--scenario", config.scenario_path, "Scenario JSON file")->required();
    run_cmd->add_option("--out", config.output_dir, "Output directory")->required();
    run_cmd->add_option("--seed", seed, "Override the scenario seed");
    run_cmd->add_option("--contagion", contagion, "Panic contagion on or off")
        ->check(CLI::IsMember({"on", "off"}));
    run_cmd->add_option("--model", model, "Avoidance model")->check(CLI::IsMember({"rvo", "ervo"}));
    run_cmd->add_flag("--deterministic-dose", deterministic_dose, "Fix every contagion dose at its mean");
    run_cmd->add_option("--max-steps", max_steps, "Override the step limit")->check(CLI::NonNegativeNumber);
    run_cmd->add_option("--ppm", config.pixels_per_meter, "Pixels per meter for the metrics outputs");
    run_cmd->add_option("--float-format", config.float_digits, "Digits after the decimal point in CSVs");
    run_cmd->add_option("--threads", config.threads, "Worker threads (0 = hardware concurrency)");
    run_cmd->add_flag("--overwrite", config.overwrite, "Replace existing output files");

    std::string validate_path;
    auto* validate_cmd = app.add_subcommand("validate", "Check a scenario file and list its violations");
    validate_cmd->add_option("scenario", validate_path, "Scenario JSON file")->required();

    std::string preset_name;
    std::string preset_out;
    bool preset_overwrite = false;
    auto* presets_cmd = app.add_subcommand("presets", "Write a built-in scenario");
    presets_cmd->add_option("name", preset_name, "Preset name")->required();
    presets_cmd->add_option("--out", preset_out, "Destination file")->required();
    presets_cmd->add_flag("--overwrite", preset_overwrite, "Replace an existing file");
    presets_cmd->footer([] {
        std::string names = "Presets:";
        for (const auto& n : preset_names()) {
            names += " " + n;
        }
        return names;
    }());

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? static_cast<int>(exit_ok) : static_cast<int>(exit_validation);
    }

    if (run_cmd->parsed()) {
        config.overrides.seed = seed;
        config.overrides.max_steps = max_steps;
        if (!contagion.empty()) {
            config.overrides.contagion_enabled = contagion == "on";
        }
        if (!model.empty()) {
            config.overrides.avoidance_model = model == "rvo" ? AvoidanceModel::rvo : AvoidanceModel::ervo;
        }
        if (deterministic_dose) {
            config.overrides.deterministic_dose = true;
        }
        if (config.threads == 0) {
            config.threads = std::max(1u, std::thread::hardware_concurrency());
        }
        return cmd_run(config, out, err);
    }
    if (validate_cmd->parsed()) {
        return cmd_validate(validate_path, out, err);
    }
    return cmd_presets(preset_name, preset_out, preset_overwrite, out, err);
}

} // namespace hazcrowd
