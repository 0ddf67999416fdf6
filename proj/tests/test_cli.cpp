#include "hazcrowd/cli.hpp"
#include "hazcrowd/output.hpp"
#include "hazcrowd/presets.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace hazcrowd;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::path(HAZCROWD_TEST_TMP) / "cli" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string first_line(const fs::path& p)
{
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    return line;
}

int invoke(std::vector<std::string> args, std::string* err_text = nullptr)
{
    args.insert(args.begin(), "hazcrowd");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
    if (err_text) {
        *err_text = err.str();
    }
    return code;
}

fs::path write_preset(const fs::path& dir, const std::string& name)
{
    const fs::path file = dir / (name + ".json");
    REQUIRE(invoke({"presets", name, "--out", file.string()}) == 0);
    return file;
}

} // namespace

TEST_CASE("run writes every output and records the seed")
{
    const fs::path dir = scratch("run");
    const fs::path scenario = write_preset(dir, "persistent-concurrent");
    const fs::path out = dir / "out";
    REQUIRE(invoke({"run", "--scenario", scenario.string(), "--out", out.string(), "--max-steps", "30"}) == 0);
    for (auto name : run_output_files) {
        CHECK(fs::exists(out / name));
    }
    const auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
    CHECK(manifest.at("seed") == 42);
    CHECK(manifest.at("frames") == 31);

    CHECK(first_line(out / "trajectories.csv") == trajectories_header);
    CHECK(first_line(out / "metrics.csv") == metrics_header);
    CHECK(first_line(out / "panic_histogram.csv") == histogram_header);

    SUBCASE("existing outputs are not overwritten")
    {
        const std::string before = slurp(out / "trajectories.csv");
        CHECK(invoke({"run", "--scenario", scenario.string(), "--out", out.string(), "--seed", "3"}) == exit_io);
        CHECK(slurp(out / "trajectories.csv") == before);
        CHECK(invoke({"run", "--scenario", scenario.string(), "--out", out.string(), "--seed", "3", "--max-steps",
                      "30", "--overwrite"}) == 0);
        CHECK(slurp(out / "trajectories.csv") != before);
    }
    SUBCASE("the manifest reproduces the run")
    {
        const fs::path again = dir / "again";
        REQUIRE(invoke({"run", "--scenario", (out / "manifest.json").string(), "--out", again.string()}) == 0);
        CHECK(slurp(again / "trajectories.csv") == slurp(out / "trajectories.csv"));
        CHECK(slurp(again / "panic.csv") == slurp(out / "panic.csv"));
    }
}

TEST_CASE("thread count does not change the output")
{
    const fs::path dir = scratch("threads");
    const fs::path scenario = write_preset(dir, "crossroad");
    REQUIRE(invoke({"run", "--scenario", scenario.string(), "--out", (dir / "a").string(), "--max-steps", "40"}) ==
            0);
    REQUIRE(invoke({"run", "--scenario", scenario.string(), "--out", (dir / "b").string(), "--max-steps", "40",
                    "--threads", "3"}) == 0);
    CHECK(slurp(dir / "a" / "trajectories.csv") == slurp(dir / "b" / "trajectories.csv"));
}

TEST_CASE("rvo and ervo agree without panic")
{
    const fs::path dir = scratch("model");
    const fs::path scenario = write_preset(dir, "head-on");
    REQUIRE(invoke({"run", "--scenario", scenario.string(), "--out", (dir / "e").string(), "--model", "ervo"}) == 0);
    REQUIRE(invoke({"run", "--scenario", scenario.string(), "--out", (dir / "r").string(), "--model", "rvo"}) == 0);
    CHECK(slurp(dir / "e" / "trajectories.csv") == slurp(dir / "r" / "trajectories.csv"));
}

TEST_CASE("validate")
{
    const fs::path dir = scratch("validate");
    const fs::path good = write_preset(dir, "office");
    CHECK(invoke({"validate", good.string()}) == 0);

    auto doc = nlohmann::json::parse(slurp(good));
    doc["simulation"]["eta"] = 0.0;
    const fs::path bad = dir / "bad.json";
    std::ofstream(bad) << doc.dump();
    std::string err;
    CHECK(invoke({"validate", bad.string()}, &err) == exit_validation);
    CHECK(err.find("eta in (0, 1]") != std::string::npos);

    CHECK(invoke({"validate", (dir / "missing.json").string()}) == exit_io);

    const fs::path broken = dir / "broken.json";
    std::ofstream(broken) << "{ not json";
    CHECK(invoke({"validate", broken.string()}) == exit_validation);
}

TEST_CASE("presets")
{
    const fs::path dir = scratch("presets");
    for (const auto& name : preset_names()) {
        CHECK(invoke({"validate", write_preset(dir, name).string()}) == 0);
    }
    const auto open = nlohmann::json::parse(slurp(dir / "persistent-concurrent.json"));
    CHECK(open.at("agents").size() == 40);
    CHECK(open.at("hazards").size() == 2);
    CHECK(open.at("hazards")[0].at("onset") == open.at("hazards")[1].at("onset"));
    const auto office = nlohmann::json::parse(slurp(dir / "office.json"));
    CHECK(office.at("agents").size() == 50);
    for (const auto& a : office.at("agents")) {
        CHECK(a.at("goal").is_null());
    }

    std::string err;
    CHECK(invoke({"presets", "nowhere", "--out", (dir / "x.json").string()}, &err) == exit_validation);
    CHECK(err.find("office") != std::string::npos);
    CHECK(invoke({"presets", "office", "--out", (dir / "office.json").string()}) == exit_io);
}

TEST_CASE("bad arguments")
{
    CHECK(invoke({}) == exit_validation);
    CHECK(invoke({"run", "--scenario", "x.json"}) == exit_validation);
    CHECK(invoke({"run", "--scenario", "x.json", "--out", "y", "--model", "orca"}) == exit_validation);
    CHECK(invoke({"--help"}) == exit_ok);
}
