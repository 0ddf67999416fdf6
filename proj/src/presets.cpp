#include "hazcrowd/presets.hpp"

#include "hazcrowd/rng.hpp"
#include "hazcrowd/vec2.hpp"

#include <json.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hazcrowd {

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr std::uint64_t preset_seed = 42;
constexpr double step_seconds = 0.25;

// Preset onsets are given in engine steps ("frames").
constexpr double at_step(int step) { return step * step_seconds; }

ordered_json vec(Vec2 v) { return ordered_json::array({v.x, v.y}); }

ordered_json settings(std::int64_t max_steps)
{
    return {
        {"dt", step_seconds},
        {"max_steps", max_steps},
        {"seed", preset_seed},
        {"eta", 0.01},
        {"k", 10},
        {"contagion_enabled", true},
        {"avoidance_model", "ervo"},
    };
}

ordered_json agent(int id, Vec2 position, const Vec2* goal, Vec2 velocity)
{
    ordered_json a;
    a["id"] = id;
    a["position"] = vec(position);
    a["velocity"] = vec(velocity);
    a["goal"] = goal ? vec(*goal) : ordered_json(nullptr);
    a["preferred_speed"] = 1.4;
    a["radius"] = 0.4;
    a["perception_radius"] = 4.0;
    a["personality"] = "random";
    return a;
}

ordered_json hazard(int id, const char* kind, Vec2 position, double onset, double diffusion_speed)
{
    ordered_json h;
    h["id"] = id;
    h["kind"] = kind;
    h["position"] = vec(position);
    h["onset"] = onset;
    h["influence_radius"] = 10.0;
    h["diffusion_speed"] = diffusion_speed;
    h["direction_count"] = 64;
    return h;
}

// Wall approximated by touching discs, leaving gaps for doorways.
void wall(ordered_json& obstacles, Vec2 from, Vec2 to, const std::vector<double>& door_centres = {})
{
    constexpr double radius = 0.5;
    constexpr double spacing = 0.9;
    constexpr double door_half_gap = 1.4;
    const double length = distance(from, to);
    const Vec2 dir = normalized(to - from);
    const int count = static_cast<int>(std::floor(length / spacing)) + 1;
    for (int k = 0; k < count; ++k) {
        const double s = k * spacing;
        bool in_door = false;
        for (double c : door_centres) {
            if (std::abs(s - c) < door_half_gap) {
                in_door = true;
            }
        }
        if (in_door) {
            continue;
        }
        const int id = static_cast<int>(obstacles.size());
        obstacles.push_back({{"id", id}, {"position", vec(from + dir * s)}, {"velocity", vec({})}, {"radius", radius}});
    }
}

ordered_json open_field(bool persistent, bool staggered)
{
    ordered_json doc;
    doc["world"] = {{"min", vec({-50.0, -30.0})}, {"max", vec({50.0, 30.0})}};
    doc["simulation"] = settings(240);

    auto rng = Rng::stream(preset_seed, StreamPurpose::preset_layout, 1);
    auto agents = ordered_json::array();
    int id = 0;
    for (int row = 0; row < 5; ++row) {
        const bool eastbound = row % 2 == 0;
        for (int col = 0; col < 8; ++col) {
            const Vec2 p{-17.5 + 5.0 * col + rng.uniform(-0.8, 0.8), -10.0 + 5.0 * row + rng.uniform(-0.8, 0.8)};
            const Vec2 goal{eastbound ? 45.0 : -45.0, p.y};
            const Vec2 velocity{eastbound ? 1.4 : -1.4, 0.0};
            agents.push_back(agent(id++, p, &goal, velocity));
        }
    }
    doc["agents"] = std::move(agents);

    const char* kind = persistent ? "persistent" : "transient";
    const double spread = persistent ? 0.1 : 0.0;
    const double second_onset = staggered ? at_step(40) : at_step(8);
    doc["hazards"] = ordered_json::array({
        hazard(0, kind, {-7.0, -2.0}, at_step(8), spread),
        hazard(1, kind, {8.0, 4.0}, second_onset, spread),
    });
    doc["obstacles"] = ordered_json::array();
    return doc;
}

bool clear_of(const std::vector<Vec2>& placed, Vec2 p, double min_gap)
{
    for (const auto& q : placed) {
        if (distance(p, q) < min_gap) {
            return false;
        }
    }
    return true;
}

// Rooms numbered 1..4 left to right, top to bottom; corridor between the rows.
ordered_json office()
{
    ordered_json doc;
    doc["world"] = {{"min", vec({-2.0, -2.0})}, {"max", vec({42.0, 28.0})}};
    doc["simulation"] = settings(200);

    auto obstacles = ordered_json::array();
    wall(obstacles, {0.0, 0.0}, {40.0, 0.0});
    wall(obstacles, {0.0, 26.0}, {40.0, 26.0});
    wall(obstacles, {0.0, 0.9}, {0.0, 25.2});
    wall(obstacles, {40.0, 0.9}, {40.0, 25.2});
    wall(obstacles, {0.9, 15.0}, {39.1, 15.0}, {9.1, 29.1});
    wall(obstacles, {0.9, 11.0}, {39.1, 11.0}, {9.1, 29.1});
    wall(obstacles, {20.0, 15.9}, {20.0, 25.1});
    wall(obstacles, {20.0, 0.9}, {20.0, 10.1});
    doc["obstacles"] = std::move(obstacles);

    struct Room {
        Vec2 lo, hi;
        int agents;
    };
    const Room rooms[] = {
        {{2.0, 17.0}, {18.0, 24.0}, 13},
        {{22.0, 17.0}, {38.0, 24.0}, 12},
        {{2.0, 2.0}, {18.0, 9.0}, 13},
        {{22.0, 2.0}, {38.0, 9.0}, 12},
    };
    auto rng = Rng::stream(preset_seed, StreamPurpose::preset_layout, 2);
    auto agents = ordered_json::array();
    std::vector<Vec2> placed;
    int id = 0;
    for (const auto& room : rooms) {
        for (int n = 0; n < room.agents; ++n) {
            Vec2 p;
            do {
                p = {rng.uniform(room.lo.x, room.hi.x), rng.uniform(room.lo.y, room.hi.y)};
            } while (!clear_of(placed, p, 1.5));
            placed.push_back(p);
            const double heading = rng.uniform(0.0, 2.0 * std::numbers::pi);
            agents.push_back(agent(id++, p, nullptr, Vec2{std::cos(heading), std::sin(heading)} * 1.4));
        }
    }
    doc["agents"] = std::move(agents);

    doc["hazards"] = ordered_json::array({
        hazard(0, "transient", {10.0, 20.5}, at_step(8), 0.0),
        hazard(1, "transient", {30.0, 5.5}, at_step(8), 0.0),
        hazard(2, "persistent", {30.0, 20.5}, at_step(64), 0.1),
    });
    return doc;
}

ordered_json crossroad()
{
    ordered_json doc;
    doc["world"] = {{"min", vec({-40.0, -40.0})}, {"max", vec({40.0, 40.0})}};
    doc["simulation"] = settings(240);

    // Corner blocks between the two roads.
    auto obstacles = ordered_json::array();
    int oid = 0;
    for (double sx : {-1.0, 1.0}) {
        for (double sy : {-1.0, 1.0}) {
            obstacles.push_back(
                {{"id", oid++}, {"position", vec({14.0 * sx, 14.0 * sy})}, {"velocity", vec({})}, {"radius", 6.0}});
        }
    }
    doc["obstacles"] = std::move(obstacles);

    // Pedestrians start on one of the four arms and cross to the opposite arm.
    auto rng = Rng::stream(preset_seed, StreamPurpose::preset_layout, 3);
    auto agents = ordered_json::array();
    std::vector<Vec2> placed;
    for (int id = 0; id < 50; ++id) {
        const int arm = id % 4;
        const Vec2 axis = rotated({-1.0, 0.0}, arm * std::numbers::pi / 2.0);
        const Vec2 side{-axis.y, axis.x};
        Vec2 p;
        double lateral = 0.0;
        do {
            lateral = rng.uniform(-6.0, 6.0);
            p = axis * rng.uniform(10.0, 34.0) + side * lateral;
        } while (!clear_of(placed, p, 1.5));
        placed.push_back(p);
        const Vec2 goal = axis * -34.0 + side * lateral;
        agents.push_back(agent(id, p, &goal, normalized(goal - p) * 1.4));
    }
    doc["agents"] = std::move(agents);

    doc["hazards"] = ordered_json::array({
        hazard(0, "transient", {-6.0, 2.0}, at_step(16), 0.0),
        hazard(1, "transient", {8.0, -2.0}, at_step(24), 0.0),
    });
    return doc;
}

ordered_json head_on()
{
    ordered_json doc;
    doc["world"] = {{"min", vec({-15.0, -10.0})}, {"max", vec({15.0, 10.0})}};
    doc["simulation"] = settings(200);
    const Vec2 west{-10.0, 0.0};
    const Vec2 east{10.0, 0.0};
    doc["agents"] = ordered_json::array({
        agent(0, west, &east, {1.4, 0.0}),
        agent(1, east, &west, {-1.4, 0.0}),
    });
    doc["hazards"] = ordered_json::array();
    doc["obstacles"] = ordered_json::array();
    return doc;
}

} // namespace

std::vector<std::string> preset_names()
{
    return {"persistent-concurrent", "transient-concurrent", "persistent-staggered", "transient-staggered",
            "office",                "crossroad",            "head-on"};
}

std::string preset_json(std::string_view name)
{
    ordered_json doc;
    if (name == "persistent-concurrent") {
        doc = open_field(true, false);
    } else if (name == "transient-concurrent") {
        doc = open_field(false, false);
    } else if (name == "persistent-staggered") {
        doc = open_field(true, true);
    } else if (name == "transient-staggered") {
        doc = open_field(false, true);
    } else if (name == "office") {
        doc = office();
    } else if (name == "crossroad") {
        doc = crossroad();
    } else if (name == "head-on") {
        doc = head_on();
    } else {
        std::string known;
        for (const auto& n : preset_names()) {
            known += (known.empty() ? "" : ", ") + n;
        }
        throw std::invalid_argument("unknown preset '" + std::string(name) + "' (known: " + known + ")");
    }
    return doc.dump(2) + "\n";
}

} // namespace hazcrowd
