#include "hazcrowd/engine.hpp"
#include "hazcrowd/presets.hpp"

#include <doctest.h>

#include <cmath>

using namespace hazcrowd;

namespace {

Agent walker(int id, Vec2 position, std::optional<Vec2> goal)
{
    Agent a;
    a.id = id;
    a.position = position;
    a.goal = goal;
    if (goal) {
        a.velocity = normalized(*goal - position) * a.preferred_speed;
    }
    a.expressiveness_threshold = 0.3;
    a.susceptibility_threshold = 0.2;
    return a;
}

Scenario empty_world(std::int64_t max_steps = 400)
{
    Scenario sc;
    sc.simulation.seed = 7;
    sc.simulation.max_steps = max_steps;
    return sc;
}

const AgentFrame& agent_in(const SimulationFrame& f, int id)
{
    for (const auto& a : f.agents) {
        if (a.id == id) {
            return a;
        }
    }
    throw std::out_of_range("no agent");
}

} // namespace

TEST_CASE("a lone walker reaches a goal 10 m away in 29 steps")
{
    Scenario sc = empty_world();
    sc.agents.push_back(walker(0, {0.0, 0.0}, Vec2{10.0, 0.0}));
    const auto result = run(sc);
    CHECK(result.reason == TerminationReason::all_reached_goal);
    const std::int64_t expected = static_cast<std::int64_t>(std::ceil(10.0 / (1.4 * 0.25) - 0.1 / (1.4 * 0.25)));
    CHECK(result.frames.back().step == expected);
    CHECK(result.frames.back().step == 29);
    for (std::size_t f = 1; f + 1 < result.frames.size(); ++f) {
        const auto& a = result.frames[f].agents[0];
        CHECK(a.position.x == doctest::Approx(1.4 * 0.25 * static_cast<double>(f)).epsilon(1e-12));
        CHECK(a.position.y == 0.0);
    }
    for (std::size_t f = 0; f < result.frames.size(); ++f) {
        CHECK(result.frames[f].step == static_cast<std::int64_t>(f));
        CHECK(result.frames[f].time == static_cast<double>(f) * 0.25);
    }
}

TEST_CASE("arrived agents stay put")
{
    Scenario sc = empty_world(10);
    sc.agents.push_back(walker(0, {0.0, 0.0}, Vec2{3.0, 0.0}));
    sc.agents.push_back(walker(1, {0.0, 5.0}, Vec2{-50.0, 5.0}));
    const auto result = run(sc);
    const SimulationFrame* arrival = nullptr;
    for (const auto& f : result.frames) {
        const auto& a = agent_in(f, 0);
        if (arrival) {
            CHECK(a.status == AgentStatus::arrived);
            CHECK(a.position == agent_in(*arrival, 0).position);
            CHECK(a.velocity == Vec2{});
        } else if (a.status == AgentStatus::arrived) {
            arrival = &f;
        }
    }
    REQUIRE(arrival != nullptr);
    CHECK(distance(agent_in(*arrival, 0).position, {3.0, 0.0}) <= 0.1);
}

TEST_CASE("termination")
{
    SUBCASE("no agents")
    {
        const auto result = run(empty_world());
        CHECK(result.frames.size() == 1);
        CHECK(result.reason == TerminationReason::all_reached_goal);
    }
    SUBCASE("step cap")
    {
        Scenario sc = empty_world(5);
        sc.agents.push_back(walker(0, {0.0, 0.0}, Vec2{1000.0, 0.0}));
        const auto result = run(sc);
        CHECK(result.frames.size() == 6);
        CHECK(result.reason == TerminationReason::max_steps);
    }
    SUBCASE("everyone dies")
    {
        Scenario sc = empty_world(50);
        sc.agents.push_back(walker(0, {0.5, 0.0}, Vec2{30.0, 0.0}));
        Hazard h;
        h.position = {0.0, 0.0};
        h.diffusion_speed = 5.0;
        h.onset = 0.25;
        sc.hazards.push_back(h);
        const auto result = run(sc);
        CHECK(result.reason == TerminationReason::all_dead);
    }
}

TEST_CASE("an engulfed agent is dead from then on")
{
    Scenario sc = empty_world(40);
    sc.agents.push_back(walker(0, {3.0, 0.0}, Vec2{3.0, 30.0}));
    sc.agents.push_back(walker(1, {-30.0, 0.0}, Vec2{-40.0, 0.0}));
    Hazard h;
    h.position = {0.0, 0.0};
    h.diffusion_speed = 4.0;
    h.onset = 0.5;
    sc.hazards.push_back(h);
    const auto result = run(sc);

    std::optional<std::size_t> death;
    for (std::size_t f = 0; f < result.frames.size(); ++f) {
        const auto& a = result.frames[f].agents[0];
        if (!death && a.status == AgentStatus::dead) {
            death = f;
            CHECK(in_danger_area(h, a.position, result.frames[f].time));
        }
        if (death) {
            const auto& at_death = result.frames[*death].agents[0];
            CHECK(a.status == AgentStatus::dead);
            CHECK(a.position == at_death.position);
            CHECK(a.panic == at_death.panic);
            CHECK(a.velocity == Vec2{});
        }
    }
    REQUIRE(death.has_value());
    CHECK(*death >= 2);
    CHECK(result.frames.back().agents[1].status != AgentStatus::dead);
}

TEST_CASE("transient hazards act in their onset frame only")
{
    Scenario sc = empty_world(12);
    sc.agents.push_back(walker(0, {4.0, 0.0}, Vec2{4.0, 60.0}));
    Hazard h;
    h.kind = HazardKind::transient;
    h.position = {0.0, 0.0};
    h.onset = 1.0;
    h.duration = 0.25;
    sc.hazards.push_back(h);
    const auto result = run(sc);
    for (std::size_t f = 1; f < result.frames.size(); ++f) {
        const double e = result.frames[f].agents[0].panic;
        const double d = norm(result.frames[f - 1].agents[0].position);
        if (result.frames[f].time < 1.0) {
            CHECK(e == 0.0);
        } else if (result.frames[f].time == 1.0) {
            // Sampled at the position the step started from.
            CHECK(e == doctest::Approx(gaussian_falloff(d, 10.0)).epsilon(1e-12));
        }
    }
    const double peak = result.frames[4].agents[0].panic;
    CHECK(result.frames[5].agents[0].panic == doctest::Approx(peak * 0.99).epsilon(1e-12));
}

TEST_CASE("population is conserved and frames are sane")
{
    const Scenario sc = parse_scenario(preset_json("persistent-concurrent"));
    const auto result = run(sc);
    for (const auto& f : result.frames) {
        int active = 0;
        int arrived = 0;
        int dead = 0;
        for (const auto& a : f.agents) {
            active += a.status == AgentStatus::active;
            arrived += a.status == AgentStatus::arrived;
            dead += a.status == AgentStatus::dead;
            CHECK(a.panic >= 0.0);
            CHECK(a.panic <= 1.0);
            CHECK(norm(a.velocity) <= 2.8 + 1e-12);
        }
        CHECK(active + arrived + dead == 40);
    }
    CHECK(result.frames.size() <= static_cast<std::size_t>(sc.simulation.max_steps) + 1);
}

TEST_CASE("thread count does not change the result")
{
    Scenario sc = parse_scenario(preset_json("crossroad"));
    sc.simulation.max_steps = 60;
    const auto one = run(sc, {1, {}});
    const auto four = run(sc, {4, {}});
    REQUIRE(one.frames.size() == four.frames.size());
    for (std::size_t f = 0; f < one.frames.size(); ++f) {
        for (std::size_t i = 0; i < one.frames[f].agents.size(); ++i) {
            const auto& a = one.frames[f].agents[i];
            const auto& b = four.frames[f].agents[i];
            REQUIRE(a.position == b.position);
            REQUIRE(a.velocity == b.velocity);
            REQUIRE(a.panic == b.panic);
        }
    }
}

TEST_CASE("without contagion a distant agent ignores the hazard")
{
    Scenario sc = empty_world(80);
    sc.agents.push_back(walker(0, {-2.0, 0.0}, Vec2{-30.0, 0.0}));
    sc.agents.push_back(walker(1, {0.0, 30.0}, Vec2{30.0, 30.0}));
    Hazard h;
    h.position = {0.0, 0.0};
    h.onset = 0.5;
    h.diffusion_speed = 0.05;
    sc.hazards.push_back(h);
    sc.simulation.contagion_enabled = false;

    Scenario calm = sc;
    calm.hazards.clear();

    const auto with = run(sc);
    const auto without = run(calm);
    const std::size_t n = std::min(with.frames.size(), without.frames.size());
    for (std::size_t f = 0; f < n; ++f) {
        CHECK(with.frames[f].agents[1].position == without.frames[f].agents[1].position);
    }
    CHECK(with.frames[4].agents[0].panic > 0.0);
}

TEST_CASE("RVO and ERVO agree while nobody panics")
{
    Scenario sc = parse_scenario(preset_json("head-on"));
    const auto ervo = run(sc);
    sc.simulation.avoidance_model = AvoidanceModel::rvo;
    const auto rvo = run(sc);
    REQUIRE(ervo.frames.size() == rvo.frames.size());
    double closest = 1e9;
    for (std::size_t f = 0; f < ervo.frames.size(); ++f) {
        for (std::size_t i = 0; i < 2; ++i) {
            CHECK(ervo.frames[f].agents[i].position == rvo.frames[f].agents[i].position);
        }
        closest = std::min(closest, distance(ervo.frames[f].agents[0].position, ervo.frames[f].agents[1].position));
    }
    CHECK(closest > 0.8);
    CHECK(ervo.reason == TerminationReason::all_reached_goal);
}

TEST_CASE("stepping by hand matches run")
{
    Scenario sc = parse_scenario(preset_json("transient-concurrent"));
    sc.simulation.max_steps = 20;
    const auto result = run(sc);
    std::vector<SimulationFrame> history{initial_frame(sc)};
    for (int s = 0; s < 20; ++s) {
        history.push_back(step(sc, history));
    }
    for (std::size_t f = 0; f < history.size(); ++f) {
        for (std::size_t i = 0; i < history[f].agents.size(); ++i) {
            REQUIRE(history[f].agents[i].position == result.frames[f].agents[i].position);
        }
    }
}
