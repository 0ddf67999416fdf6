#pragma once

#include "hazcrowd/hazard_field.hpp"
#include "hazcrowd/scenario.hpp"
#include "hazcrowd/vec2.hpp"

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace hazcrowd {

/// Raised when a recorded frame would break a model invariant.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

enum class AgentStatus { active, arrived, dead };

struct AgentFrame {
    int id = 0;
    Vec2 position;
    Vec2 velocity;
    double panic = 0.0;
    bool expressive = false;
    AgentStatus status = AgentStatus::active;
    /// Direction this agent advertises to panicking neighbours on the next step:
    /// its emotional velocity while panicked, its chosen velocity while calm.
    Vec2 emotional_velocity;

    bool alive() const { return status != AgentStatus::dead; }
};

struct HazardFrame {
    int id = 0;
    bool active = false;
    /// Empty before onset.
    HazardBoundary boundary;
};

struct SimulationFrame {
    std::int64_t step = 0;
    double time = 0.0;
    std::vector<AgentFrame> agents;
    std::vector<HazardFrame> hazards;
};

enum class TerminationReason { all_reached_goal, max_steps, all_dead };

const char* to_string(TerminationReason reason);
const char* to_string(AgentStatus status);

struct RunResult {
    std::vector<SimulationFrame> frames;
    TerminationReason reason = TerminationReason::max_steps;
    std::chrono::nanoseconds wall_clock{0};
};

struct EngineOptions {
    /// Worker threads used inside a step. Results do not depend on it.
    unsigned threads = 1;
    /// Called with each frame right after it is recorded.
    std::function<void(const SimulationFrame&)> on_frame;
};

/// Frame 0: the scenario's initial state.
SimulationFrame initial_frame(const Scenario& scenario);

/// Advance one step. `history` holds the recorded frames oldest first; the
/// last one is the previous frame and the trailing k feed the contagion window.
///
/// Per active agent, from its previous position and the hazards at the new
/// frame's time:
///   1. hazard panic, contagion panic and decay give the new panic,
///   2. stress and emotional velocities,
///   3. preferred velocity: emotional velocity when panicked, else toward the goal,
///   4. reciprocal collision avoidance picks the velocity,
///   5. explicit Euler position update and arrival check,
///   6. death if the new position lies in the core area of an active hazard.
SimulationFrame step(const Scenario& scenario, std::span<const SimulationFrame> history, unsigned threads = 1);

/// Why the run should stop after this frame, if it should.
std::optional<TerminationReason> termination(const Scenario& scenario, const SimulationFrame& frame);

RunResult run(const Scenario& scenario, const EngineOptions& options = {});

} // namespace hazcrowd
