#pragma once

#include "hazcrowd/rng.hpp"
#include "hazcrowd/vec2.hpp"

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hazcrowd {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

/// Malformed scenario document (bad JSON, wrong types, unknown enum values).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A well-formed scenario that violates one or more model invariants.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<std::string> violations);
    const std::vector<std::string>& violations() const { return violations_; }

private:
    std::vector<std::string> violations_;
};

/// Filesystem failure while reading or writing scenario/output files.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// OCEAN personality; every component lies in [-1, 1].
struct OceanPersonality {
    double openness = 0.0;
    double conscientiousness = 0.0;
    double extraversion = 0.0;
    double agreeableness = 0.0;
    double neuroticism = 0.0;

    bool operator==(const OceanPersonality&) const = default;
};

/// Contagion parameters derived from a personality.
struct AgentParameters {
    double empathy = 0.0;
    double expressiveness_threshold = 0.5;
    double susceptibility_threshold = 0.5;
};

/// Weighted OCEAN sum; bounded by the weight total 0.999 in magnitude.
double empathy_from_personality(const OceanPersonality& personality);

/// Empathy plus the two contagion thresholds, each threshold drawn from
/// N(m, (m/10)^2) and clamped to [0, 1]. The expressiveness mean is
/// 0.5 - 0.5*extraversion; the susceptibility mean is 0.5 - 0.5*empathy.
AgentParameters derive_agent_parameters(const OceanPersonality& personality, Rng& rng);

/// Personality with each component uniform on [-1, 1].
OceanPersonality random_personality(Rng& rng);

struct Agent {
    int id = 0;
    Vec2 position;
    Vec2 velocity;
    std::optional<Vec2> goal;
    double preferred_speed = 1.4;
    double radius = 0.4;
    double panic = 0.0;
    OceanPersonality personality;
    double empathy = 0.0;
    double expressiveness_threshold = 0.5;
    double susceptibility_threshold = 0.5;
    double perception_radius = 4.0;

    bool operator==(const Agent&) const = default;
};

enum class HazardKind { transient, persistent };

struct Hazard {
    int id = 0;
    HazardKind kind = HazardKind::persistent;
    Vec2 position;
    double onset = 0.0;
    /// Active lifetime in seconds; infinite for hazards that never end.
    double duration = infinity;
    double influence_radius = 10.0;
    double diffusion_speed = 0.0;
    int direction_count = 64;

    bool operator==(const Hazard&) const = default;
};

struct Obstacle {
    int id = 0;
    Vec2 position;
    Vec2 velocity;
    double radius = 0.5;

    Vec2 position_at(double t) const { return position + velocity * t; }
    bool operator==(const Obstacle&) const = default;
};

struct Bounds {
    Vec2 min{-infinity, -infinity};
    Vec2 max{infinity, infinity};

    bool contains(Vec2 p) const { return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y; }
    bool operator==(const Bounds&) const = default;
};

enum class AvoidanceModel { rvo, ervo };

struct SimulationSettings {
    double dt = 0.25;
    std::int64_t max_steps = 1000;
    std::uint64_t seed = 0;
    double eta = 0.01;
    int window = 10;
    bool contagion_enabled = true;
    /// Ablation: every agent hears every other agent, with no thresholds or range.
    bool global_broadcast = false;
    /// Pins every dose to its mean instead of sampling.
    bool deterministic_dose = false;
    AvoidanceModel avoidance_model = AvoidanceModel::ervo;
    int candidate_count = 250;
    double penalty_weight = 1.0;
    double max_speed_factor = 2.0;
    double goal_tolerance = 0.1;
    double neighbor_radius = 10.0;

    bool operator==(const SimulationSettings&) const = default;
};

struct Scenario {
    Bounds world;
    std::vector<Agent> agents;
    std::vector<Hazard> hazards;
    std::vector<Obstacle> obstacles;
    SimulationSettings simulation;

    bool operator==(const Scenario&) const = default;
};

/// Command-line style overrides applied before random parameters are resolved.
struct ScenarioOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> max_steps;
    std::optional<bool> contagion_enabled;
    std::optional<AvoidanceModel> avoidance_model;
    std::optional<bool> deterministic_dose;
};

/// Every invariant violation in the scenario, one human-readable line each.
/// Empty means valid.
std::vector<std::string> validate(const Scenario& scenario);

/// Parse a scenario (or a run manifest embedding one) from JSON text.
/// Throws ParseError or ValidationError.
Scenario parse_scenario(const std::string& text, const ScenarioOverrides& overrides = {});

/// Read and parse a scenario file. Throws IoError, ParseError or ValidationError.
Scenario load_scenario(const std::filesystem::path& path, const ScenarioOverrides& overrides = {});

/// Fully resolved JSON text for a scenario; parse_scenario of the result
/// reproduces the same Scenario.
std::string scenario_to_json(const Scenario& scenario);

void write_scenario(const Scenario& scenario, const std::filesystem::path& path);

const char* to_string(HazardKind kind);
const char* to_string(AvoidanceModel model);

} // namespace hazcrowd
