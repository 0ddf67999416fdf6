#include "hazcrowd/scenario.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace hazcrowd {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string join_lines(const std::vector<std::string>& lines)
{
    std::string out = "scenario validation failed:";
    for (const auto& line : lines) {
        out += "\n  ";
        out += line;
    }
    return out;
}

std::string fmt_number(double v)
{
    std::ostringstream ss;
    ss << v;
    return ss.str();
}

bool in_closed(double v, double lo, double hi) { return v >= lo && v <= hi; }

// ---- parsing helpers -------------------------------------------------------

Vec2 read_vec2(const json& j, const std::string& what)
{
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return {j[0].get<double>(), j[1].get<double>()};
    }
    if (j.is_object() && j.contains("x") && j.contains("y")) {
        return {j.at("x").get<double>(), j.at("y").get<double>()};
    }
    throw ParseError(what + ": expected [x, y]");
}

template <typename T>
T value_or(const json& obj, const char* key, T fallback)
{
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
        return fallback;
    }
    return it->template get<T>();
}

std::optional<double> optional_number(const json& obj, const char* key)
{
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
        return std::nullopt;
    }
    return it->get<double>();
}

HazardKind parse_hazard_kind(const std::string& s)
{
    if (s == "transient") {
        return HazardKind::transient;
    }
    if (s == "persistent") {
        return HazardKind::persistent;
    }
    throw ParseError("unknown hazard kind '" + s + "' (expected transient or persistent)");
}

AvoidanceModel parse_model(const std::string& s)
{
    if (s == "rvo") {
        return AvoidanceModel::rvo;
    }
    if (s == "ervo") {
        return AvoidanceModel::ervo;
    }
    throw ParseError("unknown avoidance_model '" + s + "' (expected rvo or ervo)");
}

SimulationSettings parse_settings(const json& j)
{
    SimulationSettings s;
    if (j.is_null()) {
        return s;
    }
    if (!j.is_object()) {
        throw ParseError("simulation: expected an object");
    }
    s.dt = value_or(j, "dt", s.dt);
    s.max_steps = value_or<std::int64_t>(j, "max_steps", s.max_steps);
    s.seed = value_or<std::uint64_t>(j, "seed", s.seed);
    s.eta = value_or(j, "eta", s.eta);
    s.window = value_or(j, "k", s.window);
    s.contagion_enabled = value_or(j, "contagion_enabled", s.contagion_enabled);
    s.global_broadcast = value_or(j, "global_broadcast", s.global_broadcast);
    s.deterministic_dose = value_or(j, "deterministic_dose", s.deterministic_dose);
    if (auto it = j.find("avoidance_model"); it != j.end() && !it->is_null()) {
        s.avoidance_model = parse_model(it->get<std::string>());
    }
    s.candidate_count = value_or(j, "candidate_count", s.candidate_count);
    s.penalty_weight = value_or(j, "penalty_weight", s.penalty_weight);
    s.max_speed_factor = value_or(j, "max_speed_factor", s.max_speed_factor);
    s.goal_tolerance = value_or(j, "goal_tolerance", s.goal_tolerance);
    s.neighbor_radius = value_or(j, "neighbor_radius", s.neighbor_radius);
    return s;
}

OceanPersonality parse_personality(const json& j, Rng& rng, const std::string& what)
{
    if (j.is_null() || (j.is_string() && j.get<std::string>() == "random")) {
        return random_personality(rng);
    }
    if (j.is_array() && j.size() == 5) {
        return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>(),
                j[4].get<double>()};
    }
    if (j.is_object()) {
        return {value_or(j, "openness", 0.0), value_or(j, "conscientiousness", 0.0),
                value_or(j, "extraversion", 0.0), value_or(j, "agreeableness", 0.0),
                value_or(j, "neuroticism", 0.0)};
    }
    throw ParseError(what + ": personality must be \"random\", an object, or a 5-element array");
}

Agent parse_agent(const json& j, const SimulationSettings& settings, std::size_t index)
{
    if (!j.is_object()) {
        throw ParseError("agents[" + std::to_string(index) + "]: expected an object");
    }
    Agent a;
    a.id = value_or(j, "id", static_cast<int>(index));
    const std::string what = "agent " + std::to_string(a.id);
    if (!j.contains("position")) {
        throw ParseError(what + ": missing position");
    }
    a.position = read_vec2(j.at("position"), what + " position");
    if (auto it = j.find("goal"); it != j.end() && !it->is_null()) {
        a.goal = read_vec2(*it, what + " goal");
    }
    a.preferred_speed = value_or(j, "preferred_speed", a.preferred_speed);
    a.radius = value_or(j, "radius", a.radius);
    a.panic = value_or(j, "panic", a.panic);
    a.perception_radius = value_or(j, "perception_radius", a.perception_radius);

    if (auto it = j.find("velocity"); it != j.end() && !it->is_null()) {
        a.velocity = read_vec2(*it, what + " velocity");
    } else if (a.goal) {
        const Vec2 to_goal = *a.goal - a.position;
        if (norm(to_goal) > settings.goal_tolerance) {
            a.velocity = normalized(to_goal) * a.preferred_speed;
        }
    }

    auto personality_rng = Rng::stream(settings.seed, StreamPurpose::personality, a.id);
    a.personality = parse_personality(j.contains("personality") ? j.at("personality") : json(),
                                      personality_rng, what);

    auto threshold_rng = Rng::stream(settings.seed, StreamPurpose::thresholds, a.id);
    const AgentParameters derived = derive_agent_parameters(a.personality, threshold_rng);
    a.empathy = derived.empathy;
    a.expressiveness_threshold = optional_number(j, "expressiveness_threshold")
                                     .value_or(derived.expressiveness_threshold);
    a.susceptibility_threshold = optional_number(j, "susceptibility_threshold")
                                     .value_or(derived.susceptibility_threshold);
    return a;
}

Hazard parse_hazard(const json& j, const SimulationSettings& settings, std::size_t index)
{
    if (!j.is_object()) {
        throw ParseError("hazards[" + std::to_string(index) + "]: expected an object");
    }
    Hazard h;
    h.id = value_or(j, "id", static_cast<int>(index));
    const std::string what = "hazard " + std::to_string(h.id);
    if (!j.contains("position")) {
        throw ParseError(what + ": missing position");
    }
    h.position = read_vec2(j.at("position"), what + " position");
    if (auto it = j.find("kind"); it != j.end() && !it->is_null()) {
        h.kind = parse_hazard_kind(it->get<std::string>());
    }
    h.onset = value_or(j, "onset", h.onset);
    const auto duration = optional_number(j, "duration");
    h.duration = duration.value_or(h.kind == HazardKind::transient ? settings.dt : infinity);
    h.influence_radius = value_or(j, "influence_radius", h.influence_radius);
    h.diffusion_speed = value_or(j, "diffusion_speed", h.diffusion_speed);
    h.direction_count = value_or(j, "direction_count", h.direction_count);
    return h;
}

Obstacle parse_obstacle(const json& j, std::size_t index)
{
    if (!j.is_object()) {
        throw ParseError("obstacles[" + std::to_string(index) + "]: expected an object");
    }
    Obstacle o;
    o.id = value_or(j, "id", static_cast<int>(index));
    const std::string what = "obstacle " + std::to_string(o.id);
    if (!j.contains("position")) {
        throw ParseError(what + ": missing position");
    }
    o.position = read_vec2(j.at("position"), what + " position");
    if (auto it = j.find("velocity"); it != j.end() && !it->is_null()) {
        o.velocity = read_vec2(*it, what + " velocity");
    }
    o.radius = value_or(j, "radius", o.radius);
    return o;
}

const json& array_or_empty(const json& doc, const char* key)
{
    static const json empty = json::array();
    auto it = doc.find(key);
    if (it == doc.end() || it->is_null()) {
        return empty;
    }
    if (!it->is_array()) {
        throw ParseError(std::string(key) + ": expected an array");
    }
    return *it;
}

Scenario build_scenario(const json& doc, const ScenarioOverrides& overrides)
{
    if (!doc.is_object()) {
        throw ParseError("scenario: top level must be a JSON object");
    }
    Scenario sc;
    if (auto it = doc.find("world"); it != doc.end() && !it->is_null()) {
        if (!it->is_object() || !it->contains("min") || !it->contains("max")) {
            throw ParseError("world: expected {\"min\": [x, y], \"max\": [x, y]}");
        }
        sc.world.min = read_vec2(it->at("min"), "world.min");
        sc.world.max = read_vec2(it->at("max"), "world.max");
    }
    sc.simulation = parse_settings(doc.contains("simulation") ? doc.at("simulation") : json());
    if (overrides.seed) {
        sc.simulation.seed = *overrides.seed;
    }
    if (overrides.max_steps) {
        sc.simulation.max_steps = *overrides.max_steps;
    }
    if (overrides.contagion_enabled) {
        sc.simulation.contagion_enabled = *overrides.contagion_enabled;
    }
    if (overrides.avoidance_model) {
        sc.simulation.avoidance_model = *overrides.avoidance_model;
    }
    if (overrides.deterministic_dose) {
        sc.simulation.deterministic_dose = *overrides.deterministic_dose;
    }

    const auto& agents = array_or_empty(doc, "agents");
    for (std::size_t i = 0; i < agents.size(); ++i) {
        sc.agents.push_back(parse_agent(agents[i], sc.simulation, i));
    }
    const auto& hazards = array_or_empty(doc, "hazards");
    for (std::size_t i = 0; i < hazards.size(); ++i) {
        sc.hazards.push_back(parse_hazard(hazards[i], sc.simulation, i));
    }
    const auto& obstacles = array_or_empty(doc, "obstacles");
    for (std::size_t i = 0; i < obstacles.size(); ++i) {
        sc.obstacles.push_back(parse_obstacle(obstacles[i], i));
    }
    return sc;
}

// ---- writing helpers -------------------------------------------------------

ordered_json vec_json(Vec2 v) { return ordered_json::array({v.x, v.y}); }

ordered_json number_or_null(double v)
{
    return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr);
}

} // namespace

ValidationError::ValidationError(std::vector<std::string> violations)
    : std::runtime_error(join_lines(violations)), violations_(std::move(violations))
{
}

double empathy_from_personality(const OceanPersonality& p)
{
    return 0.354 * p.openness + 0.177 * p.conscientiousness + 0.135 * p.extraversion + 0.312 * p.agreeableness +
           0.021 * p.neuroticism;
}

AgentParameters derive_agent_parameters(const OceanPersonality& personality, Rng& rng)
{
    AgentParameters out;
    out.empathy = empathy_from_personality(personality);
    const double express_mean = 0.5 - 0.5 * personality.extraversion;
    out.expressiveness_threshold = std::clamp(rng.normal(express_mean, express_mean / 10.0), 0.0, 1.0);
    const double suscept_mean = 0.5 - 0.5 * out.empathy;
    out.susceptibility_threshold = std::clamp(rng.normal(suscept_mean, suscept_mean / 10.0), 0.0, 1.0);
    return out;
}

OceanPersonality random_personality(Rng& rng)
{
    OceanPersonality p;
    p.openness = rng.uniform(-1.0, 1.0);
    p.conscientiousness = rng.uniform(-1.0, 1.0);
    p.extraversion = rng.uniform(-1.0, 1.0);
    p.agreeableness = rng.uniform(-1.0, 1.0);
    p.neuroticism = rng.uniform(-1.0, 1.0);
    return p;
}

std::vector<std::string> validate(const Scenario& sc)
{
    std::vector<std::string> out;
    const auto& s = sc.simulation;

    if (!(s.eta > 0.0 && s.eta <= 1.0)) {
        out.push_back("simulation: eta " + fmt_number(s.eta) + " violates eta in (0, 1]");
    }
    if (!(s.dt > 0.0) || !std::isfinite(s.dt)) {
        out.push_back("simulation: dt " + fmt_number(s.dt) + " violates dt > 0");
    }
    if (s.window < 1) {
        out.push_back("simulation: k " + std::to_string(s.window) + " violates k >= 1");
    }
    if (s.max_steps < 0) {
        out.push_back("simulation: max_steps " + std::to_string(s.max_steps) + " violates max_steps >= 0");
    }
    if (s.candidate_count < 2) {
        out.push_back("simulation: candidate_count " + std::to_string(s.candidate_count) +
                      " violates candidate_count >= 2");
    }
    if (!(s.penalty_weight >= 0.0)) {
        out.push_back("simulation: penalty_weight " + fmt_number(s.penalty_weight) + " violates w >= 0");
    }
    if (!(s.max_speed_factor >= 1.0)) {
        out.push_back("simulation: max_speed_factor " + fmt_number(s.max_speed_factor) +
                      " violates max_speed_factor >= 1");
    }
    if (!(s.goal_tolerance > 0.0)) {
        out.push_back("simulation: goal_tolerance " + fmt_number(s.goal_tolerance) + " violates goal_tolerance > 0");
    }
    if (!(s.neighbor_radius > 0.0)) {
        out.push_back("simulation: neighbor_radius " + fmt_number(s.neighbor_radius) +
                      " violates neighbor_radius > 0");
    }
    if (!(sc.world.min.x <= sc.world.max.x && sc.world.min.y <= sc.world.max.y)) {
        out.push_back("world: min corner must not exceed max corner");
    }

    std::set<int> agent_ids;
    for (const auto& a : sc.agents) {
        const std::string who = "agent " + std::to_string(a.id) + ": ";
        if (!agent_ids.insert(a.id).second) {
            out.push_back(who + "duplicate agent id");
        }
        if (!is_finite(a.position) || !is_finite(a.velocity) || (a.goal && !is_finite(*a.goal))) {
            out.push_back(who + "position, velocity and goal must be finite");
        } else if (!sc.world.contains(a.position)) {
            out.push_back(who + "initial position lies outside the world bounds");
        }
        if (!in_closed(a.panic, 0.0, 1.0)) {
            out.push_back(who + "panic " + fmt_number(a.panic) + " violates E in [0, 1]");
        }
        if (!(a.preferred_speed > 0.0)) {
            out.push_back(who + "preferred_speed must be > 0");
        }
        if (!(a.radius > 0.0)) {
            out.push_back(who + "radius must be > 0");
        }
        if (!(a.perception_radius > 0.0)) {
            out.push_back(who + "perception_radius must be > 0");
        }
        const auto& p = a.personality;
        for (double c : {p.openness, p.conscientiousness, p.extraversion, p.agreeableness, p.neuroticism}) {
            if (!in_closed(c, -1.0, 1.0)) {
                out.push_back(who + "personality component " + fmt_number(c) + " violates [-1, 1]");
                break;
            }
        }
        if (!in_closed(a.empathy, -1.0, 1.0)) {
            out.push_back(who + "empathy " + fmt_number(a.empathy) + " violates [-1, 1]");
        }
        if (!in_closed(a.expressiveness_threshold, 0.0, 1.0)) {
            out.push_back(who + "expressiveness_threshold violates [0, 1]");
        }
        if (!in_closed(a.susceptibility_threshold, 0.0, 1.0)) {
            out.push_back(who + "susceptibility_threshold violates [0, 1]");
        }
    }
    for (std::size_t i = 0; i < sc.agents.size(); ++i) {
        for (std::size_t j = i + 1; j < sc.agents.size(); ++j) {
            const auto& a = sc.agents[i];
            const auto& b = sc.agents[j];
            if (!(distance(a.position, b.position) > a.radius + b.radius)) {
                out.push_back("agents " + std::to_string(a.id) + " and " + std::to_string(b.id) +
                              ": initial positions overlap (center distance must exceed sum of radii)");
            }
        }
    }

    std::set<int> hazard_ids;
    for (const auto& h : sc.hazards) {
        const std::string who = "hazard " + std::to_string(h.id) + ": ";
        if (!hazard_ids.insert(h.id).second) {
            out.push_back(who + "duplicate hazard id");
        }
        if (!is_finite(h.position)) {
            out.push_back(who + "position must be finite");
        }
        if (!(h.influence_radius > 0.0) || !std::isfinite(h.influence_radius)) {
            out.push_back(who + "influence_radius must be > 0");
        }
        if (!(h.diffusion_speed >= 0.0) || !std::isfinite(h.diffusion_speed)) {
            out.push_back(who + "diffusion_speed must be >= 0");
        }
        if (h.direction_count < 3) {
            out.push_back(who + "direction_count must be >= 3");
        }
        if (!(h.onset >= 0.0) || !std::isfinite(h.onset)) {
            out.push_back(who + "onset must be a finite time >= 0");
        }
        if (h.kind == HazardKind::transient && h.duration != s.dt) {
            out.push_back(who + "transient hazard duration must equal one timestep (dt)");
        }
        if (!(h.duration > 0.0)) {
            out.push_back(who + "duration must be > 0");
        }
    }

    std::set<int> obstacle_ids;
    for (const auto& o : sc.obstacles) {
        const std::string who = "obstacle " + std::to_string(o.id) + ": ";
        if (!obstacle_ids.insert(o.id).second) {
            out.push_back(who + "duplicate obstacle id");
        }
        if (!(o.radius > 0.0)) {
            out.push_back(who + "radius must be > 0");
        }
        if (!is_finite(o.position) || !is_finite(o.velocity)) {
            out.push_back(who + "position and velocity must be finite");
        }
    }
    return out;
}

Scenario parse_scenario(const std::string& text, const ScenarioOverrides& overrides)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    // A run manifest embeds the resolved scenario under "scenario".
    if (doc.is_object() && doc.contains("scenario") && doc.at("scenario").is_object()) {
        doc = doc.at("scenario");
    }
    Scenario sc;
    try {
        sc = build_scenario(doc, overrides);
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed scenario: ") + e.what());
    }
    if (auto violations = validate(sc); !violations.empty()) {
        throw ValidationError(std::move(violations));
    }
    return sc;
}

Scenario load_scenario(const std::filesystem::path& path, const ScenarioOverrides& overrides)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open scenario file '" + path.string() + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str(), overrides);
}

std::string scenario_to_json(const Scenario& sc)
{
    ordered_json doc;
    if (std::isfinite(sc.world.min.x) && std::isfinite(sc.world.min.y) && std::isfinite(sc.world.max.x) &&
        std::isfinite(sc.world.max.y)) {
        doc["world"] = {{"min", vec_json(sc.world.min)}, {"max", vec_json(sc.world.max)}};
    } else {
        doc["world"] = nullptr;
    }

    const auto& s = sc.simulation;
    doc["simulation"] = {
        {"dt", s.dt},
        {"max_steps", s.max_steps},
        {"seed", s.seed},
        {"eta", s.eta},
        {"k", s.window},
        {"contagion_enabled", s.contagion_enabled},
        {"global_broadcast", s.global_broadcast},
        {"deterministic_dose", s.deterministic_dose},
        {"avoidance_model", to_string(s.avoidance_model)},
        {"candidate_count", s.candidate_count},
        {"penalty_weight", s.penalty_weight},
        {"max_speed_factor", s.max_speed_factor},
        {"goal_tolerance", s.goal_tolerance},
        {"neighbor_radius", s.neighbor_radius},
    };

    auto agents = ordered_json::array();
    for (const auto& a : sc.agents) {
        ordered_json j;
        j["id"] = a.id;
        j["position"] = vec_json(a.position);
        j["velocity"] = vec_json(a.velocity);
        j["goal"] = a.goal ? vec_json(*a.goal) : ordered_json(nullptr);
        j["preferred_speed"] = a.preferred_speed;
        j["radius"] = a.radius;
        j["panic"] = a.panic;
        j["perception_radius"] = a.perception_radius;
        j["personality"] = {
            {"openness", a.personality.openness},
            {"conscientiousness", a.personality.conscientiousness},
            {"extraversion", a.personality.extraversion},
            {"agreeableness", a.personality.agreeableness},
            {"neuroticism", a.personality.neuroticism},
        };
        j["expressiveness_threshold"] = a.expressiveness_threshold;
        j["susceptibility_threshold"] = a.susceptibility_threshold;
        agents.push_back(std::move(j));
    }
    doc["agents"] = std::move(agents);

    auto hazards = ordered_json::array();
    for (const auto& h : sc.hazards) {
        hazards.push_back({
            {"id", h.id},
            {"kind", to_string(h.kind)},
            {"position", vec_json(h.position)},
            {"onset", h.onset},
            {"duration", number_or_null(h.duration)},
            {"influence_radius", h.influence_radius},
            {"diffusion_speed", h.diffusion_speed},
            {"direction_count", h.direction_count},
        });
    }
    doc["hazards"] = std::move(hazards);

    auto obstacles = ordered_json::array();
    for (const auto& o : sc.obstacles) {
        obstacles.push_back({
            {"id", o.id},
            {"position", vec_json(o.position)},
            {"velocity", vec_json(o.velocity)},
            {"radius", o.radius},
        });
    }
    doc["obstacles"] = std::move(obstacles);
    return doc.dump(2) + "\n";
}

void write_scenario(const Scenario& scenario, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write scenario file '" + path.string() + "'");
    }
    out << scenario_to_json(scenario);
    if (!out) {
        throw IoError("failed writing scenario file '" + path.string() + "'");
    }
}

const char* to_string(HazardKind kind)
{
    return kind == HazardKind::transient ? "transient" : "persistent";
}

const char* to_string(AvoidanceModel model)
{
    return model == AvoidanceModel::rvo ? "rvo" : "ervo";
}

} // namespace hazcrowd
