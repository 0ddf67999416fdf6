#include "hazcrowd/engine.hpp"

#include "hazcrowd/contagion.hpp"
#include "hazcrowd/ervo.hpp"
#include "hazcrowd/rng.hpp"
#include "hazcrowd/steering.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

namespace hazcrowd {

namespace {

constexpr double onset_epsilon = 1e-9;

std::vector<HazardFrame> hazard_frames(const Scenario& sc, double t)
{
    std::vector<HazardFrame> out;
    out.reserve(sc.hazards.size());
    for (const auto& h : sc.hazards) {
        HazardFrame hf;
        hf.id = h.id;
        hf.active = is_active(h, t);
        if (t >= h.onset - onset_epsilon) {
            hf.boundary = diffused_boundary(h, t);
        }
        out.push_back(std::move(hf));
    }
    return out;
}

EmotionHistory emotion_window(const Scenario& sc, std::span<const SimulationFrame> history)
{
    const std::size_t k = static_cast<std::size_t>(sc.simulation.window);
    EmotionHistory window(k);
    const std::size_t first = history.size() > k ? history.size() - k : 0;
    for (std::size_t f = first; f < history.size(); ++f) {
        EmotionRecord rec;
        rec.step = history[f].step;
        rec.agents.reserve(history[f].agents.size());
        for (const auto& a : history[f].agents) {
            rec.agents.push_back({a.position, a.panic, a.expressive, a.status == AgentStatus::active});
        }
        window.push(std::move(rec));
    }
    return window;
}

Vec2 toward_goal(Vec2 position, Vec2 goal, double speed, double dt)
{
    const Vec2 to_goal = goal - position;
    const double dist = norm(to_goal);
    if (dist == 0.0) {
        return {};
    }
    // Do not overshoot the goal within one step.
    return to_goal / dist * std::min(speed, dist / dt);
}

struct StepContext {
    const Scenario& sc;
    const SimulationFrame& prev;
    const EmotionHistory& window;
    DoseSampler doses;
    std::int64_t next_step;
    /// Time of the frame being computed; hazards are evaluated here.
    double time;
};

AgentFrame advance_agent(const StepContext& ctx, std::size_t i)
{
    const auto& sc = ctx.sc;
    const auto& settings = sc.simulation;
    const Agent& agent = sc.agents[i];
    const AgentFrame& me = ctx.prev.agents[i];
    const double t = ctx.time;

    AgentFrame out = me;
    if (me.status != AgentStatus::active) {
        out.velocity = {};
        out.expressive = false;
        out.emotional_velocity = {};
        return out;
    }

    // Panic.
    const double e_hazard = hazard_panic(me.position, t, sc.hazards);
    double e_contagion = 0.0;
    if (settings.contagion_enabled) {
        const Receiver receiver{i, agent.id, agent.perception_radius, agent.susceptibility_threshold};
        e_contagion = contagion_panic(receiver, ctx.window, ctx.doses, settings.global_broadcast);
    }
    const double panic = update_panic(me.panic, e_hazard, e_contagion, settings.eta);

    // Emotion-driven direction.
    const double speed = reference_speed(me.velocity, agent.preferred_speed);
    const Vec2 stress = stress_safety_velocity(me.position, me.velocity, speed, sc.hazards, t);
    std::vector<Vec2> perceived;
    const double perception_sq = agent.perception_radius * agent.perception_radius;
    for (std::size_t j = 0; j < ctx.prev.agents.size(); ++j) {
        const auto& other = ctx.prev.agents[j];
        if (j != i && other.status == AgentStatus::active &&
            norm_sq(other.position - me.position) <= perception_sq) {
            perceived.push_back(other.emotional_velocity);
        }
    }
    const Vec2 emotional = emotional_velocity(stress, perceived, panic, speed);
    const bool panicked = panic > 0.0;

    Vec2 preferred = me.velocity;
    if (panicked) {
        preferred = emotional;
    } else if (agent.goal) {
        preferred = toward_goal(me.position, *agent.goal, agent.preferred_speed, settings.dt);
    }

    // Collision avoidance against agents, obstacles and hazard proxies.
    const bool ervo = settings.avoidance_model == AvoidanceModel::ervo;
    std::vector<AvoidanceNeighbor> neighbors;
    for (std::size_t j = 0; j < ctx.prev.agents.size(); ++j) {
        const auto& other = ctx.prev.agents[j];
        if (j == i || other.status == AgentStatus::arrived) {
            continue;
        }
        const double other_radius = sc.agents[j].radius;
        if (distance(other.position, me.position) - agent.radius - other_radius > settings.neighbor_radius) {
            continue;
        }
        if (other.status == AgentStatus::dead) {
            neighbors.push_back({other.position, other_radius, {}, 1.0});
        } else {
            const double effort = ervo ? avoidance_effort(me.panic, other.panic) : 0.5;
            neighbors.push_back({other.position, other_radius, other.velocity, effort});
        }
    }
    for (const auto& o : sc.obstacles) {
        const Vec2 p = o.position_at(t);
        if (distance(p, me.position) - agent.radius - o.radius <= settings.neighbor_radius) {
            neighbors.push_back({p, o.radius, o.velocity, 1.0});
        }
    }
    for (const auto& h : sc.hazards) {
        if (!is_active(h, t) || danger_strength(h, me.position, t) <= 0.0) {
            continue;
        }
        const Vec2 expansion = normalized(me.position - h.position) * h.diffusion_speed;
        const double effort = ervo ? avoidance_effort(me.panic, 1.0) : 1.0;
        neighbors.push_back({h.position, h.influence_radius / 2.0, expansion, effort});
    }

    AvoidanceQuery query;
    query.position = me.position;
    query.radius = agent.radius;
    query.current_velocity = me.velocity;
    query.emotional_shift = (ervo && panicked) ? emotional : Vec2{};
    query.preferred_velocity = preferred;
    query.max_speed = settings.max_speed_factor * agent.preferred_speed;
    query.penalty_weight = settings.penalty_weight;

    // One sample set per step, shared by all agents and laid out in each agent's
    // heading frame, so agents in mirrored situations see mirrored candidates.
    Vec2 heading = normalized(preferred);
    if (norm_sq(heading) == 0.0) {
        heading = normalized(me.velocity);
    }
    if (norm_sq(heading) == 0.0) {
        heading = {1.0, 0.0};
    }
    const Vec2 lateral{-heading.y, heading.x};
    auto rng = Rng::stream(settings.seed, StreamPurpose::candidates, 0, ctx.next_step);
    auto samples = sample_velocities(rng, query.max_speed, static_cast<std::size_t>(settings.candidate_count - 2));
    for (auto& v : samples) {
        v = heading * v.x + lateral * v.y;
    }
    const Vec2 velocity = select_velocity(query, neighbors, samples).velocity;

    out.velocity = velocity;
    out.position = me.position + velocity * settings.dt;
    out.panic = panic;
    out.expressive = is_expressive(panic, agent.expressiveness_threshold);
    out.emotional_velocity = panicked ? emotional : velocity;
    if (agent.goal && distance(out.position, *agent.goal) <= settings.goal_tolerance) {
        out.status = AgentStatus::arrived;
    }
    for (const auto& h : sc.hazards) {
        if (is_active(h, t) && in_danger_area(h, out.position, t)) {
            out.status = AgentStatus::dead;
            out.velocity = {};
            out.expressive = false;
            out.emotional_velocity = {};
            break;
        }
    }
    return out;
}

void check_frame(const SimulationFrame& frame)
{
    for (const auto& a : frame.agents) {
        if (!(a.panic >= 0.0 && a.panic <= 1.0)) {
            throw InvariantError("agent " + std::to_string(a.id) + " panic left [0, 1] at step " +
                                 std::to_string(frame.step));
        }
        if (!is_finite(a.position) || !is_finite(a.velocity)) {
            throw InvariantError("agent " + std::to_string(a.id) + " state is not finite at step " +
                                 std::to_string(frame.step));
        }
    }
}

} // namespace

const char* to_string(TerminationReason reason)
{
    switch (reason) {
    case TerminationReason::all_reached_goal:
        return "all_reached_goal";
    case TerminationReason::max_steps:
        return "max_steps";
    case TerminationReason::all_dead:
        return "all_dead";
    }
    return "unknown";
}

const char* to_string(AgentStatus status)
{
    switch (status) {
    case AgentStatus::active:
        return "active";
    case AgentStatus::arrived:
        return "arrived";
    case AgentStatus::dead:
        return "dead";
    }
    return "unknown";
}

SimulationFrame initial_frame(const Scenario& sc)
{
    SimulationFrame frame;
    frame.step = 0;
    frame.time = 0.0;
    frame.agents.reserve(sc.agents.size());
    for (const auto& a : sc.agents) {
        AgentFrame af;
        af.id = a.id;
        af.position = a.position;
        af.velocity = a.velocity;
        af.panic = a.panic;
        af.expressive = is_expressive(a.panic, a.expressiveness_threshold);
        af.emotional_velocity = a.velocity;
        if (a.goal && distance(a.position, *a.goal) <= sc.simulation.goal_tolerance) {
            af.status = AgentStatus::arrived;
            af.velocity = {};
            af.emotional_velocity = {};
        }
        frame.agents.push_back(af);
    }
    frame.hazards = hazard_frames(sc, 0.0);
    return frame;
}

SimulationFrame step(const Scenario& sc, std::span<const SimulationFrame> history, unsigned threads)
{
    if (history.empty()) {
        throw std::invalid_argument("step: history must contain the previous frame");
    }
    const SimulationFrame& prev = history.back();
    const EmotionHistory window = emotion_window(sc, history);
    SimulationFrame next;
    next.step = prev.step + 1;
    next.time = static_cast<double>(next.step) * sc.simulation.dt;
    const StepContext ctx{sc,        prev, window, DoseSampler(sc.simulation.seed, sc.simulation.deterministic_dose),
                          next.step, next.time};
    next.agents.resize(prev.agents.size());

    const std::size_t n = prev.agents.size();
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            next.agents[i] = advance_agent(ctx, i);
        }
    } else {
        std::vector<std::jthread> pool;
        std::vector<std::exception_ptr> errors(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < n; i += workers) {
                        next.agents[i] = advance_agent(ctx, i);
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        pool.clear();
        for (const auto& e : errors) {
            if (e) {
                std::rethrow_exception(e);
            }
        }
    }
    next.hazards = hazard_frames(sc, next.time);
    check_frame(next);
    return next;
}

std::optional<TerminationReason> termination(const Scenario& sc, const SimulationFrame& frame)
{
    if (frame.agents.empty()) {
        return TerminationReason::all_reached_goal;
    }
    bool all_dead = true;
    bool all_safe = true;
    bool hazards_pending = false;
    for (const auto& h : sc.hazards) {
        if (frame.time < h.onset - onset_epsilon) {
            hazards_pending = true;
        }
    }
    for (std::size_t i = 0; i < frame.agents.size(); ++i) {
        const auto& a = frame.agents[i];
        if (a.status == AgentStatus::dead) {
            continue;
        }
        all_dead = false;
        if (a.status == AgentStatus::arrived) {
            continue;
        }
        // Agents without a goal are safe once no hazard is pending and no field reaches them.
        if (sc.agents[i].goal || hazards_pending) {
            all_safe = false;
            continue;
        }
        for (const auto& h : sc.hazards) {
            if (danger_strength(h, a.position, frame.time) > 0.0) {
                all_safe = false;
                break;
            }
        }
    }
    if (all_dead) {
        return TerminationReason::all_dead;
    }
    if (all_safe) {
        return TerminationReason::all_reached_goal;
    }
    return std::nullopt;
}

RunResult run(const Scenario& sc, const EngineOptions& options)
{
    const auto started = std::chrono::steady_clock::now();
    RunResult result;
    result.frames.reserve(static_cast<std::size_t>(std::min<std::int64_t>(sc.simulation.max_steps, 100000)) + 1);
    result.frames.push_back(initial_frame(sc));
    if (options.on_frame) {
        options.on_frame(result.frames.back());
    }

    std::optional<TerminationReason> reason = termination(sc, result.frames.back());
    while (!reason && result.frames.back().step < sc.simulation.max_steps) {
        result.frames.push_back(step(sc, result.frames, options.threads));
        if (options.on_frame) {
            options.on_frame(result.frames.back());
        }
        reason = termination(sc, result.frames.back());
    }
    result.reason = reason.value_or(TerminationReason::max_steps);
    result.wall_clock = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - started);
    return result;
}

} // namespace hazcrowd
