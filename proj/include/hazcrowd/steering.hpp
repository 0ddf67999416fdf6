#pragma once

#include "hazcrowd/scenario.hpp"
#include "hazcrowd/vec2.hpp"

#include <span>

namespace hazcrowd {

struct DesiredVelocity {
    int agent_id = 0;
    Vec2 stress;     // V^s
    Vec2 emotional;  // V^c
    double speed = 0.0;
};

/// Speed an agent keeps while panic redirects it: its current speed, or its
/// preferred speed when standing still.
double reference_speed(Vec2 velocity, double preferred_speed);

/// Escape velocity from hazards. Outside every active perilous field this is
/// the current velocity unchanged. Otherwise the strength-weighted sum of unit
/// vectors pointing from each affecting hazard's danger source point to p,
/// rescaled to `speed`.
Vec2 stress_safety_velocity(Vec2 p, Vec2 velocity, double speed, std::span<const Hazard> hazards, double t);

/// Panic-weighted blend of the agent's escape direction with the summed
/// directions of its perceived neighbours:
///   dir = unit(E * unit(V^s) + (1 - E) * unit(sum V_j^c))
/// scaled to `speed`. Falls back to the V^s direction when the blend vanishes.
Vec2 emotional_velocity(Vec2 stress_velocity, std::span<const Vec2> neighbor_velocities, double panic, double speed);

} // namespace hazcrowd
