#include "hazcrowd/steering.hpp"

#include "hazcrowd/hazard_field.hpp"

namespace hazcrowd {

double reference_speed(Vec2 velocity, double preferred_speed)
{
    const double s = norm(velocity);
    return s > 0.0 ? s : preferred_speed;
}

Vec2 stress_safety_velocity(Vec2 p, Vec2 velocity, double speed, std::span<const Hazard> hazards, double t)
{
    Vec2 sum;
    bool affected = false;
    for (const auto& h : hazards) {
        if (!is_active(h, t)) {
            continue;
        }
        const double gamma = danger_strength(h, p, t);
        if (gamma <= 0.0) {
            continue;
        }
        affected = true;
        // Inside the core area there is no crossing point; flee from the source.
        const Vec2 from = in_danger_area(h, p, t) ? h.position : danger_source_point(h, p, t);
        Vec2 away = normalized(p - from);
        if (away == Vec2{}) {
            away = normalized(p - h.position);
        }
        sum += away * gamma;
    }
    if (!affected) {
        return velocity;
    }
    const Vec2 dir = normalized(sum);
    if (dir == Vec2{}) {
        return velocity;
    }
    return dir * speed;
}

Vec2 emotional_velocity(Vec2 stress_velocity, std::span<const Vec2> neighbor_velocities, double panic, double speed)
{
    Vec2 crowd;
    for (const auto& v : neighbor_velocities) {
        crowd += v;
    }
    const Vec2 blend = normalized(stress_velocity) * panic + normalized(crowd) * (1.0 - panic);
    Vec2 dir = normalized(blend);
    if (dir == Vec2{}) {
        dir = normalized(stress_velocity);
    }
    return dir * speed;
}

} // namespace hazcrowd
