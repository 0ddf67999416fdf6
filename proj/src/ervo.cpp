#include "hazcrowd/ervo.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace hazcrowd {

namespace {

constexpr double never = std::numeric_limits<double>::infinity();

Vec2 clip_speed(Vec2 v, double max_speed)
{
    const double s = norm(v);
    return s > max_speed ? v * (max_speed / s) : v;
}

} // namespace

VelocityObstacle::VelocityObstacle(Vec2 position_i, double radius_i, Vec2 position_j, double radius_j,
                                   Vec2 velocity_j)
    : apex_(velocity_j), offset_(position_j - position_i), combined_radius_(radius_i + radius_j)
{
    const double dist = norm(offset_);
    overlapping_ = dist <= combined_radius_;
    if (!overlapping_) {
        const double half_angle = std::asin(combined_radius_ / dist);
        const Vec2 axis = offset_ / dist;
        left_leg_ = rotated(axis, half_angle);
        right_leg_ = rotated(axis, -half_angle);
    }
}

bool VelocityObstacle::contains(Vec2 velocity) const
{
    if (overlapping_) {
        return true;
    }
    const Vec2 u = velocity - apex_;
    const double along = dot(u, offset_);
    if (along <= 0.0) {
        return false;
    }
    const double c = norm_sq(offset_) - combined_radius_ * combined_radius_;
    return along * along - norm_sq(u) * c >= 0.0;
}

double VelocityObstacle::time_to_collision(Vec2 velocity) const
{
    const Vec2 u = velocity - apex_;
    const double along = dot(u, offset_);
    if (overlapping_) {
        return along >= 0.0 ? 0.0 : never;
    }
    if (along <= 0.0) {
        return never;
    }
    const double uu = norm_sq(u);
    const double c = norm_sq(offset_) - combined_radius_ * combined_radius_;
    const double disc = along * along - uu * c;
    if (disc < 0.0) {
        return never;
    }
    return (along - std::sqrt(disc)) / uu;
}

bool vo_contains(Vec2 position_i, double radius_i, Vec2 position_j, double radius_j, Vec2 velocity_j,
                 Vec2 candidate)
{
    return VelocityObstacle(position_i, radius_i, position_j, radius_j, velocity_j).contains(candidate);
}

Vec2 reciprocal_test_velocity(Vec2 current, Vec2 shift, double alpha, Vec2 candidate)
{
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw std::domain_error("reciprocal velocity obstacle requires effort alpha in (0, 1]");
    }
    const double inv = 1.0 / alpha;
    return (candidate + shift) * inv + current * (1.0 - inv);
}

bool rvo_contains(const VelocityObstacle& vo, Vec2 current, double alpha, Vec2 candidate)
{
    return vo.contains(reciprocal_test_velocity(current, Vec2{}, alpha, candidate));
}

bool ervo_contains(const VelocityObstacle& vo, Vec2 current, Vec2 emotional_velocity, double alpha, Vec2 candidate)
{
    return vo.contains(reciprocal_test_velocity(current, emotional_velocity, alpha, candidate));
}

double avoidance_effort(double panic_i, double panic_j)
{
    const double total = panic_i + panic_j;
    if (total <= 0.0) {
        return 0.5;
    }
    // The smaller ratio is divided out and the larger taken as its complement,
    // so the shares of i and j sum to exactly 1 in floating point.
    if (panic_i <= panic_j) {
        return 1.0 - panic_i / total;
    }
    return panic_j / total;
}

std::vector<Vec2> sample_velocities(Rng& rng, double max_speed, std::size_t count)
{
    std::vector<Vec2> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double r = max_speed * std::sqrt(rng.uniform());
        const double a = 2.0 * std::numbers::pi * rng.uniform();
        out.push_back({r * std::cos(a), r * std::sin(a)});
    }
    return out;
}

namespace {

struct PreparedNeighbor {
    VelocityObstacle vo;
    double effort;
};

std::vector<PreparedNeighbor> prepare(const AvoidanceQuery& q, std::span<const AvoidanceNeighbor> neighbors)
{
    std::vector<PreparedNeighbor> out;
    out.reserve(neighbors.size());
    for (const auto& n : neighbors) {
        // Zero effort: agent i leaves this conflict entirely to the other party.
        if (n.effort <= 0.0) {
            continue;
        }
        out.push_back({VelocityObstacle(q.position, q.radius, n.position, n.radius, n.velocity), n.effort});
    }
    return out;
}

double earliest_collision(const AvoidanceQuery& q, const std::vector<PreparedNeighbor>& prepared, Vec2 candidate)
{
    double tc = never;
    for (const auto& n : prepared) {
        const Vec2 test = reciprocal_test_velocity(q.current_velocity, q.emotional_shift, n.effort, candidate);
        tc = std::min(tc, n.vo.time_to_collision(test));
    }
    return tc;
}

} // namespace

double candidate_time_to_collision(const AvoidanceQuery& query, std::span<const AvoidanceNeighbor> neighbors,
                                   Vec2 candidate)
{
    return earliest_collision(query, prepare(query, neighbors), candidate);
}

CandidateVelocity select_velocity(const AvoidanceQuery& query, std::span<const AvoidanceNeighbor> neighbors,
                                  std::span<const Vec2> samples)
{
    const auto prepared = prepare(query, neighbors);
    const Vec2 preferred = clip_speed(query.preferred_velocity, query.max_speed);

    CandidateVelocity best;
    double best_distance = never;
    bool have_best = false;

    auto consider = [&](Vec2 v, std::size_t index) {
        const double tc = earliest_collision(query, prepared, v);
        const double dist = norm(preferred - v);
        const double urgency = query.penalty_weight == 0.0 ? 0.0 : query.penalty_weight / tc;
        const double penalty = urgency + dist;
        if (!have_best || penalty < best.penalty || (penalty == best.penalty && dist < best_distance)) {
            best = {v, tc, penalty, index};
            best_distance = dist;
            have_best = true;
        }
    };

    consider(preferred, 0);
    consider(clip_speed(query.current_velocity, query.max_speed), 1);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        consider(clip_speed(samples[i], query.max_speed), i + 2);
    }
    return best;
}

} // namespace hazcrowd
