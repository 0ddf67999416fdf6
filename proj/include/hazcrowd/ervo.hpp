#pragma once

#include "hazcrowd/rng.hpp"
#include "hazcrowd/vec2.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace hazcrowd {

/// Velocity obstacle induced on agent i by a disc j moving at apex = V_j.
///
/// A candidate velocity v is inside when the ray from P_i along v - apex
/// meets the disc at P_j of radius r_i + r_j. The legs are the two tangent
/// directions from P_i to that disc. When the discs already overlap the cone
/// is degenerate and every velocity is in conflict.
class VelocityObstacle {
public:
    VelocityObstacle(Vec2 position_i, double radius_i, Vec2 position_j, double radius_j, Vec2 velocity_j);

    Vec2 apex() const { return apex_; }
    Vec2 left_leg() const { return left_leg_; }
    Vec2 right_leg() const { return right_leg_; }
    bool overlapping() const { return overlapping_; }

    bool contains(Vec2 velocity) const;

    /// First time the relative ray touches the disc; infinity if never.
    /// Overlapping discs report 0 for velocities that do not separate them.
    double time_to_collision(Vec2 velocity) const;

private:
    Vec2 apex_;
    Vec2 offset_;  // P_j - P_i
    double combined_radius_;
    Vec2 left_leg_;
    Vec2 right_leg_;
    bool overlapping_;
};

bool vo_contains(Vec2 position_i, double radius_i, Vec2 position_j, double radius_j, Vec2 velocity_j,
                 Vec2 candidate);

/// (1/alpha) * (candidate + shift) + (1 - 1/alpha) * current.
/// Throws std::domain_error unless alpha is in (0, 1].
Vec2 reciprocal_test_velocity(Vec2 current, Vec2 shift, double alpha, Vec2 candidate);

/// Reciprocal VO membership: the affine combination of candidate and the
/// agent's current velocity lies in the VO.
bool rvo_contains(const VelocityObstacle& vo, Vec2 current, double alpha, Vec2 candidate);

/// Emotional RVO membership: rvo_contains of candidate + emotional_velocity.
bool ervo_contains(const VelocityObstacle& vo, Vec2 current, Vec2 emotional_velocity, double alpha,
                   Vec2 candidate);

/// Share of the avoidance effort agent i takes against j: E_j / (E_i + E_j),
/// and 1/2 when both are calm.
double avoidance_effort(double panic_i, double panic_j);

/// A disc agent i must avoid, with the effort share i takes against it.
struct AvoidanceNeighbor {
    Vec2 position;
    double radius = 0.0;
    Vec2 velocity;
    /// alpha in [0, 1]; zero means agent i leaves the avoidance entirely to j.
    double effort = 0.5;
};

struct AvoidanceQuery {
    Vec2 position;
    double radius = 0.4;
    Vec2 current_velocity;
    /// Emotional velocity shift; zero reduces ERVO to RVO.
    Vec2 emotional_shift;
    Vec2 preferred_velocity;
    double max_speed = 2.8;
    double penalty_weight = 1.0;
};

struct CandidateVelocity {
    Vec2 velocity;
    double time_to_collision = 0.0;
    double penalty = 0.0;
    std::size_t index = 0;
};

/// Uniform samples in the disc of radius max_speed.
std::vector<Vec2> sample_velocities(Rng& rng, double max_speed, std::size_t count);

/// Earliest collision time of one candidate against all neighbours.
double candidate_time_to_collision(const AvoidanceQuery& query, std::span<const AvoidanceNeighbor> neighbors,
                                   Vec2 candidate);

/// Penalty-minimising velocity among the preferred velocity, the current
/// velocity (clipped to max speed) and the given samples, in that order.
/// penalty = w / tc + |v_pref - v|; ties go to the smaller distance from the
/// preferred velocity, then to the lower candidate index.
CandidateVelocity select_velocity(const AvoidanceQuery& query, std::span<const AvoidanceNeighbor> neighbors,
                                  std::span<const Vec2> samples);

} // namespace hazcrowd
