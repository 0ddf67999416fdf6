#pragma once

#include "hazcrowd/scenario.hpp"
#include "hazcrowd/vec2.hpp"

#include <span>
#include <vector>

namespace hazcrowd {

/// Boundary points below this distance from the source are treated as a
/// point-like (static) hazard area.
inline constexpr double point_area_tolerance = 1e-9;

/// Sampled boundary of a hazard's diffused core area at one time.
struct HazardBoundary {
    int hazard_id = 0;
    /// Time elapsed since onset.
    double elapsed = 0.0;
    Vec2 source;
    /// Counter-clockwise boundary samples, one per diffusion direction.
    std::vector<Vec2> points;

    /// Distance the boundary has travelled from the source.
    double extent() const;
};

/// True iff t lies in the half-open activity window [onset, onset + duration).
bool is_active(const Hazard& hazard, double t);

/// Boundary samples source + elapsed * speed * (cos a_m, sin a_m) with
/// a_m = 2*pi*m/n. Throws std::domain_error when t precedes onset.
HazardBoundary diffused_boundary(const Hazard& hazard, double t);

/// Membership in the core area. Before onset the area does not exist.
bool in_danger_area(const Hazard& hazard, Vec2 p, double t);

/// Where the segment from p to the source crosses the core boundary; the
/// source itself for point-like areas, and p when p lies on the boundary.
/// Throws std::domain_error when p is strictly inside the area.
Vec2 danger_source_point(const Hazard& hazard, Vec2 p, double t);

/// Danger strength in [0, 1] at p and time t.
double danger_strength(const Hazard& hazard, Vec2 p, double t);

/// Panic induced directly by all hazards: the summed strengths, clamped to [0, 1].
double hazard_panic(Vec2 p, double t, std::span<const Hazard> hazards);

/// Gaussian falloff used outside the core area, for a distance d < r.
double gaussian_falloff(double d, double influence_radius);

} // namespace hazcrowd
