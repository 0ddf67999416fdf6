#include "hazcrowd/hazard_field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hazcrowd {

namespace {

// Slack for comparing simulation times (multiples of dt) against onset times.
constexpr double time_epsilon = 1e-9;

bool before_onset(const Hazard& h, double t) { return t < h.onset - time_epsilon; }

bool point_like(const HazardBoundary& b) { return b.extent() <= point_area_tolerance; }

// Even-odd crossing test.
bool polygon_contains(const std::vector<Vec2>& poly, Vec2 p)
{
    bool inside = false;
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2 a = poly[i];
        const Vec2 b = poly[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < x_cross) {
                inside = !inside;
            }
        }
    }
    return inside;
}

double segment_distance(Vec2 p, Vec2 a, Vec2 b)
{
    const Vec2 ab = b - a;
    const double len_sq = norm_sq(ab);
    double s = len_sq > 0.0 ? dot(p - a, ab) / len_sq : 0.0;
    s = std::clamp(s, 0.0, 1.0);
    return distance(p, a + ab * s);
}

double boundary_distance(const std::vector<Vec2>& poly, Vec2 p)
{
    double best = infinity;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        best = std::min(best, segment_distance(p, poly[i], poly[(i + 1) % poly.size()]));
    }
    return best;
}

bool contains(const HazardBoundary& b, Vec2 p)
{
    if (point_like(b)) {
        return distance(p, b.source) <= point_area_tolerance;
    }
    return polygon_contains(b.points, p);
}

// Intersection of segment p->source with the boundary polygon nearest to p.
Vec2 source_point(const HazardBoundary& b, Vec2 p)
{
    if (point_like(b)) {
        return b.source;
    }
    if (boundary_distance(b.points, p) <= point_area_tolerance) {
        return p;
    }
    if (polygon_contains(b.points, p)) {
        throw std::domain_error("danger_source_point: point lies inside hazard " + std::to_string(b.hazard_id) +
                                " core area");
    }
    const Vec2 dir = b.source - p;
    double best_s = infinity;
    const std::size_t n = b.points.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = b.points[i];
        const Vec2 edge = b.points[(i + 1) % n] - a;
        const double denom = cross(dir, edge);
        if (denom == 0.0) {
            continue;
        }
        const Vec2 ap = a - p;
        const double s = cross(ap, edge) / denom;
        const double u = cross(ap, dir) / denom;
        if (s >= 0.0 && s <= 1.0 && u >= 0.0 && u <= 1.0) {
            best_s = std::min(best_s, s);
        }
    }
    if (!std::isfinite(best_s)) {
        // Numerically degenerate polygon; fall back to the source.
        return b.source;
    }
    return p + dir * best_s;
}

double strength(const Hazard& h, const HazardBoundary& b, Vec2 p)
{
    if (contains(b, p)) {
        return 1.0;
    }
    const double d = distance(p, source_point(b, p));
    if (d >= h.influence_radius) {
        return 0.0;
    }
    return gaussian_falloff(d, h.influence_radius);
}

} // namespace

double HazardBoundary::extent() const
{
    double best = 0.0;
    for (const auto& q : points) {
        best = std::max(best, distance(q, source));
    }
    return best;
}

bool is_active(const Hazard& hazard, double t)
{
    return !before_onset(hazard, t) && t < hazard.onset + hazard.duration - time_epsilon;
}

HazardBoundary diffused_boundary(const Hazard& hazard, double t)
{
    if (before_onset(hazard, t)) {
        throw std::domain_error("diffused_boundary: hazard " + std::to_string(hazard.id) + " queried at t=" +
                                std::to_string(t) + " before its onset");
    }
    HazardBoundary b;
    b.hazard_id = hazard.id;
    b.elapsed = std::max(0.0, t - hazard.onset);
    b.source = hazard.position;
    const double reach = b.elapsed * hazard.diffusion_speed;
    const int n = hazard.direction_count;
    b.points.reserve(static_cast<std::size_t>(n));
    for (int m = 0; m < n; ++m) {
        const double angle = 2.0 * std::numbers::pi * m / n;
        b.points.push_back(hazard.position + Vec2{std::cos(angle), std::sin(angle)} * reach);
    }
    return b;
}

bool in_danger_area(const Hazard& hazard, Vec2 p, double t)
{
    if (before_onset(hazard, t)) {
        return false;
    }
    return contains(diffused_boundary(hazard, t), p);
}

Vec2 danger_source_point(const Hazard& hazard, Vec2 p, double t)
{
    return source_point(diffused_boundary(hazard, t), p);
}

double danger_strength(const Hazard& hazard, Vec2 p, double t)
{
    if (!is_active(hazard, t)) {
        return 0.0;
    }
    return strength(hazard, diffused_boundary(hazard, t), p);
}

double hazard_panic(Vec2 p, double t, std::span<const Hazard> hazards)
{
    double sum = 0.0;
    for (const auto& h : hazards) {
        sum += danger_strength(h, p, t);
    }
    return std::clamp(sum, 0.0, 1.0);
}

double gaussian_falloff(double d, double influence_radius)
{
    const double r = influence_radius;
    return std::exp(-(d * d) / (2.0 * r * r)) / (std::sqrt(2.0 * std::numbers::pi) * r);
}

} // namespace hazcrowd
