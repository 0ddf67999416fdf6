#include "hazcrowd/steering.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

using namespace hazcrowd;

namespace {

Hazard static_hazard(Vec2 at)
{
    Hazard h;
    h.position = at;
    h.influence_radius = 10.0;
    return h;
}

void check_parallel(Vec2 a, Vec2 b, double tol = 1e-12)
{
    CHECK(std::abs(cross(normalized(a), normalized(b))) <= tol);
    CHECK(dot(a, b) > 0.0);
}

} // namespace

TEST_CASE("stress velocity outside every field keeps the current velocity")
{
    const std::vector<Hazard> hazards{static_hazard({0.0, 0.0})};
    const Vec2 v{0.3, -1.1};
    CHECK(stress_safety_velocity({20.0, 0.0}, v, 1.4, hazards, 1.0) == v);
    CHECK(stress_safety_velocity({1.0, 0.0}, v, 1.4, std::vector<Hazard>{}, 1.0) == v);

    Hazard later = static_hazard({0.0, 0.0});
    later.onset = 5.0;
    CHECK(stress_safety_velocity({1.0, 0.0}, v, 1.4, std::vector<Hazard>{later}, 1.0) == v);
}

TEST_CASE("stress velocity points away from the hazard")
{
    const std::vector<Hazard> west{static_hazard({-3.0, 0.0})};
    const Vec2 vs = stress_safety_velocity({0.0, 0.0}, {0.0, 1.4}, 1.4, west, 0.0);
    CHECK(vs.x == doctest::Approx(1.4).epsilon(1e-14));
    CHECK(std::abs(vs.y) <= 1e-15);

    SUBCASE("symmetric pair gives the bisector")
    {
        const double d = 4.0;
        const std::vector<Hazard> pair{static_hazard({-d / std::numbers::sqrt2, -d / std::numbers::sqrt2}),
                                       static_hazard({-d / std::numbers::sqrt2, d / std::numbers::sqrt2})};
        const Vec2 v = stress_safety_velocity({0.0, 0.0}, {0.0, 1.0}, 1.0, pair, 0.0);
        CHECK(v.x == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(std::abs(v.y) <= 1e-14);
    }
    SUBCASE("repulsion from a single static hazard")
    {
        std::mt19937_64 gen(3);
        std::uniform_real_distribution<double> u(-9.0, 9.0);
        const Hazard h = static_hazard({1.0, -2.0});
        for (int n = 0; n < 500; ++n) {
            const Vec2 p = h.position + Vec2{u(gen), u(gen)};
            if (distance(p, h.position) >= 10.0 || distance(p, h.position) < 1e-6) {
                continue;
            }
            const Vec2 vs = stress_safety_velocity(p, {u(gen), u(gen)}, 1.2, std::vector<Hazard>{h}, 0.0);
            CHECK(dot(vs, p - h.position) > 0.0);
            CHECK(norm(vs) == doctest::Approx(1.2).epsilon(1e-12));
        }
    }
}

TEST_CASE("emotional velocity blend")
{
    const Vec2 east{1.4, 0.0};
    const std::vector<Vec2> north{{0.0, 1.4}};

    const Vec2 full = emotional_velocity(east, north, 1.0, 1.4);
    check_parallel(full, east);

    const Vec2 none = emotional_velocity(east, north, 0.0, 1.4);
    check_parallel(none, north.front());

    const Vec2 half = emotional_velocity(east, north, 0.5, 1.4);
    CHECK(half.x == doctest::Approx(1.4 / std::numbers::sqrt2).epsilon(1e-14));
    CHECK(half.y == doctest::Approx(1.4 / std::numbers::sqrt2).epsilon(1e-14));

    SUBCASE("no neighbours keeps the stress direction")
    {
        for (double e : {0.1, 0.5, 1.0}) {
            const Vec2 v = emotional_velocity({0.6, -0.8}, {}, e, 2.0);
            check_parallel(v, {0.6, -0.8});
            CHECK(norm(v) == doctest::Approx(2.0).epsilon(1e-14));
        }
    }
    SUBCASE("cancelling blend falls back to the stress direction")
    {
        const std::vector<Vec2> west{{-1.0, 0.0}};
        const Vec2 v = emotional_velocity({1.0, 0.0}, west, 0.5, 1.0);
        check_parallel(v, {1.0, 0.0});
    }
    SUBCASE("magnitude is the supplied speed")
    {
        std::mt19937_64 gen(9);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        std::uniform_real_distribution<double> e(0.0, 1.0);
        for (int n = 0; n < 500; ++n) {
            const std::vector<Vec2> others{{u(gen), u(gen)}, {u(gen), u(gen)}};
            const double speed = std::abs(u(gen)) + 0.1;
            const Vec2 v = emotional_velocity({u(gen), u(gen)}, others, e(gen), speed);
            CHECK(norm(v) == doctest::Approx(speed).epsilon(1e-12));
        }
    }
}

TEST_CASE("rotation equivariance")
{
    const Hazard a = static_hazard({-2.0, 1.0});
    const Hazard b = static_hazard({3.0, -4.0});
    const Vec2 p{0.5, 0.2};
    const Vec2 v{1.0, 0.4};
    const std::vector<Vec2> others{{0.2, 1.1}, {-0.7, 0.3}};
    const Vec2 vs = stress_safety_velocity(p, v, 1.3, std::vector<Hazard>{a, b}, 0.0);
    const Vec2 vc = emotional_velocity(vs, others, 0.4, 1.3);

    for (double theta : {0.3, 1.7, -2.4}) {
        Hazard ra = a;
        Hazard rb = b;
        ra.position = rotated(a.position, theta);
        rb.position = rotated(b.position, theta);
        const std::vector<Vec2> rothers{rotated(others[0], theta), rotated(others[1], theta)};
        const Vec2 rvs =
            stress_safety_velocity(rotated(p, theta), rotated(v, theta), 1.3, std::vector<Hazard>{ra, rb}, 0.0);
        const Vec2 rvc = emotional_velocity(rvs, rothers, 0.4, 1.3);
        CHECK(distance(rvs, rotated(vs, theta)) <= 1e-12);
        CHECK(distance(rvc, rotated(vc, theta)) <= 1e-12);
    }
}

TEST_CASE("reference speed")
{
    CHECK(reference_speed({3.0, 4.0}, 1.4) == 5.0);
    CHECK(reference_speed({0.0, 0.0}, 1.4) == 1.4);
}
