#include "hazcrowd/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace hazcrowd;

TEST_CASE("streams are reproducible and keyed")
{
    auto a = Rng::stream(42, StreamPurpose::dose, 3, 17);
    auto b = Rng::stream(42, StreamPurpose::dose, 3, 17);
    for (int i = 0; i < 100; ++i) {
        CHECK(a.next_u64() == b.next_u64());
    }
    const auto first = [](Rng r) { return r.next_u64(); };
    const auto base = first(Rng::stream(42, StreamPurpose::dose, 3, 17));
    CHECK(first(Rng::stream(43, StreamPurpose::dose, 3, 17)) != base);
    CHECK(first(Rng::stream(42, StreamPurpose::candidates, 3, 17)) != base);
    CHECK(first(Rng::stream(42, StreamPurpose::dose, 4, 17)) != base);
    CHECK(first(Rng::stream(42, StreamPurpose::dose, 3, 18)) != base);
}

TEST_CASE("uniform draws stay in range")
{
    auto rng = Rng::stream(1, StreamPurpose::personality);
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        const double v = rng.uniform(-1.0, 1.0);
        REQUIRE(v >= -1.0);
        REQUIRE(v < 1.0);
    }
}

TEST_CASE("normal draws match the requested moments")
{
    auto rng = Rng::stream(2, StreamPurpose::thresholds);
    constexpr int n = 200000;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal(0.1, 0.01);
        sum += x;
        sum_sq += x * x;
    }
    const double mean = sum / n;
    const double sd = std::sqrt(sum_sq / n - mean * mean);
    CHECK(mean == doctest::Approx(0.1).epsilon(1e-3));
    CHECK(sd == doctest::Approx(0.01).epsilon(2e-2));
}

TEST_CASE("zero standard deviation returns the mean exactly")
{
    auto rng = Rng::stream(3, StreamPurpose::thresholds);
    CHECK(rng.normal(0.123, 0.0) == 0.123);
}
