#include "hazcrowd/rng.hpp"

#include <cmath>
#include <numbers>

namespace hazcrowd {

namespace {

std::uint64_t mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t golden_gamma = 0x9e3779b97f4a7c15ULL;

} // namespace

Rng Rng::stream(std::uint64_t seed, StreamPurpose purpose, std::int64_t id, std::int64_t step)
{
    std::uint64_t key = mix64(seed + golden_gamma);
    key = mix64(key ^ (static_cast<std::uint64_t>(purpose) * golden_gamma));
    key = mix64(key ^ (static_cast<std::uint64_t>(id) + 0x632be59bd9b4e019ULL));
    key = mix64(key ^ (static_cast<std::uint64_t>(step) + 0x2545f4914f6cdd1dULL));
    return Rng(key);
}

std::uint64_t Rng::next_u64()
{
    state_ += golden_gamma;
    return mix64(state_);
}

double Rng::uniform()
{
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi)
{
    return lo + (hi - lo) * uniform();
}

double Rng::normal(double mean, double stddev)
{
    // Box-Muller, cosine branch only. u1 is drawn from (0, 1] to keep log finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    if (stddev == 0.0) {
        return mean;
    }
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    return mean + stddev * z;
}

} // namespace hazcrowd
