#pragma once

#include <cstdint>

namespace hazcrowd {

/// Independent random streams used by the simulation. Each stream is keyed
/// by (seed, purpose, entity id, step) so draws never depend on the order in
/// which agents are processed.
enum class StreamPurpose : std::uint64_t {
    personality = 1,
    thresholds = 2,
    dose = 3,
    candidates = 4,
    preset_layout = 5,
};

/// SplitMix64 generator with a Box-Muller normal transform.
///
/// Both the generator and the transform are fixed here (rather than taken
/// from <random>) so that sequences are identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t state) : state_(state) {}

    /// Stream for a (seed, purpose, id, step) key.
    static Rng stream(std::uint64_t seed, StreamPurpose purpose, std::int64_t id = 0, std::int64_t step = 0);

    std::uint64_t next_u64();

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi);

    /// Normal draw with the given mean and standard deviation.
    /// A zero standard deviation returns the mean exactly.
    double normal(double mean, double stddev);

private:
    std::uint64_t state_;
};

} // namespace hazcrowd
