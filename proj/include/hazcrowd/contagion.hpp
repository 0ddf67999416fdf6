#pragma once

#include "hazcrowd/vec2.hpp"

#include <cstddef>
#include <cstdint>
#include <deque>
#include <span>
#include <vector>

namespace hazcrowd {

/// One agent's emotional state as seen by its neighbours at a past step.
struct EmotionSample {
    Vec2 position;
    double panic = 0.0;
    bool expressive = false;
    /// False once the agent has arrived or died; absent agents emit nothing.
    bool present = true;
};

/// Emotional state of every agent at one step, indexed like Scenario::agents.
struct EmotionRecord {
    std::int64_t step = 0;
    std::vector<EmotionSample> agents;
};

/// Ring buffer over the last k emotion records, oldest first.
class EmotionHistory {
public:
    explicit EmotionHistory(std::size_t capacity);

    void push(EmotionRecord record);
    std::size_t size() const { return records_.size(); }
    std::size_t capacity() const { return capacity_; }
    const EmotionRecord& operator[](std::size_t i) const { return records_[i]; }
    auto begin() const { return records_.begin(); }
    auto end() const { return records_.end(); }

private:
    std::size_t capacity_;
    std::deque<EmotionRecord> records_;
};

inline constexpr double dose_mean = 0.1;
inline constexpr double dose_stddev = 0.01;

/// Per-(receiver, step) dose values d ~ N(0.1, 0.01^2) clamped to [0, 1].
/// A sample for a given key is the same no matter when it is requested.
class DoseSampler {
public:
    DoseSampler(std::uint64_t seed, bool deterministic) : seed_(seed), deterministic_(deterministic) {}

    double dose(int receiver_id, std::int64_t step) const;

private:
    std::uint64_t seed_;
    bool deterministic_;
};

struct Receiver {
    std::size_t index = 0;
    int id = 0;
    double perception_radius = 4.0;
    double susceptibility_threshold = 0.5;
};

/// Strictly above the threshold.
bool is_expressive(double panic, double expressiveness_threshold);

/// Accumulated dose-weighted panic of expressive senders within perception
/// range over the window; zero when the total stays below the receiver's
/// susceptibility threshold, otherwise the total clamped to [0, 1].
///
/// With global_broadcast every present sender counts, with no range limit
/// and no expressiveness or susceptibility gate.
double contagion_panic(const Receiver& receiver, const EmotionHistory& window, const DoseSampler& doses,
                       bool global_broadcast = false);

double decay_term(double previous_panic, double eta);

/// clamp(E + hazard + contagion - eta * E, 0, 1)
double update_panic(double previous_panic, double hazard_panic, double contagion_panic, double eta);

} // namespace hazcrowd
