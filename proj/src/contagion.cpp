#include "hazcrowd/contagion.hpp"

#include "hazcrowd/rng.hpp"

#include <algorithm>
#include <stdexcept>

namespace hazcrowd {

EmotionHistory::EmotionHistory(std::size_t capacity) : capacity_(capacity)
{
    if (capacity_ == 0) {
        throw std::invalid_argument("EmotionHistory: capacity must be at least 1");
    }
}

void EmotionHistory::push(EmotionRecord record)
{
    if (records_.size() == capacity_) {
        records_.pop_front();
    }
    records_.push_back(std::move(record));
}

double DoseSampler::dose(int receiver_id, std::int64_t step) const
{
    if (deterministic_) {
        return dose_mean;
    }
    auto rng = Rng::stream(seed_, StreamPurpose::dose, receiver_id, step);
    return std::clamp(rng.normal(dose_mean, dose_stddev), 0.0, 1.0);
}

bool is_expressive(double panic, double expressiveness_threshold)
{
    return panic > expressiveness_threshold;
}

double contagion_panic(const Receiver& receiver, const EmotionHistory& window, const DoseSampler& doses,
                       bool global_broadcast)
{
    const double range_sq = receiver.perception_radius * receiver.perception_radius;
    double total = 0.0;
    for (const auto& record : window) {
        const auto& self = record.agents.at(receiver.index);
        double step_sum = 0.0;
        for (std::size_t j = 0; j < record.agents.size(); ++j) {
            if (j == receiver.index) {
                continue;
            }
            const auto& sender = record.agents[j];
            if (!sender.present) {
                continue;
            }
            if (!global_broadcast && (!sender.expressive || norm_sq(sender.position - self.position) > range_sq)) {
                continue;
            }
            step_sum += sender.panic;
        }
        if (step_sum > 0.0) {
            total += doses.dose(receiver.id, record.step) * step_sum;
        }
    }
    if (!global_broadcast && total < receiver.susceptibility_threshold) {
        return 0.0;
    }
    return std::clamp(total, 0.0, 1.0);
}

double decay_term(double previous_panic, double eta)
{
    return previous_panic * eta;
}

double update_panic(double previous_panic, double hazard_panic, double contagion_panic, double eta)
{
    const double delta = hazard_panic + contagion_panic - decay_term(previous_panic, eta);
    return std::clamp(previous_panic + delta, 0.0, 1.0);
}

} // namespace hazcrowd
