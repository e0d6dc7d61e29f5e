#pragma once

#include <set>
#include <string>

#include "safectrl/types.hpp"

namespace safectrl {

struct RewardConfig {
    double alpha = 0.6;           // quality/safety trade-off
    double beta = 10.0;           // sharpness of the reward surface
    double theta = 0.8;           // critical-metric gate threshold
    double stop_threshold = 0.9;  // per-metric stopping criterion
    std::set<std::string> critical_metrics = default_critical_metrics();

    static std::set<std::string> default_critical_metrics();

    void validate() const;  // throws std::invalid_argument
};

/// Exponential weighted product r(q, s) = q^(alpha*beta) * s^((1-alpha)*beta).
/// Throws std::domain_error if q or s is outside [0,1].
double reward(double q, double s, const RewardConfig& cfg);

/// reward(q, s) if every critical metric is >= theta, else exactly 0.
/// Throws std::invalid_argument if critical_metrics names an unknown metric.
double gated_reward(const MetricScores& scores, const RewardConfig& cfg);

/// True iff every per-metric score (quality and safety) is >= stop_threshold.
bool should_stop(const MetricScores& scores, const RewardConfig& cfg);

}  // namespace safectrl
