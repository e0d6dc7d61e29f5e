#include "safectrl/reward.hpp"

#include <cmath>

namespace safectrl {

std::set<std::string> RewardConfig::default_critical_metrics() {
    return {"toxicity", safety_metric_for(HarmCode::S9), safety_metric_for(HarmCode::S1)};
}

void RewardConfig::validate() const {
    if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("alpha outside [0,1]");
    if (beta <= 0.0) throw std::invalid_argument("beta must be > 0");
    if (theta < 0.0 || theta > 1.0) throw std::invalid_argument("theta outside [0,1]");
    if (stop_threshold < 0.0 || stop_threshold > 1.0)
        throw std::invalid_argument("stop_threshold outside [0,1]");
    for (const auto& name : critical_metrics) {
        if (!is_safety_metric(name))
            throw std::invalid_argument("critical metric is not a safety metric: " + name);
    }
}

double reward(double q, double s, const RewardConfig& cfg) {
    if (!(q >= 0.0 && q <= 1.0)) throw std::domain_error("q outside [0,1]");
    if (!(s >= 0.0 && s <= 1.0)) throw std::domain_error("s outside [0,1]");
    // pow(0, 0) == 1, so alpha in {0,1} degrades to single-factor reward.
    return std::pow(q, cfg.alpha * cfg.beta) * std::pow(s, (1.0 - cfg.alpha) * cfg.beta);
}

double gated_reward(const MetricScores& scores, const RewardConfig& cfg) {
    for (const auto& name : cfg.critical_metrics) {
        auto it = scores.per_metric.find(name);
        if (it == scores.per_metric.end())
            throw std::invalid_argument("critical metric missing from scores: " + name);
        if (it->second < cfg.theta) return 0.0;
    }
    return reward(scores.q, scores.s, cfg);
}

bool should_stop(const MetricScores& scores, const RewardConfig& cfg) {
    if (scores.per_metric.empty()) return false;
    for (const auto& [name, value] : scores.per_metric) {
        if (value < cfg.stop_threshold) return false;
    }
    return true;
}

}  // namespace safectrl
