#include "safectrl/encoder.hpp"

#include <algorithm>
#include <cmath>

#include "safectrl/text_features.hpp"

namespace safectrl {

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

double mean(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum / static_cast<double>(v.size());
}

double pop_std(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    double acc = 0.0;
    for (double x : v) acc += (x - m) * (x - m);
    return std::sqrt(acc / static_cast<double>(v.size()));
}

std::vector<double> last_n(const std::vector<double>& v, std::size_t n) {
    if (v.size() <= n) return v;
    return {v.end() - static_cast<long>(n), v.end()};
}

// 1 - normalized Gini coefficient of the usage distribution; 0 when unused.
double usage_balance(const std::unordered_map<int, StrategyStats>& stats) {
    std::array<double, kNumStrategies> counts{};
    double total = 0.0;
    for (const auto& [id, s] : stats) {
        counts[static_cast<std::size_t>(id)] = s.use_count;
        total += s.use_count;
    }
    if (total <= 0.0) return 0.0;
    double abs_diff = 0.0;
    for (double a : counts)
        for (double b : counts) abs_diff += std::abs(a - b);
    const double gini = abs_diff / (2.0 * kNumStrategies * total);
    return clamp01(1.0 - gini);
}

}  // namespace

double trend(const std::vector<double>& scores) {
    const auto window = last_n(scores, 5);
    const std::size_t n = window.size();
    if (n < 2) return 0.0;
    const double x_mean = (n - 1) / 2.0;
    const double y_mean = mean(window);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = static_cast<double>(i) - x_mean;
        num += dx * (window[i] - y_mean);
        den += dx * dx;
    }
    return std::clamp(num / den, -1.0, 1.0);
}

double improvement_ratio(const std::vector<double>& scores) {
    if (scores.empty()) return 0.0;
    const double recent = mean(last_n(scores, 10));
    std::vector<double> early(scores.begin(),
                              scores.begin() + static_cast<long>(std::min<std::size_t>(5, scores.size())));
    const double early_mean = mean(early);
    if (early_mean <= 0.0) return 0.0;
    const double ratio = recent / early_mean;
    return ratio / (1.0 + ratio);
}

StateVector36 encode(const RunHistory& history, const EpisodeState& ep,
                     const AgentSnapshot& agent, const PromptRecord& prompt,
                     const CategoryStats& category_stats) {
    StateVector36 v;

    // 1. training progress
    v.at(1) = clamp01(agent.category_index / 12.0);
    v.at(2) = category_stats.prompt_count > 0
                  ? clamp01(static_cast<double>(agent.prompt_index_in_category) /
                            category_stats.prompt_count)
                  : 0.0;
    v.at(3) = clamp01(agent.episodes_completed / 200.0);
    v.at(4) = clamp01(static_cast<double>(history.performance_window().size()) /
                      RunHistory::kPerformanceCapacity);
    v.at(5) = clamp01(static_cast<double>(history.cache_size()) / RunHistory::kCacheCapacity);

    // 2. performance statistics over the episode buffer
    const auto rewards = history.episode_rewards();
    const auto recent = last_n(rewards, 10);
    const double recent_std = pop_std(recent);
    v.at(6) = mean(recent);
    v.at(7) = recent_std;
    v.at(8) = mean(rewards);
    v.at(9) = trend(rewards);
    v.at(10) = improvement_ratio(rewards);
    v.at(11) = rewards.empty() ? 0.0 : 1.0 / (1.0 + recent_std);

    // 3. strategy performance over the capacity-50 window
    const auto stats = history.strategy_stats();
    double best_mean = 0.0;
    std::vector<double> used_means;
    for (const auto& [id, s] : stats) {
        if (s.use_count <= 0) continue;
        best_mean = std::max(best_mean, s.mean_reward);
        used_means.push_back(s.mean_reward);
    }
    v.at(12) = clamp01(best_mean);
    v.at(13) = clamp01(pop_std(used_means));
    v.at(14) = usage_balance(stats);
    v.at(15) = clamp01(agent.total_strategy_uses / 100.0);

    // 4. episode state
    v.at(16) = clamp01(static_cast<double>(ep.iteration) / std::max(ep.max_iterations, 1));
    v.at(17) = clamp01(ep.best_reward);
    v.at(18) = clamp01(0.5 * complexity_score(prompt.text) +
                       0.5 * std::min(word_count(prompt.text) / 250.0, 1.0));
    v.at(19) = std::clamp(ep.last_reward - ep.first_reward, -1.0, 1.0);

    // 5. category context
    v.at(20) = clamp01(category_stats.prompt_count / 1000.0);
    v.at(21) = clamp01(category_stats.avg_prompt_chars / 500.0);
    v.at(22) = clamp01(category_stats.std_prompt_chars / 200.0);
    v.at(23) = clamp01(category_stats.avg_word_count / 100.0);
    v.at(24) = clamp01(category_stats.avg_complexity);

    // 6. risk and errors
    v.at(25) = harm_category(prompt.category).risk_weight;
    const auto& buffer = history.episode_buffer();
    if (!buffer.empty()) {
        const std::size_t n = std::min<std::size_t>(10, buffer.size());
        int errors = 0;
        for (std::size_t i = buffer.size() - n; i < buffer.size(); ++i)
            if (buffer[i].error) ++errors;
        v.at(26) = static_cast<double>(errors) / static_cast<double>(n);
    }
    v.at(27) = clamp01(ep.consecutive_errors / 5.0);

    // 7. exploration
    v.at(28) = clamp01(agent.epsilon);
    v.at(29) = clamp01(agent.learning_rate / 1e-3);
    v.at(30) = recent_std < 0.05 ? 1.0 : 0.0;

    // 8. prompt features
    v.at(31) = sophistication(prompt.text);
    v.at(32) = instruction_density(prompt.text);

    // 9. hash fingerprint
    const auto hash = prompt_hash4(prompt.text);
    for (int i = 0; i < 4; ++i) v.at(33 + i) = hash[static_cast<std::size_t>(i)];

    return v;
}

}  // namespace safectrl
