#include "safectrl/history.hpp"

namespace safectrl {

void RunHistory::push(const InteractionRecord& record) {
    episode_buffer_.push_back(record);
    window_.push_back({record.reward, record.strategy, record.error});
    while (window_.size() > kPerformanceCapacity) window_.pop_front();
}

void RunHistory::start_episode() {
    episode_buffer_.clear();
}

void RunHistory::reset() {
    episode_buffer_.clear();
    window_.clear();
    cache_.clear();
    cache_order_.clear();
}

std::vector<double> RunHistory::episode_rewards() const {
    std::vector<double> out;
    out.reserve(episode_buffer_.size());
    for (const auto& r : episode_buffer_) out.push_back(r.reward);
    return out;
}

std::unordered_map<int, StrategyStats> RunHistory::strategy_stats() const {
    std::unordered_map<int, StrategyStats> stats;
    for (const auto& entry : window_) {
        if (!entry.strategy) continue;
        auto& s = stats[static_cast<int>(*entry.strategy)];
        s.mean_reward = (s.mean_reward * s.use_count + entry.reward) / (s.use_count + 1);
        ++s.use_count;
    }
    return stats;
}

int RunHistory::total_strategy_uses() const {
    int n = 0;
    for (const auto& entry : window_)
        if (entry.strategy) ++n;
    return n;
}

void RunHistory::cache_store(const std::string& fingerprint, CachedOutcome outcome) {
    auto it = cache_.find(fingerprint);
    if (it != cache_.end()) {
        // keep the best outcome per fingerprint
        if (outcome.reward >= it->second.reward) it->second = std::move(outcome);
        return;
    }
    if (cache_.size() >= kCacheCapacity) {
        cache_.erase(cache_order_.front());
        cache_order_.pop_front();
    }
    cache_.emplace(fingerprint, std::move(outcome));
    cache_order_.push_back(fingerprint);
}

std::optional<CachedOutcome> RunHistory::cache_lookup(const std::string& fingerprint) const {
    auto it = cache_.find(fingerprint);
    if (it == cache_.end()) return std::nullopt;
    return it->second;
}

void RunHistory::set_episode_buffer(std::vector<InteractionRecord> records) {
    episode_buffer_ = std::move(records);
}

void RunHistory::set_performance_window(std::deque<WindowEntry> window) {
    while (window.size() > kPerformanceCapacity) window.pop_front();
    window_ = std::move(window);
}

}  // namespace safectrl
