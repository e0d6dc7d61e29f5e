#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "safectrl/strategy_id.hpp"
#include "safectrl/types.hpp"

namespace safectrl {

// Per-stage wall-clock latencies for one refinement iteration, in seconds.
struct StageLatency {
    double generate_s = 0.0;
    double evaluate_s = 0.0;
    double refine_s = 0.0;
};

/// One generate+evaluate pass of the safeguard loop.
struct InteractionRecord {
    int iteration = 0;  // k, 0-based within the episode
    std::string system_prompt;
    std::string user_input;
    std::string response;
    MetricScores scores;
    double reward = 0.0;  // gated reward of `scores`
    std::optional<StrategyId> strategy;  // strategy that produced system_prompt
    bool error = false;
    StageLatency latency;
};

struct StrategyStats {
    int use_count = 0;
    double mean_reward = 0.0;
};

struct CachedOutcome {
    double reward = 0.0;
    std::string response;
};

// Bounded histories read by the state encoder. One instance per episode
// stream; never shared across concurrently running episodes.
class RunHistory {
public:
    static constexpr std::size_t kPerformanceCapacity = 50;
    static constexpr std::size_t kCacheCapacity = 2000;

    struct WindowEntry {
        double reward = 0.0;
        std::optional<StrategyId> strategy;
        bool error = false;
    };

    /// Appends a record to the current episode buffer and the capacity-50
    /// performance window (oldest entry evicted when full).
    void push(const InteractionRecord& record);

    /// Clears the episode buffer; the performance window and cache persist.
    void start_episode();

    /// Clears everything (per-category reset during training).
    void reset();

    const std::vector<InteractionRecord>& episode_buffer() const { return episode_buffer_; }
    const std::deque<WindowEntry>& performance_window() const { return window_; }

    /// Rewards of the current episode, oldest first.
    std::vector<double> episode_rewards() const;

    /// Per-strategy usage and mean reward over the performance window.
    std::unordered_map<int, StrategyStats> strategy_stats() const;

    int total_strategy_uses() const;

    void cache_store(const std::string& fingerprint, CachedOutcome outcome);
    std::optional<CachedOutcome> cache_lookup(const std::string& fingerprint) const;
    std::size_t cache_size() const { return cache_.size(); }

    // Direct setters used by test fixtures that pin encoder snapshots.
    void set_episode_buffer(std::vector<InteractionRecord> records);
    void set_performance_window(std::deque<WindowEntry> window);

private:
    std::vector<InteractionRecord> episode_buffer_;
    std::deque<WindowEntry> window_;
    std::unordered_map<std::string, CachedOutcome> cache_;
    std::deque<std::string> cache_order_;  // FIFO eviction
};

}  // namespace safectrl
