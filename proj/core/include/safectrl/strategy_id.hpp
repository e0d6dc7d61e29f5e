#pragma once

#include <array>
#include <optional>
#include <string>

namespace safectrl {

// The 11-member action space. Index order is the agent's action id order
// and must never change.
enum class StrategyId : int {
    minimal = 0,
    raw_history = 1,
    ai_summary_only = 2,
    ai_enhanced = 3,
    progressive_summary = 4,
    hybrid = 5,
    best_worst_recent = 6,
    performance_tiered = 7,
    trajectory_focused = 8,
    contrast_learning = 9,
    adaptive_performance = 10,
};

inline constexpr int kNumStrategies = 11;

const std::array<std::string, kNumStrategies>& strategy_names();

std::string to_string(StrategyId id);

/// Parses a strategy name or numeric index. Empty optional if unknown.
std::optional<StrategyId> parse_strategy(const std::string& text);

}  // namespace safectrl
