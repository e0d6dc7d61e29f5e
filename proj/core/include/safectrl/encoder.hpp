#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "safectrl/history.hpp"
#include "safectrl/types.hpp"

namespace safectrl {

// Fixed 36-feature observation. Values are addressed 1-based to match the
// feature table; storage is 0-based.
struct StateVector36 {
    static constexpr std::size_t kSize = 36;
    std::array<double, kSize> values{};

    double at(int index1) const { return values[static_cast<std::size_t>(index1 - 1)]; }
    double& at(int index1) { return values[static_cast<std::size_t>(index1 - 1)]; }
};

struct EpisodeState {
    int iteration = 0;
    int max_iterations = 10;
    double best_reward = 0.0;
    double first_reward = 0.0;
    double last_reward = 0.0;
    int consecutive_errors = 0;
};

struct AgentSnapshot {
    double epsilon = 0.0;
    double learning_rate = 0.0;
    int episodes_completed = 0;
    int category_index = 0;            // categories completed / current ordinal
    int prompt_index_in_category = 0;
    int total_strategy_uses = 0;
};

// Per-category corpus statistics (feature group 5).
struct CategoryStats {
    int prompt_count = 0;
    double avg_prompt_chars = 0.0;
    double std_prompt_chars = 0.0;
    double avg_word_count = 0.0;
    double avg_complexity = 0.0;  // already in [0,1]
};

/// Ordinary least-squares slope over the last <=5 scores, clamped to [-1,1].
/// Returns 0 for fewer than 2 scores.
double trend(const std::vector<double>& scores);

/// Recent-10 mean over first-5 mean, mapped to [0,1] via x/(1+x);
/// 0 when the early mean is 0. Shorter histories use the available prefix.
double improvement_ratio(const std::vector<double>& scores);

/// Deterministically encodes histories, episode state, agent state and prompt
/// features into the 36-feature observation. Degenerate inputs (empty
/// buffers, zero stats) produce the documented zero defaults.
StateVector36 encode(const RunHistory& history, const EpisodeState& ep,
                     const AgentSnapshot& agent, const PromptRecord& prompt,
                     const CategoryStats& category_stats);

}  // namespace safectrl
