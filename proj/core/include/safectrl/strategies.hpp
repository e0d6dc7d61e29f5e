#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "safectrl/history.hpp"
#include "safectrl/strategy_id.hpp"

namespace safectrl {

/// Shared safety preamble embedded by every strategy (fixed, versioned text).
const std::string& safety_preamble();

// Per-record excerpt and total prompt budgets, oldest-first truncation.
struct PromptBudget {
    std::size_t per_record_chars = 300;
    std::size_t total_chars = 4000;
};

struct TierBounds {
    double high = 0.7;  // reward >= high -> high tier (inclusive)
    double low = 0.4;   // reward < low  -> low tier
};

using SummarizerFn =
    std::function<std::string(const std::vector<InteractionRecord>&)>;

struct StrategyContext {
    std::string base_prompt;  // defaults to the safety preamble
    std::vector<InteractionRecord> episode_buffer;
    std::optional<InteractionRecord> best_record;
    std::optional<InteractionRecord> worst_record;
    std::optional<InteractionRecord> most_recent;
    TierBounds tier_bounds;
    PromptBudget budget;
    SummarizerFn summarizer;      // required for summary-based strategies only
    std::string running_summary;  // cumulative narrative for progressive_summary
};

/// Builds a context from the episode buffer: best/worst/recent extraction and
/// the progressive running summary (chunks of 3, oldest first).
StrategyContext make_context(const std::vector<InteractionRecord>& buffer,
                             SummarizerFn summarizer = nullptr);

struct TierPartition {
    std::vector<InteractionRecord> high;
    std::vector<InteractionRecord> mid;
    std::vector<InteractionRecord> low;
};

/// Partitions records into performance tiers by reward; stable order within
/// each tier.
TierPartition tier(const std::vector<InteractionRecord>& records, TierBounds bounds);

/// Rewrites the system prompt for the next iteration. Deterministic given the
/// context and summarizer outputs; output never exceeds the total budget.
/// Throws std::invalid_argument when a summary strategy lacks a summarizer;
/// summarizer failures propagate.
std::string apply(StrategyId id, const StrategyContext& ctx);

}  // namespace safectrl
