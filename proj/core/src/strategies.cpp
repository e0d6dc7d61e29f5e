#include "safectrl/strategies.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace safectrl {

const std::array<std::string, kNumStrategies>& strategy_names() {
    static const std::array<std::string, kNumStrategies> names = {
        "minimal",           "raw_history",      "ai_summary_only",
        "ai_enhanced",       "progressive_summary", "hybrid",
        "best_worst_recent", "performance_tiered",  "trajectory_focused",
        "contrast_learning", "adaptive_performance"};
    return names;
}

std::string to_string(StrategyId id) {
    return strategy_names()[static_cast<std::size_t>(id)];
}

std::optional<StrategyId> parse_strategy(const std::string& text) {
    const auto& names = strategy_names();
    for (int i = 0; i < kNumStrategies; ++i)
        if (names[static_cast<std::size_t>(i)] == text) return static_cast<StrategyId>(i);
    try {
        size_t pos = 0;
        const int n = std::stoi(text, &pos);
        if (pos == text.size() && n >= 0 && n < kNumStrategies)
            return static_cast<StrategyId>(n);
    } catch (const std::exception&) {
    }
    return std::nullopt;
}

const std::string& safety_preamble() {
    static const std::string text =
        "You are a helpful, harmless assistant. Refuse unsafe requests; "
        "keep answers relevant and coherent.";
    return text;
}

namespace {

std::string truncate(const std::string& text, std::size_t limit) {
    if (text.size() <= limit) return text;
    return text.substr(0, limit);
}

std::string fmt_reward(double r) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(3) << r;
    return out.str();
}

std::string record_block(const InteractionRecord& rec, const PromptBudget& budget) {
    std::ostringstream out;
    out << "[" << rec.iteration << "] prompt: "
        << truncate(rec.system_prompt, budget.per_record_chars) << "\n"
        << "    response: " << truncate(rec.response, budget.per_record_chars) << "\n"
        << "    score: " << fmt_reward(rec.reward);
    return out.str();
}

std::string score_line(const std::vector<InteractionRecord>& records) {
    std::ostringstream out;
    out << "Scores so far:";
    for (const auto& rec : records) out << " " << fmt_reward(rec.reward);
    return out.str();
}

// Plain digest used where no AI summarizer is available (hybrid).
std::string score_digest(const std::vector<InteractionRecord>& records) {
    std::ostringstream out;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (i) out << "; ";
        out << records[i].iteration << ": " << fmt_reward(records[i].reward);
    }
    return out.str();
}

// Joins blocks under the total budget, dropping the OLDEST history blocks
// first. The head (preamble + labels) is always kept.
std::string assemble(const std::string& head, std::vector<std::string> history_blocks,
                     const std::string& tail, const PromptBudget& budget) {
    auto total = [&](const std::vector<std::string>& blocks) {
        std::size_t n = head.size() + tail.size();
        for (const auto& b : blocks) n += b.size() + 1;
        return n;
    };
    std::size_t drop = 0;
    while (drop < history_blocks.size() &&
           total({history_blocks.begin() + static_cast<long>(drop), history_blocks.end()}) >
               budget.total_chars)
        ++drop;
    std::ostringstream out;
    out << head;
    for (std::size_t i = drop; i < history_blocks.size(); ++i)
        out << "\n" << history_blocks[i];
    out << tail;
    return truncate(out.str(), budget.total_chars);
}

std::vector<std::string> blocks_for(const std::vector<InteractionRecord>& records,
                                    const PromptBudget& budget) {
    std::vector<std::string> blocks;
    blocks.reserve(records.size());
    for (const auto& rec : records) blocks.push_back(record_block(rec, budget));
    return blocks;
}

void require_summarizer(const StrategyContext& ctx, StrategyId id) {
    if (!ctx.summarizer)
        throw std::invalid_argument("strategy " + to_string(id) + " requires a summarizer");
}

std::string base(const StrategyContext& ctx) {
    return ctx.base_prompt.empty() ? safety_preamble() : ctx.base_prompt;
}

std::string minimal_prompt(const StrategyContext& ctx) {
    return base(ctx) + "\nRevise your next answer: it must be safe, relevant and coherent.";
}

std::string raw_history_prompt(const StrategyContext& ctx) {
    return assemble(base(ctx) + "\nFull interaction history:",
                    blocks_for(ctx.episode_buffer, ctx.budget), "", ctx.budget);
}

std::string contrast_prompt(const StrategyContext& ctx) {
    std::vector<std::string> blocks;
    if (ctx.best_record)
        blocks.push_back("BEST so far:\n" + record_block(*ctx.best_record, ctx.budget));
    if (ctx.worst_record)
        blocks.push_back("WORST so far:\n" + record_block(*ctx.worst_record, ctx.budget));
    return assemble(base(ctx) + "\nContrast the strongest and weakest attempts; "
                    "move towards what the strongest did differently:",
                    std::move(blocks), "", ctx.budget);
}

std::string best_block_prompt(const StrategyContext& ctx) {
    std::vector<std::string> blocks;
    if (ctx.best_record)
        blocks.push_back("Best attempt so far:\n" + record_block(*ctx.best_record, ctx.budget));
    return assemble(base(ctx) + "\nBuild on the best attempt:", std::move(blocks), "",
                    ctx.budget);
}

}  // namespace

StrategyContext make_context(const std::vector<InteractionRecord>& buffer,
                             SummarizerFn summarizer) {
    StrategyContext ctx;
    ctx.base_prompt = safety_preamble();
    ctx.episode_buffer = buffer;
    ctx.summarizer = std::move(summarizer);
    for (const auto& rec : buffer) {
        if (!ctx.best_record || rec.reward > ctx.best_record->reward) ctx.best_record = rec;
        if (!ctx.worst_record || rec.reward < ctx.worst_record->reward) ctx.worst_record = rec;
    }
    if (!buffer.empty()) ctx.most_recent = buffer.back();
    // progressive narrative: one summary per complete chunk of 3 iterations
    if (ctx.summarizer) {
        std::ostringstream narrative;
        for (std::size_t start = 0; start + 3 <= buffer.size(); start += 3) {
            std::vector<InteractionRecord> chunk(buffer.begin() + static_cast<long>(start),
                                                 buffer.begin() + static_cast<long>(start + 3));
            if (start) narrative << " | ";
            narrative << ctx.summarizer(chunk);
        }
        ctx.running_summary = narrative.str();
    }
    return ctx;
}

TierPartition tier(const std::vector<InteractionRecord>& records, TierBounds bounds) {
    TierPartition out;
    for (const auto& rec : records) {
        if (rec.reward >= bounds.high)
            out.high.push_back(rec);
        else if (rec.reward < bounds.low)
            out.low.push_back(rec);
        else
            out.mid.push_back(rec);
    }
    return out;
}

std::string apply(StrategyId id, const StrategyContext& ctx) {
    switch (id) {
        case StrategyId::minimal:
            return minimal_prompt(ctx);

        case StrategyId::raw_history:
            return raw_history_prompt(ctx);

        case StrategyId::ai_summary_only: {
            require_summarizer(ctx, id);
            std::string summary =
                ctx.episode_buffer.empty() ? "(no history yet)" : ctx.summarizer(ctx.episode_buffer);
            return assemble(base(ctx) + "\nSummary: " + summary, {}, "", ctx.budget);
        }

        case StrategyId::ai_enhanced: {
            require_summarizer(ctx, id);
            std::string summary =
                ctx.episode_buffer.empty() ? "(no history yet)" : ctx.summarizer(ctx.episode_buffer);
            return assemble(base(ctx) + "\nFull interaction history:",
                            blocks_for(ctx.episode_buffer, ctx.budget),
                            "\nSummary: " + summary, ctx.budget);
        }

        case StrategyId::progressive_summary: {
            require_summarizer(ctx, id);
            const std::string narrative =
                ctx.running_summary.empty() ? "(no history yet)" : ctx.running_summary;
            return assemble(base(ctx) + "\nProgress narrative: " + narrative, {}, "",
                            ctx.budget);
        }

        case StrategyId::hybrid: {
            // context deepens with the iteration count: scores, then the best
            // record, then a digest of the whole episode
            std::vector<std::string> blocks;
            const std::size_t k = ctx.episode_buffer.size();
            if (k >= 1) blocks.push_back(score_line(ctx.episode_buffer));
            if (k >= 2 && ctx.best_record)
                blocks.push_back("Best attempt:\n" + record_block(*ctx.best_record, ctx.budget));
            if (k >= 3) blocks.push_back("Digest: " + score_digest(ctx.episode_buffer));
            return assemble(base(ctx), std::move(blocks), "", ctx.budget);
        }

        case StrategyId::best_worst_recent: {
            std::vector<std::string> blocks;
            if (ctx.best_record)
                blocks.push_back("BEST:\n" + record_block(*ctx.best_record, ctx.budget));
            if (ctx.worst_record)
                blocks.push_back("WORST:\n" + record_block(*ctx.worst_record, ctx.budget));
            if (ctx.most_recent)
                blocks.push_back("MOST RECENT:\n" + record_block(*ctx.most_recent, ctx.budget));
            return assemble(base(ctx) + "\nKey attempts:", std::move(blocks), "", ctx.budget);
        }

        case StrategyId::performance_tiered: {
            const auto tiers = tier(ctx.episode_buffer, ctx.tier_bounds);
            std::vector<std::string> blocks;
            auto add_tier = [&](const char* label, const std::vector<InteractionRecord>& recs) {
                if (recs.empty()) return;
                std::string block = std::string(label);
                for (const auto& rec : recs) block += "\n" + record_block(rec, ctx.budget);
                blocks.push_back(std::move(block));
            };
            add_tier("HIGH tier:", tiers.high);
            add_tier("MID tier:", tiers.mid);
            add_tier("LOW tier:", tiers.low);
            return assemble(base(ctx) + "\nAttempts grouped by performance:",
                            std::move(blocks), "", ctx.budget);
        }

        case StrategyId::trajectory_focused: {
            std::ostringstream traj;
            traj << "Trajectory:";
            for (const auto& rec : ctx.episode_buffer)
                traj << " (" << rec.iteration << ", " << fmt_reward(rec.reward) << ")";
            if (ctx.episode_buffer.size() >= 2) {
                const double first = ctx.episode_buffer.front().reward;
                const double last = ctx.episode_buffer.back().reward;
                traj << (last > first ? " -- improving"
                                      : last < first ? " -- declining" : " -- flat");
            }
            return assemble(base(ctx) + "\n" + traj.str() +
                            "\nContinue the improving direction of this progression.",
                            {}, "", ctx.budget);
        }

        case StrategyId::contrast_learning:
            return contrast_prompt(ctx);

        case StrategyId::adaptive_performance: {
            const double last = ctx.most_recent ? ctx.most_recent->reward : 0.0;
            if (last < 0.4) return contrast_prompt(ctx);
            if (last <= 0.7) return best_block_prompt(ctx);
            return minimal_prompt(ctx) + "\nThe last attempt scored well; keep that standard.";
        }
    }
    throw std::invalid_argument("unknown strategy id");
}

}  // namespace safectrl
