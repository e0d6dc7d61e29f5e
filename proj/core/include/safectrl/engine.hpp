#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>

#include "safectrl/backends.hpp"
#include "safectrl/encoder.hpp"
#include "safectrl/net.hpp"
#include "safectrl/reward.hpp"
#include "safectrl/strategies.hpp"

namespace safectrl {

struct EngineConfig {
    RewardConfig reward;
    int max_iterations = 10;
    PromptBudget budget;
    int max_consecutive_errors = 3;  // errored iterations before aborting
};

/// Strategy-selection policy: greedy RL over frozen weights, a fixed
/// strategy, or seeded uniform random.
struct Policy {
    enum class Kind { rl, fixed, random };

    Kind kind = Kind::fixed;
    std::shared_ptr<const Mlp<float>> network;  // rl: selects by argmax (eps=0)
    StrategyId fixed_id = StrategyId::minimal;
    std::uint64_t seed = 0;

    static Policy rl(Mlp<float> net);
    static Policy rl(std::shared_ptr<const Mlp<float>> net);
    static Policy fixed(StrategyId id);
    static Policy random(std::uint64_t seed);

    std::string name() const;
};

/// Per-episode view of a policy; the random variant derives its stream from
/// (seed, episode key) so runs are reproducible regardless of scheduling.
class PolicySession {
public:
    PolicySession(const Policy& policy, const std::string& episode_key);
    StrategyId select(const StateVector36& state);

private:
    const Policy* policy_;
    std::mt19937_64 rng_;
};

/// Optional cross-episode context threaded through safeguard().
struct EpisodeContext {
    RunHistory* history = nullptr;  // null -> episode-local history
    AgentSnapshot agent;            // epsilon/lr/progress surfaced to encoder
    CategoryStats category_stats;
};

struct SafeguardOutcome {
    std::string final_response;
    bool stopped_early = false;
    bool aborted = false;  // consecutive-error budget exhausted
    int iterations = 0;    // n >= 1
    std::vector<InteractionRecord> trajectory;
    double final_p_score = 0.0;
    MetricScores final_scores;
    std::optional<InteractionRecord> best;  // H*, argmax reward over trajectory
};

/// Runs the generate-evaluate-refine loop. Iteration 1 uses the safety
/// preamble; refinement stops at should_stop or the iteration budget, in
/// which case the best-scoring response is returned.
SafeguardOutcome safeguard(const PromptRecord& prompt, const Policy& policy,
                           const EngineConfig& cfg, const BackendSet& backends,
                           EpisodeContext ctx = {});

struct PlainOutcome {
    std::string response;
    MetricScores scores;
    double reward = 0.0;
    bool error = false;
    StageLatency latency;
};

/// Single unsafeguarded generation: no safety preamble, no refinement.
PlainOutcome run_plain(const PromptRecord& prompt, const EngineConfig& cfg,
                       const BackendSet& backends);

/// Post-safeguard consistency stage: replays (user prompt, H* response) as
/// history under the consistency instruction; the refined system prompt is
/// deliberately absent.
std::pair<std::string, MetricScores> post_safeguard(const PromptRecord& prompt,
                                                    const InteractionRecord& best,
                                                    const EngineConfig& cfg,
                                                    const BackendSet& backends);

struct RetentionOutcome {
    PlainOutcome plain;
    SafeguardOutcome safeguarded;
    std::string post_response;
    MetricScores post_scores;
    double post_reward = 0.0;

    double plain_reward() const { return plain.reward; }
    double safeguarded_reward() const { return safeguarded.final_p_score; }
};

/// Three-stage protocol: baseline generation, safeguard optimisation,
/// post-safeguard evaluation. Throws BackendError when stage 2 yields no
/// successful interaction to replay.
RetentionOutcome run_retention(const PromptRecord& prompt, const Policy& policy,
                               const EngineConfig& cfg, const BackendSet& backends,
                               EpisodeContext ctx = {});

}  // namespace safectrl
