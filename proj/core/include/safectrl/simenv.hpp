#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "safectrl/agent.hpp"
#include "safectrl/encoder.hpp"
#include "safectrl/reward.hpp"

namespace safectrl {

/// Deterministic surrogate for the generate+evaluate loop: per-category
/// initial (q, s) levels and per-strategy score increments, with a planted
/// best strategy per category.
struct SynthWorld {
    struct Effect {
        double dq = 0.0;
        double ds = 0.0;
    };

    std::string name = "world";
    std::vector<HarmCode> categories;
    int max_iterations = 10;
    double noise = 0.02;  // uniform jitter in [-noise, noise]
    int episodes_per_category = 25;
    RewardConfig reward;

    std::map<HarmCode, std::pair<double, double>> initial;  // (q0, s0)
    std::map<HarmCode, std::array<Effect, kNumStrategies>> effects;
    std::map<HarmCode, StrategyId> planted_best;

    /// Verifies by exhaustive noise-free rollout that each planted strategy
    /// is the unique terminal-reward argmax. Throws std::invalid_argument.
    void validate() const;

    /// The shipped 4-category fixture (S4, S10, S9, S12).
    static SynthWorld fixture4();
};

/// Key-value world file format (one `key = value` per line, '#' comments).
SynthWorld load_world(const std::string& path);
void save_world(const SynthWorld& world, const std::string& path);

struct Rollout {
    double terminal_reward = 0.0;
    double total_reward = 0.0;
    int steps = 0;
    bool stopped = false;
};

/// Plays one episode with a fixed strategy. sigma < 0 uses the world's noise.
Rollout rollout_fixed(const SynthWorld& world, HarmCode category, StrategyId strategy,
                      double sigma, std::uint64_t seed);

/// Exhaustively rolls out all 11 fixed policies and returns the argmax with
/// its mean terminal reward (noise-free single rollout, or seed-averaged over
/// `seeds` rollouts when the world has noise).
std::pair<StrategyId, double> oracle_best_fixed(const SynthWorld& world, HarmCode category,
                                                int seeds = 100);

/// Gated reward of the untouched initial scores (the "plain" baseline).
double plain_reward(const SynthWorld& world, HarmCode category);

/// reset/step adapter over a SynthWorld, cycling categories round-robin.
/// States come from the shared encoder; one RunHistory per category persists
/// across that category's episodes.
class SimEnvSession : public TrainEnv {
public:
    SimEnvSession(SynthWorld world, std::uint64_t seed);

    StateVector36 reset() override;
    StepResult step(int action) override;
    void agent_signal(double epsilon, double learning_rate) override;

    /// Starts an episode in a specific category (evaluation helper).
    StateVector36 reset_category(HarmCode category);

    HarmCode current_category() const;
    const SynthWorld& world() const { return world_; }

private:
    StateVector36 encode_state(int next_iteration) const;
    StateVector36 begin_episode();
    double jitter();

    SynthWorld world_;
    std::mt19937_64 rng_;
    double epsilon_ = 1.0;
    double learning_rate_ = 0.0;

    std::size_t category_pos_ = 0;
    int episodes_in_category_ = 0;
    int episodes_completed_ = 0;

    std::vector<RunHistory> histories_;  // one per category
    std::vector<PromptRecord> prompts_;
    std::vector<CategoryStats> stats_;

    EpisodeState ep_;
    double q_ = 0.0;
    double s_ = 0.0;
    bool episode_active_ = false;
};

}  // namespace safectrl
