#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "safectrl/encoder.hpp"
#include "safectrl/net.hpp"
#include "safectrl/replay.hpp"

namespace safectrl {

struct TrainConfig {
    long long total_timesteps = 5'000'000;
    double learning_rate = 1e-4;
    int batch_size = 256;
    double exploration_fraction = 0.5;
    double final_epsilon = 0.1;
    double gamma = 0.99;
    int target_sync_every = 1000;
    int warmup = 1000;           // transitions collected before updates start
    int train_every = 4;         // environment steps per gradient update
    double momentum = 0.9;
    std::size_t replay_capacity = 100'000;
    std::vector<int> hidden_dims = {512, 512, 256};
    std::uint64_t seed = 1;

    /// Offline profile: 50k steps on a [36,64,64,11] network.
    static TrainConfig desk();

    void validate() const;  // throws std::invalid_argument

    std::vector<int> network_dims() const;
};

/// Linear decay from 1.0 at t=0 to final_epsilon at
/// t = exploration_fraction * total_timesteps; constant afterwards.
double epsilon_at(long long t, const TrainConfig& cfg);

/// Epsilon-greedy over 11 action values; exploitation breaks ties towards the
/// lowest action index.
int select_action(const Eigen::VectorXf& qvalues, double epsilon, std::mt19937_64& rng);

Eigen::VectorXf to_input(const StateVector36& state);

/// One TD update on a sampled batch: y = r + gamma*(1-done)*max_a' Q_target,
/// Huber loss on the taken action, momentum SGD step. Returns the batch loss.
/// Throws std::runtime_error if the loss is not finite.
double train_step(Mlp<float>& online, const Mlp<float>& target,
                  const std::vector<const Transition*>& batch,
                  SgdMomentum<float>& opt, const TrainConfig& cfg);

/// Environment contract the trainer drives (reset/step).
class TrainEnv {
public:
    struct StepResult {
        StateVector36 state;
        double reward = 0.0;
        bool done = false;
    };

    virtual ~TrainEnv() = default;
    virtual StateVector36 reset() = 0;
    virtual StepResult step(int action) = 0;
    virtual int action_count() const { return kNumStrategies; }
    /// Lets the environment surface exploration state to the encoder.
    virtual void agent_signal(double /*epsilon*/, double /*learning_rate*/) {}
};

struct TrainingLog {
    struct Episode {
        int index = 0;
        int steps = 0;
        double total_reward = 0.0;
        double terminal_reward = 0.0;
        double epsilon = 0.0;
    };
    std::vector<Episode> episodes;
    std::vector<double> losses;
    long long steps_run = 0;
};

struct TrainResult {
    Mlp<float> network;
    TrainingLog log;
};

/// Runs the collect -> store -> sample -> update loop for total_timesteps.
/// Fully reproducible from cfg.seed.
TrainResult train(TrainEnv& env, const TrainConfig& cfg);

}  // namespace safectrl
