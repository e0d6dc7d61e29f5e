#include "safectrl/agent.hpp"

#include <cmath>
#include <stdexcept>

namespace safectrl {

TrainConfig TrainConfig::desk() {
    TrainConfig cfg;
    cfg.total_timesteps = 50'000;
    cfg.hidden_dims = {64, 64};
    return cfg;
}

void TrainConfig::validate() const {
    if (total_timesteps <= 0) throw std::invalid_argument("total_timesteps must be > 0");
    if (!(final_epsilon > 0.0 && final_epsilon <= 1.0))
        throw std::invalid_argument("final_epsilon outside (0,1]");
    if (!(exploration_fraction > 0.0 && exploration_fraction <= 1.0))
        throw std::invalid_argument("exploration_fraction outside (0,1]");
    if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("gamma outside [0,1]");
    if (batch_size <= 0) throw std::invalid_argument("batch_size must be > 0");
    if (learning_rate <= 0.0) throw std::invalid_argument("learning_rate must be > 0");
    if (warmup < batch_size)
        throw std::invalid_argument("warmup must cover at least one batch");
}

std::vector<int> TrainConfig::network_dims() const {
    std::vector<int> dims;
    dims.push_back(static_cast<int>(StateVector36::kSize));
    for (int h : hidden_dims) dims.push_back(h);
    dims.push_back(kNumStrategies);
    return dims;
}

double epsilon_at(long long t, const TrainConfig& cfg) {
    const double span = cfg.exploration_fraction * static_cast<double>(cfg.total_timesteps);
    if (span <= 0.0 || t >= span) return cfg.final_epsilon;
    const double frac = static_cast<double>(t) / span;
    return 1.0 + frac * (cfg.final_epsilon - 1.0);
}

int select_action(const Eigen::VectorXf& qvalues, double epsilon, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    if (coin(rng) < epsilon) {
        std::uniform_int_distribution<int> pick(0, static_cast<int>(qvalues.size()) - 1);
        return pick(rng);
    }
    int best = 0;
    for (int i = 1; i < qvalues.size(); ++i)
        if (qvalues(i) > qvalues(best)) best = i;  // ties keep the lowest index
    return best;
}

Eigen::VectorXf to_input(const StateVector36& state) {
    Eigen::VectorXf v(static_cast<int>(StateVector36::kSize));
    for (std::size_t i = 0; i < StateVector36::kSize; ++i)
        v(static_cast<int>(i)) = static_cast<float>(state.values[i]);
    return v;
}

namespace {

constexpr float kHuberDelta = 1.0f;

float huber(float e) {
    const float a = std::abs(e);
    return a <= kHuberDelta ? 0.5f * e * e : kHuberDelta * (a - 0.5f * kHuberDelta);
}

float huber_grad(float e) {
    return std::max(-kHuberDelta, std::min(kHuberDelta, e));
}

}  // namespace

double train_step(Mlp<float>& online, const Mlp<float>& target,
                  const std::vector<const Transition*>& batch,
                  SgdMomentum<float>& opt, const TrainConfig& cfg) {
    const int n = static_cast<int>(batch.size());
    const int in_dim = online.input_size();
    const int out_dim = online.output_size();

    Eigen::MatrixXf states(in_dim, n), next_states(in_dim, n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < in_dim; ++i) {
            states(i, j) = batch[static_cast<std::size_t>(j)]->state[static_cast<std::size_t>(i)];
            next_states(i, j) =
                batch[static_cast<std::size_t>(j)]->next_state[static_cast<std::size_t>(i)];
        }
    }

    const Eigen::MatrixXf next_q = target.forward_batch(next_states);

    Mlp<float>::ForwardCache cache;
    const Eigen::MatrixXf q = online.forward_batch(states, &cache);

    // Loss = mean over batch of Huber(q[a] - y); gradient flows only through
    // the taken action's output.
    Eigen::MatrixXf grad = Eigen::MatrixXf::Zero(out_dim, n);
    double loss = 0.0;
    for (int j = 0; j < n; ++j) {
        const Transition& t = *batch[static_cast<std::size_t>(j)];
        float y = t.reward;
        if (!t.done)
            y += static_cast<float>(cfg.gamma) * next_q.col(j).maxCoeff();
        const float e = q(t.action, j) - y;
        loss += huber(e);
        grad(t.action, j) = huber_grad(e) / static_cast<float>(n);
    }
    loss /= n;
    if (!std::isfinite(loss))
        throw std::runtime_error("non-finite training loss at batch update");

    opt.step(online, online.backward(cache, grad));
    return loss;
}

TrainResult train(TrainEnv& env, const TrainConfig& cfg) {
    cfg.validate();

    TrainResult result;
    result.network = Mlp<float>(cfg.network_dims());
    result.network.init(cfg.seed);
    Mlp<float> target = result.network;

    ReplayBuffer buffer(cfg.replay_capacity);
    SgdMomentum<float> opt(cfg.learning_rate, cfg.momentum);
    std::mt19937_64 action_rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    std::mt19937_64 sample_rng(cfg.seed ^ 0xc2b2ae3d27d4eb4fULL);

    env.agent_signal(1.0, cfg.learning_rate);
    StateVector36 state = env.reset();
    TrainingLog::Episode episode;
    int episode_index = 0;

    for (long long t = 0; t < cfg.total_timesteps; ++t) {
        const double eps = epsilon_at(t, cfg);
        env.agent_signal(eps, cfg.learning_rate);

        const Eigen::VectorXf q = result.network.forward(to_input(state));
        const int action = select_action(q, eps, action_rng);
        TrainEnv::StepResult step = env.step(action);

        Transition tr;
        for (std::size_t i = 0; i < StateVector36::kSize; ++i) {
            tr.state[i] = static_cast<float>(state.values[i]);
            tr.next_state[i] = static_cast<float>(step.state.values[i]);
        }
        tr.action = action;
        tr.reward = static_cast<float>(step.reward);
        tr.done = step.done;
        buffer.push(std::move(tr));

        episode.total_reward += step.reward;
        episode.terminal_reward = step.reward;
        ++episode.steps;

        if (buffer.size() >= static_cast<std::size_t>(cfg.warmup) &&
            t % cfg.train_every == 0) {
            const auto batch =
                buffer.sample(static_cast<std::size_t>(cfg.batch_size), sample_rng);
            result.log.losses.push_back(train_step(result.network, target, batch, opt, cfg));
        }
        if ((t + 1) % cfg.target_sync_every == 0) target = result.network;

        if (step.done) {
            episode.index = episode_index++;
            episode.epsilon = eps;
            result.log.episodes.push_back(episode);
            episode = {};
            state = env.reset();
        } else {
            state = step.state;
        }
    }
    result.log.steps_run = cfg.total_timesteps;
    return result;
}

}  // namespace safectrl
