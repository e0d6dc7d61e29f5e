#include "safectrl/engine.hpp"

#include <chrono>

#include "safectrl/agent.hpp"
#include "safectrl/assets.hpp"
#include "safectrl/text_features.hpp"

namespace safectrl {

namespace {

std::uint64_t hash_key(const std::string& s, std::uint64_t seed) {
    std::uint64_t h = 1469598103934665603ULL ^ seed;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

class StageTimer {
public:
    StageTimer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace

Policy Policy::rl(Mlp<float> net) {
    return rl(std::make_shared<const Mlp<float>>(std::move(net)));
}

Policy Policy::rl(std::shared_ptr<const Mlp<float>> net) {
    Policy p;
    p.kind = Kind::rl;
    p.network = std::move(net);
    return p;
}

Policy Policy::fixed(StrategyId id) {
    Policy p;
    p.kind = Kind::fixed;
    p.fixed_id = id;
    return p;
}

Policy Policy::random(std::uint64_t seed) {
    Policy p;
    p.kind = Kind::random;
    p.seed = seed;
    return p;
}

std::string Policy::name() const {
    switch (kind) {
        case Kind::rl: return "rl";
        case Kind::fixed: return "fixed(" + to_string(fixed_id) + ")";
        case Kind::random: return "random";
    }
    return "?";
}

PolicySession::PolicySession(const Policy& policy, const std::string& episode_key)
    : policy_(&policy), rng_(hash_key(episode_key, policy.seed)) {}

StrategyId PolicySession::select(const StateVector36& state) {
    switch (policy_->kind) {
        case Policy::Kind::fixed:
            return policy_->fixed_id;
        case Policy::Kind::random: {
            std::uniform_int_distribution<int> pick(0, kNumStrategies - 1);
            return static_cast<StrategyId>(pick(rng_));
        }
        case Policy::Kind::rl: {
            const Eigen::VectorXf q = policy_->network->forward(to_input(state));
            int best = 0;
            for (int i = 1; i < q.size(); ++i)
                if (q(i) > q(best)) best = i;
            return static_cast<StrategyId>(best);
        }
    }
    return StrategyId::minimal;
}

SafeguardOutcome safeguard(const PromptRecord& prompt, const Policy& policy,
                           const EngineConfig& cfg, const BackendSet& backends,
                           EpisodeContext ctx) {
    if (cfg.max_iterations < 1)
        throw std::invalid_argument("max_iterations must be >= 1");

    RunHistory local_history;
    RunHistory& hist = ctx.history ? *ctx.history : local_history;
    hist.start_episode();
    backends.generator->begin_episode(prompt.text);

    SafeguardOutcome outcome;
    EpisodeState ep;
    ep.max_iterations = cfg.max_iterations;
    PolicySession session(policy, prompt.id.empty() ? prompt.text : prompt.id);

    std::string system_prompt = safety_preamble();
    std::optional<StrategyId> pending_strategy;
    double pending_refine_s = 0.0;
    int consecutive_errors = 0;

    SummarizerFn summarizer = [&](const std::vector<InteractionRecord>& records) {
        return backends.summarizer->summarize(records);
    };

    for (int k = 0; k < cfg.max_iterations; ++k) {
        InteractionRecord record;
        record.iteration = k;
        record.system_prompt = system_prompt;
        record.user_input = prompt.text;
        record.strategy = pending_strategy;
        record.latency.refine_s = pending_refine_s;
        pending_refine_s = 0.0;

        GenerateRequest gen_req;
        gen_req.system_prompt = system_prompt;
        gen_req.user_prompt = prompt.text;
        {
            StageTimer timer;
            try {
                record.response = backends.generator->generate(gen_req);
            } catch (const BackendError&) {
                record.error = true;
            }
            record.latency.generate_s = timer.seconds();
        }
        if (!record.error) {
            StageTimer timer;
            try {
                record.scores = backends.evaluator->evaluate(
                    {prompt.text, record.response, system_prompt});
                record.reward = gated_reward(record.scores, cfg.reward);
            } catch (const BackendError&) {
                record.error = true;
            }
            record.latency.evaluate_s = timer.seconds();
        }
        if (record.error) {
            record.scores = {};
            record.reward = 0.0;
            ++consecutive_errors;
        } else {
            consecutive_errors = 0;
        }

        if (k == 0) ep.first_reward = record.reward;
        ep.last_reward = record.reward;
        ep.best_reward = std::max(ep.best_reward, record.reward);
        ep.consecutive_errors = consecutive_errors;

        hist.push(record);

        if (!record.error && should_stop(record.scores, cfg.reward)) {
            outcome.stopped_early = true;
            break;
        }
        if (consecutive_errors >= cfg.max_consecutive_errors) {
            outcome.aborted = true;
            break;
        }
        if (k + 1 == cfg.max_iterations) break;

        // refine: encode the post-iteration state, pick a strategy, rewrite
        StageTimer timer;
        ep.iteration = k + 1;
        AgentSnapshot agent = ctx.agent;
        agent.total_strategy_uses = hist.total_strategy_uses();
        const StateVector36 state = encode(hist, ep, agent, prompt, ctx.category_stats);
        const StrategyId action = session.select(state);
        StrategyContext strategy_ctx = make_context(hist.episode_buffer(), summarizer);
        strategy_ctx.tier_bounds = {};
        strategy_ctx.budget = cfg.budget;
        system_prompt = apply(action, strategy_ctx);
        pending_strategy = action;
        pending_refine_s = timer.seconds();
    }

    outcome.trajectory = hist.episode_buffer();
    outcome.iterations = static_cast<int>(outcome.trajectory.size());

    for (const auto& rec : outcome.trajectory) {
        if (rec.error) continue;
        if (!outcome.best || rec.reward > outcome.best->reward) outcome.best = rec;
    }
    const InteractionRecord* final_record = nullptr;
    if (outcome.stopped_early) {
        final_record = &outcome.trajectory.back();
    } else if (outcome.best) {
        // budget exhausted: return the best-scoring response
        for (const auto& rec : outcome.trajectory)
            if (!rec.error && rec.reward == outcome.best->reward) {
                final_record = &rec;
                break;
            }
    }
    if (final_record) {
        outcome.final_response = final_record->response;
        outcome.final_scores = final_record->scores;
        outcome.final_p_score = final_record->reward;
    }
    if (outcome.best)
        hist.cache_store(prompt_fingerprint(prompt.text),
                         {outcome.best->reward, outcome.best->response});
    return outcome;
}

PlainOutcome run_plain(const PromptRecord& prompt, const EngineConfig& cfg,
                       const BackendSet& backends) {
    backends.generator->begin_episode(prompt.text);
    PlainOutcome out;
    GenerateRequest req;
    req.user_prompt = prompt.text;  // no system prompt at all
    {
        StageTimer timer;
        try {
            out.response = backends.generator->generate(req);
        } catch (const BackendError&) {
            out.error = true;
        }
        out.latency.generate_s = timer.seconds();
    }
    if (!out.error) {
        StageTimer timer;
        try {
            out.scores = backends.evaluator->evaluate({prompt.text, out.response, ""});
            out.reward = gated_reward(out.scores, cfg.reward);
        } catch (const BackendError&) {
            out.error = true;
            out.scores = {};
            out.reward = 0.0;
        }
        out.latency.evaluate_s = timer.seconds();
    }
    return out;
}

std::pair<std::string, MetricScores> post_safeguard(const PromptRecord& prompt,
                                                    const InteractionRecord& best,
                                                    const EngineConfig& cfg,
                                                    const BackendSet& backends) {
    if (best.response.empty())
        throw std::invalid_argument("post_safeguard needs a retained interaction");
    GenerateRequest req;
    req.system_prompt = consistency_instruction();
    req.prior_turns = {{"user", prompt.text}, {"assistant", best.response}};
    req.user_prompt = prompt.text;
    const std::string response = backends.generator->generate(req);
    MetricScores scores = backends.evaluator->evaluate(
        {prompt.text, response, consistency_instruction()});
    (void)cfg;
    return {response, std::move(scores)};
}

RetentionOutcome run_retention(const PromptRecord& prompt, const Policy& policy,
                               const EngineConfig& cfg, const BackendSet& backends,
                               EpisodeContext ctx) {
    RetentionOutcome out;
    out.plain = run_plain(prompt, cfg, backends);
    out.safeguarded = safeguard(prompt, policy, cfg, backends, ctx);
    if (!out.safeguarded.best)
        throw BackendError("retention stage 2 produced no successful interaction");
    std::tie(out.post_response, out.post_scores) =
        post_safeguard(prompt, *out.safeguarded.best, cfg, backends);
    out.post_reward = gated_reward(out.post_scores, cfg.reward);
    return out;
}

}  // namespace safectrl
