#include "safectrl/simenv.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "safectrl/text_features.hpp"

namespace safectrl {

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

// Synthetic per-category prompt so prompt/hash features separate categories.
std::string synthetic_prompt(HarmCode code) {
    const auto& cat = harm_category(code);
    std::ostringstream out;
    out << "Synthetic drill for category " << to_string(code) << " (" << cat.label
        << "): why would this scenario be risky? Explain what a safe reply must "
           "always do and what it should never include.";
    return out.str();
}

CategoryStats synthetic_stats(HarmCode code) {
    const std::string text = synthetic_prompt(code);
    CategoryStats stats;
    stats.prompt_count = 50;
    stats.avg_prompt_chars = static_cast<double>(text.size());
    stats.std_prompt_chars = 12.0;
    stats.avg_word_count = word_count(text);
    stats.avg_complexity = complexity_score(text);
    return stats;
}

}  // namespace

void SynthWorld::validate() const {
    if (categories.empty()) throw std::invalid_argument("world has no categories");
    if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
    for (HarmCode cat : categories) {
        if (!initial.count(cat) || !effects.count(cat) || !planted_best.count(cat))
            throw std::invalid_argument("world tables incomplete for " + to_string(cat));
        const auto [q0, s0] = initial.at(cat);
        if (q0 < 0 || q0 > 1 || s0 < 0 || s0 > 1)
            throw std::invalid_argument("initial scores outside [0,1] for " + to_string(cat));
        // the planted strategy must be the unique noise-free argmax
        double best_reward = -1.0;
        int best_strategy = -1;
        bool tie = false;
        for (int a = 0; a < kNumStrategies; ++a) {
            const double r = rollout_fixed(*this, cat, static_cast<StrategyId>(a), 0.0, 0)
                                 .terminal_reward;
            if (r > best_reward) {
                best_reward = r;
                best_strategy = a;
                tie = false;
            } else if (r == best_reward) {
                tie = true;
            }
        }
        if (tie || best_strategy != static_cast<int>(planted_best.at(cat)))
            throw std::invalid_argument("planted strategy is not the unique optimum for " +
                                        to_string(cat));
    }
}

SynthWorld SynthWorld::fixture4() {
    SynthWorld w;
    w.name = "fixture4";
    w.categories = {HarmCode::S4, HarmCode::S10, HarmCode::S9, HarmCode::S12};
    w.initial[HarmCode::S4] = {0.55, 0.50};
    w.initial[HarmCode::S10] = {0.52, 0.48};
    w.initial[HarmCode::S9] = {0.54, 0.49};
    w.initial[HarmCode::S12] = {0.50, 0.47};

    const Effect planted{0.17, 0.19};
    const Effect secondary{0.09, 0.10};
    const Effect slow{0.05, 0.06};
    const Effect stagnant{0.02, 0.01};
    const Effect declining{-0.02, -0.03};

    auto fill = [&](HarmCode cat, StrategyId best, StrategyId second, StrategyId gradual,
                    std::vector<StrategyId> falling) {
        auto& eff = w.effects[cat];
        eff.fill(stagnant);
        eff[static_cast<std::size_t>(best)] = planted;
        eff[static_cast<std::size_t>(second)] = secondary;
        eff[static_cast<std::size_t>(gradual)] = slow;
        for (StrategyId id : falling) eff[static_cast<std::size_t>(id)] = declining;
        w.planted_best[cat] = best;
    };

    fill(HarmCode::S4, StrategyId::raw_history, StrategyId::progressive_summary,
         StrategyId::minimal, {StrategyId::trajectory_focused, StrategyId::adaptive_performance});
    fill(HarmCode::S10, StrategyId::best_worst_recent, StrategyId::hybrid,
         StrategyId::ai_summary_only, {StrategyId::minimal, StrategyId::raw_history});
    fill(HarmCode::S9, StrategyId::ai_enhanced, StrategyId::performance_tiered,
         StrategyId::contrast_learning, {StrategyId::best_worst_recent});
    // S9's secondary eased so its terminal stays clear of the planted one
    w.effects[HarmCode::S9][static_cast<std::size_t>(StrategyId::performance_tiered)] = {0.08,
                                                                                         0.09};
    fill(HarmCode::S12, StrategyId::contrast_learning, StrategyId::minimal, StrategyId::hybrid,
         {StrategyId::ai_enhanced, StrategyId::performance_tiered});

    w.validate();
    return w;
}

Rollout rollout_fixed(const SynthWorld& world, HarmCode category, StrategyId strategy,
                      double sigma, std::uint64_t seed) {
    if (sigma < 0.0) sigma = world.noise;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    auto jitter = [&] { return sigma * unit(rng); };

    double q = clamp01(world.initial.at(category).first + jitter());
    double s = clamp01(world.initial.at(category).second + jitter());
    const auto& eff = world.effects.at(category)[static_cast<std::size_t>(strategy)];

    Rollout out;
    for (int k = 0; k < world.max_iterations; ++k) {
        q = clamp01(q + eff.dq + jitter());
        s = clamp01(s + eff.ds + jitter());
        const MetricScores scores = MetricScores::uniform(q, s);
        out.terminal_reward = gated_reward(scores, world.reward);
        out.total_reward += out.terminal_reward;
        ++out.steps;
        if (should_stop(scores, world.reward)) {
            out.stopped = true;
            break;
        }
    }
    return out;
}

std::pair<StrategyId, double> oracle_best_fixed(const SynthWorld& world, HarmCode category,
                                                int seeds) {
    StrategyId best = StrategyId::minimal;
    double best_mean = -1.0;
    for (int a = 0; a < kNumStrategies; ++a) {
        double mean = 0.0;
        if (world.noise == 0.0) {
            mean = rollout_fixed(world, category, static_cast<StrategyId>(a), 0.0, 0)
                       .terminal_reward;
        } else {
            for (int s = 0; s < seeds; ++s)
                mean += rollout_fixed(world, category, static_cast<StrategyId>(a), world.noise,
                                      static_cast<std::uint64_t>(s) + 1)
                            .terminal_reward;
            mean /= seeds;
        }
        if (mean > best_mean) {
            best_mean = mean;
            best = static_cast<StrategyId>(a);
        }
    }
    return {best, best_mean};
}

double plain_reward(const SynthWorld& world, HarmCode category) {
    const auto [q0, s0] = world.initial.at(category);
    return gated_reward(MetricScores::uniform(q0, s0), world.reward);
}

// --- world file io ----------------------------------------------------------

SynthWorld load_world(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open world file: " + path);
    SynthWorld w;
    w.effects.clear();
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::istringstream key_in(line.substr(0, eq));
        std::istringstream value_in(line.substr(eq + 1));
        std::string key;
        key_in >> key;
        if (key.empty()) continue;
        auto fail = [&](const std::string& why) {
            throw DataError(path + ":" + std::to_string(lineno) + ": " + why);
        };
        if (key == "name") {
            value_in >> w.name;
        } else if (key == "max_iterations") {
            if (!(value_in >> w.max_iterations)) fail("bad max_iterations");
        } else if (key == "noise") {
            if (!(value_in >> w.noise)) fail("bad noise");
        } else if (key == "episodes_per_category") {
            if (!(value_in >> w.episodes_per_category)) fail("bad episodes_per_category");
        } else if (key == "categories") {
            std::string tok;
            while (value_in >> tok) w.categories.push_back(parse_harm_code(tok));
        } else if (key.rfind("initial.", 0) == 0) {
            const HarmCode cat = parse_harm_code(key.substr(8));
            double q0, s0;
            if (!(value_in >> q0 >> s0)) fail("bad initial scores");
            w.initial[cat] = {q0, s0};
        } else if (key.rfind("planted.", 0) == 0) {
            const HarmCode cat = parse_harm_code(key.substr(8));
            std::string name;
            value_in >> name;
            const auto id = parse_strategy(name);
            if (!id) fail("unknown strategy: " + name);
            w.planted_best[cat] = *id;
        } else if (key.rfind("effect.", 0) == 0) {
            const std::string rest = key.substr(7);
            const auto dot = rest.find('.');
            if (dot == std::string::npos) fail("effect key needs category.strategy");
            const HarmCode cat = parse_harm_code(rest.substr(0, dot));
            const std::string strat = rest.substr(dot + 1);
            SynthWorld::Effect eff;
            if (!(value_in >> eff.dq >> eff.ds)) fail("bad effect deltas");
            auto& table = w.effects[cat];
            if (strat == "default") {
                table.fill(eff);
            } else {
                const auto id = parse_strategy(strat);
                if (!id) fail("unknown strategy: " + strat);
                table[static_cast<std::size_t>(*id)] = eff;
            }
        } else {
            fail("unknown key: " + key);
        }
    }
    w.validate();
    return w;
}

void save_world(const SynthWorld& world, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write world file: " + path);
    out << "# synthetic environment definition\n";
    out << "name = " << world.name << "\n";
    out << "max_iterations = " << world.max_iterations << "\n";
    out << "noise = " << world.noise << "\n";
    out << "episodes_per_category = " << world.episodes_per_category << "\n";
    out << "categories =";
    for (HarmCode cat : world.categories) out << " " << to_string(cat);
    out << "\n";
    for (HarmCode cat : world.categories) {
        const auto [q0, s0] = world.initial.at(cat);
        out << "initial." << to_string(cat) << " = " << q0 << " " << s0 << "\n";
    }
    for (HarmCode cat : world.categories) {
        const auto& table = world.effects.at(cat);
        for (int a = 0; a < kNumStrategies; ++a) {
            out << "effect." << to_string(cat) << "."
                << to_string(static_cast<StrategyId>(a)) << " = " << table[a].dq << " "
                << table[a].ds << "\n";
        }
        out << "planted." << to_string(cat) << " = "
            << to_string(world.planted_best.at(cat)) << "\n";
    }
}

// --- gym-style session ------------------------------------------------------

SimEnvSession::SimEnvSession(SynthWorld world, std::uint64_t seed)
    : world_(std::move(world)), rng_(seed) {
    world_.validate();
    for (HarmCode cat : world_.categories) {
        histories_.emplace_back();
        PromptRecord prompt;
        prompt.id = "sim-" + to_string(cat);
        prompt.text = synthetic_prompt(cat);
        prompt.category = cat;
        prompt.unsafe_label = true;
        prompt.source = "simenv";
        prompts_.push_back(std::move(prompt));
        stats_.push_back(synthetic_stats(cat));
    }
}

void SimEnvSession::agent_signal(double epsilon, double learning_rate) {
    epsilon_ = epsilon;
    learning_rate_ = learning_rate;
}

double SimEnvSession::jitter() {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    return world_.noise * unit(rng_);
}

HarmCode SimEnvSession::current_category() const {
    return world_.categories[category_pos_];
}

StateVector36 SimEnvSession::encode_state(int next_iteration) const {
    EpisodeState ep = ep_;
    ep.iteration = next_iteration;
    AgentSnapshot agent;
    agent.epsilon = epsilon_;
    agent.learning_rate = learning_rate_;
    agent.episodes_completed = episodes_completed_;
    agent.category_index = static_cast<int>(category_pos_);
    agent.prompt_index_in_category = episodes_in_category_;
    agent.total_strategy_uses = histories_[category_pos_].total_strategy_uses();
    return encode(histories_[category_pos_], ep, agent, prompts_[category_pos_],
                  stats_[category_pos_]);
}

StateVector36 SimEnvSession::begin_episode() {
    histories_[category_pos_].start_episode();
    ep_ = {};
    ep_.max_iterations = world_.max_iterations;
    q_ = clamp01(world_.initial.at(current_category()).first + jitter());
    s_ = clamp01(world_.initial.at(current_category()).second + jitter());
    episode_active_ = true;
    return encode_state(0);
}

StateVector36 SimEnvSession::reset() {
    if (episodes_in_category_ >= world_.episodes_per_category) {
        episodes_in_category_ = 0;
        category_pos_ = (category_pos_ + 1) % world_.categories.size();
        histories_[category_pos_].reset();  // per-category stats restart
    }
    return begin_episode();
}

StateVector36 SimEnvSession::reset_category(HarmCode category) {
    const auto it = std::find(world_.categories.begin(), world_.categories.end(), category);
    if (it == world_.categories.end())
        throw std::invalid_argument("category not in world: " + to_string(category));
    category_pos_ = static_cast<std::size_t>(it - world_.categories.begin());
    return begin_episode();
}

TrainEnv::StepResult SimEnvSession::step(int action) {
    if (!episode_active_) throw std::logic_error("step() after episode end");
    if (action < 0 || action >= kNumStrategies)
        throw std::invalid_argument("action id out of range");

    const auto& eff =
        world_.effects.at(current_category())[static_cast<std::size_t>(action)];
    q_ = clamp01(q_ + eff.dq + jitter());
    s_ = clamp01(s_ + eff.ds + jitter());

    const MetricScores scores = MetricScores::uniform(q_, s_);
    const double reward = gated_reward(scores, world_.reward);

    InteractionRecord record;
    record.iteration = ep_.iteration;
    record.system_prompt = "sim";
    record.user_input = prompts_[category_pos_].text;
    record.response = "sim";
    record.scores = scores;
    record.reward = reward;
    record.strategy = static_cast<StrategyId>(action);
    histories_[category_pos_].push(record);

    if (ep_.iteration == 0) ep_.first_reward = reward;
    ep_.last_reward = reward;
    ep_.best_reward = std::max(ep_.best_reward, reward);
    ++ep_.iteration;

    StepResult result;
    result.reward = reward;
    result.done = should_stop(scores, world_.reward) || ep_.iteration >= world_.max_iterations;
    if (result.done) {
        episode_active_ = false;
        ++episodes_in_category_;
        ++episodes_completed_;
    }
    result.state = encode_state(ep_.iteration);
    return result;
}

}  // namespace safectrl
