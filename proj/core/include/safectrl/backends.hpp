#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "safectrl/history.hpp"
#include "safectrl/types.hpp"

namespace safectrl {

struct GenerateRequest {
    std::string system_prompt;
    std::string user_prompt;
    std::vector<std::pair<std::string, std::string>> prior_turns;  // (role, text)
    int max_tokens = 512;
    double temperature = 0.0;
};

struct EvaluateRequest {
    std::string user_prompt;
    std::string response;
    std::string context;  // system prompt in effect when the response was made
};

class Generator {
public:
    virtual ~Generator() = default;
    /// Non-empty response text, or BackendError after retries.
    virtual std::string generate(const GenerateRequest& req) = 0;
    /// Episode boundary hint (scripted backends restart their per-prompt
    /// scripts here). No-op by default.
    virtual void begin_episode(const std::string& /*user_prompt*/) {}
};

class Evaluator {
public:
    virtual ~Evaluator() = default;
    /// One score per configured metric (3 quality + 13 safety).
    virtual MetricScores evaluate(const EvaluateRequest& req) = 0;
};

class Summarizer {
public:
    virtual ~Summarizer() = default;
    /// Non-empty summary, <= 600 characters. Throws std::invalid_argument on
    /// an empty record list.
    virtual std::string summarize(const std::vector<InteractionRecord>& records) = 0;
};

struct BackendSet {
    std::shared_ptr<Generator> generator;
    std::shared_ptr<Evaluator> evaluator;
    std::shared_ptr<Summarizer> summarizer;
    std::string model_name = "scripted";
};

// --- deterministic scripted backend ----------------------------------------

/// Scores and response text for one scripted step.
struct ScriptStep {
    std::string response;  // empty -> synthesized tagged text
    double q = 0.0;
    double s = 0.0;
    bool fail = false;  // simulate a backend failure at this step
};

/// Deterministic stand-in for the generator+evaluator+summarizer trio.
///
/// Responses are tagged "scripted:<fingerprint>:k=<n>" so the evaluator can
/// recover (fingerprint, step) from the text alone. Scores come from explicit
/// script entries when present, otherwise from a seed-derived ramp that
/// improves by a fixed increment per step. Replay from a fresh instance (or
/// after reset()) is byte-identical.
class ScriptedBackend : public Generator, public Evaluator, public Summarizer {
public:
    explicit ScriptedBackend(std::uint64_t seed = 0) : seed_(seed) {}

    std::string generate(const GenerateRequest& req) override;
    void begin_episode(const std::string& user_prompt) override;
    MetricScores evaluate(const EvaluateRequest& req) override;
    std::string summarize(const std::vector<InteractionRecord>& records) override;

    /// Pins step k (0-based generate call) for a prompt.
    void script_step(const std::string& user_prompt, int k, ScriptStep step);
    /// Pins the post-safeguard (consistency-stage) generation for a prompt.
    void script_post(const std::string& user_prompt, ScriptStep step);

    /// Forgets all per-prompt call counters (scripts are kept).
    void reset();

    /// A ready-made backend set sharing one scripted instance.
    static BackendSet make_set(std::shared_ptr<ScriptedBackend> backend,
                               std::string model_name = "scripted");

    static constexpr int kPostStep = -1;

private:
    struct Key {
        std::string fingerprint;
        int step;
        bool operator<(const Key& o) const {
            return fingerprint != o.fingerprint ? fingerprint < o.fingerprint
                                                : step < o.step;
        }
    };

    std::pair<double, double> ramp_scores(const std::string& fingerprint, int step) const;
    std::optional<ScriptStep> lookup(const std::string& fingerprint, int step) const;

    std::uint64_t seed_;
    std::map<Key, ScriptStep> script_;
    std::map<std::string, int> counters_;
    mutable std::mutex mutex_;
};

/// Parses "scripted:<fp>:k=<n>" tags; empty optional when absent.
std::optional<std::pair<std::string, int>> parse_scripted_tag(const std::string& text);

}  // namespace safectrl
