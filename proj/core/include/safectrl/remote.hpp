#pragma once

#include <memory>
#include <string>
#include <vector>

#include "safectrl/backends.hpp"

namespace safectrl {

struct RemoteConfig {
    std::string base_url;   // e.g. http://localhost:8080; env fallback below
    std::string api_key;
    std::string model = "gpt-4o-mini";
    int timeout_s = 30;
    int retries = 2;          // retries after the first attempt
    int backoff_ms = 250;     // exponential: 250, 500, ...
    std::string template_dir;  // optional override for judge template assets

    /// Fills empty fields from SAFECTRL_API_BASE / SAFECTRL_API_KEY.
    static RemoteConfig from_env();
    /// Fills empty fields from SAFECTRL_JUDGE_BASE / SAFECTRL_JUDGE_KEY.
    static RemoteConfig judge_from_env();
};

struct ChatMessage {
    std::string role;
    std::string content;
};

/// Minimal chat-completions client (POST {base}/v1/chat/completions with a
/// bearer token). Retries transport errors, non-2xx statuses and empty
/// completions per the backoff config, then throws BackendError.
class ChatClient {
public:
    explicit ChatClient(RemoteConfig cfg);
    std::string chat(const std::vector<ChatMessage>& messages, int max_tokens,
                     double temperature) const;
    const RemoteConfig& config() const { return cfg_; }

private:
    RemoteConfig cfg_;
};

class RemoteGenerator : public Generator {
public:
    explicit RemoteGenerator(RemoteConfig cfg) : client_(std::move(cfg)) {}
    std::string generate(const GenerateRequest& req) override;

private:
    ChatClient client_;
};

/// One judge call per configured metric; replies must be a decimal in [0,1].
/// Out-of-range scores are rejected, never clamped.
class RemoteEvaluator : public Evaluator {
public:
    explicit RemoteEvaluator(RemoteConfig cfg);
    MetricScores evaluate(const EvaluateRequest& req) override;

private:
    std::string template_for(const std::string& metric) const;
    ChatClient client_;
    std::string template_dir_;
};

class RemoteSummarizer : public Summarizer {
public:
    explicit RemoteSummarizer(RemoteConfig cfg) : client_(std::move(cfg)) {}
    std::string summarize(const std::vector<InteractionRecord>& records) override;

private:
    ChatClient client_;
};

/// Generator from the API env vars, evaluator/summarizer from the judge env
/// vars.
BackendSet make_remote_set(const RemoteConfig& api, const RemoteConfig& judge,
                           std::string model_name);

/// Extracts the first decimal number from a judge reply. Throws BackendError
/// when no number is present or the first number is outside [0,1].
double parse_judge_score(const std::string& reply);

}  // namespace safectrl
