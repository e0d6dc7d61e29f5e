#include "safectrl/remote.hpp"

#include <cctype>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "safectrl/assets.hpp"

namespace safectrl {

using nlohmann::json;

namespace {

std::string env_or(const char* name, const std::string& fallback) {
    const char* v = std::getenv(name);
    return v ? std::string(v) : fallback;
}

}  // namespace

RemoteConfig RemoteConfig::from_env() {
    RemoteConfig cfg;
    cfg.base_url = env_or("SAFECTRL_API_BASE", "");
    cfg.api_key = env_or("SAFECTRL_API_KEY", "");
    return cfg;
}

RemoteConfig RemoteConfig::judge_from_env() {
    RemoteConfig cfg;
    cfg.base_url = env_or("SAFECTRL_JUDGE_BASE", "");
    cfg.api_key = env_or("SAFECTRL_JUDGE_KEY", "");
    return cfg;
}

ChatClient::ChatClient(RemoteConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.base_url.empty())
        throw std::invalid_argument("remote backend needs a base URL (flag or env)");
}

std::string ChatClient::chat(const std::vector<ChatMessage>& messages, int max_tokens,
                             double temperature) const {
    json body;
    body["model"] = cfg_.model;
    body["max_tokens"] = max_tokens;
    body["temperature"] = temperature;
    body["messages"] = json::array();
    for (const auto& m : messages)
        body["messages"].push_back({{"role", m.role}, {"content", m.content}});
    const std::string payload = body.dump();

    std::string last_error;
    for (int attempt = 0; attempt <= cfg_.retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(
                std::chrono::milliseconds(cfg_.backoff_ms << (attempt - 1)));
        }
        httplib::Client client(cfg_.base_url);
        client.set_connection_timeout(cfg_.timeout_s, 0);
        client.set_read_timeout(cfg_.timeout_s, 0);
        httplib::Headers headers;
        if (!cfg_.api_key.empty())
            headers.emplace("Authorization", "Bearer " + cfg_.api_key);
        auto res = client.Post("/v1/chat/completions", headers, payload, "application/json");
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status < 200 || res->status >= 300) {
            last_error = "http status " + std::to_string(res->status);
            continue;
        }
        try {
            const json reply = json::parse(res->body);
            const std::string content =
                reply.at("choices").at(0).at("message").at("content").get<std::string>();
            if (content.empty()) {
                last_error = "empty completion";
                continue;
            }
            return content;
        } catch (const json::exception& e) {
            last_error = std::string("malformed completion body: ") + e.what();
            continue;
        }
    }
    throw BackendError("chat call failed after " + std::to_string(cfg_.retries + 1) +
                       " attempts: " + last_error);
}

std::string RemoteGenerator::generate(const GenerateRequest& req) {
    std::vector<ChatMessage> messages;
    if (!req.system_prompt.empty()) messages.push_back({"system", req.system_prompt});
    for (const auto& [role, text] : req.prior_turns) messages.push_back({role, text});
    messages.push_back({"user", req.user_prompt});
    return client_.chat(messages, req.max_tokens, req.temperature);
}

double parse_judge_score(const std::string& reply) {
    for (size_t i = 0; i < reply.size(); ++i) {
        const char c = reply[i];
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && i + 1 < reply.size() &&
             std::isdigit(static_cast<unsigned char>(reply[i + 1])))) {
            size_t consumed = 0;
            const double value = std::stod(reply.substr(i), &consumed);
            if (value < 0.0 || value > 1.0)
                throw BackendError("judge score outside [0,1]: " + reply.substr(i, consumed));
            return value;
        }
    }
    throw BackendError("no numeric score in judge reply: " + reply);
}

RemoteEvaluator::RemoteEvaluator(RemoteConfig cfg)
    : client_(cfg), template_dir_(cfg.template_dir) {}

std::string RemoteEvaluator::template_for(const std::string& metric) const {
    const std::string file = metric == "toxicity"          ? "judge_toxicity.txt"
                             : is_quality_metric(metric)   ? "judge_quality.txt"
                                                           : "judge_safety.txt";
    if (!template_dir_.empty()) {
        std::ifstream in(template_dir_ + "/" + file);
        if (in) {
            std::ostringstream buf;
            buf << in.rdbuf();
            return buf.str();
        }
    }
    if (metric == "toxicity") return judge_toxicity_template();
    return is_quality_metric(metric) ? judge_quality_template() : judge_safety_template();
}

MetricScores RemoteEvaluator::evaluate(const EvaluateRequest& req) {
    std::map<std::string, double> metrics;
    auto judge_one = [&](const std::string& metric, const std::string& definition) {
        const std::string prompt = render_template(template_for(metric), metric, definition,
                                                   req.user_prompt, req.response, req.context);
        std::string last_error;
        for (int attempt = 0; attempt <= client_.config().retries; ++attempt) {
            const std::string reply = client_.chat({{"user", prompt}}, 16, 0.0);
            try {
                metrics[metric] = parse_judge_score(reply);
                return;
            } catch (const BackendError& e) {
                last_error = e.what();
            }
        }
        throw BackendError("metric " + metric + ": " + last_error);
    };

    judge_one("coherence", "the response is well-formed, logical and readable");
    judge_one("answer_relevance", "the response addresses what the user asked");
    judge_one("context_relevance", "the response respects the conversation context");
    judge_one("toxicity", "");
    for (const auto& cat : harm_categories())
        judge_one(safety_metric_for(cat.code), cat.label);
    return MetricScores::from_metrics(std::move(metrics));
}

std::string RemoteSummarizer::summarize(const std::vector<InteractionRecord>& records) {
    if (records.empty()) throw std::invalid_argument("summarize needs at least one record");
    std::ostringstream digest;
    for (const auto& rec : records) {
        digest << "iteration " << rec.iteration << " (score " << rec.reward
               << "): " << rec.response.substr(0, 200) << "\n";
    }
    const std::string prompt =
        render_template(judge_summarize_template(), "", "", "", digest.str(), "");
    std::string summary = client_.chat({{"user", prompt}}, 256, 0.0);
    if (summary.size() > 600) summary.resize(600);
    return summary;
}

BackendSet make_remote_set(const RemoteConfig& api, const RemoteConfig& judge,
                           std::string model_name) {
    BackendSet set;
    set.generator = std::make_shared<RemoteGenerator>(api);
    set.evaluator = std::make_shared<RemoteEvaluator>(judge);
    set.summarizer = std::make_shared<RemoteSummarizer>(judge);
    set.model_name = std::move(model_name);
    return set;
}

}  // namespace safectrl
