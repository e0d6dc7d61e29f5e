#include "safectrl/eval_records.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace safectrl {

using nlohmann::json;

namespace {

std::vector<TrajectoryEntry> flatten(const std::vector<InteractionRecord>& trajectory) {
    std::vector<TrajectoryEntry> out;
    out.reserve(trajectory.size());
    for (const auto& rec : trajectory) {
        TrajectoryEntry e;
        e.iteration = rec.iteration;
        e.reward = rec.reward;
        if (rec.strategy) e.strategy = static_cast<int>(*rec.strategy);
        e.error = rec.error;
        e.generate_s = rec.latency.generate_s;
        e.evaluate_s = rec.latency.evaluate_s;
        e.refine_s = rec.latency.refine_s;
        e.response = rec.response;
        out.push_back(std::move(e));
    }
    return out;
}

json to_json(const TrajectoryEntry& e) {
    json j;
    j["k"] = e.iteration;
    j["reward"] = e.reward;
    if (e.strategy)
        j["strategy"] = to_string(static_cast<StrategyId>(*e.strategy));
    j["error"] = e.error;
    j["lat_generate_s"] = e.generate_s;
    j["lat_evaluate_s"] = e.evaluate_s;
    j["lat_refine_s"] = e.refine_s;
    j["response"] = e.response;
    return j;
}

TrajectoryEntry entry_from_json(const json& j) {
    TrajectoryEntry e;
    e.iteration = j.at("k").get<int>();
    e.reward = j.at("reward").get<double>();
    if (j.contains("strategy")) {
        const auto id = parse_strategy(j.at("strategy").get<std::string>());
        if (id) e.strategy = static_cast<int>(*id);
    }
    e.error = j.value("error", false);
    e.generate_s = j.value("lat_generate_s", 0.0);
    e.evaluate_s = j.value("lat_evaluate_s", 0.0);
    e.refine_s = j.value("lat_refine_s", 0.0);
    e.response = j.value("response", "");
    return e;
}

}  // namespace

EvalRecord make_plain_record(const PromptRecord& prompt, const std::string& model,
                             const PlainOutcome& outcome) {
    EvalRecord rec;
    rec.prompt_id = prompt.id;
    rec.category = to_string(prompt.category);
    rec.model = model;
    rec.method = "plain";
    rec.iterations = 1;
    rec.final_p = outcome.reward;
    rec.error = outcome.error;
    TrajectoryEntry e;
    e.iteration = 0;
    e.reward = outcome.reward;
    e.error = outcome.error;
    e.generate_s = outcome.latency.generate_s;
    e.evaluate_s = outcome.latency.evaluate_s;
    e.response = outcome.response;
    rec.trajectory.push_back(std::move(e));
    return rec;
}

EvalRecord make_safeguard_record(const PromptRecord& prompt, const std::string& model,
                                 const std::string& method,
                                 const SafeguardOutcome& outcome) {
    EvalRecord rec;
    rec.prompt_id = prompt.id;
    rec.category = to_string(prompt.category);
    rec.model = model;
    rec.method = method;
    rec.iterations = outcome.iterations;
    rec.final_p = outcome.final_p_score;
    rec.stopped_early = outcome.stopped_early;
    rec.aborted = outcome.aborted;
    rec.trajectory = flatten(outcome.trajectory);
    return rec;
}

std::string to_jsonl(const EvalRecord& rec) {
    json j;
    j["type"] = "eval";
    j["prompt_id"] = rec.prompt_id;
    j["category"] = rec.category;
    j["model"] = rec.model;
    j["method"] = rec.method;
    j["n"] = rec.iterations;
    j["final_p"] = rec.final_p;
    j["stopped_early"] = rec.stopped_early;
    j["aborted"] = rec.aborted;
    j["error"] = rec.error;
    j["trajectory"] = json::array();
    for (const auto& e : rec.trajectory) j["trajectory"].push_back(to_json(e));
    return j.dump();
}

std::string to_jsonl(const RetentionRecord& rec) {
    json j;
    j["type"] = "retention";
    j["prompt_id"] = rec.prompt_id;
    j["category"] = rec.category;
    j["model"] = rec.model;
    j["method"] = rec.method;
    j["plain_reward"] = rec.plain_reward;
    j["safeguarded_reward"] = rec.safeguarded_reward;
    j["post_reward"] = rec.post_reward;
    j["n"] = rec.iterations;
    return j.dump();
}

std::vector<EvalRecord> read_eval_records(const std::string& path) {
    std::ifstream in(path);
    std::vector<EvalRecord> out;
    if (!in) return out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw DataError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        if (j.value("type", "eval") != "eval") continue;
        EvalRecord rec;
        rec.prompt_id = j.at("prompt_id").get<std::string>();
        rec.category = j.value("category", "");
        rec.model = j.at("model").get<std::string>();
        rec.method = j.at("method").get<std::string>();
        rec.iterations = j.at("n").get<int>();
        rec.final_p = j.at("final_p").get<double>();
        rec.stopped_early = j.value("stopped_early", false);
        rec.aborted = j.value("aborted", false);
        rec.error = j.value("error", false);
        for (const auto& e : j.value("trajectory", json::array()))
            rec.trajectory.push_back(entry_from_json(e));
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<RetentionRecord> read_retention_records(const std::string& path) {
    std::ifstream in(path);
    std::vector<RetentionRecord> out;
    if (!in) return out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw DataError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        if (j.value("type", "retention") != "retention") continue;
        RetentionRecord rec;
        rec.prompt_id = j.at("prompt_id").get<std::string>();
        rec.category = j.value("category", "");
        rec.model = j.at("model").get<std::string>();
        rec.method = j.at("method").get<std::string>();
        rec.plain_reward = j.at("plain_reward").get<double>();
        rec.safeguarded_reward = j.at("safeguarded_reward").get<double>();
        rec.post_reward = j.at("post_reward").get<double>();
        rec.iterations = j.value("n", 0);
        out.push_back(std::move(rec));
    }
    return out;
}

}  // namespace safectrl
