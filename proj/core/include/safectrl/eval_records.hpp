#pragma once

#include <optional>
#include <string>
#include <vector>

#include "safectrl/engine.hpp"

namespace safectrl {

/// Flattened trajectory entry persisted with each run.
struct TrajectoryEntry {
    int iteration = 0;
    double reward = 0.0;
    std::optional<int> strategy;
    bool error = false;
    double generate_s = 0.0;
    double evaluate_s = 0.0;
    double refine_s = 0.0;
    std::string response;
};

/// One (prompt, method) run: either the plain baseline (method == "plain",
/// n == 1) or a safeguarded run.
struct EvalRecord {
    std::string prompt_id;
    std::string category;
    std::string model;
    std::string method;
    int iterations = 0;
    double final_p = 0.0;
    bool stopped_early = false;
    bool aborted = false;
    bool error = false;
    std::vector<TrajectoryEntry> trajectory;
};

/// One three-stage retention run.
struct RetentionRecord {
    std::string prompt_id;
    std::string category;
    std::string model;
    std::string method;
    double plain_reward = 0.0;
    double safeguarded_reward = 0.0;
    double post_reward = 0.0;
    int iterations = 0;
};

EvalRecord make_plain_record(const PromptRecord& prompt, const std::string& model,
                             const PlainOutcome& outcome);
EvalRecord make_safeguard_record(const PromptRecord& prompt, const std::string& model,
                                 const std::string& method, const SafeguardOutcome& outcome);

// JSONL persistence (append-only; resume reads these back).
std::string to_jsonl(const EvalRecord& rec);
std::string to_jsonl(const RetentionRecord& rec);
std::vector<EvalRecord> read_eval_records(const std::string& path);          // missing -> {}
std::vector<RetentionRecord> read_retention_records(const std::string& path);  // missing -> {}

}  // namespace safectrl
