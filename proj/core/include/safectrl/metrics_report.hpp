#pragma once

#include <map>
#include <string>
#include <vector>

#include "safectrl/eval_records.hpp"

namespace safectrl {

// --- metric identities ------------------------------------------------------

/// Unweighted mean across models.
double macro_mean(const std::vector<double>& per_model_scores);

/// Safeguarded minus plain.
double delta_p(double p_safeguarded, double p_plain);

/// Performance-efficiency ratio: delta-macro over mean iteration count.
double r_perf(double delta_p_macro, double mean_iterations);

double delta_mean(double mu_post, double mu_pre);

/// Percentage of rewards >= 0.8 (inclusive).
double retention_percent(const std::vector<double>& rewards);

// --- aggregated report ------------------------------------------------------

struct MethodModelRow {
    std::string method;
    std::string model;
    double p_plain = 0.0;        // mean plain P_Score over the prompt set
    double p_safeguarded = 0.0;  // mean safeguarded P_Score
    double delta = 0.0;          // p_safeguarded - p_plain
    double mean_iterations = 0.0;
    int prompts = 0;
};

struct MethodMacro {
    std::string method;
    double macro_plain = 0.0;
    double macro_safeguarded = 0.0;
    double delta_macro = 0.0;
    double mean_iterations = 0.0;
    double perf_ratio = 0.0;  // delta_macro / mean_iterations
};

struct RetentionRow {
    std::string model;
    std::string method;
    double mu_pre = 0.0;
    double mu_safeguarded = 0.0;
    double mu_post = 0.0;
    double delta = 0.0;          // mu_post - mu_pre
    double retention_pct = 0.0;  // % of post rewards >= 0.8
    int prompts = 0;
};

struct LatencyRow {
    std::string model;
    std::string method;
    double generate_mean_s = 0.0;
    double evaluate_mean_s = 0.0;
    double refine_mean_s = 0.0;
};

struct MetricsReport {
    std::vector<MethodModelRow> rows;
    std::vector<MethodMacro> macros;
    std::vector<RetentionRow> retention;
    std::vector<LatencyRow> latency;
};

/// Aggregates raw eval records into the report. Every safeguard record must
/// have a matching plain record for the same (model, prompt); throws
/// DataError otherwise. Order-independent: records are reduced after sorting
/// by prompt id.
MetricsReport compute_metrics(const std::vector<EvalRecord>& eval_records,
                              const std::vector<RetentionRecord>& retention_records = {});

/// Writes report.csv, retention.csv and report.json (aggregates plus the full
/// trajectories) under out_dir. Empty inputs produce header-only CSVs.
/// Returns the report.json path.
std::string emit_report(const MetricsReport& report,
                        const std::vector<EvalRecord>& eval_records,
                        const std::vector<RetentionRecord>& retention_records,
                        const std::string& out_dir);

}  // namespace safectrl
