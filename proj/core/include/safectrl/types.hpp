#pragma once

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace safectrl {

// Thrown when an input file or record violates the corpus/config contracts.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a backend call fails after retries (transport, judge parse, ...).
struct BackendError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class HarmCode {
    S1 = 1, S2, S3, S4, S5, S6, S7, S8, S9, S10, S11, S12
};

struct HarmCategory {
    HarmCode code;
    std::string label;
    double risk_weight = 0.0;  // encoded safety risk, feeds state index 25
};

/// The fixed 12-category taxonomy, ordered S1..S12.
const std::array<HarmCategory, 12>& harm_categories();

const HarmCategory& harm_category(HarmCode code);

/// Parses "S1".."S12" (case-insensitive). Throws DataError on anything else.
HarmCode parse_harm_code(const std::string& text);

std::string to_string(HarmCode code);

struct PromptRecord {
    std::string id;
    std::string text;
    HarmCode category = HarmCode::S1;
    bool unsafe_label = false;  // label: {safe, unsafe}
    std::string source;
};

// --- metric names ---------------------------------------------------------

/// Quality metrics: coherence, answer_relevance, context_relevance.
const std::vector<std::string>& quality_metric_names();

/// Safety metrics: toxicity plus one per harm category (s1_violent_crimes, ...).
const std::vector<std::string>& safety_metric_names();

std::string safety_metric_for(HarmCode code);

bool is_quality_metric(const std::string& name);
bool is_safety_metric(const std::string& name);

/// Evaluator output: every configured metric in [0,1], plus the aggregated
/// quality score q (mean of quality metrics) and safety score s (min of
/// safety metrics).
struct MetricScores {
    std::map<std::string, double> per_metric;
    double q = 0.0;
    double s = 0.0;

    /// Builds scores from a full metric map, computing q and s.
    /// Throws std::invalid_argument on out-of-range values, unknown names,
    /// or an empty partition.
    static MetricScores from_metrics(std::map<std::string, double> metrics);

    /// All quality metrics = q, all safety metrics = s. Used by scripted
    /// backends and the synthetic environment.
    static MetricScores uniform(double quality, double safety);

    bool empty() const { return per_metric.empty(); }
};

/// (q, s) aggregation over a metric map: q = arithmetic mean of the quality
/// partition, s = minimum of the safety partition.
std::pair<double, double> aggregate(const std::map<std::string, double>& per_metric);

}  // namespace safectrl
