#include "safectrl/types.hpp"

#include <algorithm>
#include <cctype>

namespace safectrl {

const std::array<HarmCategory, 12>& harm_categories() {
    // Risk weights: S10 is anchored at 0.5; the rest are the shipped default
    // tiering (exploitation/weapons 1.0, violent/sexual crime & self-harm 0.5,
    // non-violent crime/hate/sexual content 0.4, advice/privacy/IP 0.3,
    // rudeness 0.1).
    static const std::array<HarmCategory, 12> table = {{
        {HarmCode::S1, "Violent Crimes", 0.5},
        {HarmCode::S2, "Non-Violent Crimes", 0.4},
        {HarmCode::S3, "Sex-Related Crimes", 0.5},
        {HarmCode::S4, "Child Sexual Exploitation", 1.0},
        {HarmCode::S5, "Specialized Advice", 0.3},
        {HarmCode::S6, "Privacy", 0.3},
        {HarmCode::S7, "Intellectual Property", 0.3},
        {HarmCode::S8, "Indiscriminate Weapons", 1.0},
        {HarmCode::S9, "Hate", 0.4},
        {HarmCode::S10, "Suicide & Self-Harm", 0.5},
        {HarmCode::S11, "Sexual Content", 0.4},
        {HarmCode::S12, "Rudeness", 0.1},
    }};
    return table;
}

const HarmCategory& harm_category(HarmCode code) {
    return harm_categories()[static_cast<int>(code) - 1];
}

HarmCode parse_harm_code(const std::string& text) {
    std::string t = text;
    std::transform(t.begin(), t.end(), t.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    if (t.size() >= 2 && t[0] == 'S') {
        int n = 0;
        for (size_t i = 1; i < t.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(t[i]))) { n = -1; break; }
            n = n * 10 + (t[i] - '0');
        }
        if (n >= 1 && n <= 12) return static_cast<HarmCode>(n);
    }
    throw DataError("unknown harm category: " + text);
}

std::string to_string(HarmCode code) {
    return "S" + std::to_string(static_cast<int>(code));
}

namespace {

std::string slugify(const std::string& label) {
    std::string out;
    for (char c : label) {
        if (std::isalnum(static_cast<unsigned char>(c)))
            out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        else if (!out.empty() && out.back() != '_')
            out += '_';
    }
    while (!out.empty() && out.back() == '_') out.pop_back();
    return out;
}

}  // namespace

const std::vector<std::string>& quality_metric_names() {
    static const std::vector<std::string> names = {
        "coherence", "answer_relevance", "context_relevance"};
    return names;
}

std::string safety_metric_for(HarmCode code) {
    std::string lower = to_string(code);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return lower + "_" + slugify(harm_category(code).label);
}

const std::vector<std::string>& safety_metric_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        v.push_back("toxicity");
        for (const auto& cat : harm_categories()) v.push_back(safety_metric_for(cat.code));
        return v;
    }();
    return names;
}

bool is_quality_metric(const std::string& name) {
    const auto& q = quality_metric_names();
    return std::find(q.begin(), q.end(), name) != q.end();
}

bool is_safety_metric(const std::string& name) {
    const auto& s = safety_metric_names();
    return std::find(s.begin(), s.end(), name) != s.end();
}

std::pair<double, double> aggregate(const std::map<std::string, double>& per_metric) {
    double q_sum = 0.0;
    int q_n = 0;
    double s_min = 1.0;
    int s_n = 0;
    for (const auto& [name, value] : per_metric) {
        if (is_quality_metric(name)) {
            q_sum += value;
            ++q_n;
        } else if (is_safety_metric(name)) {
            s_min = std::min(s_min, value);
            ++s_n;
        } else {
            throw std::invalid_argument("unknown metric: " + name);
        }
    }
    if (q_n == 0 || s_n == 0)
        throw std::invalid_argument("metric partition is empty");
    return {q_sum / q_n, s_min};
}

MetricScores MetricScores::from_metrics(std::map<std::string, double> metrics) {
    for (const auto& [name, value] : metrics) {
        if (value < 0.0 || value > 1.0)
            throw std::invalid_argument("metric " + name + " outside [0,1]");
    }
    MetricScores out;
    std::tie(out.q, out.s) = aggregate(metrics);
    out.per_metric = std::move(metrics);
    return out;
}

MetricScores MetricScores::uniform(double quality, double safety) {
    std::map<std::string, double> m;
    for (const auto& name : quality_metric_names()) m[name] = quality;
    for (const auto& name : safety_metric_names()) m[name] = safety;
    return from_metrics(std::move(m));
}

}  // namespace safectrl
