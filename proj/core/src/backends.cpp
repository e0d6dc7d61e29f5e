#include "safectrl/backends.hpp"

#include <algorithm>
#include <cctype>
#include <iomanip>
#include <sstream>

#include "safectrl/assets.hpp"
#include "safectrl/text_features.hpp"

namespace safectrl {

namespace {

std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    x *= 0xc4ceb9fe1a85ec53ULL;
    x ^= x >> 33;
    return x;
}

std::uint64_t hash_str(const std::string& s, std::uint64_t seed) {
    std::uint64_t h = 1469598103934665603ULL ^ seed;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return mix64(h);
}

double unit(std::uint64_t h, int lane) {
    return static_cast<double>(mix64(h + static_cast<std::uint64_t>(lane) * 0x9e3779b9ULL) >> 11) /
           9007199254740992.0;  // 2^53
}

}  // namespace

std::optional<std::pair<std::string, int>> parse_scripted_tag(const std::string& text) {
    const std::string prefix = "scripted:";
    const size_t start = text.find(prefix);
    if (start != 0) return std::nullopt;
    const size_t fp_end = text.find(':', prefix.size());
    if (fp_end == std::string::npos) return std::nullopt;
    const std::string fp = text.substr(prefix.size(), fp_end - prefix.size());
    if (text.compare(fp_end + 1, 2, "k=") != 0) return std::nullopt;
    size_t pos = fp_end + 3;
    bool neg = false;
    if (pos < text.size() && text[pos] == '-') {
        neg = true;
        ++pos;
    }
    int value = 0;
    bool any = false;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        value = value * 10 + (text[pos] - '0');
        ++pos;
        any = true;
    }
    if (!any) return std::nullopt;
    return std::make_pair(fp, neg ? -value : value);
}

void ScriptedBackend::script_step(const std::string& user_prompt, int k, ScriptStep step) {
    std::lock_guard<std::mutex> lock(mutex_);
    script_[{prompt_fingerprint(user_prompt), k}] = std::move(step);
}

void ScriptedBackend::script_post(const std::string& user_prompt, ScriptStep step) {
    script_step(user_prompt, kPostStep, std::move(step));
}

void ScriptedBackend::reset() {
    std::lock_guard<std::mutex> lock(mutex_);
    counters_.clear();
}

void ScriptedBackend::begin_episode(const std::string& user_prompt) {
    std::lock_guard<std::mutex> lock(mutex_);
    counters_.erase(prompt_fingerprint(user_prompt));
}

std::optional<ScriptStep> ScriptedBackend::lookup(const std::string& fingerprint,
                                                  int step) const {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = script_.find({fingerprint, step});
    if (it == script_.end()) return std::nullopt;
    return it->second;
}

std::pair<double, double> ScriptedBackend::ramp_scores(const std::string& fingerprint,
                                                       int step) const {
    const std::uint64_t h = hash_str(fingerprint, seed_);
    if (step == kPostStep) {
        // post-safeguard behaviour: near the step-3 level, slightly decayed
        auto [q, s] = ramp_scores(fingerprint, 3);
        return {std::max(0.0, q * 0.95), std::max(0.0, s * 0.95)};
    }
    const double q0 = 0.30 + 0.25 * unit(h, 1);
    const double s0 = 0.20 + 0.25 * unit(h, 2);
    const double dq = 0.10 + 0.15 * unit(h, 3);
    const double ds = 0.12 + 0.15 * unit(h, 4);
    return {std::min(1.0, q0 + step * dq), std::min(1.0, s0 + step * ds)};
}

std::string ScriptedBackend::generate(const GenerateRequest& req) {
    if (req.user_prompt.empty()) throw BackendError("empty user prompt");
    const std::string fp = prompt_fingerprint(req.user_prompt);
    int step;
    if (req.system_prompt == consistency_instruction()) {
        step = kPostStep;
    } else {
        std::lock_guard<std::mutex> lock(mutex_);
        step = counters_[fp]++;
    }
    const auto scripted = lookup(fp, step);
    if (scripted && scripted->fail)
        throw BackendError("scripted failure at step " + std::to_string(step));
    if (scripted && !scripted->response.empty()) return scripted->response;
    std::ostringstream out;
    out << "scripted:" << fp << ":k=" << step
        << (step == kPostStep ? " | post-safeguard reply" : " | refinement reply");
    return out.str();
}

MetricScores ScriptedBackend::evaluate(const EvaluateRequest& req) {
    if (const auto tag = parse_scripted_tag(req.response)) {
        const auto& [fp, step] = *tag;
        if (const auto scripted = lookup(fp, step)) {
            if (scripted->fail) throw BackendError("scripted evaluator failure");
            return MetricScores::uniform(scripted->q, scripted->s);
        }
        auto [q, s] = ramp_scores(fp, step);
        return MetricScores::uniform(q, s);
    }
    // custom scripted texts: search the script for an exact response match
    {
        std::lock_guard<std::mutex> lock(mutex_);
        for (const auto& [key, step] : script_) {
            if (!step.response.empty() && step.response == req.response) {
                if (step.fail) throw BackendError("scripted evaluator failure");
                return MetricScores::uniform(step.q, step.s);
            }
        }
    }
    // foreign text: stable hash-derived mid-range scores
    const std::uint64_t h = hash_str(req.response, seed_ ^ 0xe7a1ULL);
    return MetricScores::uniform(0.3 + 0.4 * unit(h, 1), 0.3 + 0.4 * unit(h, 2));
}

std::string ScriptedBackend::summarize(const std::vector<InteractionRecord>& records) {
    if (records.empty()) throw std::invalid_argument("summarize needs at least one record");
    std::ostringstream out;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (i) out << "; ";
        out << records[i].iteration << ": " << std::fixed << std::setprecision(2)
            << records[i].reward;
    }
    std::string text = out.str();
    if (text.size() > 600) text = text.substr(text.size() - 600);
    return text;
}

BackendSet ScriptedBackend::make_set(std::shared_ptr<ScriptedBackend> backend,
                                     std::string model_name) {
    BackendSet set;
    set.generator = backend;
    set.evaluator = backend;
    set.summarizer = backend;
    set.model_name = std::move(model_name);
    return set;
}

}  // namespace safectrl
