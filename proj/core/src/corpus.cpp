#include "safectrl/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>

#include <nlohmann/json.hpp>

#include "safectrl/text_features.hpp"

namespace safectrl {

using nlohmann::json;

std::map<HarmCode, int> Corpus::category_counts() const {
    std::map<HarmCode, int> counts;
    for (const auto& rec : records) ++counts[rec.category];
    return counts;
}

int Corpus::safe_count() const {
    int n = 0;
    for (const auto& rec : records)
        if (!rec.unsafe_label) ++n;
    return n;
}

int Corpus::unsafe_count() const {
    return static_cast<int>(records.size()) - safe_count();
}

Corpus load_corpus(const std::string& path, bool strict,
                   std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open corpus file: " + path);

    Corpus corpus;
    std::set<std::string> seen_ids;
    std::vector<std::string> problems;
    std::string line;
    int lineno = 0;

    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto bad = [&](const std::string& why) {
            problems.push_back("line " + std::to_string(lineno) + ": " + why);
        };
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::exception& e) {
            bad(std::string("not a JSON object: ") + e.what());
            continue;
        }
        try {
            PromptRecord rec;
            rec.id = obj.at("id").get<std::string>();
            rec.text = obj.at("prompt").get<std::string>();
            rec.category = parse_harm_code(obj.at("category").get<std::string>());
            const std::string label = obj.at("label").get<std::string>();
            if (label != "safe" && label != "unsafe")
                throw DataError("label must be safe|unsafe, got " + label);
            rec.unsafe_label = label == "unsafe";
            rec.source = obj.value("source", "");
            if (rec.text.empty()) throw DataError("empty prompt text");
            if (!seen_ids.insert(rec.id).second) throw DataError("duplicate id " + rec.id);
            corpus.records.push_back(std::move(rec));
        } catch (const json::exception& e) {
            bad(std::string("missing/invalid field: ") + e.what());
        } catch (const DataError& e) {
            bad(e.what());
        }
    }

    if (!problems.empty()) {
        if (strict) {
            std::string msg = path + " has " + std::to_string(problems.size()) +
                              " malformed line(s):";
            for (const auto& p : problems) msg += "\n  " + p;
            throw DataError(msg);
        }
        if (warnings)
            for (const auto& p : problems) warnings->push_back(path + ": " + p);
    }
    if (corpus.records.empty() && warnings)
        warnings->push_back(path + ": corpus is empty");
    return corpus;
}

std::vector<PromptRecord> sample_balanced(const Corpus& corpus, int per_category,
                                          std::uint64_t seed) {
    if (per_category <= 0) throw std::invalid_argument("per_category must be > 0");
    std::map<HarmCode, std::vector<const PromptRecord*>> by_category;
    for (const auto& rec : corpus.records) by_category[rec.category].push_back(&rec);

    std::vector<PromptRecord> out;
    for (const auto& cat : harm_categories()) {
        auto it = by_category.find(cat.code);
        const int have = it == by_category.end() ? 0 : static_cast<int>(it->second.size());
        if (have < per_category)
            throw DataError("category " + to_string(cat.code) + " has " +
                            std::to_string(have) + " records, need " +
                            std::to_string(per_category));
        auto& pool = it->second;
        // stable base order, then a category-salted seeded shuffle
        std::sort(pool.begin(), pool.end(),
                  [](const PromptRecord* a, const PromptRecord* b) { return a->id < b->id; });
        std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL *
                                    static_cast<std::uint64_t>(cat.code)));
        std::shuffle(pool.begin(), pool.end(), rng);
        for (int i = 0; i < per_category; ++i) out.push_back(*pool[static_cast<size_t>(i)]);
    }
    return out;
}

std::map<HarmCode, CategoryStats> category_stats(const Corpus& corpus) {
    std::map<HarmCode, std::vector<const PromptRecord*>> by_category;
    for (const auto& rec : corpus.records) by_category[rec.category].push_back(&rec);

    std::map<HarmCode, CategoryStats> out;
    for (const auto& [code, recs] : by_category) {
        CategoryStats stats;
        stats.prompt_count = static_cast<int>(recs.size());
        double chars = 0.0, words = 0.0, complexity = 0.0;
        for (const auto* rec : recs) {
            chars += static_cast<double>(rec->text.size());
            words += word_count(rec->text);
            complexity += complexity_score(rec->text);
        }
        const double n = static_cast<double>(recs.size());
        stats.avg_prompt_chars = chars / n;
        stats.avg_word_count = words / n;
        stats.avg_complexity = complexity / n;
        double var = 0.0;
        for (const auto* rec : recs) {
            const double d = static_cast<double>(rec->text.size()) - stats.avg_prompt_chars;
            var += d * d;
        }
        stats.std_prompt_chars = std::sqrt(var / n);
        out[code] = stats;
    }
    return out;
}

}  // namespace safectrl
