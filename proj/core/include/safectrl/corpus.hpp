#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "safectrl/encoder.hpp"
#include "safectrl/types.hpp"

namespace safectrl {

struct Corpus {
    std::vector<PromptRecord> records;

    std::map<HarmCode, int> category_counts() const;
    int safe_count() const;
    int unsafe_count() const;
};

/// Loads a line-delimited corpus (one JSON object per line with fields
/// id, prompt, category, label, source). Strict mode rejects the whole file
/// on any malformed line; otherwise malformed lines are reported through
/// `warnings` (with line numbers) and skipped. Duplicate ids and unknown
/// categories are always malformed.
Corpus load_corpus(const std::string& path, bool strict = true,
                   std::vector<std::string>* warnings = nullptr);

/// Exactly per_category prompts from each of the 12 categories, sampled
/// without replacement, reproducible from the seed, fixed across methods.
/// Throws DataError when a category has too few records.
std::vector<PromptRecord> sample_balanced(const Corpus& corpus, int per_category,
                                          std::uint64_t seed);

/// Per-category prompt statistics feeding encoder features 20-24.
std::map<HarmCode, CategoryStats> category_stats(const Corpus& corpus);

}  // namespace safectrl
