#pragma once

#include <array>
#include <string>
#include <vector>

namespace safectrl {

int word_count(const std::string& text);

/// (count of '?' + occurrences of "why" + occurrences of "explain") / 10,
/// capped at 1. Case-insensitive substring counting.
double complexity_score(const std::string& text);

/// Distinct sophistication keywords present / 7. Keyword list:
/// however, therefore, consequently, nevertheless, furthermore,
/// specifically, alternatively.
double sophistication(const std::string& text);

/// Instruction-word tokens / word count, capped at 1. Instruction words:
/// must, should, always, never, do, don't, ensure (whole-token match,
/// punctuation stripped except apostrophes).
double instruction_density(const std::string& text);

/// Character-trigram feature hashing into 4 accumulators, each mapped to
/// [0,1). Deterministic across platforms (fixed 64-bit seed); empty text
/// maps to all zeros.
std::array<double, 4> prompt_hash4(const std::string& text);

/// Stable hex fingerprint used to key prompt caches and scripted backends.
std::string prompt_fingerprint(const std::string& text);

}  // namespace safectrl
