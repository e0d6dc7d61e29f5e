#include "safectrl/text_features.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <sstream>

namespace safectrl {

namespace {

std::string lower(const std::string& text) {
    std::string out = text;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
}

int count_substring(const std::string& haystack, const std::string& needle) {
    if (needle.empty()) return 0;
    int n = 0;
    for (size_t pos = haystack.find(needle); pos != std::string::npos;
         pos = haystack.find(needle, pos + needle.size()))
        ++n;
    return n;
}

std::vector<std::string> tokens(const std::string& text) {
    std::istringstream in(text);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

// Strips leading/trailing punctuation, keeps apostrophes so "don't" survives.
std::string strip_token(const std::string& tok) {
    size_t b = 0, e = tok.size();
    auto keep = [](unsigned char c) { return std::isalnum(c) || c == '\''; };
    while (b < e && !keep(static_cast<unsigned char>(tok[b]))) ++b;
    while (e > b && !keep(static_cast<unsigned char>(tok[e - 1]))) --e;
    return lower(tok.substr(b, e - b));
}

const std::vector<std::string>& sophistication_keywords() {
    static const std::vector<std::string> kw = {
        "however", "therefore", "consequently", "nevertheless",
        "furthermore", "specifically", "alternatively"};
    return kw;
}

const std::vector<std::string>& instruction_words() {
    static const std::vector<std::string> words = {
        "must", "should", "always", "never", "do", "don't", "ensure"};
    return words;
}

constexpr std::uint64_t kHashSeed = 0x5afec7a15eedULL;

std::uint64_t fnv1a(const char* data, size_t len, std::uint64_t seed) {
    std::uint64_t h = 1469598103934665603ULL ^ seed;
    for (size_t i = 0; i < len; ++i) {
        h ^= static_cast<unsigned char>(data[i]);
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace

int word_count(const std::string& text) {
    return static_cast<int>(tokens(text).size());
}

double complexity_score(const std::string& text) {
    const std::string t = lower(text);
    int hits = static_cast<int>(std::count(t.begin(), t.end(), '?'));
    hits += count_substring(t, "why");
    hits += count_substring(t, "explain");
    return std::min(1.0, hits / 10.0);
}

double sophistication(const std::string& text) {
    const std::string t = lower(text);
    int present = 0;
    for (const auto& kw : sophistication_keywords())
        if (t.find(kw) != std::string::npos) ++present;
    return present / 7.0;
}

double instruction_density(const std::string& text) {
    const auto toks = tokens(text);
    if (toks.empty()) return 0.0;
    const auto& words = instruction_words();
    int hits = 0;
    for (const auto& tok : toks) {
        const std::string w = strip_token(tok);
        if (std::find(words.begin(), words.end(), w) != words.end()) ++hits;
    }
    return std::min(1.0, static_cast<double>(hits) / toks.size());
}

std::array<double, 4> prompt_hash4(const std::string& text) {
    std::array<double, 4> acc = {0.0, 0.0, 0.0, 0.0};
    if (text.empty()) return acc;
    const size_t gram = 3;
    const size_t n = text.size() < gram ? 1 : text.size() - gram + 1;
    for (size_t i = 0; i < n; ++i) {
        const size_t len = std::min(gram, text.size() - i);
        const std::uint64_t h = fnv1a(text.data() + i, len, kHashSeed);
        const int bucket = static_cast<int>(h & 3);
        acc[bucket] += static_cast<double>(h >> 2) / 4611686018427387904.0;  // 2^62
    }
    for (auto& v : acc) v = v / (1.0 + v);
    return acc;
}

std::string prompt_fingerprint(const std::string& text) {
    const std::uint64_t h = fnv1a(text.data(), text.size(), kHashSeed ^ 0xf1befULL);
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) out[i] = digits[(h >> ((15 - i) * 4)) & 0xf];
    return out;
}

}  // namespace safectrl
