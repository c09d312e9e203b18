#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "finset/document.hpp"

namespace finset {

struct CurationConfig {
    // Patterns are globs unless prefixed with "re:" for raw regular expressions.
    std::vector<std::string> url_allow_patterns;
    std::vector<std::string> url_block_patterns;
    std::uint64_t min_doc_tokens = 32;
    std::string lang_target = "en";
    double lang_confidence_min = 0.65;
    double domain_threshold = 0.05;
    std::set<std::string> domain_lexicon;
    // name -> regular expression tested per line; empty means built-in defaults
    std::map<std::string, std::string> sensitive_patterns;

    void validate() const;  // throws ConfigError
};

// Built-in sensitive-line patterns: email, phone, ssn, card.
std::map<std::string, std::string> default_sensitive_patterns();
std::set<std::string> default_domain_lexicon();

// Compiled form of CurationConfig; pattern errors surface here, at load time.
class CurationEngine {
public:
    explicit CurationEngine(CurationConfig config);

    const CurationConfig& config() const { return config_; }

    // keep (empty reason) or drop with reason "url_block"/"url_not_allowed".
    // Documents without a URL always pass.
    std::pair<bool, std::string> filter_url(const Document& doc) const;

    double score_domain(const Document& doc) const;

    // Removes lines matching any sensitive pattern; returns removed-line count.
    std::size_t filter_sensitive_lines(Document& doc) const;

    // Normalizes text in place; returns keep (empty reason) or drop reason
    // "too_short"/"non_text".
    std::pair<bool, std::string> clean_text(Document& doc) const;

private:
    CurationConfig config_;
    std::vector<std::regex> allow_;
    std::vector<std::regex> block_;
    std::vector<std::regex> sensitive_;
};

// Markup stripping: tags and script/style/comment blocks removed, image
// references dropped, entities decoded, whitespace collapsed with paragraph
// breaks preserved as newlines.
std::string extract_text(std::string_view raw);

// Rank-order character-trigram language profile (out-of-place measure).
struct LangProfile {
    std::string language;
    std::map<std::string, int> trigram_ranks;  // trigram -> rank 1..N

    static LangProfile from_text(std::string language, std::string_view text,
                                 std::size_t max_trigrams = 300);
};

const LangProfile& english_profile();

// Returns ("und", 0) for texts under 20 characters or without letter trigrams.
std::pair<std::string, double> detect_language(std::string_view text,
                                               const std::vector<LangProfile>& profiles);

}  // namespace finset
