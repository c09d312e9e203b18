#include "finset/curation.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "finset/errors.hpp"
#include "finset/tokenize.hpp"

namespace finset {

namespace {

std::regex compile_pattern(const std::string& pattern, const std::string& where) {
    std::string expr;
    if (pattern.rfind("re:", 0) == 0) {
        expr = pattern.substr(3);
    } else {
        // glob -> anchored regex
        for (char c : pattern) {
            switch (c) {
                case '*': expr += ".*"; break;
                case '?': expr += '.'; break;
                case '.': case '+': case '(': case ')': case '[': case ']':
                case '{': case '}': case '^': case '$': case '|': case '\\':
                    expr += '\\';
                    [[fallthrough]];
                default: expr += c;
            }
        }
    }
    try {
        return std::regex(expr);
    } catch (const std::regex_error& e) {
        throw ConfigError(where + ": invalid pattern '" + pattern + "': " + e.what());
    }
}

bool full_match_glob(const std::string& pattern, const std::regex& re, const std::string& s) {
    // globs match the whole URL; raw regexes search
    if (pattern.rfind("re:", 0) == 0) return std::regex_search(s, re);
    return std::regex_match(s, re);
}

bool ascii_letter(unsigned char c) { return std::isalpha(c) != 0; }

}  // namespace

void CurationConfig::validate() const {
    auto frac = [](double v, const char* name) {
        if (v < 0.0 || v > 1.0)
            throw ConfigError(std::string(name) + " must lie in [0,1]");
    };
    frac(lang_confidence_min, "lang_confidence_min");
    frac(domain_threshold, "domain_threshold");
}

std::map<std::string, std::string> default_sensitive_patterns() {
    return {
        {"email", R"([A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\.[A-Za-z]{2,})"},
        {"phone", R"((?:\+\d{1,2}[ .-]*)?(?:\(\d{3}\)|\d{3})[ .-]\d{3}[ .-]\d{4})"},
        {"ssn", R"(\b\d{3}-\d{2}-\d{4}\b|\b\d{9}\b)"},
        {"card", R"(\b(?:\d{4}[- ]){3}\d{4}\b|\b\d{16}\b)"},
    };
}

std::set<std::string> default_domain_lexicon() {
    return {
        "stock",    "stocks",    "share",     "shares",   "bond",      "bonds",
        "equity",   "dividend",  "dividends", "market",   "markets",   "revenue",
        "earnings", "profit",    "loss",      "income",   "asset",     "assets",
        "liability", "liabilities", "portfolio", "invest", "investor", "investors",
        "investment", "investments", "fund",   "funds",    "bank",      "banks",
        "loan",     "loans",     "credit",    "debt",     "interest",  "rate",
        "rates",    "inflation", "fiscal",    "capital",  "finance",   "financial",
        "trading",  "trade",     "price",     "prices",   "yield",     "margin",
        "quarter",  "quarterly", "fiscal",    "sec",      "ipo",       "merger",
        "acquisition", "valuation", "hedge",  "futures",  "options",   "currency",
        "treasury", "tax",       "taxes",     "audit",    "balance",   "cash",
        "payout",   "securities", "shareholder", "shareholders", "broker", "economy",
        "economic", "gdp",       "forecast",  "analyst",  "analysts",
    };
}

CurationEngine::CurationEngine(CurationConfig config) : config_(std::move(config)) {
    config_.validate();
    for (const auto& p : config_.url_allow_patterns)
        allow_.push_back(compile_pattern(p, "url_allow_patterns"));
    for (const auto& p : config_.url_block_patterns)
        block_.push_back(compile_pattern(p, "url_block_patterns"));
    const auto& patterns = config_.sensitive_patterns.empty()
                               ? default_sensitive_patterns()
                               : config_.sensitive_patterns;
    for (const auto& [name, expr] : patterns) {
        try {
            sensitive_.emplace_back(expr);
        } catch (const std::regex_error& e) {
            throw ConfigError("sensitive_patterns." + name + ": " + e.what());
        }
    }
}

std::pair<bool, std::string> CurationEngine::filter_url(const Document& doc) const {
    if (!doc.url) return {true, ""};  // SEC/press records carry no URL
    const std::string& url = *doc.url;
    for (std::size_t i = 0; i < block_.size(); ++i) {
        if (full_match_glob(config_.url_block_patterns[i], block_[i], url))
            return {false, "url_block"};
    }
    if (allow_.empty()) return {true, ""};
    for (std::size_t i = 0; i < allow_.size(); ++i) {
        if (full_match_glob(config_.url_allow_patterns[i], allow_[i], url))
            return {true, ""};
    }
    return {false, "url_not_allowed"};
}

double CurationEngine::score_domain(const Document& doc) const {
    const std::vector<std::string> tokens = tokenize(doc.text);
    if (tokens.empty()) return 0.0;
    std::size_t hits = 0;
    for (const std::string& t : tokens) {
        if (config_.domain_lexicon.contains(to_lower(t))) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(tokens.size());
}

std::size_t CurationEngine::filter_sensitive_lines(Document& doc) const {
    std::string kept;
    kept.reserve(doc.text.size());
    std::size_t removed = 0;
    std::size_t pos = 0;
    bool first = true;
    while (pos <= doc.text.size()) {
        std::size_t nl = doc.text.find('\n', pos);
        std::string_view line(doc.text.data() + pos,
                              (nl == std::string::npos ? doc.text.size() : nl) - pos);
        bool hit = false;
        for (const std::regex& re : sensitive_) {
            if (std::regex_search(line.begin(), line.end(), re)) {
                hit = true;
                break;
            }
        }
        if (hit) {
            ++removed;
        } else {
            if (!first) kept += '\n';
            kept.append(line);
            first = false;
        }
        if (nl == std::string::npos) break;
        pos = nl + 1;
    }
    if (removed > 0) {
        doc.text = std::move(kept);
        doc.recount_tokens();
    }
    return removed;
}

std::pair<bool, std::string> CurationEngine::clean_text(Document& doc) const {
    std::string out;
    out.reserve(doc.text.size());
    for (std::size_t i = 0; i < doc.text.size(); ++i) {
        unsigned char c = static_cast<unsigned char>(doc.text[i]);
        if ((c < 0x20 && c != '\n' && c != '\t') || c == 0x7f) continue;
        if (c < 0x80 && std::ispunct(c)) {
            // collapse runs of the same punctuation character longer than 4
            std::size_t run = 1;
            while (i + run < doc.text.size() && doc.text[i + run] == doc.text[i]) ++run;
            out.append(std::min<std::size_t>(run, 4), doc.text[i]);
            i += run - 1;
            continue;
        }
        out.push_back(doc.text[i]);
    }
    if (out != doc.text) {
        doc.text = std::move(out);
        doc.recount_tokens();
    }
    const std::vector<std::string> tokens = tokenize(doc.text);
    if (tokens.size() < config_.min_doc_tokens) return {false, "too_short"};
    std::size_t non_word = 0;
    for (const std::string& t : tokens)
        if (!is_word_token(t)) ++non_word;
    if (static_cast<double>(non_word) > 0.5 * static_cast<double>(tokens.size()))
        return {false, "non_text"};
    return {true, ""};
}

// ---------------------------------------------------------------------------
// Markup extraction

namespace {

struct EntityMap {
    std::string_view name;
    std::string_view expansion;
};

constexpr EntityMap kEntities[] = {
    {"amp", "&"},  {"lt", "<"},    {"gt", ">"},   {"quot", "\""},
    {"apos", "'"}, {"nbsp", " "},  {"ndash", "-"}, {"mdash", "-"},
};

void append_utf8(std::string& out, unsigned long cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

bool iequal(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(a[i])) !=
            std::tolower(static_cast<unsigned char>(b[i])))
            return false;
    }
    return true;
}

bool is_block_tag(std::string_view name) {
    static constexpr std::string_view kBlocks[] = {
        "p", "br", "div", "li", "ul", "ol", "tr", "table", "h1", "h2",
        "h3", "h4", "h5", "h6", "blockquote", "section", "article", "pre"};
    for (std::string_view b : kBlocks)
        if (iequal(name, b)) return true;
    return false;
}

// tag name at `pos` (after '<' and optional '/')
std::string_view tag_name_at(std::string_view s, std::size_t pos) {
    std::size_t end = pos;
    while (end < s.size() && ascii_letter(static_cast<unsigned char>(s[end]))) ++end;
    std::size_t digits = end;
    while (digits < s.size() && std::isdigit(static_cast<unsigned char>(s[digits]))) ++digits;
    return s.substr(pos, digits - pos);
}

}  // namespace

std::string extract_text(std::string_view raw) {
    std::string body;
    body.reserve(raw.size());
    std::size_t i = 0;
    while (i < raw.size()) {
        char c = raw[i];
        if (c == '<' && i + 1 < raw.size()) {
            char next = raw[i + 1];
            if (next == '!') {
                if (raw.compare(i, 4, "<!--") == 0) {
                    std::size_t end = raw.find("-->", i + 4);
                    i = (end == std::string_view::npos) ? raw.size() : end + 3;
                    continue;
                }
                std::size_t end = raw.find('>', i);
                i = (end == std::string_view::npos) ? raw.size() : end + 1;
                continue;
            }
            if (ascii_letter(static_cast<unsigned char>(next)) || next == '/') {
                std::size_t name_pos = i + 1 + (next == '/' ? 1 : 0);
                std::string_view name = tag_name_at(raw, name_pos);
                std::size_t end = raw.find('>', i);
                if (end == std::string_view::npos) {
                    i = raw.size();
                    continue;
                }
                if (next != '/' && (iequal(name, "script") || iequal(name, "style"))) {
                    std::string close = "</" + std::string(name);
                    std::size_t stop = raw.size();
                    for (std::size_t k = end + 1; k + close.size() <= raw.size(); ++k) {
                        if (iequal(raw.substr(k, close.size()), close)) {
                            std::size_t gt = raw.find('>', k);
                            stop = (gt == std::string_view::npos) ? raw.size() : gt + 1;
                            break;
                        }
                    }
                    i = stop;
                    continue;
                }
                if (is_block_tag(name)) body += '\n';
                i = end + 1;
                continue;
            }
            // '<' not opening a tag: literal
            body += c;
            ++i;
            continue;
        }
        if (c == '&') {
            std::size_t semi = raw.find(';', i + 1);
            if (semi != std::string_view::npos && semi - i <= 10) {
                std::string_view ent = raw.substr(i + 1, semi - i - 1);
                bool decoded = false;
                if (!ent.empty() && ent[0] == '#') {
                    unsigned long cp = 0;
                    bool hex = ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X');
                    std::string digits(ent.substr(hex ? 2 : 1));
                    if (!digits.empty()) {
                        char* stop = nullptr;
                        cp = std::strtoul(digits.c_str(), &stop, hex ? 16 : 10);
                        if (stop && *stop == '\0' && cp > 0 && cp <= 0x10FFFF) {
                            append_utf8(body, cp);
                            decoded = true;
                        }
                    }
                } else {
                    for (const EntityMap& e : kEntities) {
                        if (ent == e.name) {
                            body += e.expansion;
                            decoded = true;
                            break;
                        }
                    }
                }
                if (decoded) {
                    i = semi + 1;
                    continue;
                }
            }
        }
        body += c;
        ++i;
    }

    // whitespace normalization: runs with a newline become one paragraph break,
    // other runs a single space; leading/trailing whitespace trimmed
    std::string out;
    out.reserve(body.size());
    std::size_t j = 0;
    while (j < body.size()) {
        unsigned char c = static_cast<unsigned char>(body[j]);
        if (std::isspace(c)) {
            bool has_newline = false;
            while (j < body.size() &&
                   std::isspace(static_cast<unsigned char>(body[j]))) {
                if (body[j] == '\n') has_newline = true;
                ++j;
            }
            if (!out.empty() && j < body.size()) out += has_newline ? '\n' : ' ';
        } else {
            out += body[j];
            ++j;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Language identification

namespace {

// Word-padded letter trigram frequencies (the substrate for both profile
// construction and document scoring).
std::map<std::string, std::uint64_t> trigram_counts(std::string_view text) {
    std::map<std::string, std::uint64_t> counts;
    std::string word;
    auto flush = [&] {
        if (word.size() >= 1) {
            std::string padded = " " + word + " ";
            for (std::size_t i = 0; i + 3 <= padded.size(); ++i)
                ++counts[padded.substr(i, 3)];
        }
        word.clear();
    };
    for (char ch : text) {
        unsigned char c = static_cast<unsigned char>(ch);
        if (ascii_letter(c)) {
            word.push_back(static_cast<char>(std::tolower(c)));
        } else {
            flush();
        }
    }
    flush();
    return counts;
}

}  // namespace

LangProfile LangProfile::from_text(std::string language, std::string_view text,
                                   std::size_t max_trigrams) {
    std::map<std::string, std::uint64_t> counts = trigram_counts(text);

    std::vector<std::pair<std::string, std::uint64_t>> ranked(counts.begin(), counts.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (ranked.size() > max_trigrams) ranked.resize(max_trigrams);

    LangProfile p;
    p.language = std::move(language);
    int rank = 1;
    for (const auto& [tri, _] : ranked) p.trigram_ranks[tri] = rank++;
    return p;
}

std::pair<std::string, double> detect_language(std::string_view text,
                                               const std::vector<LangProfile>& profiles) {
    if (profiles.empty()) throw ConfigError("detect_language: empty profile set");
    if (text.size() < 20) return {"und", 0.0};

    const std::map<std::string, std::uint64_t> counts = trigram_counts(text);
    const LangProfile doc = LangProfile::from_text("doc", text);
    if (doc.trigram_ranks.empty()) return {"und", 0.0};

    double total = 0.0;
    for (const auto& [tri, c] : counts) total += static_cast<double>(c);

    std::string best_lang = "und";
    double best_conf = 0.0;
    for (const LangProfile& ref : profiles) {
        const double penalty = static_cast<double>(ref.trigram_ranks.size());
        // Occurrence-weighted out-of-place distance. A miss costs less than the
        // full profile depth and a matched trigram's rank displacement counts
        // far less still: rare content trigrams fall outside any 300-trigram
        // profile even in-language, and short documents shuffle ranks heavily.
        const double miss_weight = 0.66;
        const double displacement_weight = 0.1;
        double distance = 0.0;
        for (const auto& [tri, c] : counts) {
            const double weight = static_cast<double>(c);
            auto it = ref.trigram_ranks.find(tri);
            if (it == ref.trigram_ranks.end()) {
                distance += weight * miss_weight * penalty;
                continue;
            }
            auto doc_it = doc.trigram_ranks.find(tri);
            const double doc_rank = doc_it == doc.trigram_ranks.end()
                                        ? penalty
                                        : static_cast<double>(doc_it->second);
            distance += weight * displacement_weight *
                        std::abs(doc_rank - static_cast<double>(it->second));
        }
        const double norm = distance / (total * penalty);
        const double conf = std::clamp(1.0 - norm, 0.0, 1.0);
        if (conf > best_conf) {
            best_conf = conf;
            best_lang = ref.language;
        }
    }
    return {best_lang, best_conf};
}

}  // namespace finset
