#include "finset/config.hpp"

#include <fstream>

#include "finset/errors.hpp"

namespace finset {

namespace {

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

template <typename T>
void read_field(const nlohmann::json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
}

std::optional<Date> read_date(const nlohmann::json& j, const char* key,
                              std::optional<Date> fallback) {
    if (!j.contains(key)) return fallback;
    if (j.at(key).is_null()) return std::nullopt;
    try {
        return Date::parse(j.at(key).get<std::string>());
    } catch (const DataError& e) {
        throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
}

}  // namespace

void CliConfig::validate() const {
    curation.validate();
    dedup.validate();
    retrieval.validate();
}

CliConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config root must be an object");
    CliConfig config;
    if (j.contains("curation")) {
        const nlohmann::json& c = j.at("curation");
        read_field(c, "url_allow_patterns", config.curation.url_allow_patterns);
        read_field(c, "url_block_patterns", config.curation.url_block_patterns);
        read_field(c, "min_doc_tokens", config.curation.min_doc_tokens);
        read_field(c, "lang_target", config.curation.lang_target);
        read_field(c, "lang_confidence_min", config.curation.lang_confidence_min);
        read_field(c, "domain_threshold", config.curation.domain_threshold);
        read_field(c, "domain_lexicon", config.curation.domain_lexicon);
        read_field(c, "sensitive_patterns", config.curation.sensitive_patterns);
    }
    if (j.contains("dedup")) {
        const nlohmann::json& d = j.at("dedup");
        read_field(d, "shingle_w", config.dedup.shingle_w);
        read_field(d, "num_hashes", config.dedup.num_hashes);
        read_field(d, "lsh_bands", config.dedup.lsh_bands);
        read_field(d, "lsh_rows", config.dedup.lsh_rows);
        read_field(d, "jaccard_threshold", config.dedup.jaccard_threshold);
        read_field(d, "seed", config.dedup.seed);
    }
    if (j.contains("retrieval")) {
        const nlohmann::json& r = j.at("retrieval");
        read_field(r, "k1", config.retrieval.k1);
        read_field(r, "b", config.retrieval.b);
        read_field(r, "top_k", config.retrieval.top_k);
        config.retrieval.date_from = read_date(r, "date_from", config.retrieval.date_from);
        config.retrieval.date_to = read_date(r, "date_to", config.retrieval.date_to);
    }
    read_field(j, "seed", config.seed);
    read_field(j, "strict_io", config.strict_io);
    if (config.curation.domain_lexicon.empty())
        config.curation.domain_lexicon = default_domain_lexicon();
    try {
        config.validate();
    } catch (const DataError& e) {
        throw ConfigError(e.what());
    }
    return config;
}

nlohmann::json config_to_json(const CliConfig& config) {
    nlohmann::json j;
    j["curation"]["url_allow_patterns"] = config.curation.url_allow_patterns;
    j["curation"]["url_block_patterns"] = config.curation.url_block_patterns;
    j["curation"]["min_doc_tokens"] = config.curation.min_doc_tokens;
    j["curation"]["lang_target"] = config.curation.lang_target;
    j["curation"]["lang_confidence_min"] = config.curation.lang_confidence_min;
    j["curation"]["domain_threshold"] = config.curation.domain_threshold;
    j["curation"]["domain_lexicon"] = config.curation.domain_lexicon;
    j["curation"]["sensitive_patterns"] = config.curation.sensitive_patterns.empty()
                                              ? default_sensitive_patterns()
                                              : config.curation.sensitive_patterns;
    j["dedup"]["shingle_w"] = config.dedup.shingle_w;
    j["dedup"]["num_hashes"] = config.dedup.num_hashes;
    j["dedup"]["lsh_bands"] = config.dedup.lsh_bands;
    j["dedup"]["lsh_rows"] = config.dedup.lsh_rows;
    j["dedup"]["jaccard_threshold"] = config.dedup.jaccard_threshold;
    j["dedup"]["seed"] = config.dedup.seed;
    j["retrieval"]["k1"] = config.retrieval.k1;
    j["retrieval"]["b"] = config.retrieval.b;
    j["retrieval"]["top_k"] = config.retrieval.top_k;
    j["retrieval"]["date_from"] =
        config.retrieval.date_from ? nlohmann::json(config.retrieval.date_from->to_string())
                                   : nlohmann::json(nullptr);
    j["retrieval"]["date_to"] =
        config.retrieval.date_to ? nlohmann::json(config.retrieval.date_to->to_string())
                                 : nlohmann::json(nullptr);
    j["seed"] = config.seed;
    j["strict_io"] = config.strict_io;
    return j;
}

std::string CliConfig::digest() const {
    // nlohmann::json orders object keys, so dump() is canonical
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(config_to_json(*this).dump())));
    return buf;
}

CliConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file: " + path);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) throw ConfigError("malformed config file: " + path);
    return config_from_json(j);
}

}  // namespace finset
