#include "finset/document.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "finset/errors.hpp"
#include "finset/tokenize.hpp"

namespace finset {

namespace {

constexpr std::array<std::string_view, 6> kSourceNames = {
    "c4", "news", "sec", "social", "press", "other"};

constexpr std::array<std::string_view, 8> kStageNames = {
    "url", "extract", "lang", "domain", "sensitive", "fuzzy_dedup", "exact_dedup", "clean"};

// Keys owned by the record schema; everything else is preserved in `extra`.
const std::unordered_set<std::string> kKnownKeys = {
    "id", "url", "text", "source", "lang", "date", "tokens"};

bool leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
    static const int d[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && leap(y)) return 29;
    return d[m - 1];
}

}  // namespace

std::string_view source_name(Source s) {
    return kSourceNames[static_cast<int>(s)];
}

Source source_from_name(std::string_view name) {
    for (std::size_t i = 0; i < kSourceNames.size(); ++i) {
        if (kSourceNames[i] == name) return static_cast<Source>(i);
    }
    throw DataError("unknown source: " + std::string(name));
}

Date Date::parse(std::string_view iso) {
    Date d;
    if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-')
        throw DataError("invalid date: " + std::string(iso));
    auto num = [&](std::size_t pos, std::size_t len) {
        int v = 0;
        auto first = iso.data() + pos;
        auto [p, ec] = std::from_chars(first, first + len, v);
        if (ec != std::errc() || p != first + len)
            throw DataError("invalid date: " + std::string(iso));
        return v;
    };
    d.year = num(0, 4);
    d.month = num(5, 2);
    d.day = num(8, 2);
    if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > days_in_month(d.year, d.month))
        throw DataError("invalid calendar date: " + std::string(iso));
    return d;
}

std::string Date::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
    return buf;
}

void Document::recount_tokens() { tokens = count_tokens(text); }

bool Document::operator==(const Document& other) const {
    return id == other.id && url == other.url && text == other.text &&
           source == other.source && lang == other.lang && date == other.date &&
           tokens == other.tokens && extra == other.extra;
}

Document document_from_json(const nlohmann::ordered_json& j) {
    if (!j.is_object()) throw DataError("record is not an object");
    Document d;
    if (!j.contains("id") || !j.at("id").is_string())
        throw DataError("record missing string 'id'");
    d.id = j.at("id").get<std::string>();
    if (d.id.empty()) throw DataError("record has empty 'id'");
    if (!j.contains("text") || !j.at("text").is_string())
        throw DataError("record missing string 'text'");
    d.text = j.at("text").get<std::string>();
    if (j.contains("url")) d.url = j.at("url").get<std::string>();
    d.source = j.contains("source") ? source_from_name(j.at("source").get<std::string>())
                                    : Source::other;
    if (j.contains("lang")) d.lang = j.at("lang").get<std::string>();
    if (j.contains("date")) d.date = Date::parse(j.at("date").get<std::string>());
    if (j.contains("tokens")) {
        if (!j.at("tokens").is_number_unsigned())
            throw DataError("record 'tokens' must be a non-negative integer");
        d.tokens = j.at("tokens").get<std::uint64_t>();
    } else {
        d.recount_tokens();
    }
    for (const auto& [key, value] : j.items()) {
        if (!kKnownKeys.contains(key)) d.extra[key] = value;
    }
    return d;
}

nlohmann::ordered_json document_to_json(const Document& doc) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    j["id"] = doc.id;
    if (doc.url) j["url"] = *doc.url;
    j["text"] = doc.text;
    j["source"] = std::string(source_name(doc.source));
    if (doc.lang) j["lang"] = *doc.lang;
    if (doc.date) j["date"] = doc.date->to_string();
    j["tokens"] = doc.tokens;
    for (const auto& [key, value] : doc.extra.items()) j[key] = value;
    return j;
}

std::string document_to_line(const Document& doc) {
    return document_to_json(doc).dump();
}

Document document_from_line(std::string_view line, std::size_t line_no) {
    nlohmann::ordered_json j =
        nlohmann::ordered_json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded())
        throw DataError("line " + std::to_string(line_no) + ": malformed record");
    try {
        return document_from_json(j);
    } catch (const DataError& e) {
        throw DataError("line " + std::to_string(line_no) + ": " + e.what());
    }
}

std::string_view stage_name(Stage s) { return kStageNames[static_cast<int>(s)]; }

Stage stage_from_name(std::string_view name) {
    for (std::size_t i = 0; i < kStageNames.size(); ++i) {
        if (kStageNames[i] == name) return static_cast<Stage>(i);
    }
    throw ConfigError("unknown stage: " + std::string(name));
}

void StageReport::check() const {
    if (docs_out > docs_in || tokens_out > tokens_in)
        throw DataError(std::string("stage ") + std::string(stage_name(stage)) +
                        ": output exceeds input");
    std::uint64_t removed = 0;
    for (const auto& [reason, count] : removed_reasons) removed += count;
    if (removed != docs_in - docs_out)
        throw DataError(std::string("stage ") + std::string(stage_name(stage)) +
                        ": removed_reasons do not sum to docs removed");
}

void Manifest::check() const {
    int last = -1;
    for (std::size_t i = 0; i < stages.size(); ++i) {
        const StageReport& r = stages[i];
        r.check();
        int order = static_cast<int>(r.stage);
        if (order <= last) throw DataError("manifest stages out of pipeline order");
        last = order;
        if (i > 0 && stages[i - 1].tokens_out != r.tokens_in)
            throw DataError("manifest token chain broken at stage " +
                            std::string(stage_name(r.stage)));
    }
}

nlohmann::ordered_json stage_report_to_json(const StageReport& r) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    j["stage"] = std::string(stage_name(r.stage));
    j["docs_in"] = r.docs_in;
    j["docs_out"] = r.docs_out;
    j["tokens_in"] = r.tokens_in;
    j["tokens_out"] = r.tokens_out;
    j["removed_reasons"] = r.removed_reasons;
    return j;
}

StageReport stage_report_from_json(const nlohmann::ordered_json& j) {
    StageReport r;
    r.stage = stage_from_name(j.at("stage").get<std::string>());
    r.docs_in = j.at("docs_in").get<std::uint64_t>();
    r.docs_out = j.at("docs_out").get<std::uint64_t>();
    r.tokens_in = j.at("tokens_in").get<std::uint64_t>();
    r.tokens_out = j.at("tokens_out").get<std::uint64_t>();
    r.removed_reasons =
        j.at("removed_reasons").get<std::map<std::string, std::uint64_t>>();
    return r;
}

nlohmann::ordered_json manifest_to_json(const Manifest& m) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    j["pipeline_version"] = m.pipeline_version;
    j["config_digest"] = m.config_digest;
    j["stages"] = nlohmann::ordered_json::array();
    for (const StageReport& r : m.stages) j["stages"].push_back(stage_report_to_json(r));
    j["created_at"] = m.created_at;
    return j;
}

Manifest manifest_from_json(const nlohmann::ordered_json& j) {
    Manifest m;
    m.pipeline_version = j.at("pipeline_version").get<std::string>();
    m.config_digest = j.at("config_digest").get<std::string>();
    for (const auto& s : j.at("stages")) m.stages.push_back(stage_report_from_json(s));
    m.created_at = j.at("created_at").get<std::string>();
    return m;
}

void write_manifest(const Manifest& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write manifest: " + path);
    out << manifest_to_json(m).dump(2) << '\n';
    if (!out) throw DataError("write failed: " + path);
}

Manifest read_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read manifest: " + path);
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw DataError("malformed manifest " + path + ": " + e.what());
    }
    return manifest_from_json(j);
}

ShardReadResult read_shard(std::istream& in, bool strict, const std::string& name) {
    ShardReadResult result;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            result.docs.push_back(document_from_line(line, line_no));
        } catch (const DataError& e) {
            if (strict) throw DataError(name + ": " + e.what());
            ++result.skipped;
        }
    }
    return result;
}

ShardReadResult read_shard(const std::string& path, bool strict) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read shard: " + path);
    return read_shard(in, strict, path);
}

std::size_t write_shard(const std::vector<Document>& docs, std::ostream& out) {
    std::unordered_set<std::string_view> seen;
    seen.reserve(docs.size());
    for (const Document& d : docs) {
        if (!seen.insert(d.id).second)
            throw DataError("duplicate document id in shard: " + d.id);
        out << document_to_line(d) << '\n';
    }
    return docs.size();
}

std::size_t write_shard(const std::vector<Document>& docs, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write shard: " + path);
    std::size_t n = write_shard(docs, out);
    if (!out) throw DataError("write failed: " + path);
    return n;
}

}  // namespace finset
