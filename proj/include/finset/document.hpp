#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace finset {

enum class Source { c4, news, sec, social, press, other };

std::string_view source_name(Source s);
Source source_from_name(std::string_view name);

struct Date {
    int year = 0;
    int month = 0;
    int day = 0;

    auto operator<=>(const Date&) const = default;

    static Date parse(std::string_view iso);  // throws DataError on invalid dates
    std::string to_string() const;            // ISO-8601 YYYY-MM-DD
};

// One corpus record; the unit flowing through every pipeline stage.
struct Document {
    std::string id;
    std::optional<std::string> url;
    std::string text;
    Source source = Source::other;
    std::optional<std::string> lang;
    std::optional<Date> date;
    std::uint64_t tokens = 0;

    // Unknown input fields, preserved verbatim on write.
    nlohmann::ordered_json extra = nlohmann::ordered_json::object();

    void recount_tokens();

    bool operator==(const Document& other) const;
};

Document document_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json document_to_json(const Document& doc);

// Canonical single-line serialization used by the shard format.
std::string document_to_line(const Document& doc);
Document document_from_line(std::string_view line, std::size_t line_no);

// Stage identifiers in canonical pipeline order.
enum class Stage { url, extract, lang, domain, sensitive, fuzzy_dedup, exact_dedup, clean };

constexpr int kStageCount = 8;
std::string_view stage_name(Stage s);
Stage stage_from_name(std::string_view name);

// Per-stage accounting: a stage only removes, never adds.
struct StageReport {
    Stage stage = Stage::url;
    std::uint64_t docs_in = 0;
    std::uint64_t docs_out = 0;
    std::uint64_t tokens_in = 0;
    std::uint64_t tokens_out = 0;
    std::map<std::string, std::uint64_t> removed_reasons;

    void check() const;  // throws DataError if invariants are violated
};

struct Manifest {
    std::string pipeline_version;
    std::string config_digest;
    std::vector<StageReport> stages;
    std::string created_at;  // ISO-8601 timestamp, empty in deterministic mode

    void check() const;  // stage order + token chaining
};

nlohmann::ordered_json stage_report_to_json(const StageReport& r);
StageReport stage_report_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json manifest_to_json(const Manifest& m);
Manifest manifest_from_json(const nlohmann::ordered_json& j);

void write_manifest(const Manifest& m, const std::string& path);
Manifest read_manifest(const std::string& path);

struct ShardReadResult {
    std::vector<Document> docs;
    std::size_t skipped = 0;  // malformed lines skipped in lenient mode
};

// Reads newline-delimited records. In strict mode the first malformed line
// aborts with its line number.
ShardReadResult read_shard(const std::string& path, bool strict = false);
ShardReadResult read_shard(std::istream& in, bool strict, const std::string& name);

// One canonical record per line, input order preserved. Duplicate ids are an error.
std::size_t write_shard(const std::vector<Document>& docs, const std::string& path);
std::size_t write_shard(const std::vector<Document>& docs, std::ostream& out);

}  // namespace finset
