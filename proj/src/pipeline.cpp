#include "finset/pipeline.hpp"

#include <chrono>
#include <ctime>
#include <sstream>

#include "finset/errors.hpp"

namespace finset {

namespace {

std::string now_iso8601() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::uint64_t total_tokens(const std::vector<Document>& docs) {
    std::uint64_t sum = 0;
    for (const Document& d : docs) sum += d.tokens;
    return sum;
}

// Runs one per-document filter/transform stage and accounts for it.
template <typename Fn>
StageReport run_doc_stage(Stage stage, std::vector<Document>& docs, Fn&& fn) {
    StageReport report;
    report.stage = stage;
    report.docs_in = docs.size();
    report.tokens_in = total_tokens(docs);
    std::vector<Document> kept;
    kept.reserve(docs.size());
    for (Document& doc : docs) {
        std::string reason = fn(doc);
        if (reason.empty()) {
            kept.push_back(std::move(doc));
        } else {
            ++report.removed_reasons[reason];
        }
    }
    docs = std::move(kept);
    report.docs_out = docs.size();
    report.tokens_out = total_tokens(docs);
    report.check();
    return report;
}

}  // namespace

std::vector<Stage> all_stages() {
    std::vector<Stage> stages;
    for (int i = 0; i < kStageCount; ++i) stages.push_back(static_cast<Stage>(i));
    return stages;
}

std::vector<Stage> parse_stage_list(const std::string& csv) {
    std::vector<Stage> stages;
    std::stringstream ss(csv);
    std::string item;
    int last = -1;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        Stage s = stage_from_name(item);
        if (static_cast<int>(s) <= last)
            throw ConfigError("stages must follow canonical pipeline order; '" + item +
                              "' is out of place");
        last = static_cast<int>(s);
        stages.push_back(s);
    }
    if (stages.empty()) throw ConfigError("empty stage list");
    return stages;
}

PipelineResult run_pipeline(std::vector<Document> docs, const CurationConfig& curation,
                            const DedupConfig& dedup, const PipelineOptions& options) {
    const CurationEngine engine(curation);  // validates config up front
    dedup.validate();

    std::vector<Stage> stages = options.stages.empty() ? all_stages() : options.stages;
    int last = -1;
    for (Stage s : stages) {
        if (static_cast<int>(s) <= last)
            throw ConfigError("pipeline stages out of canonical order");
        last = static_cast<int>(s);
    }
    if (curation.domain_lexicon.empty()) {
        for (Stage s : stages)
            if (s == Stage::domain)
                throw ConfigError("domain stage enabled with an empty domain_lexicon");
    }

    PipelineResult result;
    result.manifest.pipeline_version = kPipelineVersion;
    result.manifest.config_digest = options.config_digest;
    result.manifest.created_at = options.deterministic ? "" : now_iso8601();

    for (Stage stage : stages) {
        StageReport report;
        switch (stage) {
            case Stage::url:
                report = run_doc_stage(stage, docs, [&](Document& d) {
                    auto [keep, reason] = engine.filter_url(d);
                    return keep ? std::string() : reason;
                });
                break;
            case Stage::extract:
                report = run_doc_stage(stage, docs, [&](Document& d) {
                    d.text = extract_text(d.text);
                    d.recount_tokens();
                    return std::string();
                });
                break;
            case Stage::lang:
                report = run_doc_stage(stage, docs, [&](Document& d) {
                    auto [code, conf] = detect_language(d.text, {english_profile()});
                    if (code != curation.lang_target || conf < curation.lang_confidence_min)
                        return std::string("non_target_language");
                    d.lang = code;
                    return std::string();
                });
                break;
            case Stage::domain:
                report = run_doc_stage(stage, docs, [&](Document& d) {
                    return engine.score_domain(d) >= curation.domain_threshold
                               ? std::string()
                               : std::string("non_domain");
                });
                break;
            case Stage::sensitive:
                report = run_doc_stage(stage, docs, [&](Document& d) {
                    engine.filter_sensitive_lines(d);
                    return std::string();
                });
                break;
            case Stage::fuzzy_dedup: {
                DedupResult r = fuzzy_dedup(docs, dedup);
                docs = std::move(r.survivors);
                report = r.report;
                break;
            }
            case Stage::exact_dedup: {
                DedupResult r = exact_dedup(docs);
                docs = std::move(r.survivors);
                report = r.report;
                break;
            }
            case Stage::clean:
                report = run_doc_stage(stage, docs, [&](Document& d) {
                    auto [keep, reason] = engine.clean_text(d);
                    return keep ? std::string() : reason;
                });
                break;
        }
        result.manifest.stages.push_back(std::move(report));
    }

    result.manifest.check();
    result.docs = std::move(docs);
    return result;
}

}  // namespace finset
