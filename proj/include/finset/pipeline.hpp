#pragma once

#include <string>
#include <vector>

#include "finset/curation.hpp"
#include "finset/dedup.hpp"
#include "finset/document.hpp"

namespace finset {

inline constexpr const char* kPipelineVersion = "1.0.0";

struct PipelineOptions {
    std::vector<Stage> stages;  // must be a subsequence of canonical order
    std::string config_digest;
    bool deterministic = false;  // zero the manifest timestamp
};

// Full canonical stage order: url, extract, lang, domain, sensitive,
// fuzzy_dedup, exact_dedup, clean.
std::vector<Stage> all_stages();

// Parses "url,extract,..." and rejects reorderings.
std::vector<Stage> parse_stage_list(const std::string& csv);

struct PipelineResult {
    std::vector<Document> docs;
    Manifest manifest;
};

PipelineResult run_pipeline(std::vector<Document> docs, const CurationConfig& curation,
                            const DedupConfig& dedup, const PipelineOptions& options);

}  // namespace finset
