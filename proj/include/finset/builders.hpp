#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "finset/document.hpp"

namespace finset {

struct InstructionRecord {
    std::string id;
    std::string instruction;
    std::optional<std::string> input;
    std::string output;
    std::string source;
};

struct PreferencePair {
    std::string prompt;
    std::string chosen;
    std::string rejected;
    std::string chosen_source;
    std::string rejected_source;
};

struct McqItem {
    std::string term;
    std::string question;
    std::array<std::string, 4> options;
    int correct_index = 0;
    std::array<std::string, 3> distractor_terms;
};

struct TermDefinition {
    std::string term;
    std::string definition;
};

struct InstructionDedupResult {
    std::vector<InstructionRecord> survivors;
    StageReport report;  // stage slot reuses exact_dedup; reasons: duplicate, non_financial
};

// Exact dedup on normalized instruction+input+output, then domain-score filter.
InstructionDedupResult dedup_instructions(const std::vector<InstructionRecord>& records,
                                          const std::set<std::string>& domain_lexicon,
                                          double threshold);

struct PreferenceItem {
    std::string prompt;
    std::string chosen_output;
    std::string chosen_source;
    std::vector<std::string> rejected_candidates;
    std::vector<std::string> rejected_sources;  // parallel to candidates; may be empty
};

struct PreferenceBuildResult {
    std::vector<PreferencePair> pairs;
    std::uint64_t skipped_degenerate = 0;
    std::vector<std::string> errors;  // per-item problems (e.g. no candidates)
};

// Rejected response drawn uniformly by a generator keyed on (seed, item index),
// restricted to candidates distinct from the chosen output.
PreferenceBuildResult build_preference_pairs(const std::vector<PreferenceItem>& items,
                                             std::uint64_t seed);

// Distractors are the k definitions nearest in tf-idf cosine similarity,
// ties broken by term lexicographic order; options shuffled per item.
std::vector<McqItem> build_mcq(const std::vector<TermDefinition>& glossary,
                               std::size_t k_distractors, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Serialization (corpus shard line format + MCQ TSV)

std::string instruction_to_line(const InstructionRecord& r);
InstructionRecord instruction_from_line(std::string_view line, std::size_t line_no);
std::vector<InstructionRecord> read_instructions(const std::string& path, bool strict);
void write_instructions(const std::vector<InstructionRecord>& records,
                        const std::string& path);

std::string preference_to_line(const PreferencePair& p);
std::vector<PreferenceItem> read_preference_items(const std::string& path, bool strict);
void write_preference_pairs(const std::vector<PreferencePair>& pairs,
                            const std::string& path);

std::vector<TermDefinition> read_glossary(const std::string& path, bool strict);
std::string mcq_to_line(const McqItem& item);
std::string mcq_to_tsv(const McqItem& item);
void write_mcq(const std::vector<McqItem>& items, const std::string& path, bool tsv);

}  // namespace finset
