#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "finset/document.hpp"

namespace finset {

struct DedupConfig {
    std::size_t shingle_w = 5;
    std::size_t num_hashes = 128;
    std::size_t lsh_bands = 16;
    std::size_t lsh_rows = 8;
    double jaccard_threshold = 0.8;
    std::uint64_t seed = 0;

    void validate() const;  // bands * rows == num_hashes, threshold in (0,1]
};

// Lowercased word w-grams, set-collapsed.
std::set<std::string> shingle(std::string_view text, std::size_t w);

struct MinHashSignature {
    std::string doc_id;
    std::vector<std::uint64_t> values;
    std::uint64_t seed = 0;
    bool empty_input = false;  // all-max sentinel signature of an empty shingle set
};

MinHashSignature minhash_signature(const std::set<std::string>& shingles,
                                   const DedupConfig& config,
                                   std::string doc_id = {});

// Fraction of agreeing coordinates; throws DataError on config mismatch.
double estimate_jaccard(const MinHashSignature& a, const MinHashSignature& b);

// Unordered candidate pairs (indices into `signatures`) sharing at least one
// identical LSH band.
std::vector<std::pair<std::size_t, std::size_t>> lsh_candidates(
    const std::vector<MinHashSignature>& signatures, const DedupConfig& config);

struct DedupResult {
    std::vector<Document> survivors;
    StageReport report;
};

// MinHash/LSH near-duplicate removal; the earliest member of every duplicate
// cluster survives.
DedupResult fuzzy_dedup(const std::vector<Document>& docs, const DedupConfig& config);

// Whole-document dedup on a 128-bit hash of casefolded, whitespace-collapsed text.
DedupResult exact_dedup(const std::vector<Document>& docs);

std::string normalize_for_exact(std::string_view text);

// Signature cache for resumable runs: doc id -> signature values, keyed by
// config digest.
void write_signature_cache(const std::vector<MinHashSignature>& sigs,
                           const DedupConfig& config, const std::string& path);
std::vector<MinHashSignature> read_signature_cache(const DedupConfig& config,
                                                   const std::string& path);

std::string dedup_config_digest(const DedupConfig& config);

}  // namespace finset
