#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "finset/document.hpp"

namespace finset {

struct RetrievalConfig {
    double k1 = 1.2;
    double b = 0.75;
    std::size_t top_k = 5;
    std::optional<Date> date_from = Date{2022, 1, 1};
    std::optional<Date> date_to = Date{2023, 9, 30};

    void validate() const;
};

struct SearchHit {
    std::string doc_id;
    double score = 0.0;
};

// Inverted index over corpus-tokenized, casefolded terms.
class Index {
public:
    static Index build(const std::vector<Document>& docs);

    std::size_t size() const { return docs_.size(); }
    double avgdl() const;
    std::size_t doc_frequency(const std::string& term) const;
    const std::string& doc_text(const std::string& doc_id) const;

    std::vector<SearchHit> search(const std::string& query,
                                  const RetrievalConfig& config) const;

    void save(const std::string& path) const;
    static Index load(const std::string& path);

private:
    struct DocEntry {
        std::string id;
        std::string text;
        std::uint64_t length = 0;  // token count
        std::optional<Date> date;
    };
    struct Posting {
        std::uint32_t doc = 0;
        std::uint32_t tf = 0;
    };

    std::vector<DocEntry> docs_;
    std::map<std::string, std::vector<Posting>> postings_;
    std::uint64_t total_length_ = 0;
};

std::vector<SearchHit> bm25_search(const Index& index, const std::string& query,
                                   const RetrievalConfig& config);

// Pluggable scorer for externally computed embeddings: cosine ranking over
// caller-supplied vectors keyed by doc id.
class EmbeddingScorer {
public:
    void add(const std::string& doc_id, std::vector<double> vector);
    std::vector<SearchHit> rank(const std::vector<double>& query_vector,
                                std::size_t top_k) const;

private:
    std::vector<std::pair<std::string, std::vector<double>>> vectors_;
};

// Fixed section order: persona, Instructions, Context, Retrieval, Question, Answer.
struct PromptSpec {
    std::string persona;  // empty -> default financial-expert persona
    std::vector<std::string> instructions;
    std::optional<std::string> context;
    std::optional<std::string> retrieval;
    std::string question;
};

const std::string& default_persona();
const std::vector<std::string>& default_instructions();
const std::string& tool_format_instruction();

std::string build_prompt(const PromptSpec& spec);

struct RetrievalChain {
    std::string stage1_prompt;
    // takes the extracted text produced by the caller's model and yields the
    // final answer-generation prompt
    std::function<std::string(const std::string& extracted_text)> stage2_prompt;
};

RetrievalChain build_retrieval_chain(const std::string& document_text,
                                     const std::string& question, const Index& index,
                                     const RetrievalConfig& config);

}  // namespace finset
