#include "finset/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <set>

#include "finset/errors.hpp"
#include "finset/tokenize.hpp"

namespace finset {

namespace {

constexpr char kIndexMagic[8] = {'F', 'N', 'S', 'I', 'D', 'X', '1', '\0'};
constexpr std::uint32_t kIndexVersion = 1;

void write_u64(std::ostream& out, std::uint64_t v) {
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(buf), 8);
}

std::uint64_t read_u64(std::istream& in) {
    unsigned char buf[8];
    in.read(reinterpret_cast<char*>(buf), 8);
    if (!in) throw DataError("truncated index file");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    return v;
}

void write_str(std::ostream& out, const std::string& s) {
    write_u64(out, s.size());
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_str(std::istream& in) {
    const std::uint64_t n = read_u64(in);
    std::string s(n, '\0');
    in.read(s.data(), static_cast<std::streamsize>(n));
    if (!in) throw DataError("truncated index file");
    return s;
}

std::vector<std::string> query_terms(const std::string& query) {
    std::vector<std::string> terms;
    std::set<std::string> seen;
    for (const std::string& t : tokenize(query)) {
        std::string lower = to_lower(t);
        if (seen.insert(lower).second) terms.push_back(std::move(lower));
    }
    return terms;
}

}  // namespace

void RetrievalConfig::validate() const {
    if (top_k < 1) throw ConfigError("top_k must be >= 1");
    if (k1 <= 0.0) throw ConfigError("k1 must be positive");
    if (b < 0.0 || b > 1.0) throw ConfigError("b must lie in [0,1]");
    if (date_from && date_to && *date_to < *date_from)
        throw ConfigError("date_to precedes date_from");
}

Index Index::build(const std::vector<Document>& docs) {
    Index index;
    std::set<std::string_view> ids;
    for (const Document& d : docs) {
        if (!ids.insert(d.id).second)
            throw DataError("duplicate document id in index input: " + d.id);
        DocEntry entry;
        entry.id = d.id;
        entry.text = d.text;
        entry.date = d.date;
        std::map<std::string, std::uint32_t> tf;
        for (const std::string& t : tokenize(d.text)) {
            ++tf[to_lower(t)];
            ++entry.length;
        }
        const auto doc_idx = static_cast<std::uint32_t>(index.docs_.size());
        for (const auto& [term, count] : tf)
            index.postings_[term].push_back({doc_idx, count});
        index.total_length_ += entry.length;
        index.docs_.push_back(std::move(entry));
    }
    return index;
}

double Index::avgdl() const {
    if (docs_.empty()) return 0.0;
    return static_cast<double>(total_length_) / static_cast<double>(docs_.size());
}

std::size_t Index::doc_frequency(const std::string& term) const {
    auto it = postings_.find(to_lower(term));
    return it == postings_.end() ? 0 : it->second.size();
}

const std::string& Index::doc_text(const std::string& doc_id) const {
    for (const DocEntry& d : docs_)
        if (d.id == doc_id) return d.text;
    throw DataError("unknown document id: " + doc_id);
}

std::vector<SearchHit> Index::search(const std::string& query,
                                     const RetrievalConfig& config) const {
    config.validate();
    const std::vector<std::string> terms = query_terms(query);
    if (terms.empty() || docs_.empty()) return {};

    const double n = static_cast<double>(docs_.size());
    const double avg = avgdl();
    std::unordered_map<std::uint32_t, double> scores;
    for (const std::string& term : terms) {
        auto it = postings_.find(term);
        if (it == postings_.end()) continue;
        const double df = static_cast<double>(it->second.size());
        const double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
        for (const Posting& p : it->second) {
            const DocEntry& doc = docs_[p.doc];
            if (doc.date) {
                if (config.date_from && *doc.date < *config.date_from) continue;
                if (config.date_to && *config.date_to < *doc.date) continue;
            }
            const double tf = static_cast<double>(p.tf);
            const double len = static_cast<double>(doc.length);
            const double denom =
                tf + config.k1 * (1.0 - config.b + config.b * len / (avg > 0 ? avg : 1.0));
            scores[p.doc] += idf * tf * (config.k1 + 1.0) / denom;
        }
    }

    std::vector<SearchHit> hits;
    hits.reserve(scores.size());
    for (const auto& [doc, score] : scores) hits.push_back({docs_[doc].id, score});
    std::sort(hits.begin(), hits.end(), [](const SearchHit& a, const SearchHit& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.doc_id < b.doc_id;
    });
    if (hits.size() > config.top_k) hits.resize(config.top_k);
    return hits;
}

std::vector<SearchHit> bm25_search(const Index& index, const std::string& query,
                                   const RetrievalConfig& config) {
    return index.search(query, config);
}

void Index::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write index: " + path);
    out.write(kIndexMagic, sizeof(kIndexMagic));
    write_u64(out, kIndexVersion);
    write_u64(out, docs_.size());
    for (const DocEntry& d : docs_) {
        write_str(out, d.id);
        write_str(out, d.text);
        write_u64(out, d.length);
        write_str(out, d.date ? d.date->to_string() : "");
    }
    write_u64(out, postings_.size());
    for (const auto& [term, list] : postings_) {
        write_str(out, term);
        write_u64(out, list.size());
        for (const Posting& p : list) {
            write_u64(out, p.doc);
            write_u64(out, p.tf);
        }
    }
    write_u64(out, total_length_);
    if (!out) throw DataError("write failed: " + path);
}

Index Index::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read index: " + path);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kIndexMagic, sizeof(magic)) != 0)
        throw DataError("not an index file: " + path);
    if (read_u64(in) != kIndexVersion)
        throw DataError("unsupported index version: " + path);
    Index index;
    const std::uint64_t n_docs = read_u64(in);
    for (std::uint64_t i = 0; i < n_docs; ++i) {
        DocEntry d;
        d.id = read_str(in);
        d.text = read_str(in);
        d.length = read_u64(in);
        std::string date = read_str(in);
        if (!date.empty()) d.date = Date::parse(date);
        index.docs_.push_back(std::move(d));
    }
    const std::uint64_t n_terms = read_u64(in);
    for (std::uint64_t i = 0; i < n_terms; ++i) {
        std::string term = read_str(in);
        const std::uint64_t n_postings = read_u64(in);
        std::vector<Posting> list;
        list.reserve(n_postings);
        for (std::uint64_t k = 0; k < n_postings; ++k) {
            Posting p;
            p.doc = static_cast<std::uint32_t>(read_u64(in));
            p.tf = static_cast<std::uint32_t>(read_u64(in));
            list.push_back(p);
        }
        index.postings_.emplace(std::move(term), std::move(list));
    }
    index.total_length_ = read_u64(in);
    return index;
}

void EmbeddingScorer::add(const std::string& doc_id, std::vector<double> vector) {
    vectors_.emplace_back(doc_id, std::move(vector));
}

std::vector<SearchHit> EmbeddingScorer::rank(const std::vector<double>& query_vector,
                                             std::size_t top_k) const {
    auto norm = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x * x;
        return std::sqrt(s);
    };
    const double qn = norm(query_vector);
    std::vector<SearchHit> hits;
    for (const auto& [id, vec] : vectors_) {
        if (vec.size() != query_vector.size())
            throw DataError("embedding dimension mismatch for doc " + id);
        double dot = 0.0;
        for (std::size_t i = 0; i < vec.size(); ++i) dot += vec[i] * query_vector[i];
        const double dn = norm(vec);
        hits.push_back({id, (qn == 0.0 || dn == 0.0) ? 0.0 : dot / (qn * dn)});
    }
    std::sort(hits.begin(), hits.end(), [](const SearchHit& a, const SearchHit& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.doc_id < b.doc_id;
    });
    if (hits.size() > top_k) hits.resize(top_k);
    return hits;
}

// ---------------------------------------------------------------------------
// Prompt assembly

const std::string& default_persona() {
    static const std::string persona =
        "You are a financial expert specializing in the nuanced analysis of financial "
        "statements and a wide array of data-driven financial tasks. For each prompt "
        "you are given, think step by step. Sometimes, you must extract relevant "
        "information to proceed with the problem.";
    return persona;
}

const std::vector<std::string>& default_instructions() {
    static const std::vector<std::string> instructions = {
        "If any options are specified, ensure that your answer is one of the options "
        "specified.",
        "Do not explain why you think the answer is correct.",
    };
    return instructions;
}

const std::string& tool_format_instruction() {
    static const std::string instruction =
        "Answer the question by formulating your response using predefined "
        "mathematical functions. For addition, use Add(a, b), which represents a + b. "
        "Use Subtract(a, b) to denote a - b for subtraction. Construct your answer by "
        "combining these functions appropriately to reflect the required calculations.";
    return instruction;
}

std::string build_prompt(const PromptSpec& spec) {
    if (spec.question.empty()) throw DataError("prompt spec has empty question");
    std::string out = spec.persona.empty() ? default_persona() : spec.persona;
    out += '\n';
    if (!spec.instructions.empty()) {
        out += "\nInstructions:\n";
        for (const std::string& line : spec.instructions) {
            out += line;
            out += '\n';
        }
    }
    if (spec.context) {
        out += "\nContext:\n";
        out += *spec.context;
        out += '\n';
    }
    if (spec.retrieval) {
        out += "\nRetrieval:\n";
        out += *spec.retrieval;
        out += '\n';
    }
    out += "\nQuestion: ";
    out += spec.question;
    out += "\n\nAnswer:";
    return out;
}

RetrievalChain build_retrieval_chain(const std::string& document_text,
                                     const std::string& question, const Index& index,
                                     const RetrievalConfig& config) {
    RetrievalChain chain;
    chain.stage1_prompt =
        "From the following PDF file, extract all the relevant information that might "
        "help in answering the question:\n"
        "PDF:\n" +
        document_text + "\nQuestion: " + question + "\n";

    std::vector<std::string> retrieved;
    for (const SearchHit& hit : bm25_search(index, question, config))
        retrieved.push_back(index.doc_text(hit.doc_id));

    chain.stage2_prompt = [question, retrieved](const std::string& extracted) {
        PromptSpec spec;
        spec.instructions = default_instructions();
        spec.instructions.push_back(tool_format_instruction());
        std::string retrieval = extracted;
        for (const std::string& text : retrieved) {
            if (!retrieval.empty()) retrieval += "\n\n";
            retrieval += text;
        }
        spec.retrieval = retrieval;
        spec.question = question;
        return build_prompt(spec);
    };
    return chain;
}

}  // namespace finset
