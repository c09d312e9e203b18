#include "finset/builders.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "finset/dedup.hpp"
#include "finset/errors.hpp"
#include "finset/rng.hpp"
#include "finset/tokenize.hpp"

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

double domain_score(std::string_view text, const std::set<std::string>& lexicon) {
    const std::vector<std::string> tokens = tokenize(text);
    if (tokens.empty()) return 0.0;
    std::size_t hits = 0;
    for (const std::string& t : tokens)
        if (lexicon.contains(to_lower(t))) ++hits;
    return static_cast<double>(hits) / static_cast<double>(tokens.size());
}

}  // namespace

InstructionDedupResult dedup_instructions(const std::vector<InstructionRecord>& records,
                                          const std::set<std::string>& domain_lexicon,
                                          double threshold) {
    InstructionDedupResult result;
    result.report.stage = Stage::exact_dedup;
    result.report.docs_in = records.size();

    std::unordered_set<std::uint64_t> seen;
    for (const InstructionRecord& r : records) {
        std::string concat = r.instruction;
        concat += '\n';
        if (r.input) concat += *r.input;
        concat += '\n';
        concat += r.output;
        result.report.tokens_in += count_tokens(concat);

        if (!seen.insert(fnv1a64(normalize_for_exact(concat))).second) {
            ++result.report.removed_reasons["duplicate"];
            continue;
        }
        if (domain_score(concat, domain_lexicon) < threshold) {
            ++result.report.removed_reasons["non_financial"];
            continue;
        }
        result.report.tokens_out += count_tokens(concat);
        result.survivors.push_back(r);
    }
    result.report.docs_out = result.survivors.size();
    result.report.check();
    return result;
}

PreferenceBuildResult build_preference_pairs(const std::vector<PreferenceItem>& items,
                                             std::uint64_t seed) {
    PreferenceBuildResult result;
    for (std::size_t index = 0; index < items.size(); ++index) {
        const PreferenceItem& item = items[index];
        if (item.rejected_candidates.empty()) {
            result.errors.push_back("item " + std::to_string(index) +
                                    ": no rejected candidates");
            continue;
        }
        std::vector<std::size_t> usable;
        for (std::size_t i = 0; i < item.rejected_candidates.size(); ++i)
            if (item.rejected_candidates[i] != item.chosen_output) usable.push_back(i);
        if (usable.empty()) {
            ++result.skipped_degenerate;
            continue;
        }
        SplitMix rng(SplitMix::mix(seed, static_cast<std::uint64_t>(index)));
        const std::size_t pick = usable[rng.below(usable.size())];

        PreferencePair pair;
        pair.prompt = item.prompt;
        pair.chosen = item.chosen_output;
        pair.rejected = item.rejected_candidates[pick];
        pair.chosen_source = item.chosen_source;
        pair.rejected_source =
            pick < item.rejected_sources.size() ? item.rejected_sources[pick] : "";
        result.pairs.push_back(std::move(pair));
    }
    return result;
}

// ---------------------------------------------------------------------------
// FinTerms-MCQ

namespace {

using TfIdf = std::unordered_map<std::string, double>;

double cosine(const TfIdf& a, const TfIdf& b) {
    const TfIdf& small = a.size() <= b.size() ? a : b;
    const TfIdf& large = a.size() <= b.size() ? b : a;
    double dot = 0.0;
    for (const auto& [term, wa] : small) {
        auto it = large.find(term);
        if (it != large.end()) dot += wa * it->second;
    }
    auto norm = [](const TfIdf& v) {
        double s = 0.0;
        for (const auto& [_, w] : v) s += w * w;
        return std::sqrt(s);
    };
    const double na = norm(a), nb = norm(b);
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (na * nb);
}

}  // namespace

std::vector<McqItem> build_mcq(const std::vector<TermDefinition>& glossary,
                               std::size_t k_distractors, std::uint64_t seed) {
    if (k_distractors != 3)
        throw ConfigError("build_mcq: item layout is fixed at 3 distractors");
    if (glossary.size() < k_distractors + 1)
        throw DataError("glossary too small: need at least " +
                        std::to_string(k_distractors + 1) + " terms");
    {
        std::set<std::string> terms;
        for (const TermDefinition& t : glossary) {
            if (t.term.empty() || t.definition.empty())
                throw DataError("glossary entries must have non-empty term and definition");
            if (!terms.insert(t.term).second)
                throw DataError("duplicate glossary term: " + t.term);
        }
    }

    // tf-idf vectors over definitions: tf = raw count, idf = ln((N+1)/(df+1)) + 1
    const std::size_t n = glossary.size();
    std::vector<std::map<std::string, std::size_t>> tf(n);
    std::unordered_map<std::string, std::size_t> df;
    for (std::size_t i = 0; i < n; ++i) {
        for (const std::string& tok : tokenize(glossary[i].definition))
            ++tf[i][to_lower(tok)];
        for (const auto& [term, _] : tf[i]) ++df[term];
    }
    std::vector<TfIdf> vectors(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& [term, count] : tf[i]) {
            const double idf =
                std::log(static_cast<double>(n + 1) / static_cast<double>(df[term] + 1)) + 1.0;
            vectors[i][term] = static_cast<double>(count) * idf;
        }
    }

    std::vector<McqItem> items;
    items.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        // rank every other definition by similarity, ties by term order
        std::vector<std::size_t> order;
        order.reserve(n - 1);
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) order.push_back(j);
        std::vector<double> sim(n, 0.0);
        for (std::size_t j : order) sim[j] = cosine(vectors[i], vectors[j]);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (sim[a] != sim[b]) return sim[a] > sim[b];
            return glossary[a].term < glossary[b].term;
        });

        McqItem item;
        item.term = glossary[i].term;
        item.question =
            "What is the definition of '" + item.term + "' in the financial domain?";

        std::vector<std::size_t> picked;
        for (std::size_t j : order) {
            if (picked.size() == k_distractors) break;
            if (glossary[j].definition == glossary[i].definition) continue;
            bool dup = false;
            for (std::size_t p : picked)
                if (glossary[p].definition == glossary[j].definition) dup = true;
            if (!dup) picked.push_back(j);
        }
        if (picked.size() < k_distractors)
            throw DataError("glossary lacks " + std::to_string(k_distractors) +
                            " distinct distractor definitions for term: " + item.term);

        std::vector<int> slots = {0, 1, 2, 3};  // 0 = correct, 1..3 = distractors
        SplitMix rng(SplitMix::mix(seed, fnv1a64(item.term)));
        shuffle_inplace(slots, rng);
        for (int pos = 0; pos < 4; ++pos) {
            const int slot = slots[pos];
            if (slot == 0) {
                item.options[pos] = glossary[i].definition;
                item.correct_index = pos;
            } else {
                item.options[pos] = glossary[picked[slot - 1]].definition;
            }
        }
        for (std::size_t d = 0; d < k_distractors; ++d)
            item.distractor_terms[d] = glossary[picked[d]].term;
        items.push_back(std::move(item));
    }
    return items;
}

// ---------------------------------------------------------------------------
// Serialization

std::string instruction_to_line(const InstructionRecord& r) {
    nlohmann::ordered_json j;
    j["id"] = r.id;
    j["instruction"] = r.instruction;
    if (r.input) j["input"] = *r.input;
    j["output"] = r.output;
    j["source"] = r.source;
    return j.dump();
}

InstructionRecord instruction_from_line(std::string_view line, std::size_t line_no) {
    nlohmann::ordered_json j =
        nlohmann::ordered_json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object())
        throw DataError("line " + std::to_string(line_no) + ": malformed record");
    InstructionRecord r;
    try {
        r.id = j.value("id", "");
        r.instruction = j.at("instruction").get<std::string>();
        if (j.contains("input")) r.input = j.at("input").get<std::string>();
        r.output = j.at("output").get<std::string>();
        r.source = j.value("source", "");
    } catch (const nlohmann::json::exception& e) {
        throw DataError("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (r.instruction.empty())
        throw DataError("line " + std::to_string(line_no) + ": empty instruction");
    return r;
}

namespace {

template <typename T, typename Parse>
std::vector<T> read_lines(const std::string& path, bool strict, Parse parse) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read file: " + path);
    std::vector<T> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            out.push_back(parse(line, line_no));
        } catch (const DataError& e) {
            if (strict) throw DataError(path + ": " + e.what());
        }
    }
    return out;
}

}  // namespace

std::vector<InstructionRecord> read_instructions(const std::string& path, bool strict) {
    return read_lines<InstructionRecord>(path, strict, instruction_from_line);
}

void write_instructions(const std::vector<InstructionRecord>& records,
                        const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    for (const InstructionRecord& r : records) out << instruction_to_line(r) << '\n';
    if (!out) throw DataError("write failed: " + path);
}

std::string preference_to_line(const PreferencePair& p) {
    nlohmann::ordered_json j;
    j["prompt"] = p.prompt;
    j["chosen"] = p.chosen;
    j["rejected"] = p.rejected;
    j["chosen_source"] = p.chosen_source;
    j["rejected_source"] = p.rejected_source;
    return j.dump();
}

std::vector<PreferenceItem> read_preference_items(const std::string& path, bool strict) {
    return read_lines<PreferenceItem>(path, strict, [](const std::string& line,
                                                       std::size_t line_no) {
        nlohmann::ordered_json j =
            nlohmann::ordered_json::parse(line, nullptr, /*allow_exceptions=*/false);
        if (j.is_discarded() || !j.is_object())
            throw DataError("line " + std::to_string(line_no) + ": malformed record");
        PreferenceItem item;
        try {
            item.prompt = j.at("prompt").get<std::string>();
            item.chosen_output = j.at("chosen_output").get<std::string>();
            item.chosen_source = j.value("chosen_source", "gpt-4");
            item.rejected_candidates =
                j.at("rejected_candidates").get<std::vector<std::string>>();
            if (j.contains("rejected_sources"))
                item.rejected_sources =
                    j.at("rejected_sources").get<std::vector<std::string>>();
        } catch (const nlohmann::json::exception& e) {
            throw DataError("line " + std::to_string(line_no) + ": " + e.what());
        }
        return item;
    });
}

void write_preference_pairs(const std::vector<PreferencePair>& pairs,
                            const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    for (const PreferencePair& p : pairs) out << preference_to_line(p) << '\n';
    if (!out) throw DataError("write failed: " + path);
}

std::vector<TermDefinition> read_glossary(const std::string& path, bool strict) {
    return read_lines<TermDefinition>(
        path, strict, [](const std::string& line, std::size_t line_no) {
            nlohmann::ordered_json j =
                nlohmann::ordered_json::parse(line, nullptr, /*allow_exceptions=*/false);
            if (j.is_discarded() || !j.is_object())
                throw DataError("line " + std::to_string(line_no) + ": malformed record");
            TermDefinition t;
            try {
                t.term = j.at("term").get<std::string>();
                t.definition = j.at("definition").get<std::string>();
            } catch (const nlohmann::json::exception& e) {
                throw DataError("line " + std::to_string(line_no) + ": " + e.what());
            }
            return t;
        });
}

std::string mcq_to_line(const McqItem& item) {
    nlohmann::ordered_json j;
    j["term"] = item.term;
    j["question"] = item.question;
    j["options"] = item.options;
    j["correct_index"] = item.correct_index;
    j["distractor_terms"] = item.distractor_terms;
    return j.dump();
}

std::string mcq_to_tsv(const McqItem& item) {
    std::string out = item.term;
    out += '\t';
    out += item.question;
    for (const std::string& opt : item.options) {
        out += '\t';
        out += opt;
    }
    out += '\t';
    out += std::to_string(item.correct_index);
    return out;
}

void write_mcq(const std::vector<McqItem>& items, const std::string& path, bool tsv) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    for (const McqItem& item : items)
        out << (tsv ? mcq_to_tsv(item) : mcq_to_line(item)) << '\n';
    if (!out) throw DataError("write failed: " + path);
}

}  // namespace finset
