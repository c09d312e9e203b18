#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "finset/errors.hpp"
#include "finset/retrieval.hpp"

using namespace finset;

namespace {

Document make_doc(std::string id, std::string text,
                  std::optional<std::string> date = std::nullopt) {
    Document d;
    d.id = std::move(id);
    d.text = std::move(text);
    if (date) d.date = Date::parse(*date);
    d.recount_tokens();
    return d;
}

std::vector<Document> hand_corpus() {
    return {
        make_doc("D1", "stock market rally"),
        make_doc("D2", "bond market"),
        make_doc("D3", "weather today sunny"),
    };
}

}  // namespace

TEST_CASE("index statistics") {
    auto index = Index::build(hand_corpus());
    CHECK(index.size() == 3);
    CHECK(index.avgdl() == doctest::Approx(8.0 / 3.0));
    CHECK(index.doc_frequency("market") == 2);
    CHECK(index.doc_frequency("stock") == 1);
    CHECK(index.doc_frequency("absent") == 0);

    CHECK(Index::build({}).size() == 0);
    CHECK(Index::build({}).search("anything", RetrievalConfig{}).empty());
    CHECK_THROWS_AS(Index::build({make_doc("x", "a"), make_doc("x", "b")}), DataError);
}

TEST_CASE("bm25 hand case: query 'market'") {
    auto index = Index::build(hand_corpus());
    RetrievalConfig cfg;
    auto hits = index.search("market", cfg);
    REQUIRE(hits.size() == 2);
    CHECK(hits[0].doc_id == "D2");
    CHECK(hits[1].doc_id == "D1");

    const double avgdl = 8.0 / 3.0;
    const double idf = std::log(1.0 + (3.0 - 2.0 + 0.5) / (2.0 + 0.5));
    auto score = [&](double len) {
        return idf * 1.0 * (cfg.k1 + 1.0) /
               (1.0 + cfg.k1 * (1.0 - cfg.b + cfg.b * len / avgdl));
    };
    CHECK(hits[0].score == doctest::Approx(score(2)).epsilon(1e-9));
    CHECK(hits[1].score == doctest::Approx(score(3)).epsilon(1e-9));
}

TEST_CASE("bm25: absent terms, empty query, ties") {
    auto index = Index::build(hand_corpus());
    RetrievalConfig cfg;
    CHECK(index.search("nonexistent", cfg).empty());
    CHECK(index.search("", cfg).empty());

    // equal-length docs with equal tf tie; broken by id ascending
    auto tie_index = Index::build({make_doc("b", "market news"), make_doc("a", "market data")});
    auto hits = tie_index.search("market", cfg);
    REQUIRE(hits.size() == 2);
    CHECK(hits[0].doc_id == "a");
    CHECK(hits[1].doc_id == "b");
}

TEST_CASE("date window excludes out-of-range docs, undated pass") {
    auto index = Index::build({
        make_doc("old", "market report", "2021-06-01"),
        make_doc("in", "market report", "2023-01-10"),
        make_doc("undated", "market report"),
    });
    RetrievalConfig cfg;
    auto hits = index.search("market", cfg);
    REQUIRE(hits.size() == 2);
    for (const auto& h : hits) CHECK(h.doc_id != "old");
}

TEST_CASE("irrelevant documents do not reorder existing results") {
    auto docs = hand_corpus();
    RetrievalConfig cfg;
    auto before = Index::build(docs).search("market", cfg);
    docs.push_back(make_doc("D4", "unrelated gardening tips"));
    auto after = Index::build(docs).search("market", cfg);
    REQUIRE(before.size() == after.size());
    for (std::size_t i = 0; i < before.size(); ++i)
        CHECK(before[i].doc_id == after[i].doc_id);
}

TEST_CASE("shorter documents score higher at equal tf/df") {
    auto index = Index::build({
        make_doc("long", "market conditions remained stable throughout the entire period"),
        make_doc("short", "market conditions"),
    });
    auto hits = index.search("market", RetrievalConfig{});
    REQUIRE(hits.size() == 2);
    CHECK(hits[0].doc_id == "short");
    CHECK(hits[0].score > hits[1].score);
}

TEST_CASE("top_k limits results") {
    std::vector<Document> docs;
    for (int i = 0; i < 10; ++i)
        docs.push_back(make_doc("d" + std::to_string(i), "market entry number " +
                                                             std::to_string(i)));
    RetrievalConfig cfg;
    cfg.top_k = 3;
    CHECK(Index::build(docs).search("market", cfg).size() == 3);
}

TEST_CASE("index save/load round-trip") {
    auto index = Index::build(hand_corpus());
    auto path = (std::filesystem::temp_directory_path() / "finset_test.idx").string();
    index.save(path);
    auto loaded = Index::load(path);
    CHECK(loaded.size() == 3);
    CHECK(loaded.avgdl() == doctest::Approx(index.avgdl()));
    auto a = index.search("market", RetrievalConfig{});
    auto b = loaded.search("market", RetrievalConfig{});
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].doc_id == b[i].doc_id);
        CHECK(a[i].score == doctest::Approx(b[i].score));
    }
    CHECK(loaded.doc_text("D1") == "stock market rally");
}

TEST_CASE("embedding scorer ranks by cosine") {
    EmbeddingScorer scorer;
    scorer.add("x", {1.0, 0.0});
    scorer.add("y", {0.8, 0.6});
    scorer.add("z", {0.0, 1.0});
    auto hits = scorer.rank({1.0, 0.0}, 2);
    REQUIRE(hits.size() == 2);
    CHECK(hits[0].doc_id == "x");
    CHECK(hits[0].score == doctest::Approx(1.0));
    CHECK(hits[1].doc_id == "y");
}

TEST_CASE("prompt assembly follows the fixed section order") {
    PromptSpec minimal;
    minimal.question = "What drove the rally?";
    std::string p = build_prompt(minimal);
    CHECK(p.find("You are a financial expert") == 0);
    CHECK(p.find("Question: What drove the rally?") != std::string::npos);
    CHECK(p.rfind("Answer:") == p.size() - 7);
    CHECK(p.find("Instructions:") == std::string::npos);
    CHECK(p.find("Context:") == std::string::npos);
    CHECK(p.find("Retrieval:") == std::string::npos);
}

TEST_CASE("prompt sections appear when populated, in order") {
    PromptSpec spec;
    spec.instructions = {"Answer briefly.", "Do not speculate."};
    spec.context = "Q2 earnings call transcript.";
    spec.retrieval = "Retrieved passage body.";
    spec.question = "What was net income?";
    std::string p = build_prompt(spec);
    auto pos_i = p.find("Instructions:");
    auto pos_c = p.find("Context:");
    auto pos_r = p.find("Retrieval:");
    auto pos_q = p.find("Question:");
    auto pos_a = p.find("Answer:");
    REQUIRE(pos_i != std::string::npos);
    CHECK(pos_i < pos_c);
    CHECK(pos_c < pos_r);
    CHECK(pos_r < pos_q);
    CHECK(pos_q < pos_a);
    CHECK(p.find("Answer briefly.") < pos_c);
}

TEST_CASE("retrieval chain stages") {
    auto index = Index::build(hand_corpus());
    RetrievalConfig cfg;
    auto chain = build_retrieval_chain("Full annual report text.",
                                       "What is the market outlook?", index, cfg);
    CHECK(chain.stage1_prompt.find("extract all the relevant information") !=
          std::string::npos);
    CHECK(chain.stage1_prompt.find("Full annual report text.") != std::string::npos);
    CHECK(chain.stage1_prompt.find("What is the market outlook?") != std::string::npos);

    std::string answer_prompt = chain.stage2_prompt("Extracted summary X.");
    auto pos_r = answer_prompt.find("Retrieval:");
    REQUIRE(pos_r != std::string::npos);
    CHECK(answer_prompt.find("Extracted summary X.", pos_r) != std::string::npos);
    CHECK(answer_prompt.find("bond market", pos_r) != std::string::npos);  // retrieved doc
    CHECK(answer_prompt.find(tool_format_instruction()) != std::string::npos);

    // no index hits: retrieval section holds only the extracted text
    auto empty_chain = build_retrieval_chain("doc", "zzz nonexistent query terms",
                                             Index::build({}), cfg);
    std::string only = empty_chain.stage2_prompt("Only extract.");
    CHECK(only.find("Only extract.") != std::string::npos);
}

TEST_CASE("retrieval config validation") {
    RetrievalConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.top_k = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
