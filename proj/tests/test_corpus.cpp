#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "finset/document.hpp"
#include "finset/errors.hpp"
#include "finset/rng.hpp"
#include "finset/tokenize.hpp"

using namespace finset;

namespace {

Document make_doc(std::string id, std::string text) {
    Document d;
    d.id = std::move(id);
    d.text = std::move(text);
    d.recount_tokens();
    return d;
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("finset_corpus_" + name);
}

}  // namespace

TEST_CASE("count_tokens reference rule") {
    CHECK(count_tokens("") == 0);
    CHECK(count_tokens("hello") == 1);
    // "Net","income","rose","5","%","."
    CHECK(count_tokens("Net income rose 5%.") == 6);
    CHECK(count_tokens("   \t\n  ") == 0);
    CHECK(count_tokens("a-b") == 3);
    CHECK(count_tokens("$1,000.50") == 6);  // $ 1 , 000 . 50
}

TEST_CASE("count_tokens invariant under surrounding whitespace") {
    SplitMix rng(7);
    const std::vector<std::string> words = {"alpha", "5%", "x.y", "(net)", "plain"};
    for (int trial = 0; trial < 50; ++trial) {
        std::string core;
        for (int i = 0; i < 6; ++i) {
            if (i) core += ' ';
            core += words[rng.below(words.size())];
        }
        CHECK(count_tokens(core) == count_tokens("  \t" + core + "\n  "));
    }
}

TEST_CASE("tokenize splits punctuation from word runs") {
    auto tokens = tokenize("Net income rose 5%.");
    REQUIRE(tokens.size() == 6);
    CHECK(tokens[0] == "Net");
    CHECK(tokens[3] == "5");
    CHECK(tokens[4] == "%");
    CHECK(tokens[5] == ".");
}

TEST_CASE("date parsing validates calendar dates") {
    CHECK(Date::parse("2023-08-01").to_string() == "2023-08-01");
    CHECK(Date::parse("2024-02-29").day == 29);  // leap year
    CHECK_THROWS_AS(Date::parse("2023-02-29"), DataError);
    CHECK_THROWS_AS(Date::parse("2023-13-01"), DataError);
    CHECK_THROWS_AS(Date::parse("garbage"), DataError);
}

TEST_CASE("shard round-trip preserves all fields") {
    std::vector<Document> docs;
    Document d1 = make_doc("a", "Net income rose 5%.");
    d1.url = "https://example.com/x";
    d1.source = Source::news;
    d1.lang = "en";
    d1.date = Date::parse("2023-01-15");
    docs.push_back(d1);
    docs.push_back(make_doc("b", "plain text"));

    const auto path = temp_file("roundtrip.ndjson");
    CHECK(write_shard(docs, path.string()) == 2);
    auto result = read_shard(path.string());
    CHECK(result.skipped == 0);
    REQUIRE(result.docs.size() == 2);
    CHECK(result.docs[0] == docs[0]);
    CHECK(result.docs[1] == docs[1]);
}

TEST_CASE("unknown fields survive a round-trip verbatim") {
    Document d = make_doc("a", "text body");
    d.extra["custom"] = {{"k", 1}};
    const std::string line = document_to_line(d);
    Document back = document_from_line(line, 1);
    CHECK(back == d);
    CHECK(document_to_line(back) == line);
}

TEST_CASE("write after read is byte-identical to canonical form") {
    std::vector<Document> docs = {make_doc("x", "alpha beta"), make_doc("y", "gamma")};
    const auto path = temp_file("canon.ndjson");
    write_shard(docs, path.string());
    std::ifstream in(path.string(), std::ios::binary);
    std::stringstream first;
    first << in.rdbuf();

    auto reread = read_shard(path.string());
    write_shard(reread.docs, path.string());
    std::ifstream in2(path.string(), std::ios::binary);
    std::stringstream second;
    second << in2.rdbuf();
    CHECK(first.str() == second.str());
}

TEST_CASE("malformed lines: lenient skips, strict aborts with line number") {
    const auto path = temp_file("malformed.ndjson");
    {
        std::ofstream out(path.string());
        out << document_to_line(make_doc("a", "one")) << '\n';
        out << "{not json\n";
        out << document_to_line(make_doc("b", "two")) << '\n';
    }
    auto lenient = read_shard(path.string(), false);
    CHECK(lenient.docs.size() == 2);
    CHECK(lenient.skipped == 1);

    try {
        read_shard(path.string(), true);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("duplicate ids rejected on write") {
    std::vector<Document> docs = {make_doc("same", "a"), make_doc("same", "b")};
    CHECK_THROWS_AS(write_shard(docs, temp_file("dup.ndjson").string()), DataError);
}

TEST_CASE("empty shard writes zero records") {
    const auto path = temp_file("empty.ndjson");
    CHECK(write_shard({}, path.string()) == 0);
    CHECK(std::filesystem::file_size(path) == 0);
    CHECK(read_shard(path.string()).docs.empty());
}

TEST_CASE("stage report invariants") {
    StageReport r;
    r.stage = Stage::clean;
    r.docs_in = 10;
    r.docs_out = 7;
    r.tokens_in = 100;
    r.tokens_out = 70;
    r.removed_reasons["too_short"] = 3;
    CHECK_NOTHROW(r.check());

    r.removed_reasons["too_short"] = 2;
    CHECK_THROWS_AS(r.check(), DataError);

    r.removed_reasons["too_short"] = 3;
    r.tokens_out = 120;
    CHECK_THROWS_AS(r.check(), DataError);
}

TEST_CASE("manifest chaining enforced") {
    Manifest m;
    m.pipeline_version = "1.0.0";
    StageReport a;
    a.stage = Stage::url;
    a.docs_in = a.docs_out = 2;
    a.tokens_in = a.tokens_out = 50;
    StageReport b;
    b.stage = Stage::clean;
    b.docs_in = b.docs_out = 2;
    b.tokens_in = 50;
    b.tokens_out = 50;
    m.stages = {a, b};
    CHECK_NOTHROW(m.check());

    m.stages[1].tokens_in = 49;
    CHECK_THROWS_AS(m.check(), DataError);

    std::swap(m.stages[0], m.stages[1]);
    CHECK_THROWS_AS(m.check(), DataError);
}

TEST_CASE("manifest json round-trip") {
    Manifest m;
    m.pipeline_version = "1.0.0";
    m.config_digest = "cafebabe";
    StageReport r;
    r.stage = Stage::fuzzy_dedup;
    r.docs_in = 5;
    r.docs_out = 4;
    r.tokens_in = 80;
    r.tokens_out = 60;
    r.removed_reasons["near_duplicate"] = 1;
    m.stages.push_back(r);
    const auto path = temp_file("manifest.json");
    write_manifest(m, path.string());
    Manifest back = read_manifest(path.string());
    CHECK(back.config_digest == m.config_digest);
    REQUIRE(back.stages.size() == 1);
    CHECK(back.stages[0].removed_reasons == r.removed_reasons);
}
