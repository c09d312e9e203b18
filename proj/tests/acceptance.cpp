// Acceptance suite: one line per criterion, PASS/FAIL, exit 0 iff all pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "finset/builders.hpp"
#include "finset/dedup.hpp"
#include "finset/metrics.hpp"
#include "finset/pipeline.hpp"
#include "finset/report.hpp"
#include "finset/retrieval.hpp"
#include "finset/rng.hpp"
#include "finset/tokenize.hpp"
#include "finset/toolcall.hpp"

using namespace finset;

namespace {

int g_failures = 0;

void report(const char* name, bool ok, const std::string& detail = "") {
    std::printf("%s: %s%s%s\n", ok ? "PASS" : "FAIL", name,
                detail.empty() ? "" : " — ", detail.c_str());
    if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
}

Document make_doc(std::string id, std::string text) {
    Document d;
    d.id = std::move(id);
    d.text = std::move(text);
    d.recount_tokens();
    return d;
}

double true_jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
    if (a.empty() && b.empty()) return 1.0;
    std::size_t inter = 0;
    for (const auto& s : a) inter += b.count(s);
    return static_cast<double>(inter) / static_cast<double>(a.size() + b.size() - inter);
}

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), std::size_t{0});
    }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a < b) parent[b] = a;  // smaller index becomes the root (first wins)
        else parent[a] = b;
    }
};

// ---------------------------------------------------------------------------
// 1. Dedup oracle equivalence

void criterion_dedup_oracle() {
    const auto start = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;

    for (std::uint64_t trial = 0; trial < 50 && ok; ++trial) {
        SplitMix rng(trial * 977 + 13);
        DedupConfig config;
        config.seed = trial;

        // mixture of duplicate clusters and distinct documents
        const std::size_t n = 10 + rng.below(21);  // up to 30
        std::vector<Document> docs;
        std::vector<std::string> bases;
        for (std::size_t i = 0; i < n; ++i) {
            std::string text;
            if (!bases.empty() && rng.below(3) == 0) {
                // near-duplicate of an earlier doc: mutate 0-2 of its tokens
                text = bases[rng.below(bases.size())];
                std::vector<std::string> toks = tokenize(text);
                for (std::uint64_t m = rng.below(3); m > 0; --m)
                    toks[rng.below(toks.size())] = "mut" + std::to_string(rng.next() % 97);
                text.clear();
                for (const auto& t : toks) text += t + " ";
            } else {
                // fresh document over a trial-unique vocabulary slice
                for (int w = 0; w < 60; ++w)
                    text += "w" + std::to_string(rng.below(400) + i * 1000) + " ";
                bases.push_back(text);
            }
            docs.push_back(make_doc("d" + std::to_string(i), text));
        }

        // exact pairwise-Jaccard first-wins oracle
        std::vector<std::set<std::string>> shingles;
        for (const auto& d : docs) shingles.push_back(shingle(d.text, config.shingle_w));
        UnionFind uf(n);
        std::vector<bool> in_band(n, false);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double j_true = true_jaccard(shingles[i], shingles[j]);
                if (std::abs(j_true - config.jaccard_threshold) < 0.1) {
                    in_band[i] = in_band[j] = true;  // estimator noise band
                }
                if (j_true >= config.jaccard_threshold) uf.unite(i, j);
            }
        }
        std::set<std::string> oracle_drops;
        for (std::size_t i = 0; i < n; ++i)
            if (uf.find(i) != i) oracle_drops.insert(docs[i].id);

        auto result = fuzzy_dedup(docs, config);
        std::set<std::string> fuzzy_drops;
        {
            std::set<std::string> kept;
            for (const auto& d : result.survivors) kept.insert(d.id);
            for (const auto& d : docs)
                if (!kept.count(d.id)) fuzzy_drops.insert(d.id);
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (in_band[i]) continue;  // disagreement allowed near the threshold
            const bool o = oracle_drops.count(docs[i].id) > 0;
            const bool f = fuzzy_drops.count(docs[i].id) > 0;
            if (o != f) {
                ok = false;
                detail = "trial " + std::to_string(trial) + ": fuzzy disagrees with the "
                         "exact-Jaccard oracle on " + docs[i].id;
                break;
            }
        }

        // exact dedup against a hash-free quadratic oracle
        std::set<std::string> exact_oracle_drops;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < i; ++j)
                if (normalize_for_exact(docs[i].text) == normalize_for_exact(docs[j].text))
                    exact_oracle_drops.insert(docs[i].id);
        auto exact = exact_dedup(docs);
        std::set<std::string> exact_drops;
        {
            std::set<std::string> kept;
            for (const auto& d : exact.survivors) kept.insert(d.id);
            for (const auto& d : docs)
                if (!kept.count(d.id)) exact_drops.insert(d.id);
        }
        if (exact_drops != exact_oracle_drops) {
            ok = false;
            detail = "trial " + std::to_string(trial) + ": exact dedup diverges from the "
                     "quadratic oracle";
        }
    }

    const double elapsed = seconds_since(start);
    if (ok && elapsed >= 10.0) {
        ok = false;
        detail = "runtime " + std::to_string(elapsed) + "s exceeds 10s";
    }
    report("dedup oracle equivalence (50 corpora, fuzzy + exact)", ok, detail);
}

// ---------------------------------------------------------------------------
// 2. MinHash estimator accuracy

void criterion_minhash_estimator() {
    int within = 0;
    std::vector<double> fixed_j_estimates;
    for (std::uint64_t trial = 0; trial < 200; ++trial) {
        DedupConfig config;
        config.seed = trial;
        SplitMix rng(trial * 37 + 5);

        // random pair for the accuracy bound
        std::set<std::string> a, b;
        while (a.size() < 50) a.insert("r" + std::to_string(rng.below(120)));
        while (b.size() < 50) b.insert("r" + std::to_string(rng.below(120)));
        const double est =
            estimate_jaccard(minhash_signature(a, config), minhash_signature(b, config));
        if (std::abs(est - true_jaccard(a, b)) <= 0.15) ++within;

        // constructed pair with exact J = 0.5 for the variance bound
        std::set<std::string> x, y;
        for (int i = 0; i < 50; ++i) {
            x.insert("s" + std::to_string(i));
            y.insert("s" + std::to_string(i));
        }
        for (int i = 0; i < 25; ++i) {
            x.insert("x" + std::to_string(i));
            y.insert("y" + std::to_string(i));
        }
        fixed_j_estimates.push_back(
            estimate_jaccard(minhash_signature(x, config), minhash_signature(y, config)));
    }

    double mean = 0.0;
    for (double e : fixed_j_estimates) mean += e;
    mean /= static_cast<double>(fixed_j_estimates.size());
    double var = 0.0;
    for (double e : fixed_j_estimates) var += (e - mean) * (e - mean);
    var /= static_cast<double>(fixed_j_estimates.size() - 1);
    const double std_dev = std::sqrt(var);
    const double bound = 2.0 * std::sqrt(0.5 * 0.5 / 128.0);

    const bool ok = within >= 190 && std_dev <= bound;
    report("minhash estimator accuracy (|est-J|<=0.15 in >=95%, std within bound)", ok,
           ok ? "" : "within=" + std::to_string(within) + "/200, std=" +
                     std::to_string(std_dev) + " bound=" + std::to_string(bound));
}

// ---------------------------------------------------------------------------
// 3. LSH S-curve

void criterion_lsh_s_curve() {
    int high = 0, low = 0;
    const int trials = 200;
    for (std::uint64_t t = 0; t < trials; ++t) {
        DedupConfig config;
        config.seed = t;
        std::set<std::string> h1, h2, l1, l2;
        // J = 0.9: 90 shared, 5+5 unique; J = 0.2: 20 shared, 40+40 unique
        for (int i = 0; i < 90; ++i) {
            h1.insert("c" + std::to_string(i));
            h2.insert("c" + std::to_string(i));
        }
        for (int i = 0; i < 5; ++i) {
            h1.insert("p" + std::to_string(i));
            h2.insert("q" + std::to_string(i));
        }
        for (int i = 0; i < 20; ++i) {
            l1.insert("c" + std::to_string(i));
            l2.insert("c" + std::to_string(i));
        }
        for (int i = 0; i < 40; ++i) {
            l1.insert("p" + std::to_string(i));
            l2.insert("q" + std::to_string(i));
        }
        if (!lsh_candidates({minhash_signature(h1, config), minhash_signature(h2, config)},
                            config)
                 .empty())
            ++high;
        if (!lsh_candidates({minhash_signature(l1, config), minhash_signature(l2, config)},
                            config)
                 .empty())
            ++low;
    }
    const bool ok = high >= trials * 99 / 100 && low <= trials / 100;
    report("lsh s-curve (J=0.9 emitted >=99%, J=0.2 <=1%)", ok,
           ok ? "" : "high=" + std::to_string(high) + " low=" + std::to_string(low) +
                     " of " + std::to_string(trials));
}

// ---------------------------------------------------------------------------
// 4. Pipeline ledger invariants + determinism

std::vector<Document> synthetic_corpus(std::size_t n) {
    static const char* bodies[] = {
        "The company reported strong quarterly earnings and revenue growth across its "
        "banking and trading divisions. Investors welcomed the results and the stock "
        "price rose sharply in early market trading while analysts raised their annual "
        "profit forecasts citing higher interest income and careful capital spending.",
        "Markets were mixed as the central bank signaled that interest rates would stay "
        "higher for longer than many investors had expected. Bond yields rose and the "
        "currency strengthened while traders weighed the outlook for inflation and "
        "growth over the coming quarters across the major world economies.",
        "The fund manager said the portfolio remains focused on companies with strong "
        "balance sheets, durable cash flow, and sensible valuations. Dividend income "
        "has grown steadily, and the team expects equity markets to reward patient "
        "investors who avoid chasing short term price movements in either direction.",
    };
    SplitMix rng(424242);
    std::vector<Document> docs;
    for (std::size_t i = 0; i < n; ++i) {
        Document d;
        d.id = "doc" + std::to_string(i);
        d.source = static_cast<Source>(rng.below(5));
        const std::uint64_t kind = rng.below(10);
        std::string body = bodies[rng.below(3)];
        if (kind == 0) {
            d.text = body;  // exact duplicate of a base body
        } else if (kind == 1) {
            d.text = "<p>" + body + "</p><script>var x=1;</script>";
        } else if (kind == 2) {
            d.text = body + "\nContact: leak" + std::to_string(i) + "@example.com";
        } else if (kind == 3) {
            d.text = "too short to survive";
        } else if (kind == 4) {
            d.url = "https://casino.example.com/" + std::to_string(i);
            d.text = body;
        } else {
            d.text = body + " Closing sentence number " + std::to_string(rng.below(500)) +
                     " varies the document body a little.";
        }
        if (!d.url) d.url = "https://news.example.com/" + std::to_string(i);
        d.recount_tokens();
        docs.push_back(std::move(d));
    }
    return docs;
}

void criterion_pipeline_ledger() {
    const auto start = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;

    CurationConfig curation;
    curation.domain_lexicon = default_domain_lexicon();
    curation.url_block_patterns = {"*casino*"};
    DedupConfig dedup;
    PipelineOptions options;
    options.stages = all_stages();
    options.deterministic = true;
    options.config_digest = "acceptance";

    auto docs = synthetic_corpus(1000);
    auto r1 = run_pipeline(docs, curation, dedup, options);
    auto r2 = run_pipeline(docs, curation, dedup, options);

    try {
        r1.manifest.check();  // order, monotonicity, token chaining
        for (const auto& stage : r1.manifest.stages) stage.check();
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    if (ok && r1.manifest.stages.size() != 8) {
        ok = false;
        detail = "expected 8 stage reports";
    }
    if (ok) {
        std::string s1, s2;
        for (const auto& d : r1.docs) s1 += document_to_line(d) + "\n";
        for (const auto& d : r2.docs) s2 += document_to_line(d) + "\n";
        if (s1 != s2 || manifest_to_json(r1.manifest) != manifest_to_json(r2.manifest)) {
            ok = false;
            detail = "two identical runs differ";
        }
    }
    if (ok && (r1.docs.empty() || r1.docs.size() == docs.size())) {
        ok = false;
        detail = "pipeline should drop some documents and keep others";
    }
    const double elapsed = seconds_since(start);
    if (ok && elapsed >= 30.0) {
        ok = false;
        detail = "runtime " + std::to_string(elapsed) + "s exceeds 30s";
    }
    report("pipeline ledger invariants + 1k-doc deterministic 8-stage run", ok, detail);
}

// ---------------------------------------------------------------------------
// 5. Tool-call correctness

namespace tc = finset::toolcall;

tc::ToolExpr random_tree(SplitMix& rng, int depth) {
    if (depth == 0 || rng.below(3) == 0) {
        const long long mag = static_cast<long long>(rng.below(2000)) - 1000;
        if (rng.below(4) == 0)
            return tc::ToolExpr::make_number(tc::Decimal(mag) / 100);
        return tc::ToolExpr::make_number(tc::Decimal(mag));
    }
    const tc::Fn fn = static_cast<tc::Fn>(rng.below(4));
    return tc::ToolExpr::make_call(fn, random_tree(rng, depth - 1),
                                   random_tree(rng, depth - 1));
}

double oracle_eval(const tc::ToolExpr& e) {
    if (e.is_number()) return static_cast<double>(e.number);
    const double a = oracle_eval(e.args[0]);
    const double b = oracle_eval(e.args[1]);
    switch (e.fn) {
        case tc::Fn::Add: return a + b;
        case tc::Fn::Subtract: return a - b;
        case tc::Fn::Multiply: return a * b;
        case tc::Fn::Divide: return a / b;
    }
    return 0.0;
}

bool divides_by_zero(const tc::ToolExpr& e) {
    if (e.is_number()) return false;
    if (divides_by_zero(e.args[0]) || divides_by_zero(e.args[1])) return true;
    if (e.fn == tc::Fn::Divide) {
        try {
            return tc::eval_program(e.args[1]) == 0;
        } catch (const tc::DivideByZeroError&) {
            return true;
        }
    }
    return false;
}

void criterion_toolcall() {
    bool ok = true;
    std::string detail;
    SplitMix rng(90210);
    for (int i = 0; i < 1000 && ok; ++i) {
        const tc::ToolExpr tree = random_tree(rng, 4);
        const std::string rendered = tc::render_program(tree);
        try {
            if (!(tc::parse_program(rendered) == tree)) {
                ok = false;
                detail = "round-trip mismatch on: " + rendered;
                break;
            }
        } catch (const std::exception& e) {
            ok = false;
            detail = std::string(e.what()) + " on: " + rendered;
            break;
        }
        if (divides_by_zero(tree)) {
            try {
                tc::eval_program(tree);
                ok = false;
                detail = "divide-by-zero did not error: " + rendered;
            } catch (const tc::DivideByZeroError&) {
            }
            continue;
        }
        const double expected = oracle_eval(tree);
        const double actual = static_cast<double>(tc::eval_program(tree));
        if (std::abs(actual - expected) > 1e-12 * std::max(1.0, std::abs(expected))) {
            ok = false;
            detail = "oracle mismatch on: " + rendered;
        }
    }
    // explicit zero denominators at every nesting level
    for (int i = 0; i < 100 && ok; ++i) {
        tc::ToolExpr inner = random_tree(rng, 2);
        tc::ToolExpr bad = tc::ToolExpr::make_call(
            tc::Fn::Divide, std::move(inner), tc::ToolExpr::make_number(tc::Decimal(0)));
        try {
            tc::eval_program(bad);
            ok = false;
            detail = "Divide(x, 0) did not error";
        } catch (const tc::DivideByZeroError&) {
        } catch (const std::exception&) {
            // a nested divide-by-zero in the left subtree is also acceptable
        }
    }
    report("tool-call round-trip, oracle agreement, divide-by-zero (1000 trees)", ok,
           detail);
}

// ---------------------------------------------------------------------------
// 6. Metric oracles

void criterion_metric_oracles() {
    bool ok = true;
    std::string detail;

    const auto r = rouge({"the cat sat"}, {"the cat sat on the mat"});
    if (std::abs(r.rouge1 - 0.667) > 0.001) {
        ok = false;
        detail = "rouge1=" + std::to_string(r.rouge1);
    }

    std::vector<std::string> a, b;
    auto fill = [&](int n, const char* la, const char* lb) {
        for (int i = 0; i < n; ++i) {
            a.push_back(la);
            b.push_back(lb);
        }
    };
    fill(20, "A", "A");
    fill(5, "A", "B");
    fill(10, "B", "A");
    fill(15, "B", "B");
    if (ok && std::abs(cohens_kappa(a, b).kappa - 0.400) > 1e-9) {
        ok = false;
        detail = "kappa hand case";
    }

    const auto f1 = entity_f1({{{0, 1, "PER"}, {2, 3, "ORG"}}},
                              {{{0, 1, "PER"}, {4, 5, "LOC"}}});
    if (ok && f1.f1 != 0.5) {
        ok = false;
        detail = "entity_f1=" + std::to_string(f1.f1);
    }

    if (ok && hallucination_index({0, 1, 2, 3, 0, 1, 2, 3, 0, 1},
                                  {0, 1, 2, 3, 0, 1, 2, 3, 1, 0}) != 0.8) {
        ok = false;
        detail = "HI(8/10)";
    }

    if (ok) {
        SplitMix rng(31337);
        const auto& cats = quality_categories();
        std::vector<std::string> x, y;
        for (int i = 0; i < 10000; ++i) {
            x.push_back(cats[rng.below(cats.size())]);
            y.push_back(cats[rng.below(cats.size())]);
        }
        const double k = cohens_kappa(x, y).kappa;
        if (std::abs(k) > 0.05) {
            ok = false;
            detail = "random-label kappa=" + std::to_string(k);
        }
    }
    report("metric oracles (rouge1, kappa, entity_f1, HI, random kappa)", ok, detail);
}

// ---------------------------------------------------------------------------
// 7. MCQ builder

void criterion_mcq() {
    bool ok = true;
    std::string detail;

    std::vector<TermDefinition> glossary;
    SplitMix rng(777);
    static const char* topics[] = {"bond", "option", "equity", "loan", "index",
                                   "margin", "swap", "fund"};
    for (int i = 0; i < 200; ++i) {
        std::string def = "a financial instrument concerning " +
                          std::string(topics[rng.below(8)]) + " exposure with feature " +
                          std::to_string(i) + " and attribute " +
                          std::to_string(rng.below(50));
        glossary.push_back({"term" + std::to_string(i), def});
    }

    auto items = build_mcq(glossary, 3, 2024);
    if (items.size() != 200) {
        ok = false;
        detail = "expected 200 items";
    }
    std::array<int, 4> positions{};
    for (std::size_t i = 0; ok && i < items.size(); ++i) {
        const auto& item = items[i];
        std::set<std::string> opts(item.options.begin(), item.options.end());
        if (opts.size() != 4) {
            ok = false;
            detail = "options not distinct for " + item.term;
            break;
        }
        int true_count = 0;
        for (const auto& o : item.options)
            if (o == glossary[i].definition) ++true_count;
        if (true_count != 1 ||
            item.options[static_cast<std::size_t>(item.correct_index)] !=
                glossary[i].definition) {
            ok = false;
            detail = "correct option invariant violated for " + item.term;
            break;
        }
        ++positions[static_cast<std::size_t>(item.correct_index)];
    }

    if (ok) {
        // chi-square against uniform over 4 positions, 3 degrees of freedom;
        // p > 0.01 means chi2 below the 0.99 quantile 11.345
        double chi2 = 0.0;
        for (int c : positions) {
            const double expected = 200.0 / 4.0;
            chi2 += (c - expected) * (c - expected) / expected;
        }
        if (chi2 >= 11.345) {
            ok = false;
            detail = "chi2=" + std::to_string(chi2);
        }
    }

    if (ok) {
        auto again = build_mcq(glossary, 3, 2024);
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (items[i].options != again[i].options ||
                items[i].correct_index != again[i].correct_index) {
                ok = false;
                detail = "not deterministic under the seed";
                break;
            }
        }
    }
    report("mcq builder (200 terms: soundness, position uniformity, determinism)", ok,
           detail);
}

// ---------------------------------------------------------------------------
// 8. Preference builder

void criterion_preferences() {
    std::vector<PreferenceItem> items;
    for (int i = 0; i < 2000; ++i) {
        PreferenceItem item;
        item.prompt = "prompt " + std::to_string(i);
        item.chosen_output = "chosen";
        item.chosen_source = "gpt-4";
        item.rejected_candidates = {"cand0", "cand1"};
        item.rejected_sources = {"model0", "model1"};
        items.push_back(std::move(item));
    }
    auto first = build_preference_pairs(items, 99);
    auto second = build_preference_pairs(items, 99);

    bool ok = first.pairs.size() == 2000;
    std::string detail;
    if (ok) {
        int c0 = 0;
        for (std::size_t i = 0; i < first.pairs.size(); ++i) {
            c0 += first.pairs[i].rejected == "cand0";
            if (first.pairs[i].rejected != second.pairs[i].rejected) {
                ok = false;
                detail = "rerun differs";
                break;
            }
        }
        const double freq = c0 / 2000.0;
        if (ok && std::abs(freq - 0.5) > 0.05) {
            ok = false;
            detail = "selection frequency " + std::to_string(freq);
        }
    } else {
        detail = "expected 2000 pairs";
    }
    report("preference builder (0.5 +/- 0.05 over 2000 items, rerun identical)", ok,
           detail);
}

// ---------------------------------------------------------------------------
// 9. BM25 hand case

void criterion_bm25() {
    auto index = Index::build({make_doc("D1", "stock market rally"),
                               make_doc("D2", "bond market"),
                               make_doc("D3", "weather today sunny")});
    RetrievalConfig config;
    auto hits = index.search("market", config);

    const double avgdl = 8.0 / 3.0;
    const double idf = std::log(1.0 + (3.0 - 2.0 + 0.5) / (2.0 + 0.5));
    auto expected = [&](double len) {
        return idf * (config.k1 + 1.0) /
               (1.0 + config.k1 * (1.0 - config.b + config.b * len / avgdl));
    };

    bool ok = hits.size() == 2 && hits[0].doc_id == "D2" && hits[1].doc_id == "D1" &&
              std::abs(hits[0].score - expected(2)) <= 1e-9 &&
              std::abs(hits[1].score - expected(3)) <= 1e-9;
    report("bm25 hand case (D2 > D1, D3 absent, scores to 1e-9)", ok);
}

// ---------------------------------------------------------------------------
// 10. Report shapes

void criterion_report_shapes() {
    static const Source sources[] = {Source::c4, Source::news, Source::sec,
                                     Source::social, Source::press};
    std::vector<Document> input, output;
    SplitMix rng(5150);
    for (int i = 0; i < 50; ++i) {
        Document d = make_doc("r" + std::to_string(i),
                              "sample document body number " + std::to_string(i) +
                                  " with a handful of tokens");
        d.source = sources[i % 5];
        input.push_back(d);
        if (rng.below(3) != 0) output.push_back(d);  // survivors
    }
    auto ledger = build_source_ledger(input, output);
    const std::string table = format_source_ledger(ledger);

    bool ok = true;
    std::string detail;
    for (const char* column :
         {"Dataset", "Documents", "Tokens", "Deduplicated Tokens", "Total"}) {
        if (table.find(column) == std::string::npos) {
            ok = false;
            detail = std::string("missing column '") + column + "'";
        }
    }
    if (ok && ledger.rows.size() != 6) {  // 5 sources + total row
        ok = false;
        detail = "expected 5 source rows plus a total";
    }
    if (ok) {
        std::uint64_t docs = 0, toks = 0, dedup_toks = 0;
        for (std::size_t i = 0; i + 1 < ledger.rows.size(); ++i) {
            docs += ledger.rows[i].documents;
            toks += ledger.rows[i].tokens;
            dedup_toks += ledger.rows[i].dedup_tokens;
        }
        const auto& total = ledger.rows.back();
        if (docs != total.documents || toks != total.tokens ||
            dedup_toks != total.dedup_tokens) {
            ok = false;
            detail = "total row does not sum the source rows";
        }
    }
    report("report shape (5-source ledger: Documents / Tokens / Deduplicated Tokens)",
           ok, detail);
}

}  // namespace

int main() {
    criterion_dedup_oracle();
    criterion_minhash_estimator();
    criterion_lsh_s_curve();
    criterion_pipeline_ledger();
    criterion_toolcall();
    criterion_metric_oracles();
    criterion_mcq();
    criterion_preferences();
    criterion_bm25();
    criterion_report_shapes();
    return g_failures == 0 ? 0 : 1;
}
