// finset: corpus curation, dataset building, retrieval, and scoring in one
// binary. Thin argument-parsing layer over the C API in finset.h.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "finset.h"

namespace {

struct CtxDeleter {
    void operator()(finset_ctx* ctx) const { finset_ctx_destroy(ctx); }
};
using CtxPtr = std::unique_ptr<finset_ctx, CtxDeleter>;

struct StrDeleter {
    void operator()(char* s) const { finset_string_free(s); }
};
using StrPtr = std::unique_ptr<char, StrDeleter>;

struct IndexDeleter {
    void operator()(finset_index* idx) const { finset_index_close(idx); }
};
using IndexPtr = std::unique_ptr<finset_index, IndexDeleter>;

int fail(const finset_ctx* ctx, finset_status status) {
    std::cerr << "finset: " << finset_ctx_last_error(ctx) << "\n";
    return static_cast<int>(status);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::cerr << "finset: cannot read file: " << path << "\n";
        std::exit(1);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<const char*> c_paths(const std::vector<std::string>& paths) {
    std::vector<const char*> out;
    out.reserve(paths.size());
    for (const std::string& p : paths) out.push_back(p.c_str());
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"FinSet corpus curation and benchmark toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_set = false, strict = false, json_output = false, deterministic = false;
    app.add_option("--config", config_path, "Configuration file (JSON)");
    app.add_option("--seed", seed, "Seed for all randomized steps")
        ->each([&](const std::string&) { seed_set = true; });
    app.add_flag("--strict", strict, "Abort on the first malformed input record");
    app.add_flag("--json", json_output, "Emit machine-readable JSON reports");
    app.add_flag("--deterministic", deterministic, "Zero timestamps in manifests");

    // curate / dedup
    std::vector<std::string> inputs;
    std::string output, manifest_path, stages;
    bool print_report = false, print_ledger = false;
    auto* curate = app.add_subcommand("curate", "Run the cleaning/dedup pipeline");
    curate->add_option("inputs", inputs, "Input shard files")->required();
    curate->add_option("--output", output, "Output shard file")->required();
    curate->add_option("--manifest", manifest_path,
                       "Manifest path (default: <output>.manifest.json)");
    curate->add_option("--stages", stages,
                       "Comma-separated subsequence of "
                       "url,extract,lang,domain,sensitive,fuzzy_dedup,exact_dedup,clean");
    curate->add_flag("--report", print_report, "Print the stage table after the run");
    curate->add_flag("--ledger", print_ledger, "Print the per-source token ledger");

    auto* dedup = app.add_subcommand("dedup", "Run only the deduplication stages");
    dedup->add_option("inputs", inputs, "Input shard files")->required();
    dedup->add_option("--output", output, "Output shard file")->required();
    dedup->add_option("--manifest", manifest_path, "Manifest path");
    dedup->add_option("--stages", stages, "fuzzy_dedup, exact_dedup, or both");
    dedup->add_flag("--report", print_report, "Print the stage table after the run");

    // builders
    std::string in_file, out_file;
    bool tsv = false;
    auto* instructions =
        app.add_subcommand("instructions", "Dedup and domain-filter instruction records");
    instructions->add_option("input", in_file, "Instruction records (NDJSON)")->required();
    instructions->add_option("output", out_file, "Filtered output")->required();

    auto* prefs = app.add_subcommand("prefs", "Binarize preference pairs");
    prefs->add_option("input", in_file, "Preference items (NDJSON)")->required();
    prefs->add_option("output", out_file, "Preference pairs output")->required();

    auto* mcq = app.add_subcommand("mcq", "Build definition MCQs from a glossary");
    mcq->add_option("glossary", in_file, "Glossary of {term, definition} (NDJSON)")
        ->required();
    mcq->add_option("output", out_file, "MCQ output")->required();
    mcq->add_flag("--tsv", tsv, "Write tab-separated rows instead of NDJSON");

    // retrieval
    std::string index_path, query, question, document_file, extracted_file;
    std::size_t top_k = 0;
    auto* index_cmd = app.add_subcommand("index", "Build a search index from shards");
    index_cmd->add_option("inputs", inputs, "Input shard files")->required();
    index_cmd->add_option("--output", output, "Index file")->required();

    auto* search = app.add_subcommand("search", "Rank documents for a query");
    search->add_option("--index", index_path, "Index file")->required();
    search->add_option("query", query, "Query text")->required();
    search->add_option("--top-k", top_k, "Number of results");

    std::string persona, context_file, retrieval_file, spec_file;
    std::vector<std::string> instruction_lines;
    bool stage1 = false, stage2 = false;
    auto* prompt = app.add_subcommand("prompt", "Assemble a prompt");
    prompt->add_option("--question", question, "Task question");
    prompt->add_option("--persona", persona, "Override the default persona");
    prompt->add_option("--instruction", instruction_lines, "Constraint line (repeatable)");
    prompt->add_option("--context-file", context_file, "Context section from a file");
    prompt->add_option("--retrieval-file", retrieval_file, "Retrieval section from a file");
    prompt->add_option("--spec", spec_file, "Full prompt spec as JSON");
    prompt->add_flag("--stage1", stage1, "Emit the extraction (chain stage 1) prompt");
    prompt->add_flag("--stage2", stage2, "Emit the answer (chain stage 2) prompt");
    prompt->add_option("--document-file", document_file, "Source document for --stage1");
    prompt->add_option("--extracted-file", extracted_file, "Extracted text for --stage2");
    prompt->add_option("--index", index_path, "Index for --stage2 retrieval");

    // toolcall
    std::string program_text;
    auto* toolcall = app.add_subcommand("toolcall", "Tool-call language utilities");
    toolcall->require_subcommand(1);
    auto* tc_eval = toolcall->add_subcommand("eval", "Parse and evaluate a program");
    tc_eval->add_option("program", program_text, "e.g. \"Add(2, 3)\"")->required();
    auto* tc_extract =
        toolcall->add_subcommand("extract", "Extract the last program from model output");
    tc_extract->add_option("text", program_text, "Model output text")->required();

    // scoring
    std::string task, pred_path, gold_path, agreement_path;
    auto* score = app.add_subcommand("score", "Evaluate predictions against gold");
    score->add_option("--task", task,
                      "Task: cu, sa, ner, nu, ts, smp, cs, fd, hi, or kappa")
        ->required();
    score->add_option("pred", pred_path, "Predictions (NDJSON {id, value})")->required();
    score->add_option("gold", gold_path, "Gold labels (NDJSON {id, value})")->required();
    score->add_option("--agreement", agreement_path,
                      "Annotations {id, annotator, label}; restricts scoring to "
                      "unanimously labeled items");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // usage problems exit 2; --help and friends exit 0
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    char* create_error = nullptr;
    finset_ctx* raw_ctx = nullptr;
    finset_status status = finset_ctx_create(
        config_path.empty() ? nullptr : config_path.c_str(), &raw_ctx, &create_error);
    if (status != FINSET_OK) {
        std::cerr << "finset: " << (create_error ? create_error : "context init failed")
                  << "\n";
        finset_string_free(create_error);
        return static_cast<int>(status);
    }
    CtxPtr ctx(raw_ctx);
    if (seed_set) finset_ctx_set_seed(ctx.get(), seed);
    if (strict) finset_ctx_set_strict(ctx.get(), 1);
    if (deterministic) finset_ctx_set_deterministic(ctx.get(), 1);

    auto run_pipeline_cmd = [&](const std::string& default_stages) -> int {
        if (manifest_path.empty()) manifest_path = output + ".manifest.json";
        const std::string effective_stages = stages.empty() ? default_stages : stages;
        auto paths = c_paths(inputs);
        status = finset_curate(ctx.get(), paths.data(), paths.size(), output.c_str(),
                               manifest_path.c_str(),
                               effective_stages.empty() ? nullptr : effective_stages.c_str(),
                               nullptr);
        if (status != FINSET_OK) return fail(ctx.get(), status);
        if (print_report || json_output) {
            char *table = nullptr, *json = nullptr;
            status = finset_manifest_report(ctx.get(), manifest_path.c_str(), &table, &json);
            if (status != FINSET_OK) return fail(ctx.get(), status);
            StrPtr t(table), j(json);
            if (print_report || json_output)
                std::cout << (json_output ? j.get() : t.get())
                          << (json_output ? "\n" : "");
        }
        if (print_ledger) {
            char *table = nullptr, *json = nullptr;
            status = finset_source_ledger(ctx.get(), inputs.front().c_str(),
                                          output.c_str(), &table, &json);
            if (status != FINSET_OK) return fail(ctx.get(), status);
            StrPtr t(table), j(json);
            std::cout << (json_output ? j.get() : t.get()) << (json_output ? "\n" : "");
        }
        return 0;
    };

    if (*curate) return run_pipeline_cmd("");
    if (*dedup) return run_pipeline_cmd("fuzzy_dedup,exact_dedup");

    if (*instructions || *prefs || *mcq) {
        char* report = nullptr;
        if (*instructions)
            status = finset_build_instructions(ctx.get(), in_file.c_str(),
                                               out_file.c_str(), &report);
        else if (*prefs)
            status = finset_build_preference_pairs(ctx.get(), in_file.c_str(),
                                                   out_file.c_str(), &report);
        else
            status = finset_build_mcq(ctx.get(), in_file.c_str(), out_file.c_str(),
                                      tsv ? 1 : 0, &report);
        if (status != FINSET_OK) return fail(ctx.get(), status);
        StrPtr r(report);
        if (json_output) std::cout << r.get() << "\n";
        return 0;
    }

    if (*index_cmd) {
        auto paths = c_paths(inputs);
        status = finset_index_build(ctx.get(), paths.data(), paths.size(), output.c_str());
        if (status != FINSET_OK) return fail(ctx.get(), status);
        return 0;
    }

    if (*search) {
        finset_index* raw_index = nullptr;
        status = finset_index_open(ctx.get(), index_path.c_str(), &raw_index);
        if (status != FINSET_OK) return fail(ctx.get(), status);
        IndexPtr idx(raw_index);
        char* results = nullptr;
        status = finset_search(ctx.get(), idx.get(), query.c_str(), top_k, &results);
        if (status != FINSET_OK) return fail(ctx.get(), status);
        StrPtr r(results);
        std::cout << r.get() << "\n";
        return 0;
    }

    if (*prompt) {
        char* text = nullptr;
        if (stage1) {
            if (document_file.empty() || question.empty()) {
                std::cerr << "finset: --stage1 requires --document-file and --question\n";
                return 2;
            }
            const std::string doc = read_file(document_file);
            status = finset_chain_stage1(ctx.get(), doc.c_str(), question.c_str(), &text);
        } else if (stage2) {
            if (extracted_file.empty() || question.empty()) {
                std::cerr << "finset: --stage2 requires --extracted-file and --question\n";
                return 2;
            }
            IndexPtr idx;
            if (!index_path.empty()) {
                finset_index* raw_index = nullptr;
                status = finset_index_open(ctx.get(), index_path.c_str(), &raw_index);
                if (status != FINSET_OK) return fail(ctx.get(), status);
                idx.reset(raw_index);
            }
            const std::string extracted = read_file(extracted_file);
            status = finset_chain_stage2(ctx.get(), idx.get(), question.c_str(),
                                         extracted.c_str(), &text);
        } else {
            std::string spec;
            if (!spec_file.empty()) {
                spec = read_file(spec_file);
            } else {
                if (question.empty()) {
                    std::cerr << "finset: prompt requires --question or --spec\n";
                    return 2;
                }
                // hand-rolled JSON spec keeps the CLI on the C API alone
                std::ostringstream ss;
                auto escape = [](const std::string& s) {
                    std::string out;
                    for (char c : s) {
                        switch (c) {
                            case '"': out += "\\\""; break;
                            case '\\': out += "\\\\"; break;
                            case '\n': out += "\\n"; break;
                            case '\t': out += "\\t"; break;
                            case '\r': out += "\\r"; break;
                            default: out += c;
                        }
                    }
                    return out;
                };
                ss << "{\"question\":\"" << escape(question) << "\"";
                if (!persona.empty()) ss << ",\"persona\":\"" << escape(persona) << "\"";
                if (!instruction_lines.empty()) {
                    ss << ",\"instructions\":[";
                    for (std::size_t i = 0; i < instruction_lines.size(); ++i)
                        ss << (i ? "," : "") << "\"" << escape(instruction_lines[i]) << "\"";
                    ss << "]";
                }
                if (!context_file.empty())
                    ss << ",\"context\":\"" << escape(read_file(context_file)) << "\"";
                if (!retrieval_file.empty())
                    ss << ",\"retrieval\":\"" << escape(read_file(retrieval_file)) << "\"";
                ss << "}";
                spec = ss.str();
            }
            status = finset_build_prompt(ctx.get(), spec.c_str(), &text);
        }
        if (status != FINSET_OK) return fail(ctx.get(), status);
        StrPtr t(text);
        std::cout << t.get() << "\n";
        return 0;
    }

    if (*toolcall) {
        char* result = nullptr;
        if (*tc_eval)
            status = finset_toolcall_eval(ctx.get(), program_text.c_str(), &result);
        else
            status = finset_toolcall_extract(ctx.get(), program_text.c_str(), &result);
        if (status != FINSET_OK) return fail(ctx.get(), status);
        StrPtr r(result);
        std::cout << r.get() << "\n";
        return 0;
    }

    if (*score) {
        char *table = nullptr, *json = nullptr;
        if (task == "kappa") {
            status = finset_kappa(ctx.get(), pred_path.c_str(), gold_path.c_str(), &table,
                                  &json);
        } else {
            status = finset_score(ctx.get(), task.c_str(), pred_path.c_str(),
                                  gold_path.c_str(),
                                  agreement_path.empty() ? nullptr : agreement_path.c_str(),
                                  &table, &json);
        }
        if (status != FINSET_OK) return fail(ctx.get(), status);
        StrPtr t(table), j(json);
        std::cout << (json_output ? j.get() : t.get()) << (json_output ? "\n" : "");
        return 0;
    }

    return 2;
}
