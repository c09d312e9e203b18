#include "finset.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "finset/builders.hpp"
#include "finset/config.hpp"
#include "finset/errors.hpp"
#include "finset/metrics.hpp"
#include "finset/pipeline.hpp"
#include "finset/report.hpp"
#include "finset/retrieval.hpp"
#include "finset/tokenize.hpp"
#include "finset/toolcall.hpp"

struct finset_ctx {
    finset::CliConfig config;
    bool deterministic = false;
    std::string last_error;
};

struct finset_index {
    finset::Index index;
};

namespace {

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void set_out(char** out, const std::string& s) {
    if (out) *out = dup_string(s);
}

template <typename Fn>
finset_status guarded(finset_ctx* ctx, Fn&& fn) {
    if (!ctx) return FINSET_ERR_CONFIG;
    try {
        ctx->last_error.clear();
        fn();
        return FINSET_OK;
    } catch (const finset::ConfigError& e) {
        ctx->last_error = e.what();
        return FINSET_ERR_CONFIG;
    } catch (const std::exception& e) {
        ctx->last_error = e.what();
        return FINSET_ERR_DATA;
    }
}

std::vector<finset::Document> read_shards(const finset_ctx* ctx,
                                          const char* const* paths, size_t n) {
    std::vector<finset::Document> docs;
    for (size_t i = 0; i < n; ++i) {
        auto result = finset::read_shard(paths[i], ctx->config.strict_io);
        docs.insert(docs.end(), std::make_move_iterator(result.docs.begin()),
                    std::make_move_iterator(result.docs.end()));
    }
    return docs;
}

}  // namespace

finset_status finset_ctx_create(const char* config_path, finset_ctx** ctx_out,
                                char** error_out) {
    if (!ctx_out) return FINSET_ERR_CONFIG;
    *ctx_out = nullptr;
    try {
        auto ctx = std::make_unique<finset_ctx>();
        if (config_path) {
            ctx->config = finset::load_config(config_path);
        } else {
            ctx->config.curation.domain_lexicon = finset::default_domain_lexicon();
        }
        *ctx_out = ctx.release();
        return FINSET_OK;
    } catch (const finset::ConfigError& e) {
        set_out(error_out, e.what());
        return FINSET_ERR_CONFIG;
    } catch (const std::exception& e) {
        set_out(error_out, e.what());
        return FINSET_ERR_DATA;
    }
}

void finset_ctx_destroy(finset_ctx* ctx) { delete ctx; }

const char* finset_ctx_last_error(const finset_ctx* ctx) {
    return ctx ? ctx->last_error.c_str() : "null context";
}

finset_status finset_ctx_set_seed(finset_ctx* ctx, uint64_t seed) {
    return guarded(ctx, [&] {
        ctx->config.seed = seed;
        ctx->config.dedup.seed = seed;
    });
}

finset_status finset_ctx_set_strict(finset_ctx* ctx, int strict) {
    return guarded(ctx, [&] { ctx->config.strict_io = strict != 0; });
}

finset_status finset_ctx_set_deterministic(finset_ctx* ctx, int deterministic) {
    return guarded(ctx, [&] { ctx->deterministic = deterministic != 0; });
}

finset_status finset_ctx_config_digest(finset_ctx* ctx, char** digest_out) {
    return guarded(ctx, [&] { set_out(digest_out, ctx->config.digest()); });
}

void finset_string_free(char* s) { std::free(s); }

finset_status finset_count_tokens(const char* text, uint64_t* count_out) {
    if (!text || !count_out) return FINSET_ERR_CONFIG;
    *count_out = finset::count_tokens(text);
    return FINSET_OK;
}

finset_status finset_curate(finset_ctx* ctx, const char* const* input_paths,
                            size_t n_inputs, const char* output_path,
                            const char* manifest_path, const char* stages_csv,
                            char** manifest_json_out) {
    return guarded(ctx, [&] {
        if (!input_paths || !output_path || !manifest_path)
            throw finset::ConfigError("curate: missing required path");
        finset::PipelineOptions options;
        if (stages_csv) options.stages = finset::parse_stage_list(stages_csv);
        options.config_digest = ctx->config.digest();
        options.deterministic = ctx->deterministic;

        auto docs = read_shards(ctx, input_paths, n_inputs);
        auto result = finset::run_pipeline(std::move(docs), ctx->config.curation,
                                           ctx->config.dedup, options);
        finset::write_shard(result.docs, output_path);
        finset::write_manifest(result.manifest, manifest_path);
        if (manifest_json_out)
            set_out(manifest_json_out, finset::manifest_to_json(result.manifest).dump(2));
    });
}

finset_status finset_source_ledger(finset_ctx* ctx, const char* input_path,
                                   const char* output_path, char** table_out,
                                   char** json_out) {
    return guarded(ctx, [&] {
        auto input = finset::read_shard(input_path, ctx->config.strict_io);
        auto output = finset::read_shard(output_path, ctx->config.strict_io);
        auto ledger = finset::build_source_ledger(input.docs, output.docs);
        if (table_out) set_out(table_out, finset::format_source_ledger(ledger));
        if (json_out) set_out(json_out, finset::source_ledger_to_json(ledger).dump(2));
    });
}

finset_status finset_manifest_report(finset_ctx* ctx, const char* manifest_path,
                                     char** table_out, char** json_out) {
    return guarded(ctx, [&] {
        auto manifest = finset::read_manifest(manifest_path);
        manifest.check();
        if (table_out) set_out(table_out, finset::format_manifest_table(manifest));
        if (json_out) set_out(json_out, finset::manifest_to_json(manifest).dump(2));
    });
}

finset_status finset_build_instructions(finset_ctx* ctx, const char* input_path,
                                        const char* output_path, char** report_json_out) {
    return guarded(ctx, [&] {
        auto records = finset::read_instructions(input_path, ctx->config.strict_io);
        auto result = finset::dedup_instructions(records, ctx->config.curation.domain_lexicon,
                                                 ctx->config.curation.domain_threshold);
        finset::write_instructions(result.survivors, output_path);
        if (report_json_out)
            set_out(report_json_out, finset::stage_report_to_json(result.report).dump(2));
    });
}

finset_status finset_build_preference_pairs(finset_ctx* ctx, const char* input_path,
                                            const char* output_path,
                                            char** report_json_out) {
    return guarded(ctx, [&] {
        auto items = finset::read_preference_items(input_path, ctx->config.strict_io);
        auto result = finset::build_preference_pairs(items, ctx->config.seed);
        finset::write_preference_pairs(result.pairs, output_path);
        if (report_json_out) {
            nlohmann::ordered_json j;
            j["pairs"] = result.pairs.size();
            j["skipped_degenerate"] = result.skipped_degenerate;
            j["errors"] = result.errors;
            set_out(report_json_out, j.dump(2));
        }
    });
}

finset_status finset_build_mcq(finset_ctx* ctx, const char* glossary_path,
                               const char* output_path, int tsv, char** report_json_out) {
    return guarded(ctx, [&] {
        auto glossary = finset::read_glossary(glossary_path, ctx->config.strict_io);
        auto items = finset::build_mcq(glossary, 3, ctx->config.seed);
        finset::write_mcq(items, output_path, tsv != 0);
        if (report_json_out) {
            nlohmann::ordered_json j;
            j["terms"] = glossary.size();
            j["items"] = items.size();
            set_out(report_json_out, j.dump(2));
        }
    });
}

finset_status finset_index_build(finset_ctx* ctx, const char* const* input_paths,
                                 size_t n_inputs, const char* index_path) {
    return guarded(ctx, [&] {
        auto docs = read_shards(ctx, input_paths, n_inputs);
        finset::Index::build(docs).save(index_path);
    });
}

finset_status finset_index_open(finset_ctx* ctx, const char* index_path,
                                finset_index** index_out) {
    return guarded(ctx, [&] {
        if (!index_out) throw finset::ConfigError("index_open: null out parameter");
        auto handle = std::make_unique<finset_index>();
        handle->index = finset::Index::load(index_path);
        *index_out = handle.release();
    });
}

void finset_index_close(finset_index* index) { delete index; }

finset_status finset_search(finset_ctx* ctx, finset_index* index, const char* query,
                            size_t top_k, char** results_json_out) {
    return guarded(ctx, [&] {
        if (!index || !query) throw finset::ConfigError("search: null index or query");
        finset::RetrievalConfig config = ctx->config.retrieval;
        if (top_k > 0) config.top_k = top_k;
        auto hits = index->index.search(query, config);
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& hit : hits) {
            nlohmann::ordered_json j;
            j["id"] = hit.doc_id;
            j["score"] = hit.score;
            arr.push_back(std::move(j));
        }
        set_out(results_json_out, arr.dump(2));
    });
}

finset_status finset_build_prompt(finset_ctx* ctx, const char* spec_json,
                                  char** prompt_out) {
    return guarded(ctx, [&] {
        if (!spec_json) throw finset::ConfigError("build_prompt: null spec");
        nlohmann::json j = nlohmann::json::parse(spec_json, nullptr, false);
        if (j.is_discarded() || !j.is_object())
            throw finset::ConfigError("build_prompt: spec is not a JSON object");
        finset::PromptSpec spec;
        spec.persona = j.value("persona", "");
        if (j.contains("instructions"))
            spec.instructions = j.at("instructions").get<std::vector<std::string>>();
        else
            spec.instructions = finset::default_instructions();
        if (j.contains("context")) spec.context = j.at("context").get<std::string>();
        if (j.contains("retrieval")) spec.retrieval = j.at("retrieval").get<std::string>();
        spec.question = j.value("question", "");
        set_out(prompt_out, finset::build_prompt(spec));
    });
}

finset_status finset_chain_stage1(finset_ctx* ctx, const char* document_text,
                                  const char* question, char** prompt_out) {
    return guarded(ctx, [&] {
        if (!document_text || !question)
            throw finset::ConfigError("chain_stage1: null argument");
        finset::Index empty = finset::Index::build({});
        auto chain = finset::build_retrieval_chain(document_text, question, empty,
                                                   ctx->config.retrieval);
        set_out(prompt_out, chain.stage1_prompt);
    });
}

finset_status finset_chain_stage2(finset_ctx* ctx, finset_index* index,
                                  const char* question, const char* extracted_text,
                                  char** prompt_out) {
    return guarded(ctx, [&] {
        if (!question || !extracted_text)
            throw finset::ConfigError("chain_stage2: null argument");
        finset::Index empty = finset::Index::build({});
        const finset::Index& idx = index ? index->index : empty;
        auto chain =
            finset::build_retrieval_chain("", question, idx, ctx->config.retrieval);
        set_out(prompt_out, chain.stage2_prompt(extracted_text));
    });
}

finset_status finset_toolcall_eval(finset_ctx* ctx, const char* program,
                                   char** value_out) {
    return guarded(ctx, [&] {
        if (!program) throw finset::ConfigError("toolcall_eval: null program");
        auto expr = finset::toolcall::parse_program(program);
        auto value = finset::toolcall::eval_program(expr);
        set_out(value_out, finset::toolcall::decimal_to_string(value));
    });
}

finset_status finset_toolcall_extract(finset_ctx* ctx, const char* model_output,
                                      char** program_out) {
    return guarded(ctx, [&] {
        if (!model_output) throw finset::ConfigError("toolcall_extract: null input");
        auto expr = finset::toolcall::extract_program(model_output);
        set_out(program_out, expr ? finset::toolcall::render_program(*expr) : "");
    });
}

finset_status finset_score(finset_ctx* ctx, const char* task, const char* pred_path,
                           const char* gold_path, const char* agreement_path,
                           char** table_out, char** json_out) {
    return guarded(ctx, [&] {
        if (!task || !pred_path || !gold_path)
            throw finset::ConfigError("score: missing required argument");
        std::optional<std::string> agreement;
        if (agreement_path) agreement = agreement_path;
        auto reports = finset::evaluate_task(finset::task_from_name(task), pred_path,
                                             gold_path, agreement, ctx->config.strict_io);
        if (table_out) set_out(table_out, finset::format_metric_table(reports));
        if (json_out) set_out(json_out, finset::metric_reports_to_json(reports).dump(2));
    });
}

finset_status finset_kappa(finset_ctx* ctx, const char* labels_a_path,
                           const char* labels_b_path, char** table_out, char** json_out) {
    return guarded(ctx, [&] {
        if (!labels_a_path || !labels_b_path)
            throw finset::ConfigError("kappa: missing label file");
        auto a = finset::read_predictions(labels_a_path, ctx->config.strict_io);
        auto b = finset::read_predictions(labels_b_path, ctx->config.strict_io);
        std::unordered_map<std::string, std::string> by_id;
        for (const auto& rec : b) by_id[rec.id] = rec.value;
        std::vector<std::string> labels_a, labels_b;
        for (const auto& rec : a) {
            auto it = by_id.find(rec.id);
            if (it == by_id.end())
                throw finset::DataError("kappa: id '" + rec.id + "' missing from " +
                                        labels_b_path);
            labels_a.push_back(rec.value);
            labels_b.push_back(it->second);
        }
        auto report = finset::cohens_kappa(labels_a, labels_b);
        if (table_out) set_out(table_out, finset::format_agreement_report(report));
        if (json_out) set_out(json_out, finset::agreement_report_to_json(report).dump(2));
    });
}
