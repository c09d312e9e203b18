/* C interface to the finset corpus-curation and benchmark toolkit.
 *
 * All functions return finset_status; on failure the context holds a
 * human-readable message (finset_ctx_last_error). Strings returned through
 * char** out-parameters are heap-allocated by the library and must be
 * released with finset_string_free.
 */
#ifndef FINSET_H
#define FINSET_H

#include <stddef.h>
#include <stdint.h>

#if defined _WIN32 || defined __CYGWIN__
#define FINSET_API __declspec(dllexport)
#else
#define FINSET_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum finset_status {
    FINSET_OK = 0,
    FINSET_ERR_DATA = 1,  /* runtime or data error */
    FINSET_ERR_CONFIG = 2 /* usage or configuration error */
} finset_status;

typedef struct finset_ctx finset_ctx;
typedef struct finset_index finset_index;

/* config_path may be NULL for built-in defaults. On failure *error_out (if
 * non-NULL) receives a message the caller frees with finset_string_free. */
FINSET_API finset_status finset_ctx_create(const char* config_path, finset_ctx** ctx_out,
                                           char** error_out);
FINSET_API void finset_ctx_destroy(finset_ctx* ctx);

FINSET_API const char* finset_ctx_last_error(const finset_ctx* ctx);
FINSET_API finset_status finset_ctx_set_seed(finset_ctx* ctx, uint64_t seed);
FINSET_API finset_status finset_ctx_set_strict(finset_ctx* ctx, int strict);
FINSET_API finset_status finset_ctx_set_deterministic(finset_ctx* ctx, int deterministic);
FINSET_API finset_status finset_ctx_config_digest(finset_ctx* ctx, char** digest_out);

FINSET_API void finset_string_free(char* s);

FINSET_API finset_status finset_count_tokens(const char* text, uint64_t* count_out);

/* Runs the cleaning/dedup pipeline over the input shards. stages_csv selects
 * a subsequence of url,extract,lang,domain,sensitive,fuzzy_dedup,exact_dedup,
 * clean; NULL runs all eight. The manifest is written next to the output and
 * optionally returned as JSON. */
FINSET_API finset_status finset_curate(finset_ctx* ctx, const char* const* input_paths,
                                       size_t n_inputs, const char* output_path,
                                       const char* manifest_path, const char* stages_csv,
                                       char** manifest_json_out);

/* Table-1-shaped per-source ledger comparing a pipeline input with its output. */
FINSET_API finset_status finset_source_ledger(finset_ctx* ctx, const char* input_path,
                                              const char* output_path, char** table_out,
                                              char** json_out);

FINSET_API finset_status finset_manifest_report(finset_ctx* ctx, const char* manifest_path,
                                                char** table_out, char** json_out);

/* Dataset builders. Reports are returned as JSON stage/skip accounting. */
FINSET_API finset_status finset_build_instructions(finset_ctx* ctx, const char* input_path,
                                                   const char* output_path,
                                                   char** report_json_out);
FINSET_API finset_status finset_build_preference_pairs(finset_ctx* ctx,
                                                       const char* input_path,
                                                       const char* output_path,
                                                       char** report_json_out);
FINSET_API finset_status finset_build_mcq(finset_ctx* ctx, const char* glossary_path,
                                          const char* output_path, int tsv,
                                          char** report_json_out);

/* Retrieval. */
FINSET_API finset_status finset_index_build(finset_ctx* ctx, const char* const* input_paths,
                                            size_t n_inputs, const char* index_path);
FINSET_API finset_status finset_index_open(finset_ctx* ctx, const char* index_path,
                                           finset_index** index_out);
FINSET_API void finset_index_close(finset_index* index);
FINSET_API finset_status finset_search(finset_ctx* ctx, finset_index* index,
                                       const char* query, size_t top_k,
                                       char** results_json_out);

/* spec_json keys: persona?, instructions?[], context?, retrieval?, question. */
FINSET_API finset_status finset_build_prompt(finset_ctx* ctx, const char* spec_json,
                                             char** prompt_out);
FINSET_API finset_status finset_chain_stage1(finset_ctx* ctx, const char* document_text,
                                             const char* question, char** prompt_out);
FINSET_API finset_status finset_chain_stage2(finset_ctx* ctx, finset_index* index,
                                             const char* question,
                                             const char* extracted_text, char** prompt_out);

/* Tool-call language. finset_toolcall_extract yields an empty string when the
 * output contains no program. */
FINSET_API finset_status finset_toolcall_eval(finset_ctx* ctx, const char* program,
                                              char** value_out);
FINSET_API finset_status finset_toolcall_extract(finset_ctx* ctx, const char* model_output,
                                                 char** program_out);

/* Evaluation. task is one of cu,sa,ner,nu,ts,smp,cs,fd,hi; agreement_path may
 * be NULL. */
FINSET_API finset_status finset_score(finset_ctx* ctx, const char* task,
                                      const char* pred_path, const char* gold_path,
                                      const char* agreement_path, char** table_out,
                                      char** json_out);
FINSET_API finset_status finset_kappa(finset_ctx* ctx, const char* labels_a_path,
                                      const char* labels_b_path, char** table_out,
                                      char** json_out);

#ifdef __cplusplus
}
#endif

#endif /* FINSET_H */
