// Copyright 2026 The nliaudit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/*
 * C interface to nliaudit.
 *
 * Every object is an opaque handle created by a nla_*_new/load/compute call
 * and released with the matching nla_*_free. Fallible calls return an
 * nla_status; on failure nla_last_error() describes the problem in one line.
 * The message is thread-local and valid until the next failing call on the
 * same thread. Strings returned through char** out-parameters are owned by
 * the caller and released with nla_string_free. const char* results borrowed
 * from a handle live as long as the handle.
 */
#ifndef NLIAUDIT_H_
#define NLIAUDIT_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(NLIAUDIT_BUILDING)
#    define NLA_API __declspec(dllexport)
#  else
#    define NLA_API __declspec(dllimport)
#  endif
#else
#  define NLA_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nla_status {
  NLA_OK = 0,
  NLA_ERR_INVALID_ARGUMENT = 1,
  NLA_ERR_IO = 2,
  NLA_ERR_PARSE = 3,
  NLA_ERR_INVARIANT = 4,
  NLA_ERR_TRANSPORT = 5,
  NLA_ERR_INTERNAL = 6
} nla_status;

typedef enum nla_label {
  NLA_ENTAILMENT = 0,
  NLA_NEUTRAL = 1,
  NLA_CONTRADICTION = 2
} nla_label;

typedef enum nla_split { NLA_SPLIT_TRAIN = 0, NLA_SPLIT_EVAL = 1 } nla_split;

typedef struct nla_corpus nla_corpus;
typedef struct nla_nb_model nla_nb_model;
typedef struct nla_grid nla_grid;
typedef struct nla_sweep nla_sweep;
typedef struct nla_giveaways nla_giveaways;
typedef struct nla_phrases nla_phrases;
typedef struct nla_overlap nla_overlap;
typedef struct nla_agreement nla_agreement;
typedef struct nla_report nla_report;

NLA_API const char* nla_version(void);
NLA_API const char* nla_last_error(void);
NLA_API const char* nla_status_name(nla_status status);
NLA_API const char* nla_label_name(nla_label label);
NLA_API void nla_string_free(char* s);

/* ---- corpora ---------------------------------------------------------- */

/* Public SNLI JSONL. Either count pointer may be NULL. */
NLA_API nla_status nla_corpus_load_snli(const char* path, nla_split split,
                                        const char* source, nla_corpus** out,
                                        size_t* dropped_unlabeled,
                                        size_t* parse_failures);
/* Canonical corpus file; |source| may be NULL to keep the stored one. */
NLA_API nla_status nla_corpus_load(const char* path, const char* source,
                                   nla_corpus** out);
NLA_API nla_status nla_corpus_write(const nla_corpus* corpus, const char* path);
NLA_API nla_status nla_corpus_subset(const nla_corpus* corpus, double fraction,
                                     uint64_t seed, nla_corpus** out);
NLA_API size_t nla_corpus_size(const nla_corpus* corpus);
NLA_API size_t nla_corpus_premise_count(const nla_corpus* corpus);
NLA_API size_t nla_corpus_label_count(const nla_corpus* corpus, nla_label label);
NLA_API const char* nla_corpus_source(const nla_corpus* corpus);
NLA_API void nla_corpus_free(nla_corpus* corpus);

NLA_API nla_status nla_token_stats(const nla_corpus* corpus, double* mean,
                                   double* median, size_t* max);
/* JSON array of the case-sensitive tokens of |text|. */
NLA_API nla_status nla_tokenize_json(const char* text, char** out_json);

/* ---- Naive Bayes ------------------------------------------------------ */

typedef struct nla_nb_options {
  double alpha;  /* add-alpha smoothing, > 0 */
  int skip_oov;  /* nonzero: ignore out-of-vocabulary tokens */
} nla_nb_options;

NLA_API nla_nb_options nla_nb_default_options(void);
/* |options| may be NULL for defaults. */
NLA_API nla_status nla_nb_train(const nla_corpus* corpus,
                                const nla_nb_options* options,
                                nla_nb_model** out);
/* Trains on the |n| highest chi-squared tokens only. */
NLA_API nla_status nla_nb_train_top_n(const nla_corpus* corpus, size_t n,
                                      const nla_nb_options* options,
                                      nla_nb_model** out);
NLA_API nla_status nla_nb_save(const nla_nb_model* model, const char* path);
NLA_API nla_status nla_nb_load(const char* path, nla_nb_model** out);
NLA_API nla_status nla_nb_predict(const nla_nb_model* model,
                                  const char* hypothesis, nla_label* out);
NLA_API nla_status nla_nb_evaluate(const nla_nb_model* model,
                                   const nla_corpus* corpus, double* accuracy);
NLA_API size_t nla_nb_vocabulary_size(const nla_nb_model* model);
NLA_API void nla_nb_free(nla_nb_model* model);

NLA_API nla_status nla_majority_baseline(const nla_corpus* train,
                                         const nla_corpus* eval, double* out);

/* Train x eval accuracy grid; one model per train corpus. */
NLA_API nla_status nla_eval_grid(const nla_corpus* const* train, size_t n_train,
                                 const nla_corpus* const* eval, size_t n_eval,
                                 const nla_nb_options* options, nla_grid** out);
/* Grid record file in the shared JSON schema (any classifier). */
NLA_API nla_status nla_grid_load(const char* path, nla_grid** out);
NLA_API size_t nla_grid_train_count(const nla_grid* grid);
NLA_API size_t nla_grid_eval_count(const nla_grid* grid);
NLA_API nla_status nla_grid_cell(const nla_grid* grid, size_t train, size_t eval,
                                 double* accuracy, double* baseline);
NLA_API nla_status nla_grid_write_csv(const nla_grid* grid, const char* path);
NLA_API nla_status nla_grid_write_json(const nla_grid* grid, const char* path);
NLA_API void nla_grid_free(nla_grid* grid);

/* ---- feature selection ------------------------------------------------ */

/* Writes rank,token,chi2 rows; |vocabulary_size| may be NULL. */
NLA_API nla_status nla_chi2_rank_write_csv(const nla_corpus* corpus,
                                           const char* path,
                                           size_t* vocabulary_size);
/* Accuracy for n = 1..n_max top features. */
NLA_API nla_status nla_feature_sweep(const nla_corpus* train,
                                     const nla_corpus* eval, size_t n_max,
                                     const nla_nb_options* options,
                                     nla_sweep** out);
NLA_API size_t nla_sweep_size(const nla_sweep* sweep);
NLA_API nla_status nla_sweep_point(const nla_sweep* sweep, size_t index,
                                   size_t* n, double* accuracy);
NLA_API nla_status nla_sweep_write_csv(const nla_sweep* sweep, const char* path);
NLA_API void nla_sweep_free(nla_sweep* sweep);

/* ---- give-aways ------------------------------------------------------- */

typedef struct nla_giveaway_options {
  double threshold;  /* in (1/3, 1] */
  size_t min_freq;   /* >= 1 */
  size_t top_k;      /* per label, 0 = unlimited */
} nla_giveaway_options;

NLA_API nla_giveaway_options nla_giveaway_default_options(void);
/* Nonzero |flag_prompt| marks words found in the elicitation prompt. */
NLA_API nla_status nla_giveaway_words(const nla_corpus* corpus,
                                      const nla_giveaway_options* options,
                                      int flag_prompt, nla_giveaways** out);
NLA_API size_t nla_giveaways_count(const nla_giveaways* table, nla_label label);
NLA_API nla_status nla_giveaways_entry(const nla_giveaways* table,
                                       nla_label label, size_t index,
                                       const char** token, double* p,
                                       size_t* freq, int* in_prompt);
NLA_API nla_status nla_giveaways_write_csv(const nla_giveaways* table,
                                           const char* path);
NLA_API void nla_giveaways_free(nla_giveaways* table);

NLA_API nla_status nla_giveaway_phrases(const nla_corpus* corpus,
                                        const nla_giveaway_options* options,
                                        size_t min_n, size_t max_n,
                                        nla_phrases** out);
NLA_API size_t nla_phrases_count(const nla_phrases* table, nla_label label);
NLA_API nla_status nla_phrases_entry(const nla_phrases* table, nla_label label,
                                     size_t index, const char** phrase,
                                     double* p, size_t* label_freq,
                                     size_t* freq);
NLA_API nla_status nla_phrases_write_csv(const nla_phrases* table,
                                         const char* path);
NLA_API void nla_phrases_free(nla_phrases* table);

/* ---- validation ------------------------------------------------------- */

NLA_API double nla_jaccard(const char* a, const char* b);
NLA_API nla_status nla_compute_overlap(const nla_corpus* candidate,
                                       const nla_corpus* reference,
                                       nla_overlap** out);
NLA_API nla_status nla_overlap_summary(const nla_overlap* overlap, size_t* pairs,
                                       size_t* skipped, double* mean_jaccard);
/* Histogram CSV (bucket_low, bucket_high, count). */
NLA_API nla_status nla_overlap_write_csv(const nla_overlap* overlap,
                                         const char* path);
NLA_API void nla_overlap_free(nla_overlap* overlap);

/* Writes a blank annotation sheet (CSV) with 3 rows per sampled premise. */
NLA_API nla_status nla_sample_validation(const nla_corpus* corpus,
                                         size_t n_premises, uint64_t seed,
                                         const char* sheet_path, size_t* rows);
NLA_API nla_status nla_score_agreement(const char* sheet_path,
                                       nla_agreement** out);
/* |per_label| receives 3 percentages in label order; may be NULL. */
NLA_API nla_status nla_agreement_values(const nla_agreement* agreement,
                                        double* overall, double* per_label,
                                        size_t* sample_size);
NLA_API nla_status nla_agreement_write_csv(const nla_agreement* agreement,
                                           const char* path);
NLA_API void nla_agreement_free(nla_agreement* agreement);

/* ---- elicitation ------------------------------------------------------ */

/* Instructions with the premise placeholder in place (static storage). */
NLA_API const char* nla_prompt_template(void);
NLA_API nla_status nla_build_prompt(const char* premise, char** out);

typedef struct nla_elicit_config {
  const char* endpoint;  /* full URL of the chat-completion route */
  const char* model;     /* model name; also the output corpus source */
  const char* schema;    /* "openai" or "ollama"; NULL = "openai" */
  const char* api_key;   /* NULL: read NLIAUDIT_API_KEY from the environment */
  double temperature;
  double top_p;
  int top_k;             /* <= 0: backend default */
  int max_retries;       /* attempts per premise */
  int parallelism;       /* requests in flight */
  int timeout_ms;
  int backoff_ms;        /* first transport-retry delay; doubles each time */
  nla_split split;
} nla_elicit_config;

NLA_API nla_elicit_config nla_elicit_default_config(void);
/* Prompts once per distinct premise of |premises|. The transcript of every
   attempt is written to |transcript_path| (JSONL) when it is not NULL. */
NLA_API nla_status nla_elicit(const nla_corpus* premises,
                              const nla_elicit_config* config,
                              const char* transcript_path, nla_corpus** out,
                              size_t* failed_premises);
NLA_API nla_status nla_replay_transcript(const char* transcript_path,
                                         const char* source, nla_split split,
                                         nla_corpus** out);

/* ---- reports ---------------------------------------------------------- */

NLA_API nla_status nla_report_new(const char* dataset_id, nla_report** out);
NLA_API nla_status nla_report_load(const char* path, nla_report** out);
NLA_API nla_status nla_report_add_corpus_stats(nla_report* report,
                                               const nla_corpus* corpus);
NLA_API nla_status nla_report_set_overlap(nla_report* report,
                                          const nla_overlap* overlap);
NLA_API nla_status nla_report_set_agreement(nla_report* report,
                                            const nla_agreement* agreement);
NLA_API nla_status nla_report_add_grid(nla_report* report, const nla_grid* grid);
NLA_API nla_status nla_report_set_sweep(nla_report* report,
                                        const nla_sweep* sweep);
NLA_API nla_status nla_report_set_giveaways(nla_report* report,
                                            const nla_giveaways* table);
NLA_API nla_status nla_report_set_phrases(nla_report* report,
                                          const nla_phrases* table);
NLA_API nla_status nla_report_set_config(nla_report* report,
                                         const char* json_object);
/* Borrowed; must stay alive until nla_report_assemble returns. |role| says
   whether the corpus is matched against grid rows (train) or columns. */
NLA_API nla_status nla_report_register_corpus(nla_report* report,
                                              const nla_corpus* corpus,
                                              nla_split role);
/* Validates every section; registered corpora are used to recompute
   Naive Bayes grid cells. */
NLA_API nla_status nla_report_assemble(nla_report* report,
                                       const nla_nb_options* options);
NLA_API nla_status nla_report_serialize(const nla_report* report,
                                        char** out_json);
/* Writes report-<hash>.json under |dir| without overwriting. */
NLA_API nla_status nla_report_write(const nla_report* report, const char* dir,
                                    char** out_path);
/* Plain-text tables; also writes the CSV bundle when |csv_dir| is set. */
NLA_API nla_status nla_report_render(const nla_report* report,
                                     const char* csv_dir, char** out_text);
NLA_API void nla_report_free(nla_report* report);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* NLIAUDIT_H_ */
