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

#include "nliaudit/nliaudit.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "json.hpp"
#include "nliaudit/corpus.hpp"
#include "nliaudit/csv.hpp"
#include "nliaudit/elicitation.hpp"
#include "nliaudit/error.hpp"
#include "nliaudit/feature_selection.hpp"
#include "nliaudit/giveaway.hpp"
#include "nliaudit/naive_bayes.hpp"
#include "nliaudit/report.hpp"
#include "nliaudit/tokenizer.hpp"
#include "nliaudit/validation.hpp"
#include "nliaudit/version.hpp"

namespace na = nliaudit;

struct nla_corpus {
  na::Corpus value;
};
struct nla_nb_model {
  na::NBModel value;
};
struct nla_grid {
  na::AccuracyGrid value;
};
struct nla_sweep {
  na::SweepResult value;
};
struct nla_giveaways {
  na::GiveawaySection value;
};
struct nla_phrases {
  na::PhraseSection value;
  na::PerLabel<std::vector<std::string>> text;  // joined phrases for borrowing
};
struct nla_overlap {
  na::OverlapReport value;
};
struct nla_agreement {
  na::AgreementReport value;
};
struct nla_report {
  na::AuditReport value;
  std::vector<std::pair<nla_split, const na::Corpus*>> registered;
  bool assembled = false;
};

namespace {

thread_local std::string last_error;

nla_status StatusOf(na::ErrorCode code) {
  switch (code) {
    case na::ErrorCode::kInvalidArgument:
      return NLA_ERR_INVALID_ARGUMENT;
    case na::ErrorCode::kIo:
      return NLA_ERR_IO;
    case na::ErrorCode::kParse:
      return NLA_ERR_PARSE;
    case na::ErrorCode::kInvariant:
      return NLA_ERR_INVARIANT;
    case na::ErrorCode::kTransport:
      return NLA_ERR_TRANSPORT;
  }
  return NLA_ERR_INTERNAL;
}

// Runs |body|, translating exceptions into a status and the thread-local
// error message.
template <typename Body>
nla_status Guard(Body&& body) {
  try {
    body();
    return NLA_OK;
  } catch (const na::Error& e) {
    last_error = e.what();
    return StatusOf(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return NLA_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return NLA_ERR_INTERNAL;
  }
}

void Require(bool condition, const char* what) {
  if (!condition) na::Fail(na::ErrorCode::kInvalidArgument, what);
}

char* Dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

na::Split SplitOf(nla_split split) {
  return split == NLA_SPLIT_EVAL ? na::Split::kEval : na::Split::kTrain;
}

na::Label LabelOf(nla_label label) {
  Require(label >= NLA_ENTAILMENT && label <= NLA_CONTRADICTION, "invalid label");
  return static_cast<na::Label>(label);
}

na::NBOptions NBOptionsOf(const nla_nb_options* options) {
  na::NBOptions out;
  if (options != nullptr) {
    out.alpha = options->alpha;
    out.skip_oov = options->skip_oov != 0;
  }
  return out;
}

na::GiveawayOptions GiveawayOptionsOf(const nla_giveaway_options* options) {
  na::GiveawayOptions out;
  if (options != nullptr) {
    out.threshold = options->threshold;
    out.min_freq = options->min_freq;
    out.top_k = options->top_k;
  }
  return out;
}

template <typename Handle, typename Value>
Handle* Wrap(Value&& value) {
  return new Handle{std::forward<Value>(value)};
}

template <typename Mutate>
nla_status EditReport(nla_report* report, Mutate&& mutate) {
  return Guard([&] {
    Require(report != nullptr, "report is required");
    mutate(report->value);
    report->assembled = false;
  });
}


}  // namespace

extern "C" {

const char* nla_version(void) { return na::kToolVersion; }

const char* nla_last_error(void) { return last_error.c_str(); }

const char* nla_status_name(nla_status status) {
  switch (status) {
    case NLA_OK:
      return "ok";
    case NLA_ERR_INVALID_ARGUMENT:
      return "invalid_argument";
    case NLA_ERR_IO:
      return "io";
    case NLA_ERR_PARSE:
      return "parse";
    case NLA_ERR_INVARIANT:
      return "invariant";
    case NLA_ERR_TRANSPORT:
      return "transport";
    case NLA_ERR_INTERNAL:
      return "internal";
  }
  return "unknown";
}

const char* nla_label_name(nla_label label) {
  if (label < NLA_ENTAILMENT || label > NLA_CONTRADICTION) return "";
  return na::LabelName(static_cast<na::Label>(label)).data();
}

void nla_string_free(char* s) { std::free(s); }

// ---- corpora

nla_status nla_corpus_load_snli(const char* path, nla_split split,
                                const char* source, nla_corpus** out,
                                size_t* dropped_unlabeled,
                                size_t* parse_failures) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "path and out are required");
    na::LoadStats stats;
    auto corpus = na::LoadSnliJsonl(path, SplitOf(split), &stats,
                                    source != nullptr ? source : "snli");
    if (dropped_unlabeled != nullptr) *dropped_unlabeled = stats.dropped_unlabeled;
    if (parse_failures != nullptr) *parse_failures = stats.parse_failures;
    *out = Wrap<nla_corpus>(std::move(corpus));
  });
}

nla_status nla_corpus_load(const char* path, const char* source,
                           nla_corpus** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "path and out are required");
    std::optional<std::string> name;
    if (source != nullptr) name = source;
    *out = Wrap<nla_corpus>(na::LoadCorpus(path, name));
  });
}

nla_status nla_corpus_write(const nla_corpus* corpus, const char* path) {
  return Guard([&] {
    Require(corpus != nullptr && path != nullptr, "corpus and path are required");
    na::WriteCorpus(corpus->value, path);
  });
}

nla_status nla_corpus_subset(const nla_corpus* corpus, double fraction,
                             uint64_t seed, nla_corpus** out) {
  return Guard([&] {
    Require(corpus != nullptr && out != nullptr, "corpus and out are required");
    *out = Wrap<nla_corpus>(
        na::SubsetByPremiseFraction(corpus->value, fraction, seed));
  });
}

size_t nla_corpus_size(const nla_corpus* corpus) {
  return corpus != nullptr ? corpus->value.size() : 0;
}

size_t nla_corpus_premise_count(const nla_corpus* corpus) {
  return corpus != nullptr ? corpus->value.premise_count() : 0;
}

size_t nla_corpus_label_count(const nla_corpus* corpus, nla_label label) {
  if (corpus == nullptr || label < NLA_ENTAILMENT || label > NLA_CONTRADICTION) {
    return 0;
  }
  return corpus->value.label_counts()[static_cast<size_t>(label)];
}

const char* nla_corpus_source(const nla_corpus* corpus) {
  return corpus != nullptr ? corpus->value.source().c_str() : "";
}

void nla_corpus_free(nla_corpus* corpus) { delete corpus; }

nla_status nla_token_stats(const nla_corpus* corpus, double* mean,
                           double* median, size_t* max) {
  return Guard([&] {
    Require(corpus != nullptr, "corpus is required");
    const auto stats = na::ComputeTokenCountStats(corpus->value);
    if (mean != nullptr) *mean = stats.mean;
    if (median != nullptr) *median = stats.median;
    if (max != nullptr) *max = stats.max;
  });
}

nla_status nla_tokenize_json(const char* text, char** out_json) {
  return Guard([&] {
    Require(text != nullptr && out_json != nullptr, "text and out are required");
    *out_json = Dup(nlohmann::json(na::Tokenize(text)).dump());
  });
}

// ---- Naive Bayes

nla_nb_options nla_nb_default_options(void) {
  const na::NBOptions defaults;
  return {defaults.alpha, defaults.skip_oov ? 1 : 0};
}

nla_status nla_nb_train(const nla_corpus* corpus, const nla_nb_options* options,
                        nla_nb_model** out) {
  return Guard([&] {
    Require(corpus != nullptr && out != nullptr, "corpus and out are required");
    *out = Wrap<nla_nb_model>(na::TrainNB(corpus->value, NBOptionsOf(options)));
  });
}

nla_status nla_nb_train_top_n(const nla_corpus* corpus, size_t n,
                              const nla_nb_options* options, nla_nb_model** out) {
  return Guard([&] {
    Require(corpus != nullptr && out != nullptr, "corpus and out are required");
    *out = Wrap<nla_nb_model>(
        na::RestrictAndTrain(corpus->value, n, NBOptionsOf(options)));
  });
}

nla_status nla_nb_save(const nla_nb_model* model, const char* path) {
  return Guard([&] {
    Require(model != nullptr && path != nullptr, "model and path are required");
    model->value.Save(path);
  });
}

nla_status nla_nb_load(const char* path, nla_nb_model** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "path and out are required");
    *out = Wrap<nla_nb_model>(na::NBModel::Load(path));
  });
}

nla_status nla_nb_predict(const nla_nb_model* model, const char* hypothesis,
                          nla_label* out) {
  return Guard([&] {
    Require(model != nullptr && hypothesis != nullptr && out != nullptr,
            "model, hypothesis and out are required");
    *out = static_cast<nla_label>(model->value.Predict(hypothesis));
  });
}

nla_status nla_nb_evaluate(const nla_nb_model* model, const nla_corpus* corpus,
                           double* accuracy) {
  return Guard([&] {
    Require(model != nullptr && corpus != nullptr && accuracy != nullptr,
            "model, corpus and accuracy are required");
    *accuracy = na::Evaluate(model->value, corpus->value);
  });
}

size_t nla_nb_vocabulary_size(const nla_nb_model* model) {
  return model != nullptr ? model->value.vocabulary().size() : 0;
}

void nla_nb_free(nla_nb_model* model) { delete model; }

nla_status nla_majority_baseline(const nla_corpus* train, const nla_corpus* eval,
                                 double* out) {
  return Guard([&] {
    Require(train != nullptr && eval != nullptr && out != nullptr,
            "train, eval and out are required");
    *out = na::MajorityBaseline(train->value, eval->value);
  });
}

nla_status nla_eval_grid(const nla_corpus* const* train, size_t n_train,
                         const nla_corpus* const* eval, size_t n_eval,
                         const nla_nb_options* options, nla_grid** out) {
  return Guard([&] {
    Require(train != nullptr && eval != nullptr && out != nullptr,
            "train, eval and out are required");
    Require(n_train > 0 && n_eval > 0, "grid needs at least one train and eval corpus");
    std::vector<const na::Corpus*> trains;
    std::vector<const na::Corpus*> evals;
    for (size_t i = 0; i < n_train; ++i) {
      Require(train[i] != nullptr, "null train corpus");
      trains.push_back(&train[i]->value);
    }
    for (size_t i = 0; i < n_eval; ++i) {
      Require(eval[i] != nullptr, "null eval corpus");
      evals.push_back(&eval[i]->value);
    }
    *out = Wrap<nla_grid>(na::EvalGrid(trains, evals, NBOptionsOf(options)));
  });
}

nla_status nla_grid_load(const char* path, nla_grid** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "path and out are required");
    *out = Wrap<nla_grid>(na::DeserializeGrid(na::ReadFile(path)));
  });
}

size_t nla_grid_train_count(const nla_grid* grid) {
  return grid != nullptr ? grid->value.train_sources.size() : 0;
}

size_t nla_grid_eval_count(const nla_grid* grid) {
  return grid != nullptr ? grid->value.eval_sources.size() : 0;
}

nla_status nla_grid_cell(const nla_grid* grid, size_t train, size_t eval,
                         double* accuracy, double* baseline) {
  return Guard([&] {
    Require(grid != nullptr, "grid is required");
    Require(train < grid->value.train_sources.size() &&
                eval < grid->value.eval_sources.size(),
            "grid cell index out of range");
    const auto& cell = grid->value.Cell(train, eval);
    if (accuracy != nullptr) *accuracy = cell.accuracy;
    if (baseline != nullptr) *baseline = cell.baseline;
  });
}

nla_status nla_grid_write_csv(const nla_grid* grid, const char* path) {
  return Guard([&] {
    Require(grid != nullptr && path != nullptr, "grid and path are required");
    na::WriteFile(path, na::GridToCsv(grid->value));
  });
}

nla_status nla_grid_write_json(const nla_grid* grid, const char* path) {
  return Guard([&] {
    Require(grid != nullptr && path != nullptr, "grid and path are required");
    na::WriteFile(path, na::SerializeGrid(grid->value));
  });
}

void nla_grid_free(nla_grid* grid) { delete grid; }

// ---- feature selection

nla_status nla_chi2_rank_write_csv(const nla_corpus* corpus, const char* path,
                                   size_t* vocabulary_size) {
  return Guard([&] {
    Require(corpus != nullptr && path != nullptr, "corpus and path are required");
    const auto ranking = na::Chi2Rank(corpus->value);
    na::WriteFile(path, na::RankingToCsv(ranking));
    if (vocabulary_size != nullptr) *vocabulary_size = ranking.size();
  });
}

nla_status nla_feature_sweep(const nla_corpus* train, const nla_corpus* eval,
                             size_t n_max, const nla_nb_options* options,
                             nla_sweep** out) {
  return Guard([&] {
    Require(train != nullptr && eval != nullptr && out != nullptr,
            "train, eval and out are required");
    Require(n_max >= 1, "n_max must be at least 1");
    *out = Wrap<nla_sweep>(na::FeatureSweep(train->value, eval->value,
                                            na::SweepRange(n_max),
                                            NBOptionsOf(options)));
  });
}

size_t nla_sweep_size(const nla_sweep* sweep) {
  return sweep != nullptr ? sweep->value.n_values.size() : 0;
}

nla_status nla_sweep_point(const nla_sweep* sweep, size_t index, size_t* n,
                           double* accuracy) {
  return Guard([&] {
    Require(sweep != nullptr, "sweep is required");
    Require(index < sweep->value.n_values.size(), "sweep index out of range");
    if (n != nullptr) *n = sweep->value.n_values[index];
    if (accuracy != nullptr) *accuracy = sweep->value.accuracies[index];
  });
}

nla_status nla_sweep_write_csv(const nla_sweep* sweep, const char* path) {
  return Guard([&] {
    Require(sweep != nullptr && path != nullptr, "sweep and path are required");
    na::WriteFile(path, na::SweepToCsv(sweep->value));
  });
}

void nla_sweep_free(nla_sweep* sweep) { delete sweep; }

// ---- give-aways

nla_giveaway_options nla_giveaway_default_options(void) {
  const na::GiveawayOptions defaults;
  return {defaults.threshold, defaults.min_freq, defaults.top_k};
}

nla_status nla_giveaway_words(const nla_corpus* corpus,
                              const nla_giveaway_options* options,
                              int flag_prompt, nla_giveaways** out) {
  return Guard([&] {
    Require(corpus != nullptr && out != nullptr, "corpus and out are required");
    na::GiveawaySection section;
    section.source = corpus->value.source();
    section.options = GiveawayOptionsOf(options);
    section.table = na::GiveawayWords(corpus->value, section.options);
    if (flag_prompt != 0) {
      na::FlagPromptOverlap(section.table, na::PromptTemplate(),
                            na::kPremisePlaceholder);
    }
    *out = Wrap<nla_giveaways>(std::move(section));
  });
}

size_t nla_giveaways_count(const nla_giveaways* table, nla_label label) {
  if (table == nullptr || label < NLA_ENTAILMENT || label > NLA_CONTRADICTION) {
    return 0;
  }
  return table->value.table[static_cast<size_t>(label)].size();
}

nla_status nla_giveaways_entry(const nla_giveaways* table, nla_label label,
                               size_t index, const char** token, double* p,
                               size_t* freq, int* in_prompt) {
  return Guard([&] {
    Require(table != nullptr, "table is required");
    const auto& list = table->value.table[na::LabelIndex(LabelOf(label))];
    Require(index < list.size(), "entry index out of range");
    const auto& e = list[index];
    if (token != nullptr) *token = e.token.c_str();
    if (p != nullptr) *p = e.conditional_probability;
    if (freq != nullptr) *freq = e.frequency;
    if (in_prompt != nullptr) *in_prompt = e.in_prompt ? 1 : 0;
  });
}

nla_status nla_giveaways_write_csv(const nla_giveaways* table, const char* path) {
  return Guard([&] {
    Require(table != nullptr && path != nullptr, "table and path are required");
    na::WriteFile(path, na::GiveawaysToCsv(table->value.table));
  });
}

void nla_giveaways_free(nla_giveaways* table) { delete table; }

nla_status nla_giveaway_phrases(const nla_corpus* corpus,
                                const nla_giveaway_options* options,
                                size_t min_n, size_t max_n, nla_phrases** out) {
  return Guard([&] {
    Require(corpus != nullptr && out != nullptr, "corpus and out are required");
    auto handle = std::make_unique<nla_phrases>();
    handle->value.source = corpus->value.source();
    handle->value.options.base = GiveawayOptionsOf(options);
    handle->value.options.min_n = min_n;
    handle->value.options.max_n = max_n;
    handle->value.table = na::GiveawayPhrases(corpus->value, handle->value.options);
    for (size_t l = 0; l < na::kNumLabels; ++l) {
      for (const auto& e : handle->value.table[l]) handle->text[l].push_back(e.Text());
    }
    *out = handle.release();
  });
}

size_t nla_phrases_count(const nla_phrases* table, nla_label label) {
  if (table == nullptr || label < NLA_ENTAILMENT || label > NLA_CONTRADICTION) {
    return 0;
  }
  return table->value.table[static_cast<size_t>(label)].size();
}

nla_status nla_phrases_entry(const nla_phrases* table, nla_label label,
                             size_t index, const char** phrase, double* p,
                             size_t* label_freq, size_t* freq) {
  return Guard([&] {
    Require(table != nullptr, "table is required");
    const size_t l = na::LabelIndex(LabelOf(label));
    Require(index < table->value.table[l].size(), "entry index out of range");
    const auto& e = table->value.table[l][index];
    if (phrase != nullptr) *phrase = table->text[l][index].c_str();
    if (p != nullptr) *p = e.conditional_probability;
    if (label_freq != nullptr) *label_freq = e.label_frequency;
    if (freq != nullptr) *freq = e.frequency;
  });
}

nla_status nla_phrases_write_csv(const nla_phrases* table, const char* path) {
  return Guard([&] {
    Require(table != nullptr && path != nullptr, "table and path are required");
    na::WriteFile(path, na::PhrasesToCsv(table->value.table));
  });
}

void nla_phrases_free(nla_phrases* table) { delete table; }

// ---- validation

double nla_jaccard(const char* a, const char* b) {
  return na::Jaccard(a != nullptr ? a : "", b != nullptr ? b : "");
}

nla_status nla_compute_overlap(const nla_corpus* candidate, const nla_corpus* reference,
                       nla_overlap** out) {
  return Guard([&] {
    Require(candidate != nullptr && reference != nullptr && out != nullptr,
            "candidate, reference and out are required");
    *out = Wrap<nla_overlap>(na::ComputeOverlap(candidate->value, reference->value));
  });
}

nla_status nla_overlap_summary(const nla_overlap* overlap, size_t* pairs,
                               size_t* skipped, double* mean_jaccard) {
  return Guard([&] {
    Require(overlap != nullptr, "overlap is required");
    if (pairs != nullptr) *pairs = overlap->value.pair_count;
    if (skipped != nullptr) *skipped = overlap->value.skipped;
    if (mean_jaccard != nullptr) *mean_jaccard = overlap->value.mean_jaccard;
  });
}

nla_status nla_overlap_write_csv(const nla_overlap* overlap, const char* path) {
  return Guard([&] {
    Require(overlap != nullptr && path != nullptr, "overlap and path are required");
    na::WriteFile(path, na::OverlapHistogramToCsv(overlap->value));
  });
}

void nla_overlap_free(nla_overlap* overlap) { delete overlap; }

nla_status nla_sample_validation(const nla_corpus* corpus, size_t n_premises,
                                 uint64_t seed, const char* sheet_path,
                                 size_t* rows) {
  return Guard([&] {
    Require(corpus != nullptr && sheet_path != nullptr,
            "corpus and sheet path are required");
    const auto sheet = na::SampleForValidation(corpus->value, n_premises, seed);
    na::WriteFile(sheet_path, na::SheetToCsv(sheet));
    if (rows != nullptr) *rows = sheet.size();
  });
}

nla_status nla_score_agreement(const char* sheet_path, nla_agreement** out) {
  return Guard([&] {
    Require(sheet_path != nullptr && out != nullptr, "path and out are required");
    const auto sheet = na::SheetFromCsv(na::ReadFile(sheet_path));
    *out = Wrap<nla_agreement>(na::ScoreAgreement(sheet));
  });
}

nla_status nla_agreement_values(const nla_agreement* agreement, double* overall,
                                double* per_label, size_t* sample_size) {
  return Guard([&] {
    Require(agreement != nullptr, "agreement is required");
    if (overall != nullptr) *overall = agreement->value.overall;
    if (per_label != nullptr) {
      for (size_t l = 0; l < na::kNumLabels; ++l) {
        per_label[l] = agreement->value.per_label[l];
      }
    }
    if (sample_size != nullptr) *sample_size = agreement->value.sample_size;
  });
}

nla_status nla_agreement_write_csv(const nla_agreement* agreement,
                                   const char* path) {
  return Guard([&] {
    Require(agreement != nullptr && path != nullptr,
            "agreement and path are required");
    na::WriteFile(path, na::AgreementToCsv(agreement->value));
  });
}

void nla_agreement_free(nla_agreement* agreement) { delete agreement; }

// ---- elicitation

const char* nla_prompt_template(void) {
  static const std::string kTemplate(na::PromptTemplate());
  return kTemplate.c_str();
}

nla_status nla_build_prompt(const char* premise, char** out) {
  return Guard([&] {
    Require(premise != nullptr && out != nullptr, "premise and out are required");
    *out = Dup(na::BuildPrompt(premise));
  });
}

nla_elicit_config nla_elicit_default_config(void) {
  const na::ElicitationConfig d;
  nla_elicit_config c{};
  c.endpoint = nullptr;
  c.model = nullptr;
  c.schema = nullptr;
  c.api_key = nullptr;
  c.temperature = d.temperature;
  c.top_p = d.top_p;
  c.top_k = 0;
  c.max_retries = d.max_retries;
  c.parallelism = d.parallelism;
  c.timeout_ms = static_cast<int>(d.request_timeout.count());
  c.backoff_ms = static_cast<int>(d.backoff_base.count());
  c.split = NLA_SPLIT_TRAIN;
  return c;
}

nla_status nla_elicit(const nla_corpus* premises, const nla_elicit_config* config,
                      const char* transcript_path, nla_corpus** out,
                      size_t* failed_premises) {
  return Guard([&] {
    Require(premises != nullptr && config != nullptr && out != nullptr,
            "premises, config and out are required");
    Require(config->endpoint != nullptr && config->model != nullptr,
            "endpoint and model are required");
    na::ElicitationConfig cfg;
    cfg.endpoint = config->endpoint;
    cfg.model_name = config->model;
    cfg.temperature = config->temperature;
    cfg.top_p = config->top_p;
    if (config->top_k > 0) cfg.top_k = config->top_k;
    cfg.max_retries = config->max_retries;
    cfg.parallelism = config->parallelism;
    cfg.request_timeout = std::chrono::milliseconds(config->timeout_ms);
    cfg.backoff_base = std::chrono::milliseconds(config->backoff_ms);
    cfg.split = SplitOf(config->split);
    if (config->schema != nullptr) {
      const auto schema = na::ParseWireSchema(config->schema);
      Require(schema.has_value(), "schema must be 'openai' or 'ollama'");
      cfg.schema = *schema;
    }
    cfg.Validate();
    std::optional<std::string> key;
    if (config->api_key != nullptr) {
      key = config->api_key;
    } else if (const char* env = std::getenv(na::kApiKeyEnvVar); env != nullptr) {
      key = env;
    }
    na::HttpChatTransport transport(cfg.endpoint, cfg.schema, key,
                                    cfg.request_timeout);
    const auto inputs = na::PremisesOf(premises->value);
    auto result = na::ElicitCorpus(inputs, cfg, transport);
    if (transcript_path != nullptr) {
      na::WriteTranscript(result.records, transcript_path);
    }
    if (failed_premises != nullptr) *failed_premises = result.failed_premises;
    *out = Wrap<nla_corpus>(std::move(result.corpus));
  });
}

nla_status nla_replay_transcript(const char* transcript_path, const char* source,
                                 nla_split split, nla_corpus** out) {
  return Guard([&] {
    Require(transcript_path != nullptr && out != nullptr,
            "transcript path and out are required");
    const auto records = na::LoadTranscript(transcript_path);
    std::string name;
    if (source != nullptr) {
      name = source;
    } else if (!records.empty()) {
      name = records.front().model;
    }
    *out = Wrap<nla_corpus>(na::ReplayTranscript(records, name, SplitOf(split)));
  });
}

// ---- reports

nla_status nla_report_new(const char* dataset_id, nla_report** out) {
  return Guard([&] {
    Require(dataset_id != nullptr && out != nullptr,
            "dataset id and out are required");
    auto report = std::make_unique<nla_report>();
    report->value.dataset_id = dataset_id;
    *out = report.release();
  });
}

nla_status nla_report_load(const char* path, nla_report** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "path and out are required");
    auto report = std::make_unique<nla_report>();
    report->value = na::DeserializeReport(na::ReadFile(path));
    report->assembled = true;
    *out = report.release();
  });
}


nla_status nla_report_add_corpus_stats(nla_report* report,
                                       const nla_corpus* corpus) {
  return EditReport(report, [&](na::AuditReport& r) {
    Require(corpus != nullptr, "corpus is required");
    r.corpus_stats.push_back(na::ComputeCorpusStats(corpus->value));
  });
}

nla_status nla_report_set_overlap(nla_report* report, const nla_overlap* overlap) {
  return EditReport(report, [&](na::AuditReport& r) {
    Require(overlap != nullptr, "overlap is required");
    r.overlap = overlap->value;
  });
}

nla_status nla_report_set_agreement(nla_report* report,
                                    const nla_agreement* agreement) {
  return EditReport(report, [&](na::AuditReport& r) {
    Require(agreement != nullptr, "agreement is required");
    r.agreement = agreement->value;
  });
}

nla_status nla_report_add_grid(nla_report* report, const nla_grid* grid) {
  return EditReport(report, [&](na::AuditReport& r) {
    Require(grid != nullptr, "grid is required");
    r.grids.push_back(grid->value);
  });
}

nla_status nla_report_set_sweep(nla_report* report, const nla_sweep* sweep) {
  return EditReport(report, [&](na::AuditReport& r) {
    Require(sweep != nullptr, "sweep is required");
    r.sweep = sweep->value;
  });
}

nla_status nla_report_set_giveaways(nla_report* report,
                                    const nla_giveaways* table) {
  return EditReport(report, [&](na::AuditReport& r) {
    Require(table != nullptr, "table is required");
    r.giveaways = table->value;
  });
}

nla_status nla_report_set_phrases(nla_report* report, const nla_phrases* table) {
  return EditReport(report, [&](na::AuditReport& r) {
    Require(table != nullptr, "table is required");
    r.phrases = table->value;
  });
}

nla_status nla_report_set_config(nla_report* report, const char* json_object) {
  return EditReport(report, [&](na::AuditReport& r) {
    Require(json_object != nullptr, "config json is required");
    const auto parsed = nlohmann::json::parse(json_object, nullptr, false);
    if (parsed.is_discarded()) na::Fail(na::ErrorCode::kParse, "config is not valid JSON");
    if (!parsed.is_object()) {
      na::Fail(na::ErrorCode::kInvalidArgument, "config must be a JSON object");
    }
    r.config_snapshot = parsed.dump();
  });
}

nla_status nla_report_register_corpus(nla_report* report,
                                      const nla_corpus* corpus, nla_split role) {
  return Guard([&] {
    Require(report != nullptr && corpus != nullptr, "report and corpus are required");
    report->registered.emplace_back(role, &corpus->value);
  });
}

nla_status nla_report_assemble(nla_report* report, const nla_nb_options* options) {
  return Guard([&] {
    Require(report != nullptr, "report is required");
    na::ReportCrossCheck check;
    check.nb_options = NBOptionsOf(options);
    for (const auto& [role, corpus] : report->registered) {
      auto& slot = role == NLA_SPLIT_EVAL ? check.eval_corpora : check.train_corpora;
      slot[corpus->source()] = corpus;
    }
    report->value = na::AssembleReport(report->value, &check);
    report->registered.clear();
    report->assembled = true;
  });
}

nla_status nla_report_serialize(const nla_report* report, char** out_json) {
  return Guard([&] {
    Require(report != nullptr && out_json != nullptr, "report and out are required");
    Require(report->assembled, "report must be assembled before serializing");
    *out_json = Dup(na::SerializeReport(report->value));
  });
}

nla_status nla_report_write(const nla_report* report, const char* dir,
                            char** out_path) {
  return Guard([&] {
    Require(report != nullptr && dir != nullptr, "report and dir are required");
    Require(report->assembled, "report must be assembled before writing");
    const auto path = na::WriteReport(report->value, dir);
    if (out_path != nullptr) *out_path = Dup(path.string());
  });
}

nla_status nla_report_render(const nla_report* report, const char* csv_dir,
                             char** out_text) {
  return Guard([&] {
    Require(report != nullptr, "report is required");
    Require(report->assembled, "report must be assembled before rendering");
    const auto tables = na::RenderTables(report->value);
    if (csv_dir != nullptr) na::WriteCsvBundle(tables, csv_dir);
    if (out_text != nullptr) *out_text = Dup(tables.text);
  });
}

void nla_report_free(nla_report* report) { delete report; }

}  // extern "C"
