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

// Command-line front end. Links only against the C API in nliaudit.h.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nliaudit/nliaudit.h"

namespace fs = std::filesystem;

namespace {

struct ApiError : std::runtime_error {
  ApiError(nla_status s, const std::string& what)
      : std::runtime_error(what), status(s) {}
  nla_status status;
};

void Check(nla_status status) {
  if (status != NLA_OK) throw ApiError(status, nla_last_error());
}

struct Free {
  void operator()(nla_corpus* p) const { nla_corpus_free(p); }
  void operator()(nla_nb_model* p) const { nla_nb_free(p); }
  void operator()(nla_grid* p) const { nla_grid_free(p); }
  void operator()(nla_sweep* p) const { nla_sweep_free(p); }
  void operator()(nla_giveaways* p) const { nla_giveaways_free(p); }
  void operator()(nla_phrases* p) const { nla_phrases_free(p); }
  void operator()(nla_overlap* p) const { nla_overlap_free(p); }
  void operator()(nla_agreement* p) const { nla_agreement_free(p); }
  void operator()(nla_report* p) const { nla_report_free(p); }
};
template <typename T>
using Handle = std::unique_ptr<T, Free>;

template <typename T>
Handle<T> Own(T* p) {
  return Handle<T>(p);
}

std::string Take(char* s) {
  std::string out = s != nullptr ? s : "";
  nla_string_free(s);
  return out;
}

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

const nla_label kLabels[] = {NLA_ENTAILMENT, NLA_NEUTRAL, NLA_CONTRADICTION};

// ---- options shared by the subcommands

struct Options {
  std::vector<std::string> input;
  std::vector<std::string> eval;
  std::string reference;
  std::string sheet;
  std::vector<std::string> grid;
  std::string out;
  std::string format = "auto";
  std::string source;
  std::string split = "train";
  std::string dataset_id;
  uint64_t seed = 0;
  double fraction = 1.0;
  double alpha = 1.0;
  bool keep_oov = false;
  std::size_t top_n = 0;
  double threshold = 0.8;
  std::size_t min_freq = 10;
  std::size_t top_k = 10;
  std::size_t n_max = 50;
  std::size_t min_n = 2;
  std::size_t max_n = 5;
  std::size_t n_premises = 100;
  // elicitation
  std::string endpoint;
  std::string model;
  std::string schema = "openai";
  std::string replay;
  double temperature = 0.75;
  double top_p = 0.9;
  int elicit_top_k = 0;
  int max_retries = 3;
  int parallelism = 4;
  int timeout_ms = 60000;
  int backoff_ms = 500;
};

nla_split SplitOf(const std::string& s) {
  return s == "eval" ? NLA_SPLIT_EVAL : NLA_SPLIT_TRAIN;
}

bool LooksLikeSnli(const std::string& path) {
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    return line.find("\"sentence1\"") != std::string::npos;
  }
  return false;
}

// Canonical files carry their own source; SNLI files take --source or "snli".
Handle<nla_corpus> LoadInput(const Options& o, const std::string& path,
                             nla_split split) {
  const bool snli =
      o.format == "snli" || (o.format == "auto" && LooksLikeSnli(path));
  nla_corpus* c = nullptr;
  if (snli) {
    size_t dropped = 0;
    size_t failures = 0;
    const char* source = o.source.empty() ? "snli" : o.source.c_str();
    Check(nla_corpus_load_snli(path.c_str(), split, source, &c, &dropped,
                               &failures));
    if (dropped != 0 || failures != 0) {
      std::cerr << path << ": dropped " << dropped << " unlabeled, "
                << failures << " unparseable lines\n";
    }
  } else {
    Check(nla_corpus_load(path.c_str(), nullptr, &c));
  }
  return Own(c);
}

std::vector<Handle<nla_corpus>> LoadAll(const Options& o,
                                        const std::vector<std::string>& paths,
                                        nla_split split) {
  std::vector<Handle<nla_corpus>> out;
  for (const auto& p : paths) out.push_back(LoadInput(o, p, split));
  return out;
}

nla_nb_options NBOptions(const Options& o) {
  nla_nb_options nb = nla_nb_default_options();
  nb.alpha = o.alpha;
  nb.skip_oov = o.keep_oov ? 0 : 1;
  return nb;
}

nla_giveaway_options GiveawayOptions(const Options& o) {
  nla_giveaway_options g = nla_giveaway_default_options();
  g.threshold = o.threshold;
  g.min_freq = o.min_freq;
  g.top_k = o.top_k;
  return g;
}

fs::path OutDir(const Options& o) {
  if (o.out.empty()) throw ApiError(NLA_ERR_INVALID_ARGUMENT, "--out is required");
  fs::create_directories(o.out);
  return fs::path(o.out);
}

std::string Join(const fs::path& dir, const char* name) {
  return (dir / name).string();
}

// Every value the subcommand saw, flags and config file alike, as a JSON
// object. Also written next to the outputs so a run can be repeated.
// Effective value of every option that has one: given on the command line,
// read from a config file, or defaulted. Empty values count as unset so that
// a snapshot replays to the same effective options.
struct Setting {
  std::string name;
  std::vector<std::string> values;
  bool multi = false;
};

std::vector<Setting> Settings(const CLI::App& sub) {
  std::vector<Setting> out;
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_lnames().empty() ? opt->get_name()
                                                       : opt->get_lnames()[0];
    if (name == "help" || name == "config") continue;
    Setting s{name, {}, opt->get_expected_max() > 1};
    if (opt->count() > 0) {
      for (const auto& v : opt->results()) {
        if (!v.empty()) s.values.push_back(v);
      }
      if (!s.multi && s.values.size() > 1) s.values.erase(s.values.begin(), s.values.end() - 1);
    }
    if (s.values.empty() && !opt->get_default_str().empty()) {
      s.values.push_back(opt->get_default_str());
    }
    if (!s.values.empty()) out.push_back(std::move(s));
  }
  return out;
}

nlohmann::json Snapshot(const CLI::App& sub) {
  nlohmann::json j = nlohmann::json::object();
  j["command"] = sub.get_name();
  for (const Setting& s : Settings(sub)) {
    if (s.multi) {
      j[s.name] = s.values;
    } else {
      j[s.name] = s.values.front();
    }
  }
  return j;
}

std::string TomlString(const std::string& v) {
  std::string out = "\"";
  for (char c : v) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

// Replays with: nliaudit --config <dir>/<command>.config.toml <command>
void WriteSnapshot(const CLI::App& sub, const fs::path& dir) {
  std::ofstream f(dir / (sub.get_name() + ".config.toml"));
  f << "[" << sub.get_name() << "]\n";
  for (const Setting& s : Settings(sub)) {
    f << s.name << "=";
    if (s.multi) {
      f << "[";
      for (std::size_t i = 0; i < s.values.size(); ++i) {
        f << (i ? "," : "") << TomlString(s.values[i]);
      }
      f << "]\n";
    } else {
      f << TomlString(s.values.front()) << "\n";
    }
  }
}

void PrintRow(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    std::cout << (i ? "  " : "") << cells[i];
  }
  std::cout << '\n';
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

// ---- commands

void RunSubset(const Options& o, const CLI::App& sub) {
  auto corpus = LoadInput(o, o.input.at(0), SplitOf(o.split));
  nla_corpus* subset = nullptr;
  Check(nla_corpus_subset(corpus.get(), o.fraction, o.seed, &subset));
  auto owned = Own(subset);
  const fs::path dir = OutDir(o);
  Check(nla_corpus_write(owned.get(), Join(dir, "subset.jsonl").c_str()));
  WriteSnapshot(sub, dir);
  std::cout << "kept " << nla_corpus_premise_count(owned.get()) << " of "
            << nla_corpus_premise_count(corpus.get()) << " premises, "
            << nla_corpus_size(owned.get()) << " examples\n";
}

void RunStats(const Options& o, const CLI::App& sub) {
  std::ostringstream csv;
  csv << "source,examples,premises,entailment,neutral,contradiction,"
         "token_mean,token_median,token_max\n";
  std::vector<std::vector<std::string>> rows;
  for (const auto& path : o.input) {
    auto c = LoadInput(o, path, SplitOf(o.split));
    double mean = 0, median = 0;
    size_t max = 0;
    Check(nla_token_stats(c.get(), &mean, &median, &max));
    std::vector<std::string> row = {
        nla_corpus_source(c.get()),
        std::to_string(nla_corpus_size(c.get())),
        std::to_string(nla_corpus_premise_count(c.get()))};
    for (nla_label l : kLabels) {
      row.push_back(std::to_string(nla_corpus_label_count(c.get(), l)));
    }
    row.push_back(Fixed(mean, 2));
    row.push_back(Fixed(median, 1));
    row.push_back(std::to_string(max));
    csv << CsvField(row[0]);
    for (std::size_t i = 1; i < row.size(); ++i) csv << ',' << row[i];
    csv << '\n';
    rows.push_back(std::move(row));
  }
  PrintRow({"source", "examples", "premises", "E", "N", "C", "tok_mean",
            "tok_median", "tok_max"});
  for (const auto& row : rows) PrintRow(row);
  if (!o.out.empty()) {
    const fs::path dir = OutDir(o);
    std::ofstream(dir / "stats.csv") << csv.str();
    WriteSnapshot(sub, dir);
  }
}

void RunOverlap(const Options& o, const CLI::App& sub) {
  auto candidate = LoadInput(o, o.input.at(0), NLA_SPLIT_TRAIN);
  auto reference = LoadInput(o, o.reference, NLA_SPLIT_TRAIN);
  nla_overlap* raw = nullptr;
  Check(nla_compute_overlap(candidate.get(), reference.get(), &raw));
  auto overlap = Own(raw);
  size_t pairs = 0, skipped = 0;
  double mean = 0;
  Check(nla_overlap_summary(overlap.get(), &pairs, &skipped, &mean));
  const fs::path dir = OutDir(o);
  Check(nla_overlap_write_csv(overlap.get(), Join(dir, "overlap_histogram.csv").c_str()));
  WriteSnapshot(sub, dir);
  std::cout << "pairs " << pairs << ", skipped " << skipped
            << ", mean jaccard " << Fixed(mean, 4) << '\n';
}

void RunSampleValidation(const Options& o, const CLI::App& sub) {
  auto corpus = LoadInput(o, o.input.at(0), SplitOf(o.split));
  const fs::path dir = OutDir(o);
  size_t rows = 0;
  Check(nla_sample_validation(corpus.get(), o.n_premises, o.seed,
                              Join(dir, "annotation_sheet.csv").c_str(), &rows));
  WriteSnapshot(sub, dir);
  std::cout << "wrote " << rows << " rows\n";
}

void PrintAgreement(const nla_agreement* a) {
  double overall = 0;
  double per_label[3] = {0, 0, 0};
  size_t n = 0;
  Check(nla_agreement_values(a, &overall, per_label, &n));
  PrintRow({"entailment", "neutral", "contradiction", "overall", "rows"});
  PrintRow({Fixed(per_label[0], 1), Fixed(per_label[1], 1),
            Fixed(per_label[2], 1), Fixed(overall, 1), std::to_string(n)});
  if (overall < 80.0) std::cout << "below the 80% acceptance cut\n";
}

void RunScoreAgreement(const Options& o, const CLI::App& sub) {
  nla_agreement* raw = nullptr;
  Check(nla_score_agreement(o.sheet.c_str(), &raw));
  auto a = Own(raw);
  const fs::path dir = OutDir(o);
  Check(nla_agreement_write_csv(a.get(), Join(dir, "agreement.csv").c_str()));
  WriteSnapshot(sub, dir);
  PrintAgreement(a.get());
}

void RunTrainNB(const Options& o, const CLI::App& sub) {
  auto corpus = LoadInput(o, o.input.at(0), NLA_SPLIT_TRAIN);
  const nla_nb_options nb = NBOptions(o);
  nla_nb_model* raw = nullptr;
  if (o.top_n > 0) {
    Check(nla_nb_train_top_n(corpus.get(), o.top_n, &nb, &raw));
  } else {
    Check(nla_nb_train(corpus.get(), &nb, &raw));
  }
  auto model = Own(raw);
  const fs::path dir = OutDir(o);
  Check(nla_nb_save(model.get(), Join(dir, "model.nb").c_str()));
  WriteSnapshot(sub, dir);
  std::cout << "vocabulary " << nla_nb_vocabulary_size(model.get()) << '\n';
  for (const auto& path : o.eval) {
    auto eval = LoadInput(o, path, NLA_SPLIT_EVAL);
    double acc = 0, base = 0;
    Check(nla_nb_evaluate(model.get(), eval.get(), &acc));
    Check(nla_majority_baseline(corpus.get(), eval.get(), &base));
    std::cout << nla_corpus_source(eval.get()) << ": accuracy " << Fixed(acc, 4)
              << ", majority baseline " << Fixed(base, 4) << '\n';
  }
}

Handle<nla_grid> ComputeGrid(const Options& o,
                             const std::vector<Handle<nla_corpus>>& train,
                             const std::vector<Handle<nla_corpus>>& eval) {
  std::vector<const nla_corpus*> t, e;
  for (const auto& c : train) t.push_back(c.get());
  for (const auto& c : eval) e.push_back(c.get());
  const nla_nb_options nb = NBOptions(o);
  nla_grid* raw = nullptr;
  Check(nla_eval_grid(t.data(), t.size(), e.data(), e.size(), &nb, &raw));
  return Own(raw);
}

void RunEvalGrid(const Options& o, const CLI::App& sub) {
  auto train = LoadAll(o, o.input, NLA_SPLIT_TRAIN);
  auto eval = LoadAll(o, o.eval, NLA_SPLIT_EVAL);
  auto grid = ComputeGrid(o, train, eval);
  const fs::path dir = OutDir(o);
  Check(nla_grid_write_csv(grid.get(), Join(dir, "grid.csv").c_str()));
  Check(nla_grid_write_json(grid.get(), Join(dir, "grid.json").c_str()));
  WriteSnapshot(sub, dir);
  std::vector<std::string> header = {"train\\eval"};
  for (const auto& c : eval) header.push_back(nla_corpus_source(c.get()));
  PrintRow(header);
  for (std::size_t i = 0; i < train.size(); ++i) {
    std::vector<std::string> row = {nla_corpus_source(train[i].get())};
    for (std::size_t j = 0; j < eval.size(); ++j) {
      double acc = 0;
      Check(nla_grid_cell(grid.get(), i, j, &acc, nullptr));
      row.push_back(Fixed(acc, 2));
    }
    PrintRow(row);
  }
}

void RunFeatureSweep(const Options& o, const CLI::App& sub) {
  auto train = LoadInput(o, o.input.at(0), NLA_SPLIT_TRAIN);
  auto eval = LoadInput(o, o.eval.at(0), NLA_SPLIT_EVAL);
  const fs::path dir = OutDir(o);
  size_t vocab = 0;
  Check(nla_chi2_rank_write_csv(train.get(), Join(dir, "chi2_rank.csv").c_str(),
                                &vocab));
  const nla_nb_options nb = NBOptions(o);
  nla_sweep* raw = nullptr;
  Check(nla_feature_sweep(train.get(), eval.get(), o.n_max, &nb, &raw));
  auto sweep = Own(raw);
  Check(nla_sweep_write_csv(sweep.get(), Join(dir, "sweep.csv").c_str()));
  WriteSnapshot(sub, dir);
  double base = 0;
  Check(nla_majority_baseline(train.get(), eval.get(), &base));
  std::cout << "vocabulary " << vocab << ", majority baseline "
            << Fixed(base, 4) << '\n';
  for (std::size_t i = 0; i < nla_sweep_size(sweep.get()); ++i) {
    size_t n = 0;
    double acc = 0;
    Check(nla_sweep_point(sweep.get(), i, &n, &acc));
    PrintRow({std::to_string(n), Fixed(acc, 4)});
  }
}

void PrintGiveaways(const nla_giveaways* g) {
  for (nla_label l : kLabels) {
    std::cout << nla_label_name(l) << '\n';
    for (size_t i = 0; i < nla_giveaways_count(g, l); ++i) {
      const char* token = nullptr;
      double p = 0;
      size_t freq = 0;
      int in_prompt = 0;
      Check(nla_giveaways_entry(g, l, i, &token, &p, &freq, &in_prompt));
      PrintRow({"  " + std::string(token) + (in_prompt ? "*" : ""),
                Fixed(p, 2), std::to_string(freq)});
    }
  }
}

void RunGiveaways(const Options& o, const CLI::App& sub) {
  auto corpus = LoadInput(o, o.input.at(0), NLA_SPLIT_TRAIN);
  const nla_giveaway_options g = GiveawayOptions(o);
  nla_giveaways* raw = nullptr;
  Check(nla_giveaway_words(corpus.get(), &g, 1, &raw));
  auto table = Own(raw);
  const fs::path dir = OutDir(o);
  Check(nla_giveaways_write_csv(table.get(), Join(dir, "giveaways.csv").c_str()));
  WriteSnapshot(sub, dir);
  PrintGiveaways(table.get());
}

void RunPhrases(const Options& o, const CLI::App& sub) {
  auto corpus = LoadInput(o, o.input.at(0), NLA_SPLIT_TRAIN);
  const nla_giveaway_options g = GiveawayOptions(o);
  nla_phrases* raw = nullptr;
  Check(nla_giveaway_phrases(corpus.get(), &g, o.min_n, o.max_n, &raw));
  auto table = Own(raw);
  const fs::path dir = OutDir(o);
  Check(nla_phrases_write_csv(table.get(), Join(dir, "phrases.csv").c_str()));
  WriteSnapshot(sub, dir);
  for (nla_label l : kLabels) {
    std::cout << nla_label_name(l) << '\n';
    for (size_t i = 0; i < nla_phrases_count(table.get(), l); ++i) {
      const char* phrase = nullptr;
      double p = 0;
      size_t label_freq = 0, freq = 0;
      Check(nla_phrases_entry(table.get(), l, i, &phrase, &p, &label_freq, &freq));
      PrintRow({"  " + std::string(phrase), Fixed(p, 2),
                std::to_string(label_freq), std::to_string(freq)});
    }
  }
}

void RunElicit(const Options& o, const CLI::App& sub) {
  const fs::path dir = OutDir(o);
  nla_corpus* raw = nullptr;
  size_t failed = 0;
  if (!o.replay.empty()) {
    Check(nla_replay_transcript(o.replay.c_str(),
                                o.model.empty() ? nullptr : o.model.c_str(),
                                SplitOf(o.split), &raw));
  } else {
    if (o.input.empty() || o.endpoint.empty() || o.model.empty()) {
      throw ApiError(NLA_ERR_INVALID_ARGUMENT,
                     "--input, --endpoint and --model are required unless --replay is set");
    }
    auto premises = LoadInput(o, o.input.at(0), NLA_SPLIT_TRAIN);
    nla_elicit_config cfg = nla_elicit_default_config();
    cfg.endpoint = o.endpoint.c_str();
    cfg.model = o.model.c_str();
    cfg.schema = o.schema.c_str();
    cfg.temperature = o.temperature;
    cfg.top_p = o.top_p;
    cfg.top_k = o.elicit_top_k;
    cfg.max_retries = o.max_retries;
    cfg.parallelism = o.parallelism;
    cfg.timeout_ms = o.timeout_ms;
    cfg.backoff_ms = o.backoff_ms;
    cfg.split = SplitOf(o.split);
    Check(nla_elicit(premises.get(), &cfg, Join(dir, "transcript.jsonl").c_str(),
                     &raw, &failed));
  }
  auto corpus = Own(raw);
  Check(nla_corpus_write(corpus.get(), Join(dir, "corpus.jsonl").c_str()));
  WriteSnapshot(sub, dir);
  std::cout << "examples " << nla_corpus_size(corpus.get()) << ", failed premises "
            << failed << '\n';
}

void RunReport(const Options& o, const CLI::App& sub) {
  auto train = LoadAll(o, o.input, NLA_SPLIT_TRAIN);
  auto eval = LoadAll(o, o.eval, NLA_SPLIT_EVAL);
  const nla_corpus* primary = train.at(0).get();
  const std::string id =
      o.dataset_id.empty() ? nla_corpus_source(primary) : o.dataset_id;
  nla_report* raw = nullptr;
  Check(nla_report_new(id.c_str(), &raw));
  auto report = Own(raw);
  nla_report* r = report.get();

  for (const auto& c : train) Check(nla_report_add_corpus_stats(r, c.get()));
  for (const auto& c : eval) Check(nla_report_add_corpus_stats(r, c.get()));

  Handle<nla_corpus> reference;
  if (!o.reference.empty()) {
    reference = LoadInput(o, o.reference, NLA_SPLIT_TRAIN);
    Check(nla_report_add_corpus_stats(r, reference.get()));
    nla_overlap* ov = nullptr;
    Check(nla_compute_overlap(primary, reference.get(), &ov));
    auto overlap = Own(ov);
    Check(nla_report_set_overlap(r, overlap.get()));
  }
  if (!o.sheet.empty()) {
    nla_agreement* ag = nullptr;
    Check(nla_score_agreement(o.sheet.c_str(), &ag));
    auto agreement = Own(ag);
    Check(nla_report_set_agreement(r, agreement.get()));
  }
  const nla_nb_options nb = NBOptions(o);
  if (!eval.empty()) {
    auto grid = ComputeGrid(o, train, eval);
    Check(nla_report_add_grid(r, grid.get()));
    nla_sweep* sw = nullptr;
    Check(nla_feature_sweep(primary, eval[0].get(), o.n_max, &nb, &sw));
    auto sweep = Own(sw);
    Check(nla_report_set_sweep(r, sweep.get()));
  }
  for (const auto& path : o.grid) {
    nla_grid* g = nullptr;
    Check(nla_grid_load(path.c_str(), &g));
    auto grid = Own(g);
    Check(nla_report_add_grid(r, grid.get()));
  }
  const nla_giveaway_options g = GiveawayOptions(o);
  nla_giveaways* gw = nullptr;
  Check(nla_giveaway_words(primary, &g, 1, &gw));
  auto words = Own(gw);
  Check(nla_report_set_giveaways(r, words.get()));
  nla_phrases* ph = nullptr;
  Check(nla_giveaway_phrases(primary, &g, o.min_n, o.max_n, &ph));
  auto phrases = Own(ph);
  Check(nla_report_set_phrases(r, phrases.get()));

  Check(nla_report_set_config(r, Snapshot(sub).dump().c_str()));
  for (const auto& c : train) {
    Check(nla_report_register_corpus(r, c.get(), NLA_SPLIT_TRAIN));
  }
  for (const auto& c : eval) {
    Check(nla_report_register_corpus(r, c.get(), NLA_SPLIT_EVAL));
  }
  Check(nla_report_assemble(r, &nb));

  const fs::path dir = OutDir(o);
  char* path = nullptr;
  Check(nla_report_write(r, dir.string().c_str(), &path));
  const std::string report_path = Take(path);
  char* text = nullptr;
  Check(nla_report_render(r, Join(dir, "tables").c_str(), &text));
  const std::string tables = Take(text);
  std::ofstream(dir / "tables.txt") << tables;
  WriteSnapshot(sub, dir);
  std::cout << tables << "report " << report_path << '\n';
}

std::string OneLine(std::string s) {
  for (char& ch : s) {
    if (ch == '\n' || ch == '\r') ch = ' ';
  }
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Annotation-artifact auditing for NLI corpora", "nliaudit"};
  app.set_version_flag("--version", nla_version());
  app.require_subcommand(1);
  app.set_config("--config", "", "Config file with one [command] section; flags win");
  Options o;

  // Required flags are checked after parsing so a config file can supply them.
  std::map<const CLI::App*, std::vector<const CLI::Option*>> needed;
  auto need = [&](CLI::App* s, CLI::Option* opt) { needed[s].push_back(opt); };

  // Flag helpers keep names and ranges identical across subcommands.
  auto out = [&](CLI::App* s, bool required = true) {
    auto* opt = s->add_option("--out", o.out, "Output directory");
    if (required) need(s, opt);
  };
  auto input = [&](CLI::App* s, bool many = false) {
    if (many) {
      need(s, s->add_option("--input", o.input,
                            "Input corpora (canonical or SNLI JSONL)"));
    } else {
      need(s, s->add_option("--input", o.input,
                            "Input corpus (canonical or SNLI JSONL)")
                  ->expected(1));
    }
    s->add_option("--format", o.format, "Input format")
        ->check(CLI::IsMember({"auto", "canonical", "snli"}))
        ->capture_default_str();
    s->add_option("--source", o.source, "Source name for SNLI-format inputs");
  };
  auto nb = [&](CLI::App* s) {
    s->add_option("--alpha", o.alpha, "Add-alpha smoothing")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    s->add_flag("--keep-oov", o.keep_oov,
                "Score unseen tokens with the smoothed floor instead of skipping");
  };
  auto giveaway = [&](CLI::App* s) {
    s->add_option("--threshold", o.threshold, "Minimum p(label|word)")
        ->check(CLI::Range(1.0 / 3.0, 1.0))
        ->capture_default_str();
    s->add_option("--min-freq", o.min_freq, "Minimum hypothesis frequency")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    s->add_option("--top-k", o.top_k, "Entries per label, 0 for all")
        ->capture_default_str();
  };
  auto ngram = [&](CLI::App* s) {
    s->add_option("--min-n", o.min_n, "Shortest phrase")
        ->check(CLI::Range(2, 5))
        ->capture_default_str();
    s->add_option("--max-n", o.max_n, "Longest phrase")
        ->check(CLI::Range(2, 5))
        ->capture_default_str();
  };
  auto split = [&](CLI::App* s) {
    s->add_option("--split", o.split, "Split recorded on output examples")
        ->check(CLI::IsMember({"train", "eval"}))
        ->capture_default_str();
  };

  std::vector<std::pair<CLI::App*, void (*)(const Options&, const CLI::App&)>> commands;
  auto command = [&](const char* name, const char* help,
                     void (*run)(const Options&, const CLI::App&)) {
    CLI::App* s = app.add_subcommand(name, help);
    s->fallthrough();
    commands.emplace_back(s, run);
    return s;
  };

  auto* elicit = command("elicit", "Prompt a chat endpoint for hypotheses", RunElicit);
  elicit->add_option("--input", o.input, "Corpus whose premises are prompted")
      ->expected(1);
  elicit->add_option("--format", o.format, "Input format")
      ->check(CLI::IsMember({"auto", "canonical", "snli"}))
      ->capture_default_str();
  elicit->add_option("--endpoint", o.endpoint, "Chat-completion URL");
  elicit->add_option("--model", o.model, "Model name; also the output source");
  elicit->add_option("--schema", o.schema, "Wire schema")
      ->check(CLI::IsMember({"openai", "ollama"}))
      ->capture_default_str();
  elicit->add_option("--temperature", o.temperature)
      ->check(CLI::Range(0.0, 2.0))
      ->capture_default_str();
  elicit->add_option("--top-p", o.top_p)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  elicit->add_option("--top-k", o.elicit_top_k, "0 leaves the backend default")
      ->capture_default_str();
  elicit->add_option("--max-retries", o.max_retries, "Attempts per premise")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  elicit->add_option("--parallelism", o.parallelism, "Requests in flight")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  elicit->add_option("--timeout-ms", o.timeout_ms)->check(CLI::PositiveNumber)->capture_default_str();
  elicit->add_option("--backoff-ms", o.backoff_ms)->check(CLI::NonNegativeNumber)->capture_default_str();
  elicit->add_option("--replay", o.replay, "Rebuild the corpus from a transcript");
  split(elicit);
  out(elicit);

  auto* subset = command("subset", "Keep a seeded fraction of premises", RunSubset);
  input(subset);
  need(subset, subset->add_option("--fraction", o.fraction,
                                  "Fraction of premises in (0,1]")
                   ->check(CLI::Range(0.0, 1.0)));
  need(subset, subset->add_option("--seed", o.seed, "Sampling seed"));
  split(subset);
  out(subset);

  auto* stats = command("stats", "Sizes, label counts and token means", RunStats);
  input(stats, true);
  split(stats);
  out(stats, false);

  auto* overlap = command("overlap", "Jaccard overlap against a reference", RunOverlap);
  input(overlap);
  need(overlap, overlap->add_option("--reference", o.reference, "Reference corpus"));
  out(overlap);

  auto* sample = command("sample-validation", "Write a blind annotation sheet",
                         RunSampleValidation);
  input(sample);
  need(sample, sample->add_option("--seed", o.seed, "Sampling seed"));
  sample->add_option("--n-premises", o.n_premises)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  split(sample);
  out(sample);

  auto* score = command("score-agreement", "Score a completed annotation sheet",
                        RunScoreAgreement);
  need(score, score->add_option("--sheet,--input", o.sheet, "Completed sheet (CSV)"));
  out(score);

  auto* train = command("train-nb", "Train the hypothesis-only Naive Bayes model",
                        RunTrainNB);
  input(train);
  nb(train);
  train->add_option("--top-n", o.top_n, "Keep only the n best chi-squared tokens");
  train->add_option("--eval", o.eval, "Corpora to report accuracy on");
  out(train);

  auto* grid = command("eval-grid", "Train x eval accuracy grid", RunEvalGrid);
  input(grid, true);
  need(grid, grid->add_option("--eval", o.eval, "Evaluation corpora"));
  nb(grid);
  out(grid);

  auto* sweep = command("feature-sweep", "Accuracy with the top-n chi-squared tokens",
                        RunFeatureSweep);
  input(sweep);
  need(sweep, sweep->add_option("--eval", o.eval, "Evaluation corpus")->expected(1));
  sweep->add_option("--n-max", o.n_max, "Largest n")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  nb(sweep);
  out(sweep);

  auto* words = command("giveaways", "Label give-away words", RunGiveaways);
  input(words);
  giveaway(words);
  out(words);

  auto* phrases = command("phrases", "Label give-away phrases", RunPhrases);
  input(phrases);
  giveaway(phrases);
  ngram(phrases);
  out(phrases);

  auto* report = command("report", "Assemble and render an audit report", RunReport);
  input(report, true);
  report->add_option("--eval", o.eval, "Evaluation corpora (grid, sweep)");
  report->add_option("--reference", o.reference, "Reference corpus (overlap)");
  report->add_option("--sheet", o.sheet, "Completed annotation sheet");
  report->add_option("--grid", o.grid, "Extra grid files in the shared schema");
  report->add_option("--dataset-id", o.dataset_id, "Defaults to the first input's source");
  report->add_option("--n-max", o.n_max, "Largest sweep n")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  nb(report);
  giveaway(report);
  ngram(report);
  out(report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: usage: " << OneLine(e.what()) << '\n';
    return 2;
  }

  for (const auto& [sub, run] : commands) {
    if (!sub->parsed()) continue;
    for (const CLI::Option* opt : needed[sub]) {
      if (opt->count() == 0) {
        std::cerr << "error: usage: " << sub->get_name() << ": "
                  << opt->get_name() << " is required\n";
        return 2;
      }
    }
  }

  try {
    if (o.min_n > o.max_n) {
      throw ApiError(NLA_ERR_INVALID_ARGUMENT, "--min-n exceeds --max-n");
    }
    for (auto& [sub, run] : commands) {
      if (sub->parsed()) run(o, *sub);
    }
  } catch (const ApiError& e) {
    std::cerr << "error: " << nla_status_name(e.status) << ": " << OneLine(e.what())
              << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << OneLine(e.what()) << '\n';
    return 1;
  }
  return 0;
}
