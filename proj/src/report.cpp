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

#include "nliaudit/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "nliaudit/csv.hpp"
#include "nliaudit/error.hpp"
#include "nliaudit/hash.hpp"
#include "nliaudit/version.hpp"

namespace nliaudit {
namespace {

using nlohmann::json;

constexpr double kCrossCheckTolerance = 1e-12;

[[noreturn]] void Invalid(const std::string& what) {
  Fail(ErrorCode::kInvariant, "report: " + what);
}

Label LabelFromJson(const json& j) {
  const auto label = ParseLabel(j.get<std::string>());
  if (!label) throw std::invalid_argument("unknown label " + j.dump());
  return *label;
}

json PerLabelCounts(const PerLabel<std::size_t>& counts) {
  json j = json::object();
  for (Label l : kAllLabels) j[std::string(LabelName(l))] = counts[LabelIndex(l)];
  return j;
}

PerLabel<std::size_t> PerLabelCountsFrom(const json& j) {
  PerLabel<std::size_t> out{};
  for (Label l : kAllLabels) out[LabelIndex(l)] = j.at(std::string(LabelName(l)));
  return out;
}

json GridJson(const AccuracyGrid& grid) {
  json cells = json::array();
  for (const GridCell& c : grid.cells) {
    cells.push_back({{"train", c.train},
                     {"eval", c.eval},
                     {"accuracy", c.accuracy},
                     {"baseline", c.baseline}});
  }
  return {{"classifier", grid.classifier},
          {"train_sources", grid.train_sources},
          {"eval_sources", grid.eval_sources},
          {"cells", cells}};
}

AccuracyGrid GridFrom(const json& j) {
  AccuracyGrid grid;
  grid.classifier = j.at("classifier").get<std::string>();
  grid.train_sources = j.at("train_sources").get<std::vector<std::string>>();
  grid.eval_sources = j.at("eval_sources").get<std::vector<std::string>>();
  for (const json& c : j.at("cells")) {
    grid.cells.push_back({c.at("train").get<std::string>(),
                          c.at("eval").get<std::string>(),
                          c.at("accuracy").get<double>(),
                          c.at("baseline").get<double>()});
  }
  return grid;
}

json OptionsJson(const GiveawayOptions& o) {
  return {{"threshold", o.threshold}, {"min_freq", o.min_freq}, {"top_k", o.top_k}};
}

GiveawayOptions OptionsFrom(const json& j) {
  return {j.at("threshold").get<double>(), j.at("min_freq").get<std::size_t>(),
          j.at("top_k").get<std::size_t>()};
}

json ToJson(const AuditReport& r) {
  json j;
  j["schema_version"] = AuditReport::kSchemaVersion;
  j["dataset_id"] = r.dataset_id;
  j["tool_version"] = r.tool_version;
  j["config_snapshot"] = json::parse(r.config_snapshot);

  json stats = json::array();
  for (const CorpusStats& s : r.corpus_stats) {
    stats.push_back({{"source", s.source},
                     {"examples", s.examples},
                     {"premises", s.premises},
                     {"label_counts", PerLabelCounts(s.label_counts)},
                     {"token_mean", s.tokens.mean},
                     {"token_median", s.tokens.median},
                     {"token_max", s.tokens.max}});
  }
  j["corpus_stats"] = stats;

  if (r.overlap) {
    const OverlapReport& o = *r.overlap;
    j["overlap"] = {{"candidate", o.candidate},     {"reference", o.reference},
                    {"pair_count", o.pair_count},   {"skipped", o.skipped},
                    {"mean_jaccard", o.mean_jaccard}, {"histogram", o.histogram}};
  } else {
    j["overlap"] = nullptr;
  }

  if (r.agreement) {
    const AgreementReport& a = *r.agreement;
    json per_label = json::object();
    for (Label l : kAllLabels) {
      per_label[std::string(LabelName(l))] = {
          {"percent", a.per_label[LabelIndex(l)]},
          {"count", a.per_label_count[LabelIndex(l)]}};
    }
    j["agreement"] = {{"per_label", per_label},
                      {"overall", a.overall},
                      {"sample_size", a.sample_size},
                      {"below_acceptance_cut", a.below_acceptance_cut()}};
  } else {
    j["agreement"] = nullptr;
  }

  json grids = json::array();
  for (const AccuracyGrid& g : r.grids) grids.push_back(GridJson(g));
  j["grids"] = grids;

  if (r.sweep) {
    j["sweep"] = {{"train", r.sweep->train_source},
                  {"eval", r.sweep->eval_source},
                  {"n_values", r.sweep->n_values},
                  {"accuracies", r.sweep->accuracies}};
  } else {
    j["sweep"] = nullptr;
  }

  if (r.giveaways) {
    json entries = json::array();
    for (const auto& list : r.giveaways->table) {
      for (const GiveawayEntry& e : list) {
        entries.push_back({{"token", e.token},
                           {"label", LabelName(e.label)},
                           {"p", e.conditional_probability},
                           {"freq", e.frequency},
                           {"in_prompt", e.in_prompt}});
      }
    }
    j["giveaways"] = {{"source", r.giveaways->source},
                      {"options", OptionsJson(r.giveaways->options)},
                      {"entries", entries}};
  } else {
    j["giveaways"] = nullptr;
  }

  if (r.phrases) {
    json entries = json::array();
    for (const auto& list : r.phrases->table) {
      for (const PhraseEntry& e : list) {
        entries.push_back({{"phrase", e.phrase},
                           {"label", LabelName(e.label)},
                           {"p", e.conditional_probability},
                           {"label_freq", e.label_frequency},
                           {"freq", e.frequency}});
      }
    }
    json options = OptionsJson(r.phrases->options.base);
    options["min_n"] = r.phrases->options.min_n;
    options["max_n"] = r.phrases->options.max_n;
    j["phrases"] = {{"source", r.phrases->source},
                    {"options", options},
                    {"entries", entries}};
  } else {
    j["phrases"] = nullptr;
  }
  return j;
}

AuditReport FromJson(const json& j) {
  if (j.at("schema_version").get<int>() != AuditReport::kSchemaVersion) {
    throw std::invalid_argument("unsupported report schema version");
  }
  AuditReport r;
  r.dataset_id = j.at("dataset_id").get<std::string>();
  r.tool_version = j.at("tool_version").get<std::string>();
  r.config_snapshot = j.at("config_snapshot").dump();

  for (const json& s : j.at("corpus_stats")) {
    CorpusStats stats;
    stats.source = s.at("source").get<std::string>();
    stats.examples = s.at("examples").get<std::size_t>();
    stats.premises = s.at("premises").get<std::size_t>();
    stats.label_counts = PerLabelCountsFrom(s.at("label_counts"));
    stats.tokens.mean = s.at("token_mean").get<double>();
    stats.tokens.median = s.at("token_median").get<double>();
    stats.tokens.max = s.at("token_max").get<std::size_t>();
    r.corpus_stats.push_back(std::move(stats));
  }

  if (const json& o = j.at("overlap"); !o.is_null()) {
    OverlapReport overlap;
    overlap.candidate = o.at("candidate").get<std::string>();
    overlap.reference = o.at("reference").get<std::string>();
    overlap.pair_count = o.at("pair_count").get<std::size_t>();
    overlap.skipped = o.at("skipped").get<std::size_t>();
    overlap.mean_jaccard = o.at("mean_jaccard").get<double>();
    overlap.histogram = o.at("histogram").get<std::vector<std::size_t>>();
    r.overlap = std::move(overlap);
  }

  if (const json& a = j.at("agreement"); !a.is_null()) {
    AgreementReport agreement;
    for (Label l : kAllLabels) {
      const json& entry = a.at("per_label").at(std::string(LabelName(l)));
      agreement.per_label[LabelIndex(l)] = entry.at("percent").get<double>();
      agreement.per_label_count[LabelIndex(l)] = entry.at("count").get<std::size_t>();
    }
    agreement.overall = a.at("overall").get<double>();
    agreement.sample_size = a.at("sample_size").get<std::size_t>();
    r.agreement = agreement;
  }

  for (const json& g : j.at("grids")) r.grids.push_back(GridFrom(g));

  if (const json& s = j.at("sweep"); !s.is_null()) {
    SweepResult sweep;
    sweep.train_source = s.at("train").get<std::string>();
    sweep.eval_source = s.at("eval").get<std::string>();
    sweep.n_values = s.at("n_values").get<std::vector<std::size_t>>();
    sweep.accuracies = s.at("accuracies").get<std::vector<double>>();
    r.sweep = std::move(sweep);
  }

  if (const json& g = j.at("giveaways"); !g.is_null()) {
    GiveawaySection section;
    section.source = g.at("source").get<std::string>();
    section.options = OptionsFrom(g.at("options"));
    for (const json& e : g.at("entries")) {
      GiveawayEntry entry{e.at("token").get<std::string>(), LabelFromJson(e.at("label")),
                          e.at("p").get<double>(), e.at("freq").get<std::size_t>(),
                          e.at("in_prompt").get<bool>()};
      section.table[LabelIndex(entry.label)].push_back(std::move(entry));
    }
    r.giveaways = std::move(section);
  }

  if (const json& p = j.at("phrases"); !p.is_null()) {
    PhraseSection section;
    section.source = p.at("source").get<std::string>();
    const json& options = p.at("options");
    section.options.base = OptionsFrom(options);
    section.options.min_n = options.at("min_n").get<std::size_t>();
    section.options.max_n = options.at("max_n").get<std::size_t>();
    for (const json& e : p.at("entries")) {
      PhraseEntry entry{e.at("phrase").get<std::vector<std::string>>(),
                        LabelFromJson(e.at("label")),
                        e.at("label_freq").get<std::size_t>(),
                        e.at("freq").get<std::size_t>(), e.at("p").get<double>()};
      section.table[LabelIndex(entry.label)].push_back(std::move(entry));
    }
    r.phrases = std::move(section);
  }
  return r;
}

// Shared checks for word and phrase lists: label placement, thresholds and
// ordering by frequency with byte-order tie-break.
template <typename Entry, typename KeyOf>
void ValidateRanked(const PerLabel<std::vector<Entry>>& table,
                    const GiveawayOptions& options, const char* what,
                    KeyOf key_of) {
  for (std::size_t l = 0; l < kNumLabels; ++l) {
    const auto& entries = table[l];
    if (options.top_k > 0 && entries.size() > options.top_k) {
      Invalid(std::string(what) + ": more than top_k entries");
    }
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const Entry& e = entries[i];
      if (LabelIndex(e.label) != l) Invalid(std::string(what) + ": entry under wrong label");
      if (e.conditional_probability + 1e-12 < options.threshold ||
          e.conditional_probability > 1.0) {
        Invalid(std::string(what) + ": probability below threshold");
      }
      if (e.frequency < options.min_freq) {
        Invalid(std::string(what) + ": frequency below min_freq");
      }
      if (i > 0) {
        const Entry& prev = entries[i - 1];
        if (prev.frequency < e.frequency ||
            (prev.frequency == e.frequency && !(key_of(prev) < key_of(e)))) {
          Invalid(std::string(what) + ": entries out of order");
        }
      }
    }
  }
}

void CrossCheckGrid(const AccuracyGrid& grid, const ReportCrossCheck& check) {
  if (grid.classifier != "naive_bayes") return;
  for (std::size_t t = 0; t < grid.train_sources.size(); ++t) {
    auto train = check.train_corpora.find(grid.train_sources[t]);
    if (train == check.train_corpora.end()) continue;
    std::optional<NBModel> model;
    for (std::size_t e = 0; e < grid.eval_sources.size(); ++e) {
      auto eval = check.eval_corpora.find(grid.eval_sources[e]);
      if (eval == check.eval_corpora.end()) continue;
      if (!model) model = TrainNB(*train->second, check.nb_options);
      const GridCell& cell = grid.Cell(t, e);
      const double accuracy = Evaluate(*model, *eval->second);
      const double baseline = MajorityBaseline(*train->second, *eval->second);
      if (std::abs(accuracy - cell.accuracy) > kCrossCheckTolerance ||
          std::abs(baseline - cell.baseline) > kCrossCheckTolerance) {
        Invalid("grid cell (" + cell.train + ", " + cell.eval + ") reports " +
                FormatDouble(cell.accuracy) + " but recomputation gives " +
                FormatDouble(accuracy));
      }
    }
  }
}

std::string RenderTable(const std::string& title, const CsvRow& header,
                        const std::vector<CsvRow>& rows) {
  std::vector<std::size_t> width(header.size(), 0);
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const CsvRow& row : rows) {
    for (std::size_t c = 0; c < row.size() && c < width.size(); ++c) {
      width[c] = std::max(width[c], row[c].size());
    }
  }
  std::ostringstream out;
  out << "== " << title << " ==\n";
  auto line = [&](const CsvRow& row) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out << "  ";
      out << row[c];
      if (c + 1 < row.size()) out << std::string(width[c] - row[c].size(), ' ');
    }
    out << '\n';
  };
  line(header);
  for (const CsvRow& row : rows) line(row);
  out << '\n';
  return out.str();
}

std::string Fixed(double value, int digits) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(digits);
  out << value;
  return out.str();
}

std::string CsvOf(const CsvRow& header, const std::vector<CsvRow>& rows) {
  std::string out = CsvLine(header);
  for (const CsvRow& row : rows) out += CsvLine(row);
  return out;
}

}  // namespace

CorpusStats ComputeCorpusStats(const Corpus& corpus) {
  CorpusStats stats;
  stats.source = corpus.source();
  stats.examples = corpus.size();
  stats.premises = corpus.premise_count();
  stats.label_counts = corpus.label_counts();
  stats.tokens = ComputeTokenCountStats(corpus);
  return stats;
}

const AccuracyGrid* AuditReport::Grid(std::string_view classifier) const {
  for (const AccuracyGrid& grid : grids) {
    if (grid.classifier == classifier) return &grid;
  }
  return nullptr;
}

AuditReport AssembleReport(AuditReport draft, const ReportCrossCheck* cross_check) {
  const bool any = !draft.corpus_stats.empty() || draft.overlap ||
                   draft.agreement || !draft.grids.empty() || draft.sweep ||
                   draft.giveaways || draft.phrases;
  if (!any) Fail(ErrorCode::kInvalidArgument, "report has no sections");
  if (draft.dataset_id.empty()) Invalid("dataset_id is required");

  const json snapshot = json::parse(draft.config_snapshot, nullptr, false);
  if (snapshot.is_discarded() || !snapshot.is_object()) {
    Invalid("config snapshot must be a JSON object");
  }
  draft.config_snapshot = snapshot.dump();

  for (const CorpusStats& s : draft.corpus_stats) {
    std::size_t sum = 0;
    for (std::size_t c : s.label_counts) sum += c;
    if (sum != s.examples) Invalid("corpus stats label counts do not sum");
    if (s.premises > s.examples) Invalid("corpus stats premise count too large");
    if (s.tokens.mean < 0.0 || s.tokens.mean > static_cast<double>(s.tokens.max)) {
      Invalid("corpus stats token mean out of range");
    }
  }
  if (draft.overlap) draft.overlap->Validate();
  if (draft.agreement) draft.agreement->Validate();
  std::vector<std::string> classifiers;
  for (const AccuracyGrid& grid : draft.grids) {
    grid.Validate();
    if (std::find(classifiers.begin(), classifiers.end(), grid.classifier) !=
        classifiers.end()) {
      Invalid("two grids for classifier " + grid.classifier);
    }
    classifiers.push_back(grid.classifier);
    if (cross_check != nullptr) CrossCheckGrid(grid, *cross_check);
  }
  if (draft.sweep) draft.sweep->Validate();
  if (draft.giveaways) {
    ValidateRanked(draft.giveaways->table, draft.giveaways->options, "giveaways",
                   [](const GiveawayEntry& e) { return e.token; });
  }
  if (draft.phrases) {
    ValidateRanked(draft.phrases->table, draft.phrases->options.base, "phrases",
                   [](const PhraseEntry& e) { return e.Text(); });
    for (const auto& list : draft.phrases->table) {
      for (const PhraseEntry& e : list) {
        if (e.label_frequency > e.frequency) {
          Invalid("phrase label frequency exceeds total occurrences");
        }
      }
    }
  }
  draft.tool_version = kToolVersion;
  return draft;
}

std::string SerializeReport(const AuditReport& report) {
  return ToJson(report).dump(2) + "\n";
}

AuditReport DeserializeReport(std::string_view text) {
  try {
    return FromJson(json::parse(text));
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    Fail(ErrorCode::kParse, std::string("report: ") + e.what());
  }
}

std::string SerializeGrid(const AccuracyGrid& grid) {
  return GridJson(grid).dump(2) + "\n";
}

AccuracyGrid DeserializeGrid(std::string_view text) {
  try {
    AccuracyGrid grid = GridFrom(json::parse(text));
    grid.Validate();
    return grid;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    Fail(ErrorCode::kParse, std::string("grid: ") + e.what());
  }
}

std::string ReportHash(const AuditReport& report) {
  return Sha256Hex(SerializeReport(report));
}

std::filesystem::path WriteReport(const AuditReport& report,
                                  const std::filesystem::path& dir) {
  const std::string body = SerializeReport(report);
  const std::filesystem::path path =
      dir / ("report-" + Sha256Hex(body).substr(0, 16) + ".json");
  std::filesystem::create_directories(dir);
  if (std::filesystem::exists(path)) {
    if (ReadFile(path) != body) {
      Fail(ErrorCode::kIo, "refusing to overwrite " + path.string());
    }
    return path;
  }
  WriteFile(path, body);
  return path;
}

RenderedTables RenderTables(const AuditReport& report) {
  RenderedTables out;
  auto emit = [&](const std::string& title, const std::string& file,
                  const CsvRow& header, const std::vector<CsvRow>& rows) {
    out.text += RenderTable(title, header, rows);
    out.csv.emplace_back(file, CsvOf(header, rows));
  };

  out.text += "dataset: " + report.dataset_id + "  (nliaudit " +
              report.tool_version + ")\n\n";

  if (!report.corpus_stats.empty()) {
    std::vector<CsvRow> rows;
    for (const CorpusStats& s : report.corpus_stats) {
      rows.push_back({s.source, std::to_string(s.examples), std::to_string(s.premises),
                      std::to_string(s.label_counts[0]), std::to_string(s.label_counts[1]),
                      std::to_string(s.label_counts[2]), Fixed(s.tokens.mean, 2),
                      Fixed(s.tokens.median, 1), std::to_string(s.tokens.max)});
    }
    emit("Corpus sizes and hypothesis token counts", "corpus_stats.csv",
         {"source", "examples", "premises", "entailment", "neutral",
          "contradiction", "token_mean", "token_median", "token_max"},
         rows);
  }

  if (report.overlap) {
    const OverlapReport& o = *report.overlap;
    emit("Word overlap with reference", "overlap_summary.csv",
         {"candidate", "reference", "pairs", "skipped", "mean_jaccard"},
         {{o.candidate, o.reference, std::to_string(o.pair_count),
           std::to_string(o.skipped), Fixed(o.mean_jaccard, 4)}});
    std::vector<CsvRow> rows;
    for (std::size_t i = 0; i < o.histogram.size(); ++i) {
      rows.push_back({Fixed(static_cast<double>(i) / kHistogramBuckets, 2),
                      Fixed(static_cast<double>(i + 1) / kHistogramBuckets, 2),
                      std::to_string(o.histogram[i])});
    }
    emit("Word overlap histogram", "overlap_histogram.csv",
         {"bucket_low", "bucket_high", "count"}, rows);
  }

  if (report.agreement) {
    const AgreementReport& a = *report.agreement;
    emit("Label agreement (percent)", "agreement.csv",
         {"overall", "entailment", "neutral", "contradiction", "sample_size",
          "below_80"},
         {{Fixed(a.overall, 1), Fixed(a.per_label[0], 1), Fixed(a.per_label[1], 1),
           Fixed(a.per_label[2], 1), std::to_string(a.sample_size),
           a.below_acceptance_cut() ? "yes" : "no"}});
  }

  for (const AccuracyGrid& grid : report.grids) {
    std::vector<CsvRow> rows;
    for (const GridCell& c : grid.cells) {
      rows.push_back({c.train, c.eval, Fixed(c.accuracy, 4), Fixed(c.baseline, 4)});
    }
    emit("Hypothesis-only accuracy (" + grid.classifier + ")",
         "accuracy_grid_" + grid.classifier + ".csv",
         {"train", "eval", "accuracy", "majority_baseline"}, rows);
  }

  if (report.sweep) {
    std::vector<CsvRow> rows;
    for (std::size_t i = 0; i < report.sweep->n_values.size(); ++i) {
      rows.push_back({std::to_string(report.sweep->n_values[i]),
                      Fixed(report.sweep->accuracies[i], 4)});
    }
    emit("Accuracy with top-n chi-squared features (" + report.sweep->train_source +
             " -> " + report.sweep->eval_source + ")",
         "feature_sweep.csv", {"n", "accuracy"}, rows);
  }

  if (report.giveaways) {
    std::vector<CsvRow> rows;
    for (const auto& list : report.giveaways->table) {
      for (const GiveawayEntry& e : list) {
        rows.push_back({std::string(LabelName(e.label)),
                        e.in_prompt ? e.token + "*" : e.token,
                        Fixed(e.conditional_probability, 2),
                        std::to_string(e.frequency)});
      }
    }
    emit("Give-away words, " + report.giveaways->source +
             " (* appears in the prompt)",
         "giveaways.csv", {"label", "word", "p(l|w)", "freq"}, rows);
  }

  if (report.phrases) {
    std::vector<CsvRow> rows;
    for (const auto& list : report.phrases->table) {
      for (const PhraseEntry& e : list) {
        rows.push_back({std::string(LabelName(e.label)), e.Text(),
                        Fixed(e.conditional_probability, 2),
                        std::to_string(e.label_frequency),
                        std::to_string(e.frequency)});
      }
    }
    emit("Give-away phrases, " + report.phrases->source, "phrases.csv",
         {"label", "phrase", "p(l|phrase)", "label_freq", "freq"}, rows);
  }
  return out;
}

void WriteCsvBundle(const RenderedTables& tables, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, body] : tables.csv) WriteFile(dir / name, body);
}

}  // namespace nliaudit
