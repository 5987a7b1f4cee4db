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

#ifndef NLIAUDIT_REPORT_HPP_
#define NLIAUDIT_REPORT_HPP_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nliaudit/corpus.hpp"
#include "nliaudit/feature_selection.hpp"
#include "nliaudit/giveaway.hpp"
#include "nliaudit/naive_bayes.hpp"
#include "nliaudit/tokenizer.hpp"
#include "nliaudit/validation.hpp"

namespace nliaudit {

struct CorpusStats {
  std::string source;
  std::size_t examples = 0;
  std::size_t premises = 0;
  PerLabel<std::size_t> label_counts{};
  TokenCountStats tokens;

  bool operator==(const CorpusStats& o) const {
    return source == o.source && examples == o.examples &&
           premises == o.premises && label_counts == o.label_counts &&
           tokens.mean == o.tokens.mean && tokens.median == o.tokens.median &&
           tokens.max == o.tokens.max;
  }
};

CorpusStats ComputeCorpusStats(const Corpus& corpus);

struct GiveawaySection {
  std::string source;
  GiveawayOptions options;
  GiveawayTable table;

  bool operator==(const GiveawaySection&) const = default;
};

struct PhraseSection {
  std::string source;
  PhraseOptions options;
  PhraseTable table;

  bool operator==(const PhraseSection&) const = default;
};

struct AuditReport {
  static constexpr int kSchemaVersion = 1;

  std::string dataset_id;
  std::string tool_version;
  std::string config_snapshot = "{}";  // JSON object text
  std::vector<CorpusStats> corpus_stats;
  std::optional<OverlapReport> overlap;
  std::optional<AgreementReport> agreement;
  std::vector<AccuracyGrid> grids;  // one per classifier
  std::optional<SweepResult> sweep;
  std::optional<GiveawaySection> giveaways;
  std::optional<PhraseSection> phrases;

  const AccuracyGrid* Grid(std::string_view classifier) const;
  bool operator==(const AuditReport&) const = default;
};

// Corpora a report may be checked against, keyed by source id.
// Corpora keyed by source name, by role, so that a train and an eval corpus
// may share a name. Grid cells whose corpora are absent are not checked.
struct ReportCrossCheck {
  std::map<std::string, const Corpus*> train_corpora;
  std::map<std::string, const Corpus*> eval_corpora;
  NBOptions nb_options;
};

// Validates every present section and stamps the tool version. With
// |cross_check|, Naive Bayes grid cells whose corpora are known are
// recomputed and must match exactly. Throws kInvariant on any violation,
// kInvalidArgument when no section is present.
AuditReport AssembleReport(AuditReport draft,
                           const ReportCrossCheck* cross_check = nullptr);

std::string SerializeReport(const AuditReport& report);
AuditReport DeserializeReport(std::string_view text);

// Grid records shared with out-of-tree classifiers.
std::string SerializeGrid(const AccuracyGrid& grid);
AccuracyGrid DeserializeGrid(std::string_view text);

// Content hash of the serialized report.
std::string ReportHash(const AuditReport& report);

// Writes report-<hash>.json under |dir|. Existing reports are never
// overwritten; writing identical content again returns the existing path.
std::filesystem::path WriteReport(const AuditReport& report,
                                  const std::filesystem::path& dir);

struct RenderedTables {
  std::string text;
  std::vector<std::pair<std::string, std::string>> csv;  // file name, body
};

RenderedTables RenderTables(const AuditReport& report);
void WriteCsvBundle(const RenderedTables& tables, const std::filesystem::path& dir);

}  // namespace nliaudit

#endif  // NLIAUDIT_REPORT_HPP_
