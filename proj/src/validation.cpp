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

#include "nliaudit/validation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <random>
#include <unordered_map>

#include "nliaudit/csv.hpp"
#include "nliaudit/error.hpp"
#include "nliaudit/sampling.hpp"
#include "nliaudit/tokenizer.hpp"

namespace nliaudit {
namespace {

using PairKey = std::pair<std::string, Label>;

struct PairKeyHash {
  std::size_t operator()(const PairKey& key) const {
    return std::hash<std::string>{}(key.first) * 3 + LabelIndex(key.second);
  }
};

std::optional<bool> ParseAgreement(std::string value) {
  std::transform(value.begin(), value.end(), value.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  value = NormalizeWhitespace(value);
  if (value.empty()) return std::nullopt;
  for (const char* yes : {"1", "y", "yes", "agree", "true"}) {
    if (value == yes) return true;
  }
  for (const char* no : {"0", "n", "no", "disagree", "false"}) {
    if (value == no) return false;
  }
  Fail(ErrorCode::kParse, "unrecognized agreement mark '" + value + "'");
}

}  // namespace

double Jaccard(std::string_view a, std::string_view b) {
  const auto left = FoldedTokenSet(a);
  const auto right = FoldedTokenSet(b);
  if (left.empty() && right.empty()) return 1.0;
  std::size_t shared = 0;
  for (const Token& t : left) shared += right.contains(t) ? 1 : 0;
  const std::size_t either = left.size() + right.size() - shared;
  return static_cast<double>(shared) / static_cast<double>(either);
}

std::size_t HistogramBucket(double value) {
  const double scaled = std::floor(value * kHistogramBuckets + 1e-9);
  if (scaled <= 0.0) return 0;
  return std::min(kHistogramBuckets - 1, static_cast<std::size_t>(scaled));
}

void OverlapReport::Validate() const {
  if (histogram.size() != kHistogramBuckets) {
    Fail(ErrorCode::kInvariant, "overlap: histogram must have 20 buckets");
  }
  std::size_t total = 0;
  for (std::size_t c : histogram) total += c;
  if (total != pair_count) {
    Fail(ErrorCode::kInvariant, "overlap: histogram does not sum to pair count");
  }
  if (!(mean_jaccard >= 0.0 && mean_jaccard <= 1.0)) {
    Fail(ErrorCode::kInvariant, "overlap: mean outside [0, 1]");
  }
}

OverlapReport ComputeOverlap(const Corpus& candidate, const Corpus& reference) {
  std::unordered_map<PairKey, const std::string*, PairKeyHash> reference_first;
  for (const NLIExample& ex : reference.examples()) {
    reference_first.emplace(PairKey{ex.premise_id, ex.label}, &ex.hypothesis);
  }
  OverlapReport report;
  report.candidate = candidate.source();
  report.reference = reference.source();
  std::unordered_map<PairKey, bool, PairKeyHash> seen;
  double sum = 0.0;
  for (const NLIExample& ex : candidate.examples()) {
    PairKey key{ex.premise_id, ex.label};
    if (!seen.emplace(key, true).second) continue;
    auto it = reference_first.find(key);
    if (it == reference_first.end()) {
      ++report.skipped;
      continue;
    }
    const double value = Jaccard(ex.hypothesis, *it->second);
    sum += value;
    ++report.pair_count;
    ++report.histogram[HistogramBucket(value)];
  }
  if (report.pair_count == 0) {
    Fail(ErrorCode::kInvalidArgument,
         "no (premise, label) pairs shared between '" + candidate.source() +
             "' and '" + reference.source() + "'");
  }
  report.mean_jaccard = sum / static_cast<double>(report.pair_count);
  return report;
}

std::string OverlapHistogramToCsv(const OverlapReport& report) {
  std::string out = CsvLine({"bucket_low", "bucket_high", "count"});
  for (std::size_t i = 0; i < report.histogram.size(); ++i) {
    out += CsvLine({FormatDouble(static_cast<double>(i) / kHistogramBuckets),
                    FormatDouble(static_cast<double>(i + 1) / kHistogramBuckets),
                    std::to_string(report.histogram[i])});
  }
  return out;
}

AnnotationSheet SampleForValidation(const Corpus& corpus,
                                    std::size_t n_premises,
                                    std::uint64_t seed) {
  if (n_premises == 0) {
    Fail(ErrorCode::kInvalidArgument, "n_premises must be at least 1");
  }
  // First example per (premise, label), premises in first-appearance order.
  std::unordered_map<std::string, PerLabel<const NLIExample*>> triples;
  for (const NLIExample& ex : corpus.examples()) {
    auto& slot = triples[ex.premise_id][LabelIndex(ex.label)];
    if (slot == nullptr) slot = &ex;
  }
  std::vector<const PerLabel<const NLIExample*>*> eligible;
  for (const std::string& id : corpus.premise_ids()) {
    const auto& triple = triples.at(id);
    if (std::all_of(triple.begin(), triple.end(),
                    [](const NLIExample* ex) { return ex != nullptr; })) {
      eligible.push_back(&triple);
    }
  }
  if (eligible.size() < n_premises) {
    Fail(ErrorCode::kInvalidArgument,
         "only " + std::to_string(eligible.size()) +
             " premises have all three labels; " + std::to_string(n_premises) +
             " requested");
  }

  std::mt19937_64 rng(seed);
  const auto picked = SampleWithoutReplacement(eligible.size(), n_premises, rng);
  AnnotationSheet sheet;
  sheet.reserve(picked.size() * kNumLabels);
  for (std::size_t index : picked) {
    std::vector<Label> order(kAllLabels.begin(), kAllLabels.end());
    SeededShuffle(order, rng);
    for (Label label : order) {
      const NLIExample& ex = *(*eligible[index])[LabelIndex(label)];
      sheet.push_back({ex.premise_id, ex.premise, ex.hypothesis, label, {}});
    }
  }
  return sheet;
}

std::string SheetToCsv(const AnnotationSheet& sheet) {
  std::string out =
      CsvLine({"premise_id", "premise", "hypothesis", "label", "agree"});
  for (const AnnotationRow& row : sheet) {
    out += CsvLine({row.premise_id, row.premise, row.hypothesis,
                    std::string(LabelName(row.claimed)),
                    row.agree ? (*row.agree ? "1" : "0") : ""});
  }
  return out;
}

AnnotationSheet SheetFromCsv(std::string_view csv) {
  const auto rows = ParseCsv(csv);
  if (rows.empty()) Fail(ErrorCode::kParse, "annotation sheet has no header");
  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < rows[0].size(); ++i) column[rows[0][i]] = i;
  for (const char* required :
       {"premise_id", "premise", "hypothesis", "label", "agree"}) {
    if (!column.contains(required)) {
      Fail(ErrorCode::kParse,
           std::string("annotation sheet lacks column '") + required + "'");
    }
  }
  AnnotationSheet sheet;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const CsvRow& row = rows[r];
    auto field = [&](const char* name) -> std::string {
      const std::size_t i = column.at(name);
      return i < row.size() ? row[i] : std::string();
    };
    const auto label = ParseLabel(field("label"));
    if (!label) {
      Fail(ErrorCode::kParse, "sheet row " + std::to_string(r) +
                                  ": unknown label '" + field("label") + "'");
    }
    AnnotationRow parsed{field("premise_id"), field("premise"),
                         field("hypothesis"), *label, {}};
    try {
      parsed.agree = ParseAgreement(field("agree"));
    } catch (const Error& e) {
      Fail(ErrorCode::kParse, "sheet row " + std::to_string(r) + ": " + e.what());
    }
    sheet.push_back(std::move(parsed));
  }
  return sheet;
}

void AgreementReport::Validate() const {
  double weighted = 0.0;
  std::size_t total = 0;
  for (std::size_t l = 0; l < kNumLabels; ++l) {
    if (!(per_label[l] >= 0.0 && per_label[l] <= 100.0)) {
      Fail(ErrorCode::kInvariant, "agreement: percentage outside [0, 100]");
    }
    weighted += per_label[l] * static_cast<double>(per_label_count[l]);
    total += per_label_count[l];
  }
  if (total != sample_size) {
    Fail(ErrorCode::kInvariant, "agreement: label counts do not sum to sample size");
  }
  if (total > 0 && std::abs(weighted / static_cast<double>(total) - overall) > 0.1) {
    Fail(ErrorCode::kInvariant,
         "agreement: overall is not the count-weighted mean of labels");
  }
}

AgreementReport ScoreAgreement(const AnnotationSheet& sheet) {
  if (sheet.empty()) Fail(ErrorCode::kInvalidArgument, "annotation sheet is empty");
  PerLabel<std::size_t> agreed{};
  AgreementReport report;
  for (std::size_t i = 0; i < sheet.size(); ++i) {
    if (!sheet[i].agree) {
      Fail(ErrorCode::kInvalidArgument,
           "annotation sheet incomplete: row " + std::to_string(i + 1) +
               " has no agreement mark");
    }
    const std::size_t l = LabelIndex(sheet[i].claimed);
    ++report.per_label_count[l];
    if (*sheet[i].agree) ++agreed[l];
  }
  std::size_t total_agreed = 0;
  for (std::size_t l = 0; l < kNumLabels; ++l) {
    total_agreed += agreed[l];
    report.per_label[l] =
        report.per_label_count[l] == 0
            ? 0.0
            : 100.0 * static_cast<double>(agreed[l]) /
                  static_cast<double>(report.per_label_count[l]);
  }
  report.sample_size = sheet.size();
  report.overall = 100.0 * static_cast<double>(total_agreed) /
                   static_cast<double>(sheet.size());
  return report;
}

std::string AgreementToCsv(const AgreementReport& report) {
  std::string out = CsvLine({"label", "percent", "count"});
  for (Label label : kAllLabels) {
    out += CsvLine({std::string(LabelName(label)),
                    FormatDouble(report.per_label[LabelIndex(label)]),
                    std::to_string(report.per_label_count[LabelIndex(label)])});
  }
  out += CsvLine({"overall", FormatDouble(report.overall),
                  std::to_string(report.sample_size)});
  return out;
}

}  // namespace nliaudit
