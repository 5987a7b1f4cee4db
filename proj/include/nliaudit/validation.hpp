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

#ifndef NLIAUDIT_VALIDATION_HPP_
#define NLIAUDIT_VALIDATION_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nliaudit/corpus.hpp"
#include "nliaudit/label.hpp"

namespace nliaudit {

// Word-set Jaccard similarity in the folded (lowercase, punctuation
// stripped) tokenization. Two empty sets are defined to be identical.
double Jaccard(std::string_view a, std::string_view b);

inline constexpr std::size_t kHistogramBuckets = 20;  // width 0.05 on [0, 1]

// Bucket index for a similarity value; 1.0 falls in the last bucket.
std::size_t HistogramBucket(double value);

struct OverlapReport {
  std::string candidate;
  std::string reference;
  std::size_t pair_count = 0;
  std::size_t skipped = 0;  // candidate keys without a reference partner
  double mean_jaccard = 0.0;
  std::vector<std::size_t> histogram =
      std::vector<std::size_t>(kHistogramBuckets, 0);

  void Validate() const;
  bool operator==(const OverlapReport&) const = default;
};

// Pairs the first candidate and first reference hypothesis for every
// (premise_id, label) key of |candidate| and reports their word overlap.
OverlapReport ComputeOverlap(const Corpus& candidate, const Corpus& reference);

std::string OverlapHistogramToCsv(const OverlapReport& report);

struct AnnotationRow {
  std::string premise_id;
  std::string premise;
  std::string hypothesis;
  Label claimed = Label::kEntailment;
  std::optional<bool> agree;  // blank until a human fills it in

  bool operator==(const AnnotationRow&) const = default;
};

using AnnotationSheet = std::vector<AnnotationRow>;

// Samples |n_premises| premises that have a hypothesis for every label and
// emits three rows each, with the label order shuffled per premise.
AnnotationSheet SampleForValidation(const Corpus& corpus,
                                    std::size_t n_premises,
                                    std::uint64_t seed);

std::string SheetToCsv(const AnnotationSheet& sheet);
AnnotationSheet SheetFromCsv(std::string_view csv);

struct AgreementReport {
  PerLabel<double> per_label{};  // percent agreed
  PerLabel<std::size_t> per_label_count{};
  double overall = 0.0;  // percent agreed over every row
  std::size_t sample_size = 0;

  // Datasets below this overall agreement were excluded from analysis in
  // prior work; this is only an annotation.
  static constexpr double kAcceptanceCut = 80.0;
  bool below_acceptance_cut() const { return overall < kAcceptanceCut; }

  void Validate() const;
  bool operator==(const AgreementReport&) const = default;
};

// Requires every row to carry an agree/disagree mark.
AgreementReport ScoreAgreement(const AnnotationSheet& sheet);

std::string AgreementToCsv(const AgreementReport& report);

}  // namespace nliaudit

#endif  // NLIAUDIT_VALIDATION_HPP_
