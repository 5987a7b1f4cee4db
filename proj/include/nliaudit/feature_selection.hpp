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

#ifndef NLIAUDIT_FEATURE_SELECTION_HPP_
#define NLIAUDIT_FEATURE_SELECTION_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nliaudit/corpus.hpp"
#include "nliaudit/naive_bayes.hpp"

namespace nliaudit {

struct FeatureScore {
  Token token;
  double chi2 = 0.0;
  std::size_t rank = 0;  // 1-based

  bool operator==(const FeatureScore&) const = default;
};

// Pearson chi-squared statistic of the 2x3 table whose rows are "hypothesis
// contains the token" and "does not", and whose columns are labels.
// |present[l]| counts hypotheses of label l containing the token;
// |label_totals[l]| counts all hypotheses of label l. Cells with zero
// expected count contribute nothing.
double PresenceChi2(const PerLabel<std::size_t>& present,
                    const PerLabel<std::size_t>& label_totals);

// Every training token ranked by PresenceChi2, descending; equal scores are
// ordered by token bytes. Requires all three labels.
std::vector<FeatureScore> Chi2Rank(const Corpus& corpus);

// Naive Bayes restricted to the top |n| tokens of |ranking|.
NBModel RestrictAndTrain(const Corpus& corpus,
                         std::span<const FeatureScore> ranking, std::size_t n,
                         const NBOptions& options = {});
NBModel RestrictAndTrain(const Corpus& corpus, std::size_t n,
                         const NBOptions& options = {});

struct SweepResult {
  std::string train_source;
  std::string eval_source;
  std::vector<std::size_t> n_values;
  std::vector<double> accuracies;  // parallel to n_values

  std::optional<double> Accuracy(std::size_t n) const;
  void Validate() const;

  bool operator==(const SweepResult&) const = default;
};

std::vector<std::size_t> SweepRange(std::size_t n_max);

// One restricted model per n, evaluated on |eval|. Values of n beyond the
// training vocabulary use the full vocabulary.
SweepResult FeatureSweep(const Corpus& train, const Corpus& eval,
                         const std::vector<std::size_t>& n_values,
                         const NBOptions& options = {});

std::string RankingToCsv(std::span<const FeatureScore> ranking);
std::string SweepToCsv(const SweepResult& sweep);

}  // namespace nliaudit

#endif  // NLIAUDIT_FEATURE_SELECTION_HPP_
