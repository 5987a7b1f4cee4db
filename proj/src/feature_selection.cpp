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

#include "nliaudit/feature_selection.hpp"

#include <algorithm>
#include <unordered_map>

#include "nliaudit/csv.hpp"
#include "nliaudit/error.hpp"
#include "nliaudit/parallel.hpp"
#include "nliaudit/tokenizer.hpp"

namespace nliaudit {

double PresenceChi2(const PerLabel<std::size_t>& present,
                    const PerLabel<std::size_t>& label_totals) {
  std::size_t total = 0;
  std::size_t present_total = 0;
  for (std::size_t l = 0; l < kNumLabels; ++l) {
    total += label_totals[l];
    present_total += present[l];
  }
  if (total == 0) return 0.0;
  const auto n = static_cast<double>(total);
  const double rows[2] = {static_cast<double>(present_total),
                          static_cast<double>(total - present_total)};
  double chi2 = 0.0;
  for (std::size_t l = 0; l < kNumLabels; ++l) {
    const auto column = static_cast<double>(label_totals[l]);
    const double observed[2] = {
        static_cast<double>(present[l]),
        static_cast<double>(label_totals[l] - present[l])};
    for (int r = 0; r < 2; ++r) {
      const double expected = rows[r] * column / n;
      if (expected <= 0.0) continue;
      const double diff = observed[r] - expected;
      chi2 += diff * diff / expected;
    }
  }
  return chi2;
}

std::vector<FeatureScore> Chi2Rank(const Corpus& corpus) {
  if (corpus.empty()) Fail(ErrorCode::kInvalidArgument, "corpus is empty");
  if (!corpus.HasAllLabels()) {
    Fail(ErrorCode::kInvalidArgument,
         "chi-squared ranking needs all three labels in '" + corpus.source() +
             "'");
  }
  std::unordered_map<Token, PerLabel<std::size_t>> presence;
  for (const NLIExample& ex : corpus.examples()) {
    auto tokens = Tokenize(ex.hypothesis);
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    for (Token& token : tokens) {
      ++presence[std::move(token)][LabelIndex(ex.label)];
    }
  }

  std::vector<FeatureScore> ranking;
  ranking.reserve(presence.size());
  std::vector<const PerLabel<std::size_t>*> counts;
  counts.reserve(presence.size());
  for (const auto& [token, per_label] : presence) {
    ranking.push_back({token, 0.0, 0});
    counts.push_back(&per_label);
  }
  ParallelFor(ranking.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      ranking[i].chi2 = PresenceChi2(*counts[i], corpus.label_counts());
    }
  });
  std::sort(ranking.begin(), ranking.end(),
            [](const FeatureScore& a, const FeatureScore& b) {
              if (a.chi2 != b.chi2) return a.chi2 > b.chi2;
              return a.token < b.token;
            });
  for (std::size_t i = 0; i < ranking.size(); ++i) ranking[i].rank = i + 1;
  return ranking;
}

NBModel RestrictAndTrain(const Corpus& corpus,
                         std::span<const FeatureScore> ranking, std::size_t n,
                         const NBOptions& options) {
  if (n < 1 || n > ranking.size()) {
    Fail(ErrorCode::kInvalidArgument,
         "feature count " + std::to_string(n) + " outside [1, " +
             std::to_string(ranking.size()) + "]");
  }
  std::vector<Token> vocabulary;
  vocabulary.reserve(n);
  for (std::size_t i = 0; i < n; ++i) vocabulary.push_back(ranking[i].token);
  return TrainNBWithVocabulary(corpus, vocabulary, options);
}

NBModel RestrictAndTrain(const Corpus& corpus, std::size_t n,
                         const NBOptions& options) {
  const auto ranking = Chi2Rank(corpus);
  return RestrictAndTrain(corpus, ranking, n, options);
}

std::optional<double> SweepResult::Accuracy(std::size_t n) const {
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (n_values[i] == n) return accuracies[i];
  }
  return std::nullopt;
}

void SweepResult::Validate() const {
  if (n_values.size() != accuracies.size()) {
    Fail(ErrorCode::kInvariant, "sweep: n_values and accuracies differ in size");
  }
  for (double a : accuracies) {
    if (!(a >= 0.0 && a <= 1.0)) {
      Fail(ErrorCode::kInvariant, "sweep: accuracy outside [0, 1]");
    }
  }
}

std::vector<std::size_t> SweepRange(std::size_t n_max) {
  std::vector<std::size_t> values;
  for (std::size_t n = 1; n <= n_max; ++n) values.push_back(n);
  return values;
}

SweepResult FeatureSweep(const Corpus& train, const Corpus& eval,
                         const std::vector<std::size_t>& n_values,
                         const NBOptions& options) {
  if (eval.empty()) Fail(ErrorCode::kInvalidArgument, "eval corpus is empty");
  const auto ranking = Chi2Rank(train);
  SweepResult result;
  result.train_source = train.source();
  result.eval_source = eval.source();
  result.n_values = n_values;
  result.accuracies.assign(n_values.size(), 0.0);
  for (std::size_t n : n_values) {
    if (n == 0) Fail(ErrorCode::kInvalidArgument, "sweep n must be >= 1");
  }
  ParallelFor(
      n_values.size(),
      [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
          const std::size_t n = std::min(n_values[i], ranking.size());
          const NBModel model = RestrictAndTrain(train, ranking, n, options);
          result.accuracies[i] = Evaluate(model, eval);
        }
      },
      /*min_chunk=*/1);
  return result;
}

std::string RankingToCsv(std::span<const FeatureScore> ranking) {
  std::string out = CsvLine({"rank", "token", "chi2"});
  for (const FeatureScore& score : ranking) {
    out += CsvLine(
        {std::to_string(score.rank), score.token, FormatDouble(score.chi2)});
  }
  return out;
}

std::string SweepToCsv(const SweepResult& sweep) {
  std::string out = CsvLine({"n", "accuracy"});
  for (std::size_t i = 0; i < sweep.n_values.size(); ++i) {
    out += CsvLine({std::to_string(sweep.n_values[i]),
                    FormatDouble(sweep.accuracies[i])});
  }
  return out;
}

}  // namespace nliaudit
