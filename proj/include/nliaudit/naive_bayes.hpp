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

#ifndef NLIAUDIT_NAIVE_BAYES_HPP_
#define NLIAUDIT_NAIVE_BAYES_HPP_

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nliaudit/corpus.hpp"
#include "nliaudit/label.hpp"
#include "nliaudit/tokenizer.hpp"

namespace nliaudit {

struct NBOptions {
  double alpha = 1.0;
  // Out-of-vocabulary tokens are skipped at prediction time. When false they
  // score as an unseen token, alpha / (N_l + alpha * |V|).
  bool skip_oov = true;
};

struct TransparentStringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const {
    return std::hash<std::string_view>{}(s);
  }
};

// Scores closer than this are ties and resolve to the canonical label order.
inline constexpr double kScoreTieTolerance = 1e-9;

// Hypothesis-only multinomial Naive Bayes over case-sensitive unigram counts.
class NBModel {
 public:
  static constexpr int kFormatVersion = 1;

  NBModel() = default;

  const std::vector<Token>& vocabulary() const { return vocabulary_; }
  std::optional<std::size_t> TokenIndex(std::string_view token) const;

  const PerLabel<double>& log_priors() const { return log_priors_; }
  std::span<const double> log_likelihoods(Label label) const {
    return log_likelihoods_[LabelIndex(label)];
  }
  double unseen_log_likelihood(Label label) const {
    return unseen_log_likelihood_[LabelIndex(label)];
  }
  double alpha() const { return options_.alpha; }
  bool skip_oov() const { return options_.skip_oov; }

  PerLabel<double> Scores(std::span<const Token> tokens) const;
  Label PredictTokens(std::span<const Token> tokens) const;
  Label Predict(std::string_view hypothesis) const;

  void Save(const std::filesystem::path& path) const;
  static NBModel Load(const std::filesystem::path& path);

  // Exact equality, including every stored log value.
  bool operator==(const NBModel& other) const;

 private:
  friend NBModel TrainNBWithVocabulary(const Corpus&, std::span<const Token>,
                                       const NBOptions&);
  void RebuildIndex();

  NBOptions options_;
  std::vector<Token> vocabulary_;  // sorted, unique
  std::unordered_map<std::string, std::size_t, TransparentStringHash,
                     std::equal_to<>>
      index_;
  PerLabel<double> log_priors_{};
  PerLabel<std::vector<double>> log_likelihoods_;
  PerLabel<double> unseen_log_likelihood_{};
};

// Trains on the full training vocabulary. Requires all three labels and
// alpha > 0.
NBModel TrainNB(const Corpus& corpus, const NBOptions& options = {});

// Trains with |vocabulary| as the feature set; every other token is treated
// as out-of-vocabulary for both counting and prediction.
NBModel TrainNBWithVocabulary(const Corpus& corpus,
                              std::span<const Token> vocabulary,
                              const NBOptions& options = {});

// Fraction of examples whose predicted label equals the gold label.
double Evaluate(const NBModel& model, const Corpus& corpus);

// Most frequent label, ties to canonical order.
Label MajorityLabel(const Corpus& corpus);

// Accuracy on |eval| of always predicting |train|'s most frequent label.
double MajorityBaseline(const Corpus& train, const Corpus& eval);

struct GridCell {
  std::string train;
  std::string eval;
  double accuracy = 0.0;
  double baseline = 0.0;  // MajorityBaseline(train, eval)

  bool operator==(const GridCell&) const = default;
};

// Train-by-eval accuracy table. Cells are stored row-major: every train
// source crossed with every eval source exactly once.
struct AccuracyGrid {
  std::string classifier = "naive_bayes";
  std::vector<std::string> train_sources;
  std::vector<std::string> eval_sources;
  std::vector<GridCell> cells;

  const GridCell& Cell(std::size_t train, std::size_t eval) const {
    return cells[train * eval_sources.size() + eval];
  }
  std::optional<double> Accuracy(std::string_view train,
                                 std::string_view eval) const;

  // Throws kInvariant when the cell set is not the full cross product or a
  // value lies outside [0, 1].
  void Validate() const;

  bool operator==(const AccuracyGrid&) const = default;
};

AccuracyGrid EvalGrid(std::span<const Corpus* const> train_corpora,
                      std::span<const Corpus* const> eval_corpora,
                      const NBOptions& options = {});

std::string GridToCsv(const AccuracyGrid& grid);

}  // namespace nliaudit

#endif  // NLIAUDIT_NAIVE_BAYES_HPP_
