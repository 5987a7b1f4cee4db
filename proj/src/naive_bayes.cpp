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

#include "nliaudit/naive_bayes.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "nliaudit/csv.hpp"
#include "nliaudit/error.hpp"
#include "nliaudit/parallel.hpp"

namespace nliaudit {
namespace {

constexpr std::string_view kModelMagic = "nliaudit-nb";

void CheckTrainable(const Corpus& corpus, const NBOptions& options) {
  if (corpus.empty()) {
    Fail(ErrorCode::kInvalidArgument, "cannot train on an empty corpus");
  }
  if (!(options.alpha > 0.0) || !std::isfinite(options.alpha)) {
    Fail(ErrorCode::kInvalidArgument, "smoothing alpha must be positive");
  }
  for (Label label : kAllLabels) {
    if (corpus.label_counts()[LabelIndex(label)] == 0) {
      Fail(ErrorCode::kInvalidArgument,
           "training corpus '" + corpus.source() + "' has no " +
               std::string(LabelName(label)) + " examples");
    }
  }
}

}  // namespace

std::optional<std::size_t> NBModel::TokenIndex(std::string_view token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void NBModel::RebuildIndex() {
  index_.clear();
  index_.reserve(vocabulary_.size());
  for (std::size_t i = 0; i < vocabulary_.size(); ++i) {
    index_.emplace(vocabulary_[i], i);
  }
}

PerLabel<double> NBModel::Scores(std::span<const Token> tokens) const {
  PerLabel<double> scores = log_priors_;
  for (const Token& token : tokens) {
    const auto index = TokenIndex(token);
    for (std::size_t l = 0; l < kNumLabels; ++l) {
      if (index) {
        scores[l] += log_likelihoods_[l][*index];
      } else if (!options_.skip_oov) {
        scores[l] += unseen_log_likelihood_[l];
      }
    }
  }
  return scores;
}

Label NBModel::PredictTokens(std::span<const Token> tokens) const {
  const PerLabel<double> scores = Scores(tokens);
  std::size_t best = 0;
  for (std::size_t l = 1; l < kNumLabels; ++l) {
    if (scores[l] > scores[best] + kScoreTieTolerance) best = l;
  }
  return static_cast<Label>(best);
}

Label NBModel::Predict(std::string_view hypothesis) const {
  return PredictTokens(Tokenize(hypothesis));
}

bool NBModel::operator==(const NBModel& other) const {
  return options_.alpha == other.options_.alpha &&
         options_.skip_oov == other.options_.skip_oov &&
         vocabulary_ == other.vocabulary_ &&
         log_priors_ == other.log_priors_ &&
         log_likelihoods_ == other.log_likelihoods_ &&
         unseen_log_likelihood_ == other.unseen_log_likelihood_;
}

// Format, one record per line, tab separated:
//   nliaudit-nb <version>
//   alpha <a>  skip_oov <0|1>
//   prior <label> <log prior>            (x3, canonical order)
//   unseen <label> <log likelihood>      (x3)
//   vocab <size>
//   <token> <ll entailment> <ll neutral> <ll contradiction>
void NBModel::Save(const std::filesystem::path& path) const {
  std::ostringstream out;
  out << kModelMagic << '\t' << kFormatVersion << '\n';
  out << "alpha\t" << FormatDouble(options_.alpha) << "\tskip_oov\t"
      << (options_.skip_oov ? 1 : 0) << '\n';
  for (Label label : kAllLabels) {
    out << "prior\t" << LabelName(label) << '\t'
        << FormatDouble(log_priors_[LabelIndex(label)]) << '\n';
  }
  for (Label label : kAllLabels) {
    out << "unseen\t" << LabelName(label) << '\t'
        << FormatDouble(unseen_log_likelihood_[LabelIndex(label)]) << '\n';
  }
  out << "vocab\t" << vocabulary_.size() << '\n';
  for (std::size_t i = 0; i < vocabulary_.size(); ++i) {
    out << vocabulary_[i];
    for (std::size_t l = 0; l < kNumLabels; ++l) {
      out << '\t' << FormatDouble(log_likelihoods_[l][i]);
    }
    out << '\n';
  }
  WriteFile(path, out.str());
}

NBModel NBModel::Load(const std::filesystem::path& path) {
  std::istringstream in(ReadFile(path));
  auto bad = [&](const std::string& what) -> Error {
    return Error(ErrorCode::kParse, path.string() + ": " + what);
  };
  auto fields = [](const std::string& line) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
      const std::size_t tab = line.find('\t', start);
      parts.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    return parts;
  };

  std::string line;
  if (!std::getline(in, line)) throw bad("empty model file");
  auto header = fields(line);
  if (header.size() != 2 || header[0] != kModelMagic) {
    throw bad("not an nliaudit Naive Bayes model");
  }
  if (header[1] != std::to_string(kFormatVersion)) {
    throw bad("unsupported model version " + header[1]);
  }

  NBModel model;
  try {
    if (!std::getline(in, line)) throw bad("missing alpha record");
    auto opts = fields(line);
    if (opts.size() != 4 || opts[0] != "alpha" || opts[2] != "skip_oov") {
      throw bad("malformed alpha record");
    }
    model.options_.alpha = ParseDouble(opts[1]);
    model.options_.skip_oov = opts[3] == "1";

    for (const char* kind : {"prior", "unseen"}) {
      for (Label label : kAllLabels) {
        if (!std::getline(in, line)) throw bad(std::string("missing ") + kind);
        auto rec = fields(line);
        if (rec.size() != 3 || rec[0] != kind || rec[1] != LabelName(label)) {
          throw bad(std::string("malformed ") + kind + " record");
        }
        auto& target = std::string_view(kind) == "prior"
                           ? model.log_priors_
                           : model.unseen_log_likelihood_;
        target[LabelIndex(label)] = ParseDouble(rec[2]);
      }
    }

    if (!std::getline(in, line)) throw bad("missing vocab record");
    auto vocab = fields(line);
    if (vocab.size() != 2 || vocab[0] != "vocab") throw bad("malformed vocab");
    const auto size = static_cast<std::size_t>(std::stoull(vocab[1]));
    model.vocabulary_.reserve(size);
    for (auto& column : model.log_likelihoods_) column.reserve(size);
    for (std::size_t i = 0; i < size; ++i) {
      if (!std::getline(in, line)) throw bad("truncated vocabulary");
      auto rec = fields(line);
      if (rec.size() != 1 + kNumLabels || rec[0].empty()) {
        throw bad("malformed vocabulary entry " + std::to_string(i));
      }
      if (!model.vocabulary_.empty() && !(model.vocabulary_.back() < rec[0])) {
        throw bad("vocabulary is not sorted and unique");
      }
      model.vocabulary_.push_back(rec[0]);
      for (std::size_t l = 0; l < kNumLabels; ++l) {
        model.log_likelihoods_[l].push_back(ParseDouble(rec[1 + l]));
      }
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParse) throw;
    throw bad(e.what());
  } catch (const std::exception& e) {
    throw bad(e.what());
  }
  model.RebuildIndex();
  return model;
}

NBModel TrainNB(const Corpus& corpus, const NBOptions& options) {
  CheckTrainable(corpus, options);
  std::set<Token> vocabulary;
  for (const NLIExample& ex : corpus.examples()) {
    for (Token& token : Tokenize(ex.hypothesis)) {
      vocabulary.insert(std::move(token));
    }
  }
  const std::vector<Token> sorted(vocabulary.begin(), vocabulary.end());
  return TrainNBWithVocabulary(corpus, sorted, options);
}

NBModel TrainNBWithVocabulary(const Corpus& corpus,
                              std::span<const Token> vocabulary,
                              const NBOptions& options) {
  CheckTrainable(corpus, options);
  NBModel model;
  model.options_ = options;
  model.vocabulary_.assign(vocabulary.begin(), vocabulary.end());
  std::sort(model.vocabulary_.begin(), model.vocabulary_.end());
  model.vocabulary_.erase(
      std::unique(model.vocabulary_.begin(), model.vocabulary_.end()),
      model.vocabulary_.end());
  if (model.vocabulary_.empty()) {
    Fail(ErrorCode::kInvalidArgument, "vocabulary is empty");
  }
  model.RebuildIndex();

  const std::size_t vocab_size = model.vocabulary_.size();
  PerLabel<std::vector<std::uint64_t>> counts;
  for (auto& column : counts) column.assign(vocab_size, 0);
  PerLabel<std::uint64_t> totals{};
  for (const NLIExample& ex : corpus.examples()) {
    const std::size_t l = LabelIndex(ex.label);
    for (const Token& token : Tokenize(ex.hypothesis)) {
      if (auto index = model.TokenIndex(token)) {
        ++counts[l][*index];
        ++totals[l];
      }
    }
  }

  const auto n = static_cast<double>(corpus.size());
  const double alpha = options.alpha;
  for (std::size_t l = 0; l < kNumLabels; ++l) {
    model.log_priors_[l] =
        std::log(static_cast<double>(corpus.label_counts()[l]) / n);
    const double denominator =
        static_cast<double>(totals[l]) + alpha * static_cast<double>(vocab_size);
    auto& column = model.log_likelihoods_[l];
    column.resize(vocab_size);
    for (std::size_t i = 0; i < vocab_size; ++i) {
      column[i] =
          std::log((static_cast<double>(counts[l][i]) + alpha) / denominator);
    }
    model.unseen_log_likelihood_[l] = std::log(alpha / denominator);
  }
  return model;
}

double Evaluate(const NBModel& model, const Corpus& corpus) {
  if (corpus.empty()) {
    Fail(ErrorCode::kInvalidArgument, "cannot evaluate on an empty corpus");
  }
  const auto examples = corpus.examples();
  std::atomic<std::size_t> correct{0};
  ParallelFor(examples.size(), [&](std::size_t begin, std::size_t end) {
    std::size_t local = 0;
    for (std::size_t i = begin; i < end; ++i) {
      if (model.Predict(examples[i].hypothesis) == examples[i].label) ++local;
    }
    correct += local;
  });
  return static_cast<double>(correct.load()) /
         static_cast<double>(examples.size());
}

Label MajorityLabel(const Corpus& corpus) {
  const auto& counts = corpus.label_counts();
  std::size_t best = 0;
  for (std::size_t l = 1; l < kNumLabels; ++l) {
    if (counts[l] > counts[best]) best = l;
  }
  return static_cast<Label>(best);
}

double MajorityBaseline(const Corpus& train, const Corpus& eval) {
  if (train.empty() || eval.empty()) {
    Fail(ErrorCode::kInvalidArgument, "majority baseline needs non-empty corpora");
  }
  const Label majority = MajorityLabel(train);
  return static_cast<double>(eval.label_counts()[LabelIndex(majority)]) /
         static_cast<double>(eval.size());
}

std::optional<double> AccuracyGrid::Accuracy(std::string_view train,
                                             std::string_view eval) const {
  for (const GridCell& cell : cells) {
    if (cell.train == train && cell.eval == eval) return cell.accuracy;
  }
  return std::nullopt;
}

void AccuracyGrid::Validate() const {
  auto invalid = [](const std::string& what) {
    Fail(ErrorCode::kInvariant, "accuracy grid: " + what);
  };
  if (cells.size() != train_sources.size() * eval_sources.size()) {
    invalid("expected " +
            std::to_string(train_sources.size() * eval_sources.size()) +
            " cells, found " + std::to_string(cells.size()));
  }
  for (const auto* names : {&train_sources, &eval_sources}) {
    std::set<std::string> unique(names->begin(), names->end());
    if (unique.size() != names->size()) invalid("duplicate source name");
  }
  for (std::size_t t = 0; t < train_sources.size(); ++t) {
    for (std::size_t e = 0; e < eval_sources.size(); ++e) {
      const GridCell& cell = Cell(t, e);
      if (cell.train != train_sources[t] || cell.eval != eval_sources[e]) {
        invalid("cell (" + cell.train + ", " + cell.eval + ") out of place");
      }
      for (double v : {cell.accuracy, cell.baseline}) {
        if (!(v >= 0.0 && v <= 1.0)) invalid("value outside [0, 1]");
      }
    }
  }
}

AccuracyGrid EvalGrid(std::span<const Corpus* const> train_corpora,
                      std::span<const Corpus* const> eval_corpora,
                      const NBOptions& options) {
  AccuracyGrid grid;
  for (const Corpus* c : train_corpora) grid.train_sources.push_back(c->source());
  for (const Corpus* c : eval_corpora) grid.eval_sources.push_back(c->source());
  for (const Corpus* train : train_corpora) {
    const NBModel model = TrainNB(*train, options);
    for (const Corpus* eval : eval_corpora) {
      grid.cells.push_back({train->source(), eval->source(),
                            Evaluate(model, *eval),
                            MajorityBaseline(*train, *eval)});
    }
  }
  grid.Validate();
  return grid;
}

std::string GridToCsv(const AccuracyGrid& grid) {
  std::string out = CsvLine({"classifier", "train", "eval", "accuracy", "baseline"});
  for (const GridCell& cell : grid.cells) {
    out += CsvLine({grid.classifier, cell.train, cell.eval,
                    FormatDouble(cell.accuracy), FormatDouble(cell.baseline)});
  }
  return out;
}

}  // namespace nliaudit
