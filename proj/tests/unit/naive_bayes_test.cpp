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

#include <cmath>
#include <fstream>
#include <numeric>

#include "doctest.h"
#include "nliaudit/error.hpp"
#include "nliaudit/naive_bayes.hpp"
#include "test_util.hpp"

namespace nliaudit {
namespace {

using testing::HypothesisCorpus;
using testing::TempDir;

constexpr Label E = Label::kEntailment;
constexpr Label N = Label::kNeutral;
constexpr Label C = Label::kContradiction;

// a,b under entailment; b,c under neutral; xyzzy,c under contradiction.
// Every label has 3 tokens and |V| = 4, so add-one denominators are 7.
Corpus HandCorpus() {
  return HypothesisCorpus({{"a b", E}, {"a", E}, {"b c", N}, {"c", N},
                           {"xyzzy c", C}, {"xyzzy", C}});
}

double LogLik(const NBModel& m, Label l, const std::string& token) {
  return m.log_likelihoods(l)[*m.TokenIndex(token)];
}

TEST_CASE("hand corpus likelihoods are add-one ratios") {
  const NBModel m = TrainNB(HandCorpus());
  CHECK(m.vocabulary() == std::vector<Token>{"a", "b", "c", "xyzzy"});
  for (Label l : kAllLabels) {
    CHECK(m.log_priors()[LabelIndex(l)] == doctest::Approx(std::log(1.0 / 3)));
  }
  const double q = 1.0 / 7;
  CHECK(LogLik(m, E, "a") == doctest::Approx(std::log(3 * q)));
  CHECK(LogLik(m, E, "b") == doctest::Approx(std::log(2 * q)));
  CHECK(LogLik(m, E, "c") == doctest::Approx(std::log(q)));
  CHECK(LogLik(m, E, "xyzzy") == doctest::Approx(std::log(q)));
  CHECK(LogLik(m, N, "b") == doctest::Approx(std::log(2 * q)));
  CHECK(LogLik(m, N, "c") == doctest::Approx(std::log(3 * q)));
  CHECK(LogLik(m, C, "xyzzy") == doctest::Approx(std::log(3 * q)));
  CHECK(LogLik(m, C, "c") == doctest::Approx(std::log(2 * q)));
  CHECK(LogLik(m, C, "xyzzy") > LogLik(m, E, "xyzzy"));
  CHECK(LogLik(m, C, "xyzzy") > LogLik(m, N, "xyzzy"));
  CHECK(m.Predict("xyzzy") == C);
  CHECK(m.Predict("a") == E);
}

TEST_CASE("model tables are normalized") {
  const NBModel m = TrainNB(HypothesisCorpus(
      {{"a b a", E}, {"b", E}, {"c d", N}, {"c", C}, {"e f g", C}}));
  double prior_sum = 0.0;
  for (double lp : m.log_priors()) prior_sum += std::exp(lp);
  CHECK(std::abs(prior_sum - 1.0) < 1e-9);
  for (Label l : kAllLabels) {
    double s = 0.0;
    for (double ll : m.log_likelihoods(l)) s += std::exp(ll);
    CHECK(std::abs(s - 1.0) < 1e-9);
  }
}

TEST_CASE("prediction tie-breaks and priors") {
  SUBCASE("only unseen tokens with uniform priors") {
    const NBModel m = TrainNB(HypothesisCorpus({{"x", E}, {"y", N}, {"z", C}}));
    CHECK(m.Predict("never seen words") == E);
  }
  SUBCASE("empty hypothesis picks the prior argmax") {
    std::vector<std::pair<std::string, Label>> rows;
    for (int i = 0; i < 5; ++i) rows.push_back({"e", E});
    for (int i = 0; i < 3; ++i) rows.push_back({"n", N});
    for (int i = 0; i < 2; ++i) rows.push_back({"c", C});
    const NBModel m = TrainNB(HypothesisCorpus(rows));
    CHECK(std::exp(m.log_priors()[0]) == doctest::Approx(0.5));
    CHECK(std::exp(m.log_priors()[1]) == doctest::Approx(0.3));
    CHECK(std::exp(m.log_priors()[2]) == doctest::Approx(0.2));
    CHECK(m.Predict("") == E);
  }
  SUBCASE("neutral beats contradiction on a tie") {
    const NBModel m = TrainNB(HypothesisCorpus({{"e", E}, {"e", E}, {"n", N}, {"c", C}}));
    // n and c are mirror images, so only the canonical order separates them.
    CHECK(m.Predict("n c") == N);
  }
}

TEST_CASE("unseen tokens can be scored instead of skipped") {
  const Corpus c = HypothesisCorpus({{"a", E}, {"a a a b", N}, {"b", C}});
  const NBModel skip = TrainNB(c);
  NBOptions opts;
  opts.skip_oov = false;
  const NBModel keep = TrainNB(c, opts);
  const Token unseen[] = {"zzz"};
  CHECK(skip.Scores(unseen) == skip.log_priors());
  const auto scores = keep.Scores(unseen);
  for (Label l : kAllLabels) {
    CHECK(scores[LabelIndex(l)] ==
          doctest::Approx(skip.log_priors()[LabelIndex(l)] + keep.unseen_log_likelihood(l)));
  }
  // Neutral has the most tokens, hence the smallest floor.
  CHECK(keep.unseen_log_likelihood(N) < keep.unseen_log_likelihood(E));
}

TEST_CASE("training errors") {
  CHECK_THROWS_AS(TrainNB(HypothesisCorpus({{"a", E}, {"b", N}})), Error);
  NBOptions bad;
  bad.alpha = 0.0;
  CHECK_THROWS_AS(TrainNB(HandCorpus(), bad), Error);
  bad.alpha = -1.0;
  CHECK_THROWS_AS(TrainNB(HandCorpus(), bad), Error);
  CHECK_THROWS_AS(Evaluate(TrainNB(HandCorpus()), Corpus("empty", {})), Error);
}

TEST_CASE("evaluate and baselines") {
  const Corpus memorize = HypothesisCorpus({{"a", E}, {"b", N}, {"c", C}});
  CHECK(Evaluate(TrainNB(memorize), memorize) == 1.0);

  const Corpus unseen = HypothesisCorpus({{"p", E}, {"q", N}, {"r", C}});
  CHECK(Evaluate(TrainNB(memorize), unseen) == doctest::Approx(1.0 / 3));

  CHECK(MajorityBaseline(HandCorpus(), unseen) == doctest::Approx(1.0 / 3));
  const Corpus all_e = HypothesisCorpus({{"p", E}, {"q", E}});
  const Corpus train_e = HypothesisCorpus({{"a", E}, {"a", E}, {"b", N}, {"c", C}});
  CHECK(MajorityLabel(train_e) == E);
  CHECK(MajorityBaseline(train_e, all_e) == 1.0);
}

TEST_CASE("scaling counts together with alpha keeps every prediction") {
  const Corpus base = HypothesisCorpus({{"a b b", E}, {"a c", N}, {"c c d", C},
                                        {"b d", C}, {"a", E}});
  std::vector<std::pair<std::string, Label>> tripled;
  for (int k = 0; k < 3; ++k) {
    for (const auto& ex : base.examples()) tripled.push_back({ex.hypothesis, ex.label});
  }
  NBOptions scaled;
  scaled.alpha = 3.0;
  const NBModel m1 = TrainNB(base);
  const NBModel m3 = TrainNB(HypothesisCorpus(tripled), scaled);
  for (const char* h : {"a", "b", "c", "d", "a b", "c d", "b b d", "a c d", ""}) {
    CHECK(m1.Predict(h) == m3.Predict(h));
  }
}

TEST_CASE("adding an example keeps the tables normalized") {
  std::vector<std::pair<std::string, Label>> rows = {{"a", E}, {"b", N}, {"c", C}};
  for (int i = 0; i < 10; ++i) {
    rows.push_back({"w" + std::to_string(i) + " a", static_cast<Label>(i % 3)});
    const NBModel m = TrainNB(HypothesisCorpus(rows));
    for (Label l : kAllLabels) {
      double s = 0.0;
      for (double ll : m.log_likelihoods(l)) s += std::exp(ll);
      CHECK(std::abs(s - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("model file round trip is exact") {
  TempDir dir;
  NBOptions opts;
  opts.alpha = 0.37;
  opts.skip_oov = false;
  const NBModel m = TrainNB(HandCorpus(), opts);
  m.Save(dir / "m.nb");
  const NBModel back = NBModel::Load(dir / "m.nb");
  CHECK(back == m);
  CHECK(back.alpha() == 0.37);
  CHECK_FALSE(back.skip_oov());
  CHECK(back.Predict("xyzzy a") == m.Predict("xyzzy a"));

  std::ofstream(dir / "bad.nb") << "not a model\n";
  CHECK_THROWS_AS(NBModel::Load(dir / "bad.nb"), Error);
}

TEST_CASE("accuracy grid") {
  const Corpus a = HypothesisCorpus({{"a", E}, {"b", N}, {"c", C}}, "A");
  const Corpus b = HypothesisCorpus({{"b", E}, {"c", N}, {"a", C}, {"a", C}}, "B");
  SUBCASE("single memorized cell") {
    const Corpus* t[] = {&a};
    const AccuracyGrid g = EvalGrid(t, t);
    REQUIRE(g.cells.size() == 1);
    CHECK(g.Cell(0, 0).accuracy == 1.0);
    CHECK(g.Accuracy("A", "A") == 1.0);
  }
  SUBCASE("two by two equals separate evaluations") {
    const Corpus* both[] = {&a, &b};
    const AccuracyGrid g = EvalGrid(both, both);
    g.Validate();
    REQUIRE(g.cells.size() == 4);
    for (std::size_t i = 0; i < 2; ++i) {
      const NBModel m = TrainNB(*both[i]);
      for (std::size_t j = 0; j < 2; ++j) {
        CHECK(g.Cell(i, j).accuracy == Evaluate(m, *both[j]));
        CHECK(g.Cell(i, j).baseline == MajorityBaseline(*both[i], *both[j]));
        CHECK(g.Cell(i, j).train == both[i]->source());
        CHECK(g.Cell(i, j).eval == both[j]->source());
      }
    }
    const std::string csv = GridToCsv(g);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
  }
  SUBCASE("validation catches a missing cell") {
    const Corpus* t[] = {&a};
    AccuracyGrid g = EvalGrid(t, t);
    g.cells.clear();
    CHECK_THROWS_AS(g.Validate(), Error);
  }
}

}  // namespace
}  // namespace nliaudit
