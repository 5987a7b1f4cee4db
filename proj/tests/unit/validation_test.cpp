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

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "nliaudit/error.hpp"
#include "nliaudit/tokenizer.hpp"
#include "nliaudit/validation.hpp"
#include "test_util.hpp"

namespace nliaudit {
namespace {

using testing::MakeCorpus;

constexpr Label E = Label::kEntailment;
constexpr Label N = Label::kNeutral;
constexpr Label C = Label::kContradiction;

TEST_CASE("jaccard examples") {
  CHECK(Jaccard("Two dogs run", "Two dogs run") == 1.0);
  CHECK(Jaccard("red blue", "green yellow") == 0.0);
  CHECK(Jaccard("Two dogs run", "Two cats run") == 0.5);
  CHECK(Jaccard("", "") == 1.0);
  CHECK(Jaccard("", "word") == 0.0);
  CHECK(Jaccard("Two DOGS run.", "two dogs RUN") == 1.0);
  CHECK(Jaccard("a a b", "a b b") == 1.0);
}

TEST_CASE("jaccard properties on random word sets") {
  const std::vector<std::string> words = {"a", "b", "c", "d", "e", "F", "f", "g."};
  std::mt19937 rng(5);
  auto sentence = [&] {
    std::string s;
    const int len = static_cast<int>(rng() % 6);
    for (int i = 0; i < len; ++i) s += words[rng() % words.size()] + " ";
    return s;
  };
  for (int trial = 0; trial < 1000; ++trial) {
    const std::string a = sentence();
    const std::string b = sentence();
    const double j = Jaccard(a, b);
    CHECK(j == Jaccard(b, a));
    CHECK(j >= 0.0);
    CHECK(j <= 1.0);
    CHECK(Jaccard(a, a) == 1.0);
    // Containment chain a <= a+b <= a+b+c.
    const std::string ab = a + " " + b;
    const std::string abc = ab + " " + sentence();
    if (FoldedTokenSet(a) != FoldedTokenSet(abc)) {
      CHECK(Jaccard(a, ab) >= Jaccard(a, abc));
    }
  }
}

TEST_CASE("histogram buckets") {
  CHECK(HistogramBucket(0.0) == 0);
  CHECK(HistogramBucket(0.049) == 0);
  CHECK(HistogramBucket(0.05) == 1);
  CHECK(HistogramBucket(0.25) == 5);
  CHECK(HistogramBucket(0.5) == 10);
  CHECK(HistogramBucket(1.0) == 19);
}

TEST_CASE("overlap on the two-pair fixture") {
  const Corpus candidate = MakeCorpus(
      {{"P one.", "Two dogs run", E}, {"P two.", "a b", C}, {"P two.", "x", N}}, "llm");
  const Corpus reference = MakeCorpus(
      {{"P one.", "Two cats run", E}, {"P one.", "ignored", N},
       {"P two.", "a c d", C}, {"P two.", "later duplicate", C}},
      "snli");
  const OverlapReport r = ComputeOverlap(candidate, reference);
  r.Validate();
  CHECK(r.pair_count == 2);
  CHECK(r.skipped == 1);  // (P two., neutral) has no reference partner
  const double recount = (Jaccard("Two dogs run", "Two cats run") + Jaccard("a b", "a c d")) / 2;
  CHECK(recount == 0.375);
  CHECK(std::abs(r.mean_jaccard - recount) < 1e-12);
  CHECK(r.histogram[HistogramBucket(0.5)] == 1);
  CHECK(r.histogram[HistogramBucket(0.25)] == 1);
  CHECK(r.candidate == "llm");
  CHECK(r.reference == "snli");
  const std::string csv = OverlapHistogramToCsv(r);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 21);
}

TEST_CASE("overlap self comparison and errors") {
  const Corpus c = MakeCorpus({{"P.", "a b", E}, {"P.", "c", N}, {"Q.", "d e f", C}});
  const OverlapReport self = ComputeOverlap(c, c);
  CHECK(self.mean_jaccard == 1.0);
  CHECK(self.pair_count == 3);
  CHECK(self.histogram[19] == 3);
  const Corpus other = MakeCorpus({{"R.", "a b", E}});
  CHECK_THROWS_AS(ComputeOverlap(c, other), Error);
}

Corpus Triples(int premises) {
  std::vector<testing::Row> rows;
  for (int p = 0; p < premises; ++p) {
    const std::string premise = "Premise " + std::to_string(p) + ".";
    rows.emplace_back(premise, "e" + std::to_string(p), E);
    rows.emplace_back(premise, "n" + std::to_string(p), N);
    rows.emplace_back(premise, "c" + std::to_string(p), C);
  }
  rows.emplace_back("Incomplete.", "only one", E);
  return MakeCorpus(rows);
}

TEST_CASE("validation sampling") {
  const Corpus c = Triples(120);
  const AnnotationSheet sheet = SampleForValidation(c, 100, 11);
  CHECK(sheet.size() == 300);
  CHECK(SampleForValidation(c, 100, 11) == sheet);
  CHECK_FALSE(SampleForValidation(c, 100, 12) == sheet);
  std::set<std::string> premises;
  for (std::size_t i = 0; i < sheet.size(); i += 3) {
    std::set<Label> labels;
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(sheet[i + k].premise_id == sheet[i].premise_id);
      CHECK_FALSE(sheet[i + k].agree.has_value());
      labels.insert(sheet[i + k].claimed);
    }
    CHECK(labels.size() == 3);
    premises.insert(sheet[i].premise_id);
    CHECK(sheet[i].premise != "Incomplete.");
  }
  CHECK(premises.size() == 100);

  const AnnotationSheet one = SampleForValidation(c, 1, 3);
  CHECK(one.size() == 3);
  CHECK_THROWS_AS(SampleForValidation(c, 121, 1), Error);
  CHECK_THROWS_AS(SampleForValidation(c, 0, 1), Error);
}

TEST_CASE("label order is shuffled across premises") {
  const AnnotationSheet sheet = SampleForValidation(Triples(60), 60, 4);
  std::set<std::vector<Label>> orders;
  for (std::size_t i = 0; i < sheet.size(); i += 3) {
    orders.insert({sheet[i].claimed, sheet[i + 1].claimed, sheet[i + 2].claimed});
  }
  CHECK(orders.size() > 1);
}

AnnotationSheet Marked(int agree_e, int agree_n, int agree_c, int per_label) {
  AnnotationSheet sheet;
  const int agreed[] = {agree_e, agree_n, agree_c};
  for (Label l : kAllLabels) {
    for (int i = 0; i < per_label; ++i) {
      sheet.push_back({"id", "p", "h", l, i < agreed[LabelIndex(l)]});
    }
  }
  return sheet;
}

TEST_CASE("agreement scoring") {
  SUBCASE("all agreed") {
    const auto r = ScoreAgreement(Marked(10, 10, 10, 10));
    for (double v : r.per_label) CHECK(v == 100.0);
    CHECK(r.overall == 100.0);
  }
  SUBCASE("84, 99 and 100 of 100") {
    const auto r = ScoreAgreement(Marked(84, 99, 100, 100));
    r.Validate();
    CHECK(r.per_label[0] == 84.0);
    CHECK(std::abs(r.overall - 94.3) <= 0.1);
    CHECK(r.overall == doctest::Approx(283.0 / 3.0));
    CHECK(r.sample_size == 300);
    CHECK_FALSE(r.below_acceptance_cut());
  }
  SUBCASE("half the entailments") {
    const auto r = ScoreAgreement(Marked(50, 100, 100, 100));
    CHECK(r.per_label[0] == 50.0);
    CHECK(r.overall == doctest::Approx(250.0 / 3.0));
  }
  SUBCASE("below the cut is annotated") {
    CHECK(ScoreAgreement(Marked(5, 6, 7, 10)).below_acceptance_cut());
  }
  SUBCASE("incomplete sheet") {
    AnnotationSheet s = Marked(1, 1, 1, 1);
    s[1].agree.reset();
    CHECK_THROWS_AS(ScoreAgreement(s), Error);
  }
}

TEST_CASE("annotation sheet round trips through CSV") {
  AnnotationSheet sheet = SampleForValidation(Triples(5), 2, 1);
  sheet[0].premise = "A premise, with \"quotes\"\nand a newline";
  const AnnotationSheet blank = SheetFromCsv(SheetToCsv(sheet));
  CHECK(blank == sheet);

  const std::string filled =
      "premise_id,premise,hypothesis,label,agree\n"
      "a,p,h,entailment,yes\n"
      "a,p,h,neutral,N\n"
      "a,p,h,contradiction,1\n"
      "b,p,h,entailment,disagree\n";
  const AnnotationSheet s = SheetFromCsv(filled);
  REQUIRE(s.size() == 4);
  CHECK(*s[0].agree);
  CHECK_FALSE(*s[1].agree);
  CHECK(*s[2].agree);
  CHECK_FALSE(*s[3].agree);
  CHECK_THROWS_AS(SheetFromCsv("premise_id,premise,hypothesis,label,agree\na,p,h,other,1\n"),
                  Error);
  CHECK_THROWS_AS(SheetFromCsv("premise_id,premise,hypothesis,label,agree\na,p,h,neutral,maybe\n"),
                  Error);
  CHECK_THROWS_AS(SheetFromCsv("premise,hypothesis\n"), Error);
}

}  // namespace
}  // namespace nliaudit
