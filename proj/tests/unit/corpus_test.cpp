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
#include <fstream>
#include <limits>
#include <set>

#include "doctest.h"
#include "nliaudit/corpus.hpp"
#include "nliaudit/csv.hpp"
#include "nliaudit/error.hpp"
#include "test_util.hpp"

namespace nliaudit {
namespace {

using testing::FixturePath;
using testing::MakeCorpus;
using testing::TempDir;

constexpr Label E = Label::kEntailment;
constexpr Label N = Label::kNeutral;
constexpr Label C = Label::kContradiction;

Corpus NinePremises() {
  std::vector<testing::Row> rows;
  for (int p = 0; p < 9; ++p) {
    const std::string premise = "Premise number " + std::to_string(p) + ".";
    rows.emplace_back(premise, "entailed " + std::to_string(p), E);
    rows.emplace_back(premise, "neutral " + std::to_string(p), N);
    rows.emplace_back(premise, "contradicted " + std::to_string(p), C);
  }
  return MakeCorpus(rows);
}

// Independent restatement of the documented selection: draw k premise
// indices by forward partial Fisher-Yates with rejection-sampled bounds from
// std::mt19937_64(seed), whose output sequence the standard fixes.
std::set<std::size_t> ReplicaSelection(std::size_t n, std::size_t k,
                                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto below = [&](std::uint64_t bound) {
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % bound;
    for (;;) {
      const std::uint64_t x = rng();
      if (x < limit) return x % bound;
    }
  };
  std::vector<std::size_t> slots(n);
  for (std::size_t i = 0; i < n; ++i) slots[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    std::swap(slots[i], slots[i + below(n - i)]);
  }
  return {slots.begin(), slots.begin() + static_cast<std::ptrdiff_t>(k)};
}

TEST_CASE("the standard fixes mt19937_64's 10000th output") {
  std::mt19937_64 rng;
  rng.discard(9999);
  CHECK(rng() == 9981545732273789042ULL);
}

TEST_CASE("SNLI loader keeps the three gold labels") {
  LoadStats stats;
  const Corpus c = LoadSnliJsonl(FixturePath("snli_three.jsonl"), Split::kTrain, &stats);
  CHECK(c.size() == 3);
  CHECK(c.label_counts() == PerLabel<std::size_t>{1, 1, 1});
  CHECK(c.source() == "snli");
  CHECK(c.examples()[0].premise == "People stand outside a store.");
  CHECK(c.examples()[0].hypothesis == "There are people outdoors.");
  CHECK(stats.dropped_unlabeled == 0);
}

TEST_CASE("SNLI loader drops the dash label and counts it") {
  LoadStats stats;
  const Corpus c =
      LoadSnliJsonl(FixturePath("snli_mini_train.jsonl"), Split::kTrain, &stats);
  CHECK(stats.dropped_unlabeled == 1);
  CHECK(c.size() == 27);
  CHECK(c.premise_count() == 9);
}

TEST_CASE("SNLI loader reports bad lines and aborts above one percent") {
  TempDir dir;
  {
    std::ofstream out(dir / "bad.jsonl");
    out << R"({"gold_label":"neutral","sentence1":"A b.","sentence2":"C d."})" << '\n';
    out << "not json\n";
  }
  CHECK_THROWS_AS(LoadSnliJsonl(dir / "bad.jsonl", Split::kTrain), Error);

  {
    std::ofstream out(dir / "ok.jsonl");
    for (int i = 0; i < 150; ++i) {
      out << R"({"gold_label":"neutral","sentence1":"A b.","sentence2":"C d."})" << '\n';
    }
    out << "{broken\n";
  }
  LoadStats stats;
  const Corpus c = LoadSnliJsonl(dir / "ok.jsonl", Split::kTrain, &stats);
  CHECK(c.size() == 150);
  CHECK(stats.parse_failures == 1);
  REQUIRE(stats.failures.size() == 1);
  CHECK(stats.failures[0].rfind("line 151", 0) == 0);
}

TEST_CASE("unreadable file is an io error") {
  try {
    LoadSnliJsonl("/nonexistent/snli.jsonl", Split::kTrain);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIo);
  }
}

TEST_CASE("corpus invariants") {
  SUBCASE("empty hypothesis rejected") {
    CHECK_THROWS_AS(MakeCorpus({{"A premise.", "   ", E}}), Error);
  }
  SUBCASE("premise ids ignore whitespace differences") {
    CHECK(PremiseId("Two  dogs\trun. ") == PremiseId("Two dogs run."));
    CHECK(PremiseId("Two dogs run.") != PremiseId("Two cats run."));
    CHECK(PremiseId("x").size() == 16);
  }
  SUBCASE("one premise string per id") {
    NLIExample a = MakeExample("Same.", "h1", E, "s", Split::kTrain);
    NLIExample b = MakeExample("Other.", "h2", N, "s", Split::kTrain);
    b.premise_id = a.premise_id;
    CHECK_THROWS_AS(Corpus("s", {a, b}), Error);
  }
  SUBCASE("label counts equal a recount") {
    const Corpus c = MakeCorpus({{"P.", "a", E}, {"P.", "b", C}, {"Q.", "c", C}});
    PerLabel<std::size_t> recount{};
    for (const auto& ex : c.examples()) ++recount[LabelIndex(ex.label)];
    CHECK(c.label_counts() == recount);
    CHECK(c.premise_count() == 2);
    CHECK_FALSE(c.HasAllLabels());
  }
}

TEST_CASE("subset with fraction 1 is the identity") {
  const Corpus c = NinePremises();
  CHECK(SubsetByPremiseFraction(c, 1.0, 123) == c);
}

TEST_CASE("subset of nine premises at one third with seed 7") {
  const Corpus c = NinePremises();
  const Corpus s = SubsetByPremiseFraction(c, 1.0 / 3.0, 7);
  CHECK(s.premise_count() == 3);
  CHECK(s.size() == 9);
  CHECK(s.label_counts() == PerLabel<std::size_t>{3, 3, 3});

  const auto expected = ReplicaSelection(9, 3, 7);
  std::set<std::size_t> got;
  for (const auto& id : s.premise_ids()) {
    const auto& ids = c.premise_ids();
    got.insert(static_cast<std::size_t>(std::find(ids.begin(), ids.end(), id) -
                                        ids.begin()));
  }
  CHECK(got == expected);

  // Kept examples appear in their original relative order.
  std::size_t cursor = 0;
  for (const auto& ex : s.examples()) {
    while (cursor < c.size() && !(c.examples()[cursor] == ex)) ++cursor;
    CHECK(cursor < c.size());
  }
}

TEST_CASE("subset is deterministic to the byte") {
  TempDir dir;
  const Corpus c = NinePremises();
  WriteCorpus(SubsetByPremiseFraction(c, 1.0 / 3.0, 7), dir / "a.jsonl");
  WriteCorpus(SubsetByPremiseFraction(c, 1.0 / 3.0, 7), dir / "b.jsonl");
  CHECK(ReadFile(dir / "a.jsonl") == ReadFile(dir / "b.jsonl"));
  CHECK_FALSE(SubsetByPremiseFraction(c, 1.0 / 3.0, 8) ==
              SubsetByPremiseFraction(c, 1.0 / 3.0, 7));
}

TEST_CASE("subset never splits premises and rounds half up") {
  CHECK(SelectedPremiseCount(9, 0.5) == 5);
  CHECK(SelectedPremiseCount(10, 0.25) == 3);
  CHECK(SelectedPremiseCount(10, 0.24) == 2);
  CHECK(SelectedPremiseCount(3, 1.0 / 3.0) == 1);
  const Corpus c = NinePremises();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Corpus s = SubsetByPremiseFraction(c, 0.5, seed);
    CHECK(s.premise_count() == 5);
    CHECK(s.size() == 15);
  }
}

TEST_CASE("subset rejects fractions outside (0, 1]") {
  const Corpus c = NinePremises();
  CHECK_THROWS_AS(SubsetByPremiseFraction(c, 0.0, 1), Error);
  CHECK_THROWS_AS(SubsetByPremiseFraction(c, 1.5, 1), Error);
  CHECK_THROWS_AS(
      SubsetByPremiseFraction(c, std::numeric_limits<double>::quiet_NaN(), 1), Error);
}

TEST_CASE("canonical round trip") {
  TempDir dir;
  SUBCASE("three examples") {
    const Corpus c = MakeCorpus({{"P.", "a", E}, {"P.", "b", N}, {"P.", "c", C}}, "gpt-4");
    WriteCorpus(c, dir / "c.jsonl");
    CHECK(LoadCorpus(dir / "c.jsonl") == c);
  }
  SUBCASE("empty corpus") {
    const Corpus c("empty", {});
    WriteCorpus(c, dir / "e.jsonl");
    CHECK(ReadFile(dir / "e.jsonl").empty());
    const Corpus back = LoadCorpus(dir / "e.jsonl", "empty");
    CHECK(back.empty());
    CHECK(back == c);
  }
  SUBCASE("unicode is byte exact") {
    const Corpus c = MakeCorpus({{"A naïve café owner waves.", "naïve café", E}});
    WriteCorpus(c, dir / "u.jsonl");
    const Corpus back = LoadCorpus(dir / "u.jsonl");
    CHECK(back.examples()[0].premise == "A naïve café owner waves.");
    CHECK(back.examples()[0].hypothesis == "naïve café");
    WriteCorpus(back, dir / "u2.jsonl");
    CHECK(ReadFile(dir / "u.jsonl") == ReadFile(dir / "u2.jsonl"));
    CHECK(ReadFile(dir / "u.jsonl").find("naïve café") != std::string::npos);
  }
  SUBCASE("split survives") {
    const Corpus c = MakeCorpus({{"P.", "a", E}}, "dev", Split::kEval);
    WriteCorpus(c, dir / "d.jsonl");
    CHECK(LoadCorpus(dir / "d.jsonl").examples()[0].split == Split::kEval);
  }
}

TEST_CASE("canonical loader is strict") {
  TempDir dir;
  WriteFile(dir / "bad.jsonl", "{\"premise\":\"P\"}\n");
  CHECK_THROWS_AS(LoadCorpus(dir / "bad.jsonl"), Error);
}

}  // namespace
}  // namespace nliaudit
