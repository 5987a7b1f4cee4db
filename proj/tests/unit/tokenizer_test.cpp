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

#include <random>

#include "doctest.h"
#include "nliaudit/error.hpp"
#include "nliaudit/tokenizer.hpp"
#include "test_util.hpp"

namespace nliaudit {
namespace {

using V = std::vector<Token>;

std::string Join(const V& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

TEST_CASE("tokenize examples") {
  CHECK(Tokenize("Two dogs are running.") == V{"Two", "dogs", "are", "running"});
  CHECK(Tokenize("").empty());
  const V upper = Tokenize("There are people outdoors.");
  const V lower = Tokenize("there are people outdoors.");
  CHECK(upper[0] == "There");
  CHECK(lower[0] == "there");
  CHECK(upper != lower);
}

TEST_CASE("internal hyphens and apostrophes stay, edges go") {
  CHECK(Tokenize("A well-dressed man's \"hat\" -- (red)!") ==
        V{"A", "well-dressed", "man's", "hat", "red"});
  CHECK(Tokenize("'quoted' ... ?") == V{"quoted"});
  CHECK(Tokenize("“Hello,” she said…") == V{"Hello", "she", "said"});
  CHECK(Tokenize("caf\xc3\xa9 na\xc3\xafve") == V{"café", "naïve"});
  CHECK(Tokenize(" \t\n spaced \r\n out ") == V{"spaced", "out"});
}

TEST_CASE("folded mode lowercases ASCII") {
  CHECK(TokenizeFolded("Two DOGS run.") == V{"two", "dogs", "run"});
  CHECK(FoldedTokenSet("a A b") == std::set<Token>{"a", "b"});
}

TEST_CASE("tokenizer properties on random text") {
  const std::string alphabet = "abcXYZ-'.,!?\"() \t";
  const std::vector<std::string> unicode = {"“", "—", "é", "…"};
  std::mt19937 rng(42);
  for (int trial = 0; trial < 2000; ++trial) {
    std::string text;
    const int len = static_cast<int>(rng() % 30);
    for (int i = 0; i < len; ++i) {
      if (rng() % 8 == 0) {
        text += unicode[rng() % unicode.size()];
      } else {
        text += alphabet[rng() % alphabet.size()];
      }
    }
    const V tokens = Tokenize(text);
    CHECK(Tokenize(Join(tokens)) == tokens);
    CHECK(Tokenize(text) == tokens);
    for (const auto& t : tokens) {
      CHECK_FALSE(t.empty());
      CHECK(t.find_first_of(" \t\n\r") == Token::npos);
      CHECK_FALSE(StartsWithStrippable(t));
      CHECK_FALSE(EndsWithStrippable(t));
    }
  }
}

TEST_CASE("token count statistics") {
  using testing::HypothesisCorpus;
  const auto one = ComputeTokenCountStats(
      HypothesisCorpus({{"a b c", Label::kEntailment}}));
  CHECK(one.mean == 3.0);
  const auto two = ComputeTokenCountStats(HypothesisCorpus(
      {{"a b", Label::kEntailment}, {"a b c d", Label::kNeutral}}));
  CHECK(two.mean == 3.0);
  CHECK(two.max == 4);
  CHECK(two.median == 3.0);
  CHECK_THROWS_AS(ComputeTokenCountStats(Corpus("empty", {})), Error);
}

}  // namespace
}  // namespace nliaudit
