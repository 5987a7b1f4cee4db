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

#ifndef NLIAUDIT_GIVEAWAY_HPP_
#define NLIAUDIT_GIVEAWAY_HPP_

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "nliaudit/corpus.hpp"
#include "nliaudit/label.hpp"
#include "nliaudit/tokenizer.hpp"

namespace nliaudit {

// p(label | token present in hypothesis), counted once per hypothesis.
struct GiveawayEntry {
  Token token;
  Label label = Label::kEntailment;
  double conditional_probability = 0.0;
  std::size_t frequency = 0;  // hypotheses containing the token, all labels
  bool in_prompt = false;

  bool operator==(const GiveawayEntry&) const = default;
};

struct PhraseEntry {
  std::vector<Token> phrase;
  Label label = Label::kEntailment;
  std::size_t label_frequency = 0;  // hypotheses of |label| containing it
  std::size_t frequency = 0;        // hypotheses containing it, all labels
  double conditional_probability = 0.0;

  std::string Text() const;  // tokens joined by single spaces
  bool operator==(const PhraseEntry&) const = default;
};

using GiveawayTable = PerLabel<std::vector<GiveawayEntry>>;
using PhraseTable = PerLabel<std::vector<PhraseEntry>>;

struct GiveawayOptions {
  double threshold = 0.8;     // must lie in (1/3, 1]
  std::size_t min_freq = 10;  // 1 gives the raw, unfiltered table
  std::size_t top_k = 10;     // per label; 0 keeps every entry

  bool operator==(const GiveawayOptions&) const = default;
};

struct PhraseOptions {
  GiveawayOptions base;
  std::size_t min_n = 2;
  std::size_t max_n = 5;

  bool operator==(const PhraseOptions&) const = default;
};

// Entries with p >= threshold and frequency >= min_freq, sorted per label by
// frequency (descending) then token bytes, truncated to top_k.
GiveawayTable GiveawayWords(const Corpus& corpus,
                            const GiveawayOptions& options = {});

// The same statistic over contiguous token n-grams. Windows never cross
// hypothesis boundaries.
PhraseTable GiveawayPhrases(const Corpus& corpus,
                            const PhraseOptions& options = {});

// Contiguous n-grams of |tokens| for one window length.
std::vector<std::vector<Token>> NGrams(const std::vector<Token>& tokens,
                                       std::size_t n);

// Case-sensitive token set of a prompt template with every occurrence of
// |placeholder| removed.
std::set<Token> PromptTokens(std::string_view prompt_template,
                             std::string_view placeholder);

// Sets in_prompt on each entry whose token occurs in the template.
void FlagPromptOverlap(GiveawayTable& table, std::string_view prompt_template,
                       std::string_view placeholder);

std::string GiveawaysToCsv(const GiveawayTable& table);
std::string PhrasesToCsv(const PhraseTable& table);

}  // namespace nliaudit

#endif  // NLIAUDIT_GIVEAWAY_HPP_
