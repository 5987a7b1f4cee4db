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

#ifndef NLIAUDIT_TOKENIZER_HPP_
#define NLIAUDIT_TOKENIZER_HPP_

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "nliaudit/corpus.hpp"

namespace nliaudit {

using Token = std::string;

// Case-sensitive unigram tokenization used by every classifier and give-away
// statistic. Splits on whitespace, strips leading and trailing punctuation
// (ASCII punctuation plus common unicode quotes, dashes and ellipsis) from
// each piece, and drops pieces that were entirely punctuation. Internal
// hyphens and apostrophes survive: "dog's" and "x-ray" are single tokens.
std::vector<Token> Tokenize(std::string_view text);

// Lowercased variant of Tokenize, used only for lexical-overlap measures.
std::vector<Token> TokenizeFolded(std::string_view text);

// Distinct tokens of |text| in the folded mode.
std::set<Token> FoldedTokenSet(std::string_view text);

// True when |text| begins (or ends) with a character from the strip set.
bool StartsWithStrippable(std::string_view text);
bool EndsWithStrippable(std::string_view text);

struct TokenCountStats {
  double mean = 0.0;
  double median = 0.0;
  std::size_t max = 0;
};

// Statistics over hypothesis token counts. Throws on an empty corpus.
TokenCountStats ComputeTokenCountStats(const Corpus& corpus);

}  // namespace nliaudit

#endif  // NLIAUDIT_TOKENIZER_HPP_
