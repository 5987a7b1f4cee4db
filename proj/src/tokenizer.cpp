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

#include "nliaudit/tokenizer.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "nliaudit/error.hpp"

namespace nliaudit {
namespace {

// Multi-byte UTF-8 sequences treated as punctuation at token boundaries.
constexpr std::array<std::string_view, 14> kUnicodePunct = {
    "“", "”", "‘", "’", "«", "»", "–",
    "—", "…", "‚", "„", "‹", "›", "′",
};

bool IsSpace(char c) {
  return std::isspace(static_cast<unsigned char>(c)) != 0;
}

// Length of the strippable sequence at the front of |text|, or 0.
std::size_t LeadingPunct(std::string_view text) {
  if (text.empty()) return 0;
  const auto c = static_cast<unsigned char>(text.front());
  if (c < 0x80) return std::ispunct(c) ? 1 : 0;
  for (std::string_view p : kUnicodePunct) {
    if (text.starts_with(p)) return p.size();
  }
  return 0;
}

std::size_t TrailingPunct(std::string_view text) {
  if (text.empty()) return 0;
  const auto c = static_cast<unsigned char>(text.back());
  if (c < 0x80) return std::ispunct(c) ? 1 : 0;
  for (std::string_view p : kUnicodePunct) {
    if (text.ends_with(p)) return p.size();
  }
  return 0;
}

std::string_view StripPunct(std::string_view piece) {
  while (std::size_t n = LeadingPunct(piece)) piece.remove_prefix(n);
  while (std::size_t n = TrailingPunct(piece)) piece.remove_suffix(n);
  return piece;
}

template <typename Emit>
void ForEachToken(std::string_view text, Emit&& emit) {
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsSpace(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !IsSpace(text[j])) ++j;
    if (j > i) {
      std::string_view piece = StripPunct(text.substr(i, j - i));
      if (!piece.empty()) emit(piece);
    }
    i = j;
  }
}

}  // namespace

std::vector<Token> Tokenize(std::string_view text) {
  std::vector<Token> tokens;
  ForEachToken(text, [&](std::string_view t) { tokens.emplace_back(t); });
  return tokens;
}

std::vector<Token> TokenizeFolded(std::string_view text) {
  std::vector<Token> tokens;
  ForEachToken(text, [&](std::string_view t) {
    Token folded(t);
    std::transform(folded.begin(), folded.end(), folded.begin(),
                   [](unsigned char c) {
                     return static_cast<char>(std::tolower(c));
                   });
    tokens.push_back(std::move(folded));
  });
  return tokens;
}

std::set<Token> FoldedTokenSet(std::string_view text) {
  auto tokens = TokenizeFolded(text);
  return {std::make_move_iterator(tokens.begin()),
          std::make_move_iterator(tokens.end())};
}

bool StartsWithStrippable(std::string_view text) {
  return LeadingPunct(text) > 0;
}

bool EndsWithStrippable(std::string_view text) {
  return TrailingPunct(text) > 0;
}

TokenCountStats ComputeTokenCountStats(const Corpus& corpus) {
  if (corpus.empty()) {
    Fail(ErrorCode::kInvalidArgument, "token statistics need a non-empty corpus");
  }
  std::vector<std::size_t> counts;
  counts.reserve(corpus.size());
  double total = 0.0;
  for (const NLIExample& ex : corpus.examples()) {
    std::size_t n = 0;
    ForEachToken(ex.hypothesis, [&](std::string_view) { ++n; });
    counts.push_back(n);
    total += static_cast<double>(n);
  }
  std::sort(counts.begin(), counts.end());
  TokenCountStats stats;
  stats.mean = total / static_cast<double>(counts.size());
  const std::size_t mid = counts.size() / 2;
  stats.median = counts.size() % 2 == 1
                     ? static_cast<double>(counts[mid])
                     : (static_cast<double>(counts[mid - 1]) +
                        static_cast<double>(counts[mid])) / 2.0;
  stats.max = counts.back();
  return stats;
}

}  // namespace nliaudit
