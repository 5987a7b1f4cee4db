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

#ifndef NLIAUDIT_CORPUS_HPP_
#define NLIAUDIT_CORPUS_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nliaudit/label.hpp"

namespace nliaudit {

enum class Split { kTrain, kEval };

std::string_view SplitName(Split split);
std::optional<Split> ParseSplit(std::string_view name);

struct NLIExample {
  std::string premise_id;
  std::string premise;
  std::string hypothesis;
  Label label = Label::kEntailment;
  std::string source;
  Split split = Split::kTrain;

  bool operator==(const NLIExample&) const = default;
};

// Trims and collapses internal whitespace runs to a single space.
std::string NormalizeWhitespace(std::string_view text);

// Stable content id of a premise: truncated SHA-256 of its normalized text.
std::string PremiseId(std::string_view premise);

NLIExample MakeExample(std::string_view premise, std::string_view hypothesis,
                       Label label, std::string_view source, Split split);

// An immutable, validated collection of examples. Construction checks that
// premises and hypotheses are non-empty and that each premise_id names a
// single premise string.
class Corpus {
 public:
  Corpus() = default;
  Corpus(std::string source, std::vector<NLIExample> examples);

  const std::string& source() const { return source_; }
  std::span<const NLIExample> examples() const { return examples_; }
  std::size_t size() const { return examples_.size(); }
  bool empty() const { return examples_.empty(); }
  const PerLabel<std::size_t>& label_counts() const { return label_counts_; }

  // Distinct premise ids in order of first appearance.
  const std::vector<std::string>& premise_ids() const { return premise_ids_; }
  std::size_t premise_count() const { return premise_ids_.size(); }

  bool HasAllLabels() const;

  bool operator==(const Corpus& other) const {
    return source_ == other.source_ && examples_ == other.examples_;
  }

 private:
  std::string source_;
  std::vector<NLIExample> examples_;
  PerLabel<std::size_t> label_counts_{};
  std::vector<std::string> premise_ids_;
};

struct LoadStats {
  std::size_t lines = 0;  // non-blank lines seen
  std::size_t kept = 0;
  std::size_t dropped_unlabeled = 0;  // gold label "-" or absent
  std::size_t dropped_empty = 0;      // blank premise or hypothesis
  std::size_t parse_failures = 0;
  std::vector<std::string> failures;  // "line N: message"
};

// Reads the public SNLI JSONL distribution (sentence1, sentence2,
// gold_label). Malformed lines are skipped and counted; loading aborts when
// more than 1% of lines fail to parse.
Corpus LoadSnliJsonl(const std::filesystem::path& path, Split split,
                     LoadStats* stats = nullptr,
                     std::string_view source = "snli");

// Reads the canonical line-delimited corpus format written by WriteCorpus.
// When |source| is unset the corpus takes the first record's source.
Corpus LoadCorpus(const std::filesystem::path& path,
                  std::optional<std::string> source = std::nullopt);

void WriteCorpus(const Corpus& corpus, const std::filesystem::path& path);

// Canonical record for one example (single line, no trailing newline).
std::string SerializeExample(const NLIExample& example);

// Keeps round-half-up(fraction * premises) premises chosen uniformly without
// replacement; selected premise groups stay whole and in original order.
Corpus SubsetByPremiseFraction(const Corpus& corpus, double fraction,
                               std::uint64_t seed);

// Round-half-up premise count used by SubsetByPremiseFraction.
std::size_t SelectedPremiseCount(std::size_t premises, double fraction);

}  // namespace nliaudit

#endif  // NLIAUDIT_CORPUS_HPP_
