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

#include "nliaudit/giveaway.hpp"

#include <algorithm>
#include <mutex>
#include <unordered_map>

#include "nliaudit/csv.hpp"
#include "nliaudit/error.hpp"
#include "nliaudit/parallel.hpp"

namespace nliaudit {
namespace {

constexpr double kProbabilityEpsilon = 1e-12;

using PresenceCounts = std::unordered_map<std::string, PerLabel<std::size_t>>;

void CheckOptions(const Corpus& corpus, const GiveawayOptions& options) {
  if (corpus.empty()) Fail(ErrorCode::kInvalidArgument, "corpus is empty");
  if (!(options.threshold > 1.0 / 3.0 && options.threshold <= 1.0)) {
    Fail(ErrorCode::kInvalidArgument,
         "give-away threshold must lie in (1/3, 1], got " +
             FormatDouble(options.threshold));
  }
  if (options.min_freq < 1) {
    Fail(ErrorCode::kInvalidArgument, "min_freq must be at least 1");
  }
}

// Counts, per key, how many hypotheses of each label contain it. |keys_of|
// returns the (possibly repeated) keys of one hypothesis.
template <typename KeysOf>
PresenceCounts CountPresence(const Corpus& corpus, KeysOf keys_of) {
  PresenceCounts merged;
  std::mutex merge_mutex;
  const auto examples = corpus.examples();
  ParallelFor(examples.size(), [&](std::size_t begin, std::size_t end) {
    PresenceCounts local;
    for (std::size_t i = begin; i < end; ++i) {
      std::vector<std::string> keys = keys_of(examples[i].hypothesis);
      std::sort(keys.begin(), keys.end());
      keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
      for (std::string& key : keys) {
        ++local[std::move(key)][LabelIndex(examples[i].label)];
      }
    }
    std::lock_guard lock(merge_mutex);
    if (merged.empty()) {
      merged = std::move(local);
      return;
    }
    for (auto& [key, counts] : local) {
      auto& target = merged[key];
      for (std::size_t l = 0; l < kNumLabels; ++l) target[l] += counts[l];
    }
  });
  return merged;
}

struct Qualified {
  const std::string* key;
  Label label;
  std::size_t label_frequency;
  std::size_t frequency;
  double probability;
};

PerLabel<std::vector<Qualified>> Select(const PresenceCounts& counts,
                                        const GiveawayOptions& options) {
  PerLabel<std::vector<Qualified>> selected;
  for (const auto& [key, per_label] : counts) {
    std::size_t frequency = 0;
    for (std::size_t c : per_label) frequency += c;
    if (frequency < options.min_freq) continue;
    for (Label label : kAllLabels) {
      const std::size_t hits = per_label[LabelIndex(label)];
      const double p =
          static_cast<double>(hits) / static_cast<double>(frequency);
      if (hits > 0 && p + kProbabilityEpsilon >= options.threshold) {
        selected[LabelIndex(label)].push_back(
            {&key, label, hits, frequency, p});
      }
    }
  }
  for (auto& entries : selected) {
    std::sort(entries.begin(), entries.end(),
              [](const Qualified& a, const Qualified& b) {
                if (a.frequency != b.frequency) return a.frequency > b.frequency;
                return *a.key < *b.key;
              });
    if (options.top_k > 0 && entries.size() > options.top_k) {
      entries.resize(options.top_k);
    }
  }
  return selected;
}

std::vector<Token> SplitPhrase(const std::string& key) {
  std::vector<Token> tokens;
  std::size_t start = 0;
  while (true) {
    const std::size_t space = key.find(' ', start);
    tokens.push_back(key.substr(start, space - start));
    if (space == std::string::npos) break;
    start = space + 1;
  }
  return tokens;
}

}  // namespace

std::string PhraseEntry::Text() const {
  std::string text;
  for (std::size_t i = 0; i < phrase.size(); ++i) {
    if (i > 0) text.push_back(' ');
    text += phrase[i];
  }
  return text;
}

GiveawayTable GiveawayWords(const Corpus& corpus,
                            const GiveawayOptions& options) {
  CheckOptions(corpus, options);
  const PresenceCounts counts = CountPresence(
      corpus, [](const std::string& hypothesis) { return Tokenize(hypothesis); });
  GiveawayTable table;
  const auto selected = Select(counts, options);
  for (std::size_t l = 0; l < kNumLabels; ++l) {
    for (const Qualified& q : selected[l]) {
      table[l].push_back({*q.key, q.label, q.probability, q.frequency, false});
    }
  }
  return table;
}

std::vector<std::vector<Token>> NGrams(const std::vector<Token>& tokens,
                                       std::size_t n) {
  std::vector<std::vector<Token>> grams;
  if (n == 0 || tokens.size() < n) return grams;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    grams.emplace_back(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                       tokens.begin() + static_cast<std::ptrdiff_t>(i + n));
  }
  return grams;
}

PhraseTable GiveawayPhrases(const Corpus& corpus, const PhraseOptions& options) {
  CheckOptions(corpus, options.base);
  if (options.min_n < 1 || options.min_n > options.max_n) {
    Fail(ErrorCode::kInvalidArgument, "phrase length range is empty");
  }
  const PresenceCounts counts =
      CountPresence(corpus, [&](const std::string& hypothesis) {
        const auto tokens = Tokenize(hypothesis);
        std::vector<std::string> keys;
        for (std::size_t n = options.min_n; n <= options.max_n; ++n) {
          for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
            std::string key = tokens[i];
            for (std::size_t j = i + 1; j < i + n; ++j) {
              key.push_back(' ');
              key += tokens[j];
            }
            keys.push_back(std::move(key));
          }
        }
        return keys;
      });
  PhraseTable table;
  const auto selected = Select(counts, options.base);
  for (std::size_t l = 0; l < kNumLabels; ++l) {
    for (const Qualified& q : selected[l]) {
      table[l].push_back({SplitPhrase(*q.key), q.label, q.label_frequency,
                          q.frequency, q.probability});
    }
  }
  return table;
}

std::set<Token> PromptTokens(std::string_view prompt_template,
                             std::string_view placeholder) {
  std::string text(prompt_template);
  if (!placeholder.empty()) {
    for (std::size_t pos = text.find(placeholder); pos != std::string::npos;
         pos = text.find(placeholder, pos)) {
      text.replace(pos, placeholder.size(), " ");
    }
  }
  auto tokens = Tokenize(text);
  return {tokens.begin(), tokens.end()};
}

void FlagPromptOverlap(GiveawayTable& table, std::string_view prompt_template,
                       std::string_view placeholder) {
  const auto prompt = PromptTokens(prompt_template, placeholder);
  for (auto& entries : table) {
    for (GiveawayEntry& entry : entries) {
      entry.in_prompt = prompt.contains(entry.token);
    }
  }
}

std::string GiveawaysToCsv(const GiveawayTable& table) {
  std::string out = CsvLine({"label", "token", "p", "freq", "in_prompt"});
  for (const auto& entries : table) {
    for (const GiveawayEntry& e : entries) {
      out += CsvLine({std::string(LabelName(e.label)), e.token,
                      FormatDouble(e.conditional_probability),
                      std::to_string(e.frequency), e.in_prompt ? "1" : "0"});
    }
  }
  return out;
}

std::string PhrasesToCsv(const PhraseTable& table) {
  std::string out =
      CsvLine({"label", "phrase", "p", "label_freq", "freq"});
  for (const auto& entries : table) {
    for (const PhraseEntry& e : entries) {
      out += CsvLine({std::string(LabelName(e.label)), e.Text(),
                      FormatDouble(e.conditional_probability),
                      std::to_string(e.label_frequency),
                      std::to_string(e.frequency)});
    }
  }
  return out;
}

}  // namespace nliaudit
