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

#include "nliaudit/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <random>
#include <unordered_set>

#include "json.hpp"
#include "nliaudit/error.hpp"
#include "nliaudit/hash.hpp"
#include "nliaudit/sampling.hpp"

namespace nliaudit {
namespace {

bool IsSpace(char c) {
  return std::isspace(static_cast<unsigned char>(c)) != 0;
}

std::string LineError(std::size_t line, const std::string& message) {
  return "line " + std::to_string(line) + ": " + message;
}

std::ifstream OpenForRead(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path.string());
  return in;
}

const std::string& RequireString(const nlohmann::json& record,
                                 const char* field) {
  auto it = record.find(field);
  if (it == record.end() || !it->is_string()) {
    throw std::invalid_argument(std::string("missing string field '") + field +
                                "'");
  }
  return it->get_ref<const std::string&>();
}

}  // namespace

std::string_view SplitName(Split split) {
  return split == Split::kTrain ? "train" : "eval";
}

std::optional<Split> ParseSplit(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "eval") return Split::kEval;
  return std::nullopt;
}

std::string NormalizeWhitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (IsSpace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::string PremiseId(std::string_view premise) {
  return Sha256Hex(NormalizeWhitespace(premise)).substr(0, 16);
}

NLIExample MakeExample(std::string_view premise, std::string_view hypothesis,
                       Label label, std::string_view source, Split split) {
  NLIExample example;
  example.premise_id = PremiseId(premise);
  example.premise = std::string(premise);
  example.hypothesis = std::string(hypothesis);
  example.label = label;
  example.source = std::string(source);
  example.split = split;
  return example;
}

Corpus::Corpus(std::string source, std::vector<NLIExample> examples)
    : source_(std::move(source)), examples_(std::move(examples)) {
  std::unordered_map<std::string, const std::string*> premise_by_id;
  for (std::size_t i = 0; i < examples_.size(); ++i) {
    const NLIExample& ex = examples_[i];
    if (NormalizeWhitespace(ex.premise).empty()) {
      Fail(ErrorCode::kInvariant,
           "example " + std::to_string(i) + " has an empty premise");
    }
    if (NormalizeWhitespace(ex.hypothesis).empty()) {
      Fail(ErrorCode::kInvariant,
           "example " + std::to_string(i) + " has an empty hypothesis");
    }
    if (ex.premise_id.empty()) {
      Fail(ErrorCode::kInvariant,
           "example " + std::to_string(i) + " has an empty premise_id");
    }
    auto [it, inserted] = premise_by_id.emplace(ex.premise_id, &ex.premise);
    if (inserted) {
      premise_ids_.push_back(ex.premise_id);
    } else if (*it->second != ex.premise) {
      Fail(ErrorCode::kInvariant, "premise_id " + ex.premise_id +
                                      " maps to more than one premise");
    }
    ++label_counts_[LabelIndex(ex.label)];
  }
}

bool Corpus::HasAllLabels() const {
  return std::all_of(label_counts_.begin(), label_counts_.end(),
                     [](std::size_t n) { return n > 0; });
}

Corpus LoadSnliJsonl(const std::filesystem::path& path, Split split,
                     LoadStats* stats, std::string_view source) {
  std::ifstream in = OpenForRead(path);
  LoadStats local;
  std::vector<NLIExample> examples;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (NormalizeWhitespace(line).empty()) continue;
    ++local.lines;
    try {
      const auto record = nlohmann::json::parse(line);
      if (!record.is_object()) throw std::invalid_argument("not an object");
      const std::string& premise = RequireString(record, "sentence1");
      const std::string& hypothesis = RequireString(record, "sentence2");
      std::optional<Label> label;
      if (auto it = record.find("gold_label");
          it != record.end() && it->is_string()) {
        label = ParseLabel(it->get_ref<const std::string&>());
      }
      if (!label) {
        ++local.dropped_unlabeled;
        continue;
      }
      if (NormalizeWhitespace(premise).empty() ||
          NormalizeWhitespace(hypothesis).empty()) {
        ++local.dropped_empty;
        continue;
      }
      examples.push_back(MakeExample(premise, hypothesis, *label, source, split));
    } catch (const std::exception& e) {
      ++local.parse_failures;
      local.failures.push_back(LineError(line_number, e.what()));
    }
  }
  if (in.bad()) Fail(ErrorCode::kIo, "read error on " + path.string());
  local.kept = examples.size();
  if (stats != nullptr) *stats = local;
  if (local.parse_failures * 100 > local.lines) {
    Fail(ErrorCode::kParse,
         path.string() + ": " + std::to_string(local.parse_failures) + " of " +
             std::to_string(local.lines) +
             " lines failed to parse (limit 1%); first: " +
             local.failures.front());
  }
  return Corpus(std::string(source), std::move(examples));
}

std::string SerializeExample(const NLIExample& example) {
  nlohmann::ordered_json record;
  record["premise_id"] = example.premise_id;
  record["premise"] = example.premise;
  record["hypothesis"] = example.hypothesis;
  record["label"] = LabelName(example.label);
  record["source"] = example.source;
  record["split"] = SplitName(example.split);
  return record.dump(-1, ' ', false,
                     nlohmann::ordered_json::error_handler_t::strict);
}

Corpus LoadCorpus(const std::filesystem::path& path,
                  std::optional<std::string> source) {
  std::ifstream in = OpenForRead(path);
  std::vector<NLIExample> examples;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (NormalizeWhitespace(line).empty()) continue;
    try {
      const auto record = nlohmann::json::parse(line);
      if (!record.is_object()) throw std::invalid_argument("not an object");
      NLIExample ex;
      ex.premise_id = RequireString(record, "premise_id");
      ex.premise = RequireString(record, "premise");
      ex.hypothesis = RequireString(record, "hypothesis");
      const auto label = ParseLabel(RequireString(record, "label"));
      if (!label) throw std::invalid_argument("unknown label");
      ex.label = *label;
      ex.source = RequireString(record, "source");
      const auto split = ParseSplit(RequireString(record, "split"));
      if (!split) throw std::invalid_argument("unknown split");
      ex.split = *split;
      examples.push_back(std::move(ex));
    } catch (const std::exception& e) {
      Fail(ErrorCode::kParse,
           path.string() + ": " + LineError(line_number, e.what()));
    }
  }
  if (in.bad()) Fail(ErrorCode::kIo, "read error on " + path.string());
  if (!source) {
    source = examples.empty() ? path.stem().string() : examples.front().source;
  }
  return Corpus(std::move(*source), std::move(examples));
}

void WriteCorpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIo, "cannot write " + path.string());
  for (const NLIExample& ex : corpus.examples()) {
    out << SerializeExample(ex) << '\n';
  }
  out.flush();
  if (!out) Fail(ErrorCode::kIo, "write failed on " + path.string());
}

std::size_t SelectedPremiseCount(std::size_t premises, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    Fail(ErrorCode::kInvalidArgument,
         "fraction must lie in (0, 1], got " + std::to_string(fraction));
  }
  const auto count =
      static_cast<std::size_t>(std::floor(fraction * premises + 0.5));
  return std::min(count, premises);
}

Corpus SubsetByPremiseFraction(const Corpus& corpus, double fraction,
                               std::uint64_t seed) {
  const std::size_t keep = SelectedPremiseCount(corpus.premise_count(), fraction);
  if (corpus.empty()) Fail(ErrorCode::kInvalidArgument, "corpus is empty");
  std::mt19937_64 rng(seed);
  const auto picked =
      SampleWithoutReplacement(corpus.premise_count(), keep, rng);
  std::unordered_set<std::string_view> selected;
  selected.reserve(picked.size());
  for (std::size_t index : picked) selected.insert(corpus.premise_ids()[index]);

  std::vector<NLIExample> kept;
  for (const NLIExample& ex : corpus.examples()) {
    if (selected.contains(ex.premise_id)) kept.push_back(ex);
  }
  return Corpus(corpus.source(), std::move(kept));
}

}  // namespace nliaudit
