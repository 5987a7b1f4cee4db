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

#ifndef NLIAUDIT_LABEL_HPP_
#define NLIAUDIT_LABEL_HPP_

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace nliaudit {

// Canonical order entailment < neutral < contradiction. Every tie-break and
// report ordering in the library follows the enumerator values.
enum class Label : int {
  kEntailment = 0,
  kNeutral = 1,
  kContradiction = 2,
};

inline constexpr std::size_t kNumLabels = 3;

inline constexpr std::array<Label, kNumLabels> kAllLabels = {
    Label::kEntailment, Label::kNeutral, Label::kContradiction};

constexpr std::size_t LabelIndex(Label label) {
  return static_cast<std::size_t>(label);
}

constexpr std::string_view LabelName(Label label) {
  switch (label) {
    case Label::kEntailment:
      return "entailment";
    case Label::kNeutral:
      return "neutral";
    case Label::kContradiction:
      return "contradiction";
  }
  return "";
}

// Parses the lowercase label word. Anything else (including SNLI's "-")
// yields nullopt.
constexpr std::optional<Label> ParseLabel(std::string_view name) {
  for (Label label : kAllLabels) {
    if (LabelName(label) == name) return label;
  }
  return std::nullopt;
}

// Per-label counters indexed by LabelIndex.
template <typename T>
using PerLabel = std::array<T, kNumLabels>;

}  // namespace nliaudit

#endif  // NLIAUDIT_LABEL_HPP_
