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

#ifndef NLIAUDIT_TESTS_TEST_UTIL_HPP_
#define NLIAUDIT_TESTS_TEST_UTIL_HPP_

#include <atomic>
#include <filesystem>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "nliaudit/corpus.hpp"
#include "nliaudit/label.hpp"

namespace nliaudit::testing {

using Row = std::tuple<std::string, std::string, Label>;  // premise, hyp, label

inline Corpus MakeCorpus(const std::vector<Row>& rows,
                         const std::string& source = "fixture",
                         Split split = Split::kTrain) {
  std::vector<NLIExample> examples;
  for (const auto& [premise, hypothesis, label] : rows) {
    examples.push_back(MakeExample(premise, hypothesis, label, source, split));
  }
  return Corpus(source, std::move(examples));
}

// Hypothesis-only corpus; each row gets its own premise.
inline Corpus HypothesisCorpus(
    const std::vector<std::pair<std::string, Label>>& rows,
    const std::string& source = "fixture") {
  std::vector<Row> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.emplace_back("premise " + std::to_string(i), rows[i].first,
                     rows[i].second);
  }
  return MakeCorpus(out, source);
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("nliaudit-test-" + std::to_string(rd()) + "-" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

inline std::filesystem::path FixturePath(const std::string& name) {
  return std::filesystem::path(NLIAUDIT_FIXTURE_DIR) / name;
}

}  // namespace nliaudit::testing

#endif  // NLIAUDIT_TESTS_TEST_UTIL_HPP_
