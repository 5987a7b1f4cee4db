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

// Runs the built command-line tool end to end against a local chat server.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "doctest.h"
#include "httplib.h"
#include "json.hpp"
#include "nliaudit/corpus.hpp"
#include "nliaudit/csv.hpp"
#include "nliaudit/report.hpp"
#include "nliaudit/validation.hpp"
#include "test_util.hpp"

namespace nliaudit {
namespace {

namespace fs = std::filesystem;
using testing::FixturePath;
using testing::TempDir;

struct Result {
  int status = -1;
  std::string out;
  std::string err;
};

std::string Quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) {
    if (c == '\'') {
      q += "'\\''";
    } else {
      q += c;
    }
  }
  return q + "'";
}

Result Run(const std::vector<std::string>& args) {
  static int counter = 0;
  static TempDir scratch;
  const fs::path out = scratch / ("out" + std::to_string(counter));
  const fs::path err = scratch / ("err" + std::to_string(counter++));
  std::string cmd = Quote(NLIAUDIT_CLI);
  for (const auto& a : args) cmd += " " + Quote(a);
  cmd += " >" + Quote(out.string()) + " 2>" + Quote(err.string());
  const int raw = std::system(cmd.c_str());
  Result r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = ReadFile(out);
  r.err = ReadFile(err);
  return r;
}

std::string Fixture(const std::string& name) { return FixturePath(name).string(); }

std::size_t LineCount(const std::string& text) {
  std::size_t n = 0;
  for (char c : text) n += c == '\n';
  return n;
}

// Answers with premise-derived captions. The first request for a premise
// mentioning "dog" gets a malformed reply.
class MockChat {
 public:
  MockChat() {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req,
                                                httplib::Response& res) {
      const auto body = nlohmann::json::parse(req.body);
      const std::string prompt = body["messages"][0]["content"];
      const std::string key = "Original Caption: \"";
      const auto start = prompt.find(key) + key.size();
      const std::string premise = prompt.substr(start, prompt.find('"', start) - start);
      std::string content;
      {
        std::lock_guard lock(mu_);
        auth_ = req.get_header_value("Authorization");
        const int seen = hits_[premise]++;
        if (premise.find("dog") != std::string::npos && seen == 0) {
          content = "Sure! Here you go.";
        }
      }
      if (content.empty()) {
        std::string stem = premise.substr(0, premise.find(' '));
        content = nlohmann::json{{"true", "There is " + premise},
                                 {"maybe", stem + " is tall and waiting."},
                                 {"false", "Nobody is sleeping outside."}}
                      .dump();
      }
      nlohmann::json reply = {{"choices", {{{"message", {{"content", content}}}}}}};
      res.set_content(reply.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~MockChat() {
    server_.stop();
    thread_.join();
  }

  std::string url() const {
    return "http://127.0.0.1:" + std::to_string(port_) + "/v1/chat/completions";
  }
  std::string auth() {
    std::lock_guard lock(mu_);
    return auth_;
  }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::mutex mu_;
  std::map<std::string, int> hits_;
  std::string auth_;
};

TEST_CASE("cli: stats on three examples") {
  TempDir dir;
  auto r = Run({"stats", "--input", Fixture("snli_three.jsonl"), "--out", dir.path()});
  REQUIRE(r.status == 0);
  CHECK(ReadFile(dir / "stats.csv") ==
        "source,examples,premises,entailment,neutral,contradiction,"
        "token_mean,token_median,token_max\n"
        "snli,3,1,1,1,1,3.33,3.0,4\n");
  CHECK(r.out.find("snli") != std::string::npos);
}

TEST_CASE("cli: single cell grid") {
  TempDir dir;
  auto r = Run({"eval-grid", "--input", Fixture("snli_three.jsonl"), "--eval",
                Fixture("snli_three.jsonl"), "--out", dir.path()});
  REQUIRE(r.status == 0);
  auto rows = ParseCsv(ReadFile(dir / "grid.csv"));
  REQUIRE(rows.size() == 2);
  CHECK(rows[1][0] == "naive_bayes");
  CHECK(rows[1][1] == "snli");
  AccuracyGrid grid = DeserializeGrid(ReadFile(dir / "grid.json"));
  CHECK(grid.cells.size() == 1);
}

TEST_CASE("cli: failures print one error line") {
  auto io = Run({"stats", "--input", "/nonexistent/corpus.jsonl"});
  CHECK(io.status == 1);
  CHECK(io.out.empty());
  CHECK(io.err.rfind("error: io: ", 0) == 0);
  CHECK(LineCount(io.err) == 1);

  auto usage = Run({"subset", "--input", Fixture("snli_three.jsonl"), "--fraction",
                    "2", "--out", "/tmp"});
  CHECK(usage.status == 2);
  CHECK(usage.err.rfind("error: usage: ", 0) == 0);

  auto missing = Run({"overlap", "--input", Fixture("snli_three.jsonl")});
  CHECK(missing.status == 2);
  CHECK(missing.err.find("--reference") != std::string::npos);

  auto unknown = Run({"frobnicate"});
  CHECK(unknown.status == 2);
}

TEST_CASE("cli: snapshot replays a run and flags override it") {
  TempDir dir;
  const fs::path a = dir / "a";
  auto r = Run({"subset", "--input", Fixture("snli_mini_train.jsonl"), "--fraction",
                "0.5", "--seed", "11", "--out", a.string()});
  REQUIRE(r.status == 0);
  const std::string first = ReadFile(a / "subset.jsonl");
  const fs::path snapshot = a / "subset.config.toml";
  REQUIRE(fs::exists(snapshot));

  fs::copy_file(snapshot, dir / "saved.toml");
  fs::remove(a / "subset.jsonl");
  REQUIRE(Run({"--config", (dir / "saved.toml").string(), "subset"}).status == 0);
  CHECK(ReadFile(a / "subset.jsonl") == first);

  const fs::path b = dir / "b";
  REQUIRE(Run({"--config", (dir / "saved.toml").string(), "subset", "--seed", "12",
               "--out", b.string()})
              .status == 0);
  CHECK(LoadCorpus(b / "subset.jsonl").size() == LoadCorpus(a / "subset.jsonl").size());
  CHECK(ReadFile(b / "subset.config.toml").find("12") != std::string::npos);
}

TEST_CASE("cli: full pipeline from a mock endpoint to a report") {
  MockChat chat;
  ::setenv("NLIAUDIT_API_KEY", "sk-cli", 1);
  TempDir dir;
  const std::string train = Fixture("snli_mini_train.jsonl");
  const std::string dev = Fixture("snli_mini_dev.jsonl");
  const fs::path gen = dir / "gen";

  auto r = Run({"elicit", "--input", train, "--endpoint", chat.url(), "--model",
                "mock-llm", "--parallelism", "2", "--backoff-ms", "0", "--out",
                gen.string()});
  REQUIRE_MESSAGE(r.status == 0, r.err);
  CHECK(chat.auth() == "Bearer sk-cli");
  const Corpus elicited = LoadCorpus(gen / "corpus.jsonl");
  CHECK(elicited.source() == "mock-llm");
  CHECK(elicited.size() == 27);
  CHECK(elicited.premise_count() == 9);
  // One malformed reply adds one transcript line.
  CHECK(LineCount(ReadFile(gen / "transcript.jsonl")) == 10);

  const fs::path replay = dir / "replay";
  REQUIRE(Run({"elicit", "--replay", (gen / "transcript.jsonl").string(), "--out",
               replay.string()})
              .status == 0);
  CHECK(ReadFile(replay / "corpus.jsonl") == ReadFile(gen / "corpus.jsonl"));

  const fs::path ov = dir / "overlap";
  REQUIRE(Run({"overlap", "--input", (gen / "corpus.jsonl").string(), "--reference",
               train, "--out", ov.string()})
              .status == 0);
  CHECK(LineCount(ReadFile(ov / "overlap_histogram.csv")) == 21);

  const fs::path grid = dir / "grid";
  REQUIRE(Run({"eval-grid", "--input", (gen / "corpus.jsonl").string(), "--eval",
               dev, "--out", grid.string()})
              .status == 0);
  AccuracyGrid neural = DeserializeGrid(ReadFile(grid / "grid.json"));
  neural.classifier = "neural";
  WriteFile(dir / "neural.json", SerializeGrid(neural));

  const fs::path words = dir / "words";
  REQUIRE(Run({"giveaways", "--input", (gen / "corpus.jsonl").string(),
               "--min-freq", "5", "--out", words.string()})
              .status == 0);
  const std::string giveaways = ReadFile(words / "giveaways.csv");
  CHECK(giveaways.find("entailment,There,1,9,1") != std::string::npos);
  CHECK(giveaways.find("contradiction,Nobody,1,9,0") != std::string::npos);

  const fs::path sample = dir / "sample";
  REQUIRE(Run({"sample-validation", "--input", (gen / "corpus.jsonl").string(),
               "--n-premises", "4", "--seed", "2", "--out", sample.string()})
              .status == 0);
  AnnotationSheet sheet = SheetFromCsv(ReadFile(sample / "annotation_sheet.csv"));
  REQUIRE(sheet.size() == 12);
  for (std::size_t i = 0; i < sheet.size(); ++i) sheet[i].agree = i % 4 != 0;
  const fs::path filled = dir / "filled.csv";
  WriteFile(filled, SheetToCsv(sheet));

  const fs::path rep = dir / "report";
  const std::vector<std::string> report_args = {
      "report", "--input", (gen / "corpus.jsonl").string(), "--eval", dev,
      "--reference", train, "--sheet", filled.string(), "--grid",
      (dir / "neural.json").string(), "--min-freq", "5", "--n-max", "10",
      "--dataset-id", "mock", "--out", rep.string()};
  r = Run(report_args);
  REQUIRE_MESSAGE(r.status == 0, r.err);

  std::vector<fs::path> reports;
  for (const auto& e : fs::directory_iterator(rep)) {
    if (e.path().filename().string().rfind("report-", 0) == 0) reports.push_back(e.path());
  }
  REQUIRE(reports.size() == 1);
  const AuditReport report = DeserializeReport(ReadFile(reports[0]));
  CHECK(report.dataset_id == "mock");
  CHECK(report.overlap.has_value());
  REQUIRE(report.agreement.has_value());
  CHECK(report.agreement->overall == doctest::Approx(75.0));
  CHECK(report.sweep.has_value());
  CHECK(report.giveaways.has_value());
  CHECK(report.phrases.has_value());
  CHECK(report.Grid("naive_bayes") != nullptr);
  CHECK(report.Grid("neural") != nullptr);
  CHECK(ReadFile(rep / "tables.txt").find("There*") != std::string::npos);
  CHECK(fs::exists(rep / "tables" / "giveaways.csv"));

  // Rerunning from the snapshot reproduces the same report file.
  REQUIRE(Run({"--config", (rep / "report.config.toml").string(), "report"}).status == 0);
  std::size_t count = 0;
  for (const auto& e : fs::directory_iterator(rep)) {
    count += e.path().filename().string().rfind("report-", 0) == 0;
  }
  CHECK(count == 1);
}

}  // namespace
}  // namespace nliaudit
