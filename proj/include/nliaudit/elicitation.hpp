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

#ifndef NLIAUDIT_ELICITATION_HPP_
#define NLIAUDIT_ELICITATION_HPP_

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nliaudit/corpus.hpp"
#include "nliaudit/error.hpp"

namespace nliaudit {

// Marks where the premise goes in the crowd-worker instructions.
inline constexpr std::string_view kPremisePlaceholder = "[INSERT SNLI PREMISE]";

// The crowd-worker instructions with the placeholder still in place.
std::string_view PromptTemplate();

// The instructions with |premise| substituted for the placeholder. Everything
// outside the substituted premise is identical for every call.
std::string BuildPrompt(std::string_view premise);

enum class FailureKind { kMalformed, kMissingKey, kEmptyField, kRefusal, kTransport };

std::string_view FailureKindName(FailureKind kind);
std::optional<FailureKind> ParseFailureKind(std::string_view name);

struct ElicitationFailure {
  FailureKind kind = FailureKind::kMalformed;
  std::string detail;

  bool operator==(const ElicitationFailure&) const = default;
};

struct HypothesisTriple {
  std::string entailment;     // "true"
  std::string neutral;        // "maybe"
  std::string contradiction;  // "false"

  bool operator==(const HypothesisTriple&) const = default;
};

using ParseOutcome = std::variant<HypothesisTriple, ElicitationFailure>;

// The first brace-balanced {...} block of |raw|, honoring JSON string
// quoting, or nullopt if braces never balance.
std::optional<std::string_view> ExtractFirstBalancedBlock(std::string_view raw);

// Drops commas that directly precede a closing brace or bracket (outside
// strings). This and block extraction are the only repairs attempted.
std::string RemoveTrailingCommas(std::string_view json);

// Reads a model response: "true" -> entailment, "maybe" -> neutral,
// "false" -> contradiction. A response without any '{' is a refusal.
ParseOutcome ParseResponse(std::string_view raw);

// Vendor-neutral single-turn chat request.
struct ChatRequest {
  std::string model;
  std::string user_message;
  double temperature = 0.75;
  double top_p = 0.9;
  std::optional<int> top_k;
};

enum class WireSchema {
  kOpenAI,  // {model, messages, temperature, top_p[, top_k]} -> choices[0].message.content
  kOllama,  // {model, messages, stream:false, options{...}} -> message.content
};

std::optional<WireSchema> ParseWireSchema(std::string_view name);
std::string_view WireSchemaName(WireSchema schema);

// Request body for |schema|.
std::string EncodeChatRequest(const ChatRequest& request, WireSchema schema);

// Assistant text from a response body; throws kTransport when the body does
// not have the schema's shape.
std::string DecodeChatResponse(std::string_view body, WireSchema schema);

// Sends one request and returns the assistant text. Implementations must be
// safe to call from several threads at once and throw Error(kTransport) on
// any delivery failure.
class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  virtual std::string Complete(const ChatRequest& request) = 0;
};

class HttpChatTransport : public ChatTransport {
 public:
  // |endpoint| is a full URL, e.g. http://localhost:8000/v1/chat/completions.
  HttpChatTransport(std::string endpoint, WireSchema schema,
                    std::optional<std::string> api_key,
                    std::chrono::milliseconds timeout);

  std::string Complete(const ChatRequest& request) override;

 private:
  std::string base_;  // scheme://host[:port]
  std::string path_;
  WireSchema schema_;
  std::optional<std::string> api_key_;
  std::chrono::milliseconds timeout_;
};

inline constexpr const char* kApiKeyEnvVar = "NLIAUDIT_API_KEY";

struct ElicitationConfig {
  std::string endpoint;
  std::string model_name;
  double temperature = 0.75;
  double top_p = 0.9;
  std::optional<int> top_k;  // unset: backend default
  int max_retries = 3;       // total attempts per premise
  int parallelism = 4;       // requests in flight
  std::chrono::milliseconds request_timeout{60000};
  std::chrono::milliseconds backoff_base{500};  // doubles per transport retry
  WireSchema schema = WireSchema::kOpenAI;
  Split split = Split::kTrain;

  void Validate() const;
};

// One attempt against the endpoint. Exactly one of parsed and failure is set.
struct ElicitationRecord {
  std::string premise_id;
  std::string premise;
  std::string model;
  std::string prompt_text;
  std::string raw_response;
  std::optional<HypothesisTriple> parsed;
  std::optional<ElicitationFailure> failure;
  int attempts = 1;  // 1-based attempt number of this record

  bool operator==(const ElicitationRecord&) const = default;
};

std::string SerializeRecord(const ElicitationRecord& record);
ElicitationRecord ParseRecord(std::string_view line);
void WriteTranscript(std::span<const ElicitationRecord> records,
                     const std::filesystem::path& path);
std::vector<ElicitationRecord> LoadTranscript(const std::filesystem::path& path);

struct PremiseInput {
  std::string premise_id;
  std::string text;
};

// Distinct premises of |corpus| in first-appearance order.
std::vector<PremiseInput> PremisesOf(const Corpus& corpus);

struct ElicitationResult {
  Corpus corpus;
  std::vector<ElicitationRecord> records;  // every attempt, input order
  std::size_t failed_premises = 0;
};

// Runs the prompt for every premise with at most cfg.parallelism requests in
// flight. Output order follows input order regardless of completion order.
ElicitationResult ElicitCorpus(std::span<const PremiseInput> premises,
                               const ElicitationConfig& config,
                               ChatTransport& transport);

// Rebuilds the corpus from a transcript: the first parsed record per premise
// contributes its three hypotheses, in log order.
Corpus ReplayTranscript(std::span<const ElicitationRecord> records,
                        std::string_view source, Split split);

}  // namespace nliaudit

#endif  // NLIAUDIT_ELICITATION_HPP_
