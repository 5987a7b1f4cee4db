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

#include "nliaudit/elicitation.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <fstream>
#include <iterator>
#include <mutex>
#include <thread>
#include <unordered_set>

#include "json.hpp"
#include "nliaudit/csv.hpp"

namespace nliaudit {
namespace {

constexpr std::string_view kTemplate =
    R"(We will show you the caption for a photo. We will not show you the photo. Using only the caption and what you know about the world:
- Write one alternate caption that is definitely a true description of the photo. Example: For the caption "Two dogs are running through a field." you could write "There are animals outdoors."
- Write one alternate caption that might be a true description of the photo. Example: For the caption "Two dogs are running through a field." you could write "Some puppies are running to catch a stick."
- Write one alternate caption that is definitely a false description of the photo. Example: For the caption "Two dogs are running through a field." you could write "The pets are sitting on a couch." This is different from the maybe correct category because it's impossible for the dogs to be both running and sitting.

In response to the original caption, please return the 3 alternate captions in a JSON readable format and include no other commentary.

Here is an example of the correct format of response to the prompt:

Original caption: "Two dogs are running through a field"
Three JSON-parseable alternate captions, with "definitely true", "might be true", and "definitely false" descriptions of the photo:
{"true": "There are animals outdoors.",
"maybe": "Some puppies are running to catch a stick.",
"false": "The pets are sitting on a couch." }

Now, please generate the 3 alternate captions following the JSON-parseable format described earlier:
Original Caption: "[INSERT SNLI PREMISE]"
Three JSON-parseable alternate captions, with "definitely true", "might be true", and "definitely false" descriptions of the photo:)";

std::string Trim(std::string_view text) {
  auto space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!text.empty() && space(text.front())) text.remove_prefix(1);
  while (!text.empty() && space(text.back())) text.remove_suffix(1);
  return std::string(text);
}

nlohmann::json TripleToJson(const HypothesisTriple& t) {
  return {{"entailment", t.entailment},
          {"neutral", t.neutral},
          {"contradiction", t.contradiction}};
}

}  // namespace

std::string_view PromptTemplate() { return kTemplate; }

std::string BuildPrompt(std::string_view premise) {
  if (Trim(premise).empty()) {
    Fail(ErrorCode::kInvalidArgument, "premise must not be empty");
  }
  std::string prompt(kTemplate);
  const std::size_t at = prompt.find(kPremisePlaceholder);
  prompt.replace(at, kPremisePlaceholder.size(), Trim(premise));
  return prompt;
}

std::string_view FailureKindName(FailureKind kind) {
  switch (kind) {
    case FailureKind::kMalformed:
      return "malformed";
    case FailureKind::kMissingKey:
      return "missing_key";
    case FailureKind::kEmptyField:
      return "empty_field";
    case FailureKind::kRefusal:
      return "refusal";
    case FailureKind::kTransport:
      return "transport";
  }
  return "";
}

std::optional<FailureKind> ParseFailureKind(std::string_view name) {
  for (FailureKind kind :
       {FailureKind::kMalformed, FailureKind::kMissingKey,
        FailureKind::kEmptyField, FailureKind::kRefusal,
        FailureKind::kTransport}) {
    if (FailureKindName(kind) == name) return kind;
  }
  return std::nullopt;
}

std::optional<std::string_view> ExtractFirstBalancedBlock(std::string_view raw) {
  const std::size_t start = raw.find('{');
  if (start == std::string_view::npos) return std::nullopt;
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = start; i < raw.size(); ++i) {
    const char c = raw[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return raw.substr(start, i - start + 1);
    }
  }
  return std::nullopt;
}

std::string RemoveTrailingCommas(std::string_view json) {
  std::string out;
  out.reserve(json.size());
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = 0; i < json.size(); ++i) {
    const char c = json[i];
    if (in_string) {
      out.push_back(c);
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') in_string = true;
    if (c == ',') {
      std::size_t j = i + 1;
      while (j < json.size() &&
             std::isspace(static_cast<unsigned char>(json[j])) != 0) {
        ++j;
      }
      if (j < json.size() && (json[j] == '}' || json[j] == ']')) continue;
    }
    out.push_back(c);
  }
  return out;
}

ParseOutcome ParseResponse(std::string_view raw) {
  if (raw.find('{') == std::string_view::npos) {
    return ElicitationFailure{FailureKind::kRefusal, "response contains no JSON object"};
  }
  const auto block = ExtractFirstBalancedBlock(raw);
  if (!block) {
    return ElicitationFailure{FailureKind::kMalformed, "unbalanced braces"};
  }
  nlohmann::json parsed = nlohmann::json::parse(*block, nullptr, false);
  if (parsed.is_discarded()) {
    parsed = nlohmann::json::parse(RemoveTrailingCommas(*block), nullptr, false);
  }
  if (parsed.is_discarded()) {
    return ElicitationFailure{FailureKind::kMalformed, "block is not valid JSON"};
  }
  if (!parsed.is_object()) {
    return ElicitationFailure{FailureKind::kMalformed, "block is not an object"};
  }
  static constexpr const char* kKeys[] = {"true", "maybe", "false"};
  for (const char* key : kKeys) {
    if (!parsed.contains(key)) {
      return ElicitationFailure{FailureKind::kMissingKey, key};
    }
  }
  std::string values[3];
  for (int i = 0; i < 3; ++i) {
    const auto& value = parsed.at(kKeys[i]);
    if (!value.is_string()) {
      return ElicitationFailure{FailureKind::kMalformed,
                                std::string("value of '") + kKeys[i] +
                                    "' is not a string"};
    }
    values[i] = Trim(value.get<std::string>());
    if (values[i].empty()) {
      return ElicitationFailure{FailureKind::kEmptyField, kKeys[i]};
    }
  }
  return HypothesisTriple{values[0], values[1], values[2]};
}

std::optional<WireSchema> ParseWireSchema(std::string_view name) {
  if (name == "openai") return WireSchema::kOpenAI;
  if (name == "ollama") return WireSchema::kOllama;
  return std::nullopt;
}

std::string_view WireSchemaName(WireSchema schema) {
  return schema == WireSchema::kOpenAI ? "openai" : "ollama";
}

std::string EncodeChatRequest(const ChatRequest& request, WireSchema schema) {
  nlohmann::ordered_json body;
  body["model"] = request.model;
  body["messages"] = nlohmann::ordered_json::array(
      {{{"role", "user"}, {"content", request.user_message}}});
  if (schema == WireSchema::kOpenAI) {
    body["temperature"] = request.temperature;
    body["top_p"] = request.top_p;
    if (request.top_k) body["top_k"] = *request.top_k;
  } else {
    body["stream"] = false;
    nlohmann::ordered_json options;
    options["temperature"] = request.temperature;
    options["top_p"] = request.top_p;
    if (request.top_k) options["top_k"] = *request.top_k;
    body["options"] = options;
  }
  return body.dump();
}

std::string DecodeChatResponse(std::string_view body, WireSchema schema) {
  const auto json = nlohmann::json::parse(body, nullptr, false);
  const nlohmann::json* content = nullptr;
  if (!json.is_discarded() && json.is_object()) {
    if (schema == WireSchema::kOpenAI) {
      if (auto choices = json.find("choices");
          choices != json.end() && choices->is_array() && !choices->empty()) {
        const auto& first = choices->front();
        if (auto msg = first.find("message");
            msg != first.end() && msg->is_object() && msg->contains("content")) {
          content = &(*msg)["content"];
        }
      }
    } else if (auto msg = json.find("message");
               msg != json.end() && msg->is_object() &&
               msg->contains("content")) {
      content = &(*msg)["content"];
    }
  }
  if (content == nullptr || !content->is_string()) {
    Fail(ErrorCode::kTransport, "response body lacks assistant content for the " +
                                    std::string(WireSchemaName(schema)) +
                                    " schema");
  }
  return content->get<std::string>();
}

void ElicitationConfig::Validate() const {
  auto invalid = [](const std::string& what) {
    Fail(ErrorCode::kInvalidArgument, "elicitation config: " + what);
  };
  if (model_name.empty()) invalid("model name is required");
  if (!(temperature >= 0.0 && temperature <= 2.0)) invalid("temperature outside [0, 2]");
  if (!(top_p > 0.0 && top_p <= 1.0)) invalid("top_p outside (0, 1]");
  if (top_k && *top_k < 1) invalid("top_k must be positive");
  if (max_retries < 1) invalid("max_retries must be at least 1");
  if (parallelism < 1) invalid("parallelism must be at least 1");
  if (request_timeout.count() <= 0) invalid("request timeout must be positive");
  if (backoff_base.count() < 0) invalid("backoff must not be negative");
}

std::string SerializeRecord(const ElicitationRecord& record) {
  nlohmann::ordered_json j;
  j["premise_id"] = record.premise_id;
  j["premise"] = record.premise;
  j["model"] = record.model;
  j["attempts"] = record.attempts;
  j["prompt_text"] = record.prompt_text;
  j["raw_response"] = record.raw_response;
  if (record.parsed) {
    j["parsed"] = TripleToJson(*record.parsed);
  } else {
    j["parsed"] = nullptr;
  }
  if (record.failure) {
    j["failure"] = {{"kind", FailureKindName(record.failure->kind)},
                    {"detail", record.failure->detail}};
  } else {
    j["failure"] = nullptr;
  }
  return j.dump(-1, ' ', false, nlohmann::ordered_json::error_handler_t::replace);
}

ElicitationRecord ParseRecord(std::string_view line) {
  try {
    const auto j = nlohmann::json::parse(line);
    ElicitationRecord r;
    r.premise_id = j.at("premise_id").get<std::string>();
    r.premise = j.at("premise").get<std::string>();
    r.model = j.at("model").get<std::string>();
    r.attempts = j.at("attempts").get<int>();
    r.prompt_text = j.at("prompt_text").get<std::string>();
    r.raw_response = j.at("raw_response").get<std::string>();
    if (const auto& p = j.at("parsed"); !p.is_null()) {
      r.parsed = HypothesisTriple{p.at("entailment").get<std::string>(),
                                  p.at("neutral").get<std::string>(),
                                  p.at("contradiction").get<std::string>()};
    }
    if (const auto& f = j.at("failure"); !f.is_null()) {
      const auto kind = ParseFailureKind(f.at("kind").get<std::string>());
      if (!kind) throw std::invalid_argument("unknown failure kind");
      r.failure = ElicitationFailure{*kind, f.at("detail").get<std::string>()};
    }
    if (r.parsed.has_value() == r.failure.has_value()) {
      throw std::invalid_argument("exactly one of parsed/failure must be set");
    }
    return r;
  } catch (const std::exception& e) {
    Fail(ErrorCode::kParse, std::string("transcript record: ") + e.what());
  }
}

void WriteTranscript(std::span<const ElicitationRecord> records,
                     const std::filesystem::path& path) {
  std::string out;
  for (const auto& record : records) {
    out += SerializeRecord(record);
    out.push_back('\n');
  }
  WriteFile(path, out);
}

std::vector<ElicitationRecord> LoadTranscript(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<ElicitationRecord> records;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (Trim(line).empty()) continue;
    try {
      records.push_back(ParseRecord(line));
    } catch (const Error& e) {
      Fail(ErrorCode::kParse,
           path.string() + ": line " + std::to_string(number) + ": " + e.what());
    }
  }
  return records;
}

std::vector<PremiseInput> PremisesOf(const Corpus& corpus) {
  std::vector<PremiseInput> premises;
  std::unordered_set<std::string_view> seen;
  for (const NLIExample& ex : corpus.examples()) {
    if (seen.insert(ex.premise_id).second) {
      premises.push_back({ex.premise_id, ex.premise});
    }
  }
  return premises;
}

namespace {

struct PremiseOutcome {
  std::vector<ElicitationRecord> records;
  std::optional<HypothesisTriple> triple;
};

PremiseOutcome ElicitOne(const PremiseInput& premise,
                         const ElicitationConfig& config,
                         ChatTransport& transport) {
  PremiseOutcome outcome;
  ChatRequest request{config.model_name, BuildPrompt(premise.text),
                      config.temperature, config.top_p, config.top_k};
  std::chrono::milliseconds backoff = config.backoff_base;
  for (int attempt = 1; attempt <= config.max_retries; ++attempt) {
    ElicitationRecord record;
    record.premise_id = premise.premise_id;
    record.premise = premise.text;
    record.model = config.model_name;
    record.prompt_text = request.user_message;
    record.attempts = attempt;
    bool transport_failed = false;
    try {
      record.raw_response = transport.Complete(request);
      ParseOutcome parsed = ParseResponse(record.raw_response);
      if (auto* triple = std::get_if<HypothesisTriple>(&parsed)) {
        record.parsed = *triple;
      } else {
        record.failure = std::get<ElicitationFailure>(parsed);
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kTransport) throw;
      record.failure = ElicitationFailure{FailureKind::kTransport, e.what()};
      transport_failed = true;
    }
    const bool done = record.parsed.has_value();
    if (done) outcome.triple = record.parsed;
    outcome.records.push_back(std::move(record));
    if (done) break;
    if (transport_failed && attempt < config.max_retries && backoff.count() > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
  }
  return outcome;
}

void AppendTriple(std::vector<NLIExample>& out, const std::string& premise_id,
                  const std::string& premise, const HypothesisTriple& triple,
                  std::string_view source, Split split) {
  const std::pair<Label, const std::string*> rows[] = {
      {Label::kEntailment, &triple.entailment},
      {Label::kNeutral, &triple.neutral},
      {Label::kContradiction, &triple.contradiction}};
  for (const auto& [label, hypothesis] : rows) {
    out.push_back(NLIExample{premise_id, premise, *hypothesis, label,
                             std::string(source), split});
  }
}

}  // namespace

ElicitationResult ElicitCorpus(std::span<const PremiseInput> premises,
                               const ElicitationConfig& config,
                               ChatTransport& transport) {
  config.Validate();
  std::vector<PremiseOutcome> outcomes(premises.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < premises.size(); i = next++) {
      try {
        outcomes[i] = ElicitOne(premises[i], config, transport);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = premises.size();
      }
    }
  };
  {
    const std::size_t workers = std::min<std::size_t>(
        static_cast<std::size_t>(config.parallelism), premises.size());
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  ElicitationResult result;
  std::vector<NLIExample> examples;
  examples.reserve(premises.size() * kNumLabels);
  for (std::size_t i = 0; i < premises.size(); ++i) {
    PremiseOutcome& outcome = outcomes[i];
    if (outcome.triple) {
      AppendTriple(examples, premises[i].premise_id, premises[i].text,
                   *outcome.triple, config.model_name, config.split);
    } else {
      ++result.failed_premises;
    }
    std::move(outcome.records.begin(), outcome.records.end(),
              std::back_inserter(result.records));
  }
  result.corpus = Corpus(config.model_name, std::move(examples));
  return result;
}

Corpus ReplayTranscript(std::span<const ElicitationRecord> records,
                        std::string_view source, Split split) {
  std::vector<NLIExample> examples;
  std::unordered_set<std::string> done;
  for (const ElicitationRecord& record : records) {
    if (!record.parsed || done.contains(record.premise_id)) continue;
    done.insert(record.premise_id);
    AppendTriple(examples, record.premise_id, record.premise, *record.parsed,
                 source, split);
  }
  return Corpus(std::string(source), std::move(examples));
}

}  // namespace nliaudit
