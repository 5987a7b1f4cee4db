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

#include <regex>

#include "httplib.h"
#include "nliaudit/elicitation.hpp"

namespace nliaudit {

HttpChatTransport::HttpChatTransport(std::string endpoint, WireSchema schema,
                                     std::optional<std::string> api_key,
                                     std::chrono::milliseconds timeout)
    : schema_(schema), api_key_(std::move(api_key)), timeout_(timeout) {
  static const std::regex kUrl(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch match;
  if (!std::regex_match(endpoint, match, kUrl)) {
    Fail(ErrorCode::kInvalidArgument, "endpoint is not an http(s) URL: " + endpoint);
  }
  base_ = match[1].str();
  path_ = match[2].matched ? match[2].str() : "/";
}

std::string HttpChatTransport::Complete(const ChatRequest& request) {
  // A client per call keeps concurrent requests independent.
  httplib::Client client(base_);
  const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
  const auto micros =
      std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - seconds);
  client.set_connection_timeout(seconds.count(), micros.count());
  client.set_read_timeout(seconds.count(), micros.count());
  client.set_write_timeout(seconds.count(), micros.count());
  httplib::Headers headers;
  if (api_key_) headers.emplace("Authorization", "Bearer " + *api_key_);

  auto response = client.Post(path_, headers, EncodeChatRequest(request, schema_),
                              "application/json");
  if (!response) {
    Fail(ErrorCode::kTransport,
         "request to " + base_ + path_ + " failed: " +
             httplib::to_string(response.error()));
  }
  if (response->status < 200 || response->status >= 300) {
    Fail(ErrorCode::kTransport,
         "endpoint returned HTTP " + std::to_string(response->status));
  }
  return DecodeChatResponse(response->body, schema_);
}

}  // namespace nliaudit
