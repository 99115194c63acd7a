/* Copyright 2026 The ConDec Toolkit Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "condec/clients.hpp"

#include <cmath>
#include <cstdlib>
#include <set>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "condec/text.hpp"

namespace condec::clients {
namespace {

using nlohmann::json;

struct SplitUrl {
  std::string scheme_host_port;
  std::string path_prefix;
};

SplitUrl SplitBaseUrl(const std::string& url) {
  const auto scheme_end = url.find("://");
  const auto host_begin = scheme_end == std::string::npos ? 0 : scheme_end + 3;
  const auto slash = url.find('/', host_begin);
  if (slash == std::string::npos) return {url, ""};
  std::string prefix = url.substr(slash);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {url.substr(0, slash), prefix};
}

bool Retryable(int status) { return status == 429 || status >= 500; }

std::string ErrorText(const std::string& body) {
  try {
    const auto j = json::parse(body);
    if (j.is_object() && j.contains("error") && j["error"].is_string()) {
      return j["error"].get<std::string>();
    }
  } catch (const json::exception&) {
  }
  return body.substr(0, 200);
}

json ParseResponse(const std::string& body, const char* field) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::exception& e) {
    throw ClientError(ErrorCode::kProtocolError,
                      std::string("response is not JSON: ") + e.what(), 1);
  }
  if (!j.is_object() || !j.contains(field)) {
    throw ClientError(ErrorCode::kProtocolError,
                      std::string("response lacks field '") + field + "'", 1);
  }
  return j.at(field);
}

double ScoreField(const std::string& body) {
  const auto v = ParseResponse(body, "score");
  if (!v.is_number()) {
    throw ClientError(ErrorCode::kProtocolError, "score is not a number", 1);
  }
  const double s = v.get<double>();
  if (!std::isfinite(s)) {
    throw ClientError(ErrorCode::kProtocolError, "score is not finite", 1);
  }
  return s;
}

double ValidateCheckScore(double s) {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw ClientError(ErrorCode::kProtocolError,
                      "checker score " + std::to_string(s) + " outside [0, 1]", 1);
  }
  return s;
}

void RequireNonEmpty(const std::vector<std::string>& premises) {
  if (premises.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "check() needs at least one premise");
  }
}

std::string StripReasonerPrompt(std::string_view prompt) {
  auto p = Trim(prompt);
  if (p.starts_with("Because ")) p.remove_prefix(8);
  while (!p.empty() && (p.back() == '.' || p.back() == ' ')) p.remove_suffix(1);
  return std::string(p);
}

}  // namespace

std::optional<std::string> EndpointFromEnv(Role role) {
  const char* name = nullptr;
  switch (role) {
    case Role::kGenerator:
    case Role::kReasoner: name = "CONDEC_GENERATOR_URL"; break;
    case Role::kChecker: name = "CONDEC_CHECKER_URL"; break;
    case Role::kScorer: name = "CONDEC_SCORER_URL"; break;
  }
  const char* value = std::getenv(name);
  if (value == nullptr || *value == '\0') return std::nullopt;
  return std::string(value);
}

std::string PostJson(const ServiceEndpoint& endpoint, const std::string& path,
                     const std::string& body) {
  if (endpoint.retries < 0) {
    throw Error(ErrorCode::kInvalidArgument, "retries must be >= 0");
  }
  const auto url = SplitBaseUrl(endpoint.base_url);
  httplib::Client client(url.scheme_host_port);
  if (!client.is_valid()) {
    throw ClientError(ErrorCode::kTimeout,
                      "invalid endpoint URL '" + endpoint.base_url + "'", 0);
  }
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(endpoint.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(
      endpoint.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());
  if (!endpoint.bearer_token.empty()) {
    client.set_bearer_token_auth(endpoint.bearer_token);
  }

  const std::string full_path = url.path_prefix + path;
  auto backoff = endpoint.initial_backoff;
  std::string last_error;
  int last_status = 0;
  const int max_attempts = endpoint.retries + 1;
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    if (attempt > 1) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    auto res = client.Post(full_path, body, "application/json");
    if (!res) {
      last_status = 0;
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status == 200) return res->body;
    last_status = res->status;
    last_error = ErrorText(res->body);
    if (!Retryable(res->status)) {
      throw ClientError(ErrorCode::kBadStatus,
                        endpoint.base_url + full_path + ": " + last_error,
                        attempt, res->status);
    }
  }
  if (last_status != 0) {
    throw ClientError(ErrorCode::kBadStatus,
                      endpoint.base_url + full_path + ": " + last_error,
                      max_attempts, last_status);
  }
  throw ClientError(ErrorCode::kTimeout,
                    endpoint.base_url + full_path + " unreachable: " + last_error,
                    max_attempts);
}

RemoteGenerator::RemoteGenerator(ServiceEndpoint endpoint)
    : endpoint_(std::move(endpoint)) {}

std::string RemoteGenerator::Generate(const std::string& prompt, int max_tokens) {
  if (prompt.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "generate() needs a non-empty prompt");
  }
  const json body = {{"prompt", prompt}, {"max_tokens", max_tokens}};
  const auto text = ParseResponse(PostJson(endpoint_, "/v1/generate", body.dump()), "text");
  if (!text.is_string()) {
    throw ClientError(ErrorCode::kProtocolError, "text is not a string", 1);
  }
  return std::string(TrimRight(text.get<std::string>()));
}

RemoteChecker::RemoteChecker(ServiceEndpoint endpoint)
    : endpoint_(std::move(endpoint)) {}

double RemoteChecker::Check(const std::vector<std::string>& premises,
                            const std::string& conclusion) {
  RequireNonEmpty(premises);
  const json body = {{"premises", premises}, {"conclusion", conclusion}};
  return ValidateCheckScore(ScoreField(PostJson(endpoint_, "/v1/check", body.dump())));
}

RemoteScorer::RemoteScorer(ServiceEndpoint endpoint)
    : endpoint_(std::move(endpoint)) {}

double RemoteScorer::Similarity(const std::string& candidate,
                                const std::string& reference) {
  const json body = {{"candidate", candidate}, {"reference", reference}};
  return ScoreField(PostJson(endpoint_, "/v1/similarity", body.dump()));
}

double BuiltinScorer::Similarity(const std::string& candidate,
                                 const std::string& reference) {
  return TokenF1(candidate, reference);
}

ScriptedGenerator::ScriptedGenerator(std::vector<std::string> responses) {
  for (auto& r : responses) entries_.push_back({std::move(r), {}});
}

ScriptedGenerator::ScriptedGenerator(std::vector<Entry> entries)
    : entries_(std::move(entries)) {}

std::string ScriptedGenerator::Generate(const std::string& prompt,
                                        int max_tokens) {
  std::lock_guard lock(mu_);
  GenerateRequest request{prompt, max_tokens};
  requests_.push_back(request);
  if (next_ >= entries_.size()) {
    throw ClientError(ErrorCode::kScriptExhausted,
                      "scripted generator has no response for call " +
                          std::to_string(next_ + 1),
                      1);
  }
  const auto& entry = entries_[next_++];
  if (entry.matcher && !entry.matcher(request)) {
    throw ClientError(ErrorCode::kProtocolError,
                      "unexpected request at call " + std::to_string(next_), 1);
  }
  return std::string(TrimRight(entry.response));
}

std::vector<GenerateRequest> ScriptedGenerator::requests() const {
  std::lock_guard lock(mu_);
  return requests_;
}

std::size_t ScriptedGenerator::calls() const {
  std::lock_guard lock(mu_);
  return requests_.size();
}

ScriptedChecker::ScriptedChecker(std::vector<double> scores)
    : scores_(std::move(scores)) {}

double ScriptedChecker::Check(const std::vector<std::string>& premises,
                              const std::string& conclusion) {
  RequireNonEmpty(premises);
  std::lock_guard lock(mu_);
  requests_.push_back({premises, conclusion});
  if (next_ >= scores_.size()) {
    throw ClientError(ErrorCode::kScriptExhausted,
                      "scripted checker has no score for call " +
                          std::to_string(next_ + 1),
                      1);
  }
  return ValidateCheckScore(scores_[next_++]);
}

std::vector<CheckRequest> ScriptedChecker::requests() const {
  std::lock_guard lock(mu_);
  return requests_;
}

double FunctionChecker::Check(const std::vector<std::string>& premises,
                              const std::string& conclusion) {
  RequireNonEmpty(premises);
  return ValidateCheckScore(fn_(premises, conclusion));
}

std::unique_ptr<Checker> MakeOverlapChecker() {
  return std::make_unique<FunctionChecker>(
      [](const std::vector<std::string>& premises, const std::string& conclusion) {
        const auto c = Tokenize(conclusion);
        const std::set<std::string> conclusion_tokens(c.begin(), c.end());
        for (const auto& p : premises) {
          bool shared = false;
          for (const auto& t : Tokenize(p)) {
            if (conclusion_tokens.contains(t)) {
              shared = true;
              break;
            }
          }
          if (!shared) return 0.2;
        }
        return 1.0;
      });
}

std::unique_ptr<Checker> MakeConstantChecker(double score) {
  return std::make_unique<FunctionChecker>(
      [score](const std::vector<std::string>&, const std::string&) { return score; });
}

std::unique_ptr<Generator> MakeConjoiningReasoner() {
  return std::make_unique<FunctionGenerator>([](const std::string& prompt, int) {
    return "Therefore, " + StripReasonerPrompt(prompt) + ".";
  });
}

}  // namespace condec::clients
