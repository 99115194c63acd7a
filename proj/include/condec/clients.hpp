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

#ifndef CONDEC_CLIENTS_HPP_
#define CONDEC_CLIENTS_HPP_

// Clients for the external neural roles and their in-process mocks.
//
// Wire protocol (HTTP, JSON bodies, UTF-8):
//   POST /v1/generate   {"prompt": str, "max_tokens": int} -> {"text": str}
//   POST /v1/check      {"premises": [str], "conclusion": str} -> {"score": float}
//   POST /v1/similarity {"candidate": str, "reference": str} -> {"score": float}
// Non-200 responses carry {"error": str}.

#include <chrono>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "condec/errors.hpp"

namespace condec::clients {

/// Generator and reasoner role.
class Generator {
 public:
  virtual ~Generator() = default;
  virtual std::string Generate(const std::string& prompt, int max_tokens) = 0;
};

/// Plausibility checker role; scores lie in [0, 1].
class Checker {
 public:
  virtual ~Checker() = default;
  virtual double Check(const std::vector<std::string>& premises,
                       const std::string& conclusion) = 0;
};

/// Text similarity role used for intermediate conclusions.
class SimilarityScorer {
 public:
  virtual ~SimilarityScorer() = default;
  virtual double Similarity(const std::string& candidate,
                            const std::string& reference) = 0;
};

enum class Role { kGenerator, kReasoner, kChecker, kScorer };

struct ServiceEndpoint {
  std::string base_url;  // e.g. http://127.0.0.1:8080
  Role role = Role::kGenerator;
  std::chrono::milliseconds timeout{30'000};
  int retries = 2;
  std::chrono::milliseconds initial_backoff{200};
  std::string bearer_token;
};

/// Reads CONDEC_GENERATOR_URL / CONDEC_CHECKER_URL / CONDEC_SCORER_URL.
/// The reasoner shares the generator variable.
std::optional<std::string> EndpointFromEnv(Role role);

/// POSTs a JSON body and returns the parsed JSON response text.
///
/// Connection failures, timeouts, 429 and 5xx responses are retried up to
/// `retries` times with exponential backoff; other statuses fail at once.
/// Throws ClientError(kTimeout | kBadStatus | kProtocolError).
std::string PostJson(const ServiceEndpoint& endpoint, const std::string& path,
                     const std::string& body);

class RemoteGenerator final : public Generator {
 public:
  explicit RemoteGenerator(ServiceEndpoint endpoint);
  std::string Generate(const std::string& prompt, int max_tokens) override;

 private:
  ServiceEndpoint endpoint_;
};

class RemoteChecker final : public Checker {
 public:
  explicit RemoteChecker(ServiceEndpoint endpoint);
  /// Out-of-range or non-finite scores are a ProtocolError, never clamped.
  double Check(const std::vector<std::string>& premises,
               const std::string& conclusion) override;

 private:
  ServiceEndpoint endpoint_;
};

class RemoteScorer final : public SimilarityScorer {
 public:
  explicit RemoteScorer(ServiceEndpoint endpoint);
  /// Raw service score; values outside [0, 1] pass through.
  double Similarity(const std::string& candidate,
                    const std::string& reference) override;

 private:
  ServiceEndpoint endpoint_;
};

/// Token-level F1, deterministic and in-process.
class BuiltinScorer final : public SimilarityScorer {
 public:
  double Similarity(const std::string& candidate,
                    const std::string& reference) override;
};

// ---------------------------------------------------------------------------
// Mocks

struct GenerateRequest {
  std::string prompt;
  int max_tokens = 0;
  friend bool operator==(const GenerateRequest&, const GenerateRequest&) = default;
};

struct CheckRequest {
  std::vector<std::string> premises;
  std::string conclusion;
  friend bool operator==(const CheckRequest&, const CheckRequest&) = default;
};

/// Replays canned responses in order and records every request. An optional
/// matcher per entry rejects unexpected requests with ProtocolError.
/// Running past the end of the script throws ScriptExhausted.
class ScriptedGenerator final : public Generator {
 public:
  using Matcher = std::function<bool(const GenerateRequest&)>;
  struct Entry {
    std::string response;
    Matcher matcher;  // empty: accept anything
  };

  ScriptedGenerator() = default;
  explicit ScriptedGenerator(std::vector<std::string> responses);
  explicit ScriptedGenerator(std::vector<Entry> entries);

  std::string Generate(const std::string& prompt, int max_tokens) override;

  std::vector<GenerateRequest> requests() const;
  std::size_t calls() const;

 private:
  mutable std::mutex mu_;
  std::vector<Entry> entries_;
  std::size_t next_ = 0;
  std::vector<GenerateRequest> requests_;
};

/// Pure-function generator; safe for concurrent use if the function is.
class FunctionGenerator final : public Generator {
 public:
  using Fn = std::function<std::string(const std::string&, int)>;
  explicit FunctionGenerator(Fn fn) : fn_(std::move(fn)) {}
  std::string Generate(const std::string& prompt, int max_tokens) override {
    return fn_(prompt, max_tokens);
  }

 private:
  Fn fn_;
};

class ScriptedChecker final : public Checker {
 public:
  explicit ScriptedChecker(std::vector<double> scores);
  double Check(const std::vector<std::string>& premises,
               const std::string& conclusion) override;
  std::vector<CheckRequest> requests() const;

 private:
  mutable std::mutex mu_;
  std::vector<double> scores_;
  std::size_t next_ = 0;
  std::vector<CheckRequest> requests_;
};

class FunctionChecker final : public Checker {
 public:
  using Fn = std::function<double(const std::vector<std::string>&,
                                  const std::string&)>;
  explicit FunctionChecker(Fn fn) : fn_(std::move(fn)) {}
  double Check(const std::vector<std::string>& premises,
               const std::string& conclusion) override;

 private:
  Fn fn_;
};

/// 1.0 iff the conclusion shares a token with every premise, else 0.2.
std::unique_ptr<Checker> MakeOverlapChecker();

/// Always returns `score`.
std::unique_ptr<Checker> MakeConstantChecker(double score);

/// Reasoner stand-in: answers a `Because a and b.` prompt with
/// `Therefore, a and b.`. Deterministic.
std::unique_ptr<Generator> MakeConjoiningReasoner();

}  // namespace condec::clients

#endif  // CONDEC_CLIENTS_HPP_
