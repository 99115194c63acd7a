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

#ifndef CONDEC_ERRORS_HPP_
#define CONDEC_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace condec {

enum class ErrorCode {
  // Proof DSL.
  kMalformedStep,
  kBadIdentifier,
  // Tree validation.
  kForwardReference,
  kDuplicateConclusion,
  kMissingHypothesisStep,
  kUnknownPremise,
  kUnknownNode,
  kDuplicateFact,
  kBadFact,
  // Ingestion.
  kIoError,
  kRecordError,
  // Negatives.
  kMissingText,
  kEmptyCandidates,
  kNoCandidates,
  // Loss kernel.
  kShapeMismatch,
  kZeroNorm,
  kEmptySequence,
  kInvalidArgument,
  // Service clients.
  kTimeout,
  kBadStatus,
  kProtocolError,
  kScriptExhausted,
};

std::string_view ErrorCodeName(ErrorCode code);

/// Base exception for every failure raised by the toolkit. The code is the
/// stable, testable part; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by the remote service clients once retries are exhausted or a
/// non-retryable failure occurs.
class ClientError : public Error {
 public:
  ClientError(ErrorCode code, const std::string& message, int attempts,
              int http_status = 0)
      : Error(code, message + " (attempts=" + std::to_string(attempts) +
                        (http_status ? ", status=" + std::to_string(http_status)
                                     : std::string()) +
                        ")"),
        attempts_(attempts),
        http_status_(http_status) {}

  int attempts() const noexcept { return attempts_; }
  int http_status() const noexcept { return http_status_; }

 private:
  int attempts_;
  int http_status_;
};

inline bool IsServiceError(ErrorCode code) {
  return code == ErrorCode::kTimeout || code == ErrorCode::kBadStatus ||
         code == ErrorCode::kProtocolError ||
         code == ErrorCode::kScriptExhausted;
}

}  // namespace condec

#endif  // CONDEC_ERRORS_HPP_
