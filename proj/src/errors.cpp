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

#include "condec/errors.hpp"

namespace condec {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedStep: return "MalformedStep";
    case ErrorCode::kBadIdentifier: return "BadIdentifier";
    case ErrorCode::kForwardReference: return "ForwardReference";
    case ErrorCode::kDuplicateConclusion: return "DuplicateConclusion";
    case ErrorCode::kMissingHypothesisStep: return "MissingHypothesisStep";
    case ErrorCode::kUnknownPremise: return "UnknownPremise";
    case ErrorCode::kUnknownNode: return "UnknownNode";
    case ErrorCode::kDuplicateFact: return "DuplicateFact";
    case ErrorCode::kBadFact: return "BadFact";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kRecordError: return "RecordError";
    case ErrorCode::kMissingText: return "MissingText";
    case ErrorCode::kEmptyCandidates: return "EmptyCandidates";
    case ErrorCode::kNoCandidates: return "NoCandidates";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kZeroNorm: return "ZeroNorm";
    case ErrorCode::kEmptySequence: return "EmptySequence";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kTimeout: return "Timeout";
    case ErrorCode::kBadStatus: return "BadStatus";
    case ErrorCode::kProtocolError: return "ProtocolError";
    case ErrorCode::kScriptExhausted: return "ScriptExhausted";
  }
  return "Unknown";
}

}  // namespace condec
