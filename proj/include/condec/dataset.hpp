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

#ifndef CONDEC_DATASET_HPP_
#define CONDEC_DATASET_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "condec/prooftree.hpp"

namespace condec {

/// One benchmark record: hypothesis, its context and the strict gold tree.
struct TreeInstance {
  std::string id;
  int task = 1;
  std::string hypothesis;
  std::vector<Fact> context;  // file order
  EntailmentTree gold_tree;
};

enum class Ingestion { kStrict, kTolerant };

struct RecordDiagnostic {
  std::size_t line = 0;  // 1-based
  std::string cause;
};

struct LoadResult {
  std::vector<TreeInstance> instances;
  std::vector<RecordDiagnostic> diagnostics;
};

/// Splits a `sent1: ... sent2: ...` context block into facts.
std::vector<Fact> ParseContextBlock(std::string_view block);

/// Parses one JSON record. `context` may be a numbered string block or an
/// object mapping ids to texts. Throws Error(kRecordError) with the cause.
TreeInstance ParseRecord(std::string_view json_line, int task);

/// Reads line-delimited records. Blank lines are ignored. In strict ingestion
/// a bad record throws Error(kRecordError) naming the line; in tolerant
/// ingestion it is skipped and reported. Missing files throw Error(kIoError).
LoadResult LoadEntailmentBank(const std::filesystem::path& path, int task,
                              Ingestion mode = Ingestion::kStrict);

/// Training instance for stepwise decoding.
struct StepwiseSample {
  std::string instance_id;
  std::string hypothesis;
  std::vector<Fact> context;
  std::vector<ProofStep> prior_steps;
  /// One step for per-step samples; the whole proof for full-tree samples.
  std::vector<ProofStep> target;

  std::string target_text() const { return SerializeProof(target); }
};

enum class SampleStrategy { kPerStep, kFullTree };

std::vector<StepwiseSample> ExtractStepwiseSamples(const TreeInstance& instance,
                                                   SampleStrategy strategy);

/// `$hypothesis$ = <h> ; $context$ = sent1: <t1> ... intK: <tK> ; $proof$ = <prior>`
///
/// Conclusions of the prior steps are appended to the context block as int
/// facts, in step order.
std::string FormatModelInput(const StepwiseSample& sample);

}  // namespace condec

#endif  // CONDEC_DATASET_HPP_
