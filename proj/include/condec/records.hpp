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

#ifndef CONDEC_RECORDS_HPP_
#define CONDEC_RECORDS_HPP_

// Line-delimited JSON records written and read by the pipelines.

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "condec/dataset.hpp"
#include "condec/evaluation.hpp"
#include "condec/negatives.hpp"

namespace condec::records {

using nlohmann::json;

/// {"instance_id", "input", "target"}
json StepwiseRecord(const StepwiseSample& sample);

/// {"instance_id", "step_index", "input", "target"}
json ReasonerPairRecord(const ReasonerPair& pair);

/// {"instance_id", "task", "step_index", "kind", "base_step", "negative_step",
///  "checker_score"?, "selector"?} with steps as DSL strings.
json NegativeRecord(const HardNegative& negative);
HardNegative NegativeFromRecord(const json& record);

/// {"record": "summary", "tasks": {"<task>": {...}}, "failures": n}
json StatsRecord(const std::map<int, TaskStats>& stats, std::size_t failures);
std::map<int, TaskStats> StatsFromRecord(const json& record);

json ReportRecord(const eval::EvalReport& report);

json DiagnosticRecord(const Diagnostic& diagnostic);

/// Predictions: {"id", "proof"}.
struct Prediction {
  std::string id;
  std::string proof;
};

/// Reads a prediction file; throws Error(kIoError) / Error(kRecordError).
std::vector<Prediction> LoadPredictions(const std::filesystem::path& path);

/// Reads every JSON line of a file, skipping blank lines.
std::vector<json> ReadJsonLines(const std::filesystem::path& path);

/// True for the {"record": "config"} header line that every output starts with.
bool IsConfigHeader(const json& record);

}  // namespace condec::records

#endif  // CONDEC_RECORDS_HPP_
