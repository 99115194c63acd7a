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

#include "condec/inference.hpp"

namespace condec {

InferenceResult RunStepwiseInference(const TreeInstance& instance,
                                     clients::Generator& generator,
                                     const InferenceOptions& options) {
  if (options.max_steps < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_steps must be >= 1");
  }
  InferenceResult result;
  StepwiseSample sample;
  sample.instance_id = instance.id;
  sample.hypothesis = instance.hypothesis;
  sample.context = instance.context;

  for (int call = 0; call < options.max_steps && !result.complete; ++call) {
    const auto generation = generator.Generate(FormatModelInput(sample), options.max_tokens);
    result.trace.push_back(generation);
    auto parsed = ParseProofLenient(generation);
    if (parsed.steps.empty()) {
      result.diagnostics.push_back(
          {"UnparseableGeneration", std::nullopt,
           "call " + std::to_string(call + 1) + " produced no well-formed step"});
      break;
    }
    for (auto& step : parsed.steps) {
      const bool concludes = step.conclusion.is_hypothesis();
      sample.prior_steps.push_back(std::move(step));
      if (concludes) {
        result.complete = true;
        break;
      }
    }
  }
  if (!result.complete &&
      (result.diagnostics.empty() || result.diagnostics.back().code != "UnparseableGeneration")) {
    result.diagnostics.push_back(
        {"Incomplete", std::nullopt,
         "no hypothesis step after " + std::to_string(result.trace.size()) + " calls"});
  }
  result.tree = BuildTree(instance.hypothesis, instance.context,
                          std::move(sample.prior_steps), ValidationMode::kLenient);
  return result;
}

}  // namespace condec
