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

#ifndef CONDEC_INFERENCE_HPP_
#define CONDEC_INFERENCE_HPP_

#include <string>
#include <vector>

#include "condec/clients.hpp"
#include "condec/dataset.hpp"
#include "condec/prooftree.hpp"

namespace condec {

struct InferenceOptions {
  int max_steps = 20;   // generator calls, not proof steps
  int max_tokens = 128;
};

struct InferenceResult {
  EntailmentTree tree;              // lenient
  std::vector<std::string> trace;   // raw generations, one per call
  std::vector<Diagnostic> diagnostics;
  bool complete = false;            // a step concluded the hypothesis
};

/// Stepwise decoding loop. Each call formats the hypothesis, the context and
/// the steps accepted so far, asks the generator for the next step and appends
/// every well-formed step of its answer (stopping at a hypothesis step).
/// A generation with no well-formed step ends the loop with an
/// "UnparseableGeneration" diagnostic; reaching max_steps calls without a
/// hypothesis step adds "Incomplete". Client errors propagate.
InferenceResult RunStepwiseInference(const TreeInstance& instance,
                                     clients::Generator& generator,
                                     const InferenceOptions& options = {});

}  // namespace condec

#endif  // CONDEC_INFERENCE_HPP_
