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

#include <doctest.h>

#include <random>

#include "condec/evaluation.hpp"
#include "condec/inference.hpp"
#include "support/generators.hpp"

using namespace condec;

namespace {

const std::filesystem::path kFixtures = CONDEC_FIXTURES_DIR;

TreeInstance DevTree() {
  return LoadEntailmentBank(kFixtures / "mini/task_1/dev.jsonl", 1).instances.at(0);
}

}  // namespace

TEST_SUITE("inference") {

TEST_CASE("scripted generator rebuilds a three-step tree in three calls") {
  const auto gold = DevTree();
  std::vector<std::string> script;
  for (const auto& s : gold.gold_tree.steps()) script.push_back(SerializeStep(s) + ";");
  clients::ScriptedGenerator gen(script);
  const auto result = RunStepwiseInference(gold, gen);
  CHECK(result.complete);
  CHECK(gen.calls() == 3);
  CHECK(result.trace.size() == 3);
  CHECK(result.diagnostics.empty());
  CHECK(result.tree.steps() == gold.gold_tree.steps());

  // Each prompt carries the steps accepted so far.
  const auto requests = gen.requests();
  CHECK(requests[0].prompt.ends_with("$proof$ = "));
  CHECK(requests[2].prompt.ends_with("$proof$ = " + SerializeProof({gold.gold_tree.steps()[0], gold.gold_tree.steps()[1]})));
  CHECK(requests[0].max_tokens == InferenceOptions{}.max_tokens);

  clients::BuiltinScorer scorer;
  CHECK(eval::EvaluateTree(result.tree, gold.gold_tree, scorer).overall_all == 1.0);
}

TEST_CASE("a multi-step generation is consumed at once") {
  const auto gold = DevTree();
  clients::ScriptedGenerator gen(std::vector<std::string>{SerializeProof(gold.gold_tree.steps())});
  const auto result = RunStepwiseInference(gold, gen);
  CHECK(result.complete);
  CHECK(gen.calls() == 1);
  CHECK(result.tree.steps().size() == 3);
}

TEST_CASE("steps after the hypothesis are dropped") {
  const auto gold = DevTree();
  clients::ScriptedGenerator gen(std::vector<std::string>{"sent1 & sent2 -> hypothesis; sent3 & sent4 -> int1: x;"});
  const auto result = RunStepwiseInference(gold, gen);
  CHECK(result.complete);
  CHECK(result.tree.steps().size() == 1);
}

TEST_CASE("a generator that never concludes stops at max_steps") {
  const auto gold = DevTree();
  int n = 0;
  clients::FunctionGenerator gen([&](const std::string&, int) {
    ++n;
    return "sent1 & sent2 -> int" + std::to_string(n) + ": again";
  });
  const auto result = RunStepwiseInference(gold, gen, {.max_steps = 7});
  CHECK_FALSE(result.complete);
  CHECK(n == 7);
  REQUIRE(result.diagnostics.size() == 1);
  CHECK(result.diagnostics[0].code == "Incomplete");
  CHECK_FALSE(result.tree.has_hypothesis_step());
}

TEST_CASE("an unparseable generation ends the loop") {
  const auto gold = DevTree();
  clients::ScriptedGenerator gen(std::vector<std::string>{"sent1 & sent2 -> int1: a;", "I think the answer is yes"});
  const auto result = RunStepwiseInference(gold, gen);
  CHECK_FALSE(result.complete);
  CHECK(gen.calls() == 2);
  REQUIRE(result.diagnostics.size() == 1);
  CHECK(result.diagnostics[0].code == "UnparseableGeneration");
  CHECK(result.tree.steps().size() == 1);
}

TEST_CASE("client errors propagate and bad options are rejected") {
  const auto gold = DevTree();
  clients::ScriptedGenerator empty;
  CHECK_THROWS_AS(RunStepwiseInference(gold, empty), ClientError);
  clients::ScriptedGenerator gen(std::vector<std::string>{"x"});
  CHECK_THROWS_AS(RunStepwiseInference(gold, gen, {.max_steps = 0}), Error);
}

TEST_CASE("property: inference terminates on arbitrary generations") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> kind(0, 4), steps(1, 12);
  for (int trial = 0; trial < 200; ++trial) {
    const auto inst = testing::RandomInstance(rng, "i");
    const int max_steps = steps(rng);
    int calls = 0;
    clients::FunctionGenerator gen([&](const std::string&, int) -> std::string {
      ++calls;
      switch (kind(rng)) {
        case 0: return "sent1 & sent2 -> hypothesis;";
        case 1: return "int" + std::to_string(calls) + " & sent3 -> int" + std::to_string(calls + 1) + ": z";
        case 2: return "garbage ->";
        case 3: return "";
        default: return testing::RandomSentence(rng);
      }
    });
    const auto result = RunStepwiseInference(inst, gen, {.max_steps = max_steps});
    CHECK(calls <= max_steps);
    CHECK(result.trace.size() == static_cast<std::size_t>(calls));
    CHECK((result.complete || !result.diagnostics.empty()));
  }
}

}  // TEST_SUITE
