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

#include <fstream>

#include "condec/dataset.hpp"
#include "condec/negatives.hpp"
#include "condec/records.hpp"

using namespace condec;

namespace {

const std::filesystem::path kFixtures = CONDEC_FIXTURES_DIR;

ErrorCode CodeOf(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::kInvalidArgument;
}

std::filesystem::path WriteTemp(const std::string& name, const std::string& body) {
  const auto dir = std::filesystem::temp_directory_path() / "condec_dataset";
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream(path) << body;
  return path;
}

const char* kGood =
    R"({"id": "a", "hypothesis": "h", "proof": "sent1 & sent2 -> hypothesis;", "context": "sent1: x y sent2: z sent3: w"})";

}  // namespace

TEST_SUITE("dataset") {

TEST_CASE("context blocks split on sentN markers") {
  const auto facts = ParseContextBlock("sent1: the sun is a star sent2: stars produce light sent10:  x ");
  REQUIRE(facts.size() == 3);
  CHECK(facts[0].text == "the sun is a star");
  CHECK(facts[1].id == NodeId::Sent(2));
  CHECK(facts[2].id == NodeId::Sent(10));
  CHECK(facts[2].text == "x");
  // Markers need a word boundary before them.
  const auto glued = ParseContextBlock("sent1: consent2: is a word");
  REQUIRE(glued.size() == 1);
  CHECK(glued[0].text == "consent2: is a word");
  CHECK(ParseContextBlock("").empty());
  CHECK(CodeOf([] { ParseContextBlock("no markers here"); }) == ErrorCode::kRecordError);
}

TEST_CASE("records accept string and object contexts") {
  const auto a = ParseRecord(kGood, 2);
  CHECK(a.id == "a");
  CHECK(a.context.size() == 3);
  CHECK(a.gold_tree.leaves().size() == 2);

  const auto b = ParseRecord(
      R"({"hypothesis": "h", "proof": "sent2 & sent1 -> hypothesis;", "context": {"sent2": "z", "sent1": "x y"}})", 1);
  CHECK(b.id.empty());
  REQUIRE(b.context.size() == 2);
  CHECK(b.context[0].id == NodeId::Sent(1));
}

TEST_CASE("bad records name their cause") {
  for (const char* bad : {"not json", "[]", R"({"hypothesis": "h", "context": "sent1: a"})",
                          R"({"hypothesis": "h", "proof": "sent1 & sent9 -> hypothesis;", "context": "sent1: a sent2: b"})",
                          R"({"hypothesis": "h", "proof": "sent1 & sent2 -> int1: a;", "context": "sent1: a sent2: b"})",
                          R"({"hypothesis": "h", "proof": "sent1 & sent2 -> hypothesis;", "context": 3})",
                          R"({"hypothesis": " ", "proof": "sent1 & sent2 -> hypothesis;", "context": "sent1: a sent2: b"})",
                          R"({"hypothesis": "h", "proof": "sent1 & sent2 -> hypothesis;", "context": "sent1: a sent1: b"})"}) {
    CAPTURE(bad);
    CHECK(CodeOf([&] { ParseRecord(bad, 1); }) == ErrorCode::kRecordError);
  }
  // Task 2 needs distractors.
  CHECK(CodeOf([] {
          ParseRecord(R"({"hypothesis": "h", "proof": "sent1 & sent2 -> hypothesis;", "context": "sent1: a sent2: b"})", 2);
        }) == ErrorCode::kRecordError);
  CHECK(CodeOf([] { ParseRecord(kGood, 4); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("strict and tolerant loading") {
  const auto path = WriteTemp("mixed.jsonl", std::string(kGood) + "\n\n{broken\n" + kGood + "\n");
  try {
    LoadEntailmentBank(path, 1);
    FAIL("strict load should fail");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kRecordError);
    CHECK(std::string(e.what()).find("mixed.jsonl:3") != std::string::npos);
  }
  const auto tolerant = LoadEntailmentBank(path, 1, Ingestion::kTolerant);
  CHECK(tolerant.instances.size() == 2);
  REQUIRE(tolerant.diagnostics.size() == 1);
  CHECK(tolerant.diagnostics[0].line == 3);
  CHECK(CodeOf([] { LoadEntailmentBank("/nonexistent/x.jsonl", 1); }) == ErrorCode::kIoError);

  const auto anonymous = WriteTemp(
      "anon.jsonl", R"({"hypothesis": "h", "proof": "sent1 & sent2 -> hypothesis;", "context": "sent1: a sent2: b"})");
  CHECK(LoadEntailmentBank(anonymous, 1).instances.at(0).id == "line1");
}

TEST_CASE("bundled splits have the hand-counted sizes") {
  for (int task : {1, 2}) {
    const auto dir = kFixtures / "mini" / ("task_" + std::to_string(task));
    const auto train = LoadEntailmentBank(dir / "train.jsonl", task).instances;
    CHECK(train.size() == 3);
    CHECK(LoadEntailmentBank(dir / "dev.jsonl", task).instances.size() == 1);
    CHECK(LoadEntailmentBank(dir / "test.jsonl", task).instances.size() == 1);
    CHECK(ExportReasonerPairs(train).size() == 9);
  }
}

TEST_CASE("case-study record") {
  const auto inst = LoadEntailmentBank(kFixtures / "case_study_task2.jsonl", 2).instances.at(0);
  CHECK(inst.context.size() == 24);
  CHECK(inst.gold_tree.steps().size() == 3);
  CHECK(inst.gold_tree.leaves() ==
        NodeSet{NodeId::Sent(5), NodeId::Sent(14), NodeId::Sent(15), NodeId::Sent(23)});
}

TEST_CASE("stepwise samples") {
  const auto inst = LoadEntailmentBank(kFixtures / "mini/task_1/dev.jsonl", 1).instances.at(0);
  const auto samples = ExtractStepwiseSamples(inst, SampleStrategy::kPerStep);
  REQUIRE(samples.size() == 3);
  CHECK(samples[0].prior_steps.empty());
  CHECK(samples[2].prior_steps.size() == 2);
  CHECK(samples[2].target_text() == "int2 & sent4 -> hypothesis;");
  CHECK(FormatModelInput(samples[0]) ==
        "$hypothesis$ = new york state has the least sunlight during december ; $context$ = "
        "sent1: new york / new york state is a state located in the united states of america "
        "sent2: united states is located in the northern hemisphere "
        "sent3: december is during the winter in the northern hemisphere "
        "sent4: winter has the least sunlight ; $proof$ = ");
  const auto third = FormatModelInput(samples[2]);
  CHECK(third.find("sent4: winter has the least sunlight int1: new york state is located in the northern "
                   "hemisphere int2: december is during the winter for new york state ; $proof$ = "
                   "sent1 & sent2 -> int1:") != std::string::npos);

  const auto full = ExtractStepwiseSamples(inst, SampleStrategy::kFullTree);
  REQUIRE(full.size() == 1);
  CHECK(full[0].target_text() == SerializeProof(inst.gold_tree.steps()));

  const auto record = records::StepwiseRecord(samples[1]);
  CHECK(record.at("target") == "int1 & sent3 -> int2: december is during the winter for new york state;");
}

}  // TEST_SUITE
