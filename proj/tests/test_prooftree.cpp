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

#include "condec/prooftree.hpp"
#include "support/generators.hpp"

using namespace condec;

namespace {

const char* kGoldProof =
    "sent14 & sent5 -> int1: new york state is located in the northern hemisphere; "
    "int1 & sent23 -> int2: december is during the winter for new york state; "
    "int2 & sent15 -> hypothesis;";

std::vector<Fact> CaseStudyLeaves() {
  return {MakeFact(NodeId::Sent(5), "united states is located in the northern hemisphere"),
          MakeFact(NodeId::Sent(14),
                   "new york / new york state is a state located in the united states of america"),
          MakeFact(NodeId::Sent(15), "winter has the least sunlight"),
          MakeFact(NodeId::Sent(22), "the earth being tilted on its rotating axis causes seasons"),
          MakeFact(NodeId::Sent(23), "december is during the winter in the northern hemisphere")};
}

ErrorCode CodeOf(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::kInvalidArgument;
}

}  // namespace

TEST_SUITE("prooftree") {

TEST_CASE("node ids parse case-insensitively and print canonically") {
  CHECK(ParseNodeId("sent14") == NodeId::Sent(14));
  CHECK(ParseNodeId(" INT3 ") == NodeId::Int(3));
  CHECK(ParseNodeId("Hypothesis").is_hypothesis());
  CHECK(NodeId::Sent(7).str() == "sent7");
  CHECK(NodeId::Int(12).str() == "int12");
  CHECK(NodeId::Hypothesis().str() == "hypothesis");
  for (const char* bad : {"sent", "sent0", "sent01", "int-1", "s1", "sent 1", "hyp", "", "int1x"}) {
    CAPTURE(bad);
    CHECK(CodeOf([&] { ParseNodeId(bad); }) == ErrorCode::kBadIdentifier);
  }
}

TEST_CASE("node id round trip over every kind") {
  for (std::uint32_t k = 1; k < 200; k += 7) {
    for (auto id : {NodeId::Sent(k), NodeId::Int(k)}) CHECK(ParseNodeId(id.str()) == id);
  }
  CHECK(ParseNodeId(NodeId::Hypothesis().str()) == NodeId::Hypothesis());
}

TEST_CASE("parse the case-study gold proof") {
  const auto steps = ParseProof(kGoldProof);
  REQUIRE(steps.size() == 3);
  CHECK(steps[0].premises == std::vector<NodeId>{NodeId::Sent(14), NodeId::Sent(5)});
  CHECK(steps[0].conclusion == NodeId::Int(1));
  CHECK(*steps[0].conclusion_text == "new york state is located in the northern hemisphere");
  CHECK(steps[2].premises == std::vector<NodeId>{NodeId::Int(2), NodeId::Sent(15)});
  CHECK(steps[2].conclusion.is_hypothesis());
  CHECK_FALSE(steps[2].conclusion_text.has_value());
}

TEST_CASE("parse minimal and single-intermediate proofs") {
  const auto minimal = ParseProof("sent1 & sent2 -> hypothesis;");
  REQUIRE(minimal.size() == 1);
  CHECK(minimal[0].premises == std::vector<NodeId>{NodeId::Sent(1), NodeId::Sent(2)});

  const auto neptune =
      ParseProof("sent11 & sent24 -> int1: neptune orbits the sun in the solar system;");
  REQUIRE(neptune.size() == 1);
  CHECK(*neptune[0].conclusion_text == "neptune orbits the sun in the solar system");
}

TEST_CASE("parse tolerates whitespace, case and a missing trailing semicolon") {
  const auto steps = ParseProof("  SENT1&sent2->int1 :   x y  ;\n int1 &  sent3 ->  HYPOTHESIS  ");
  REQUIRE(steps.size() == 2);
  CHECK(*steps[0].conclusion_text == "x y");
  CHECK(SerializeProof(steps) == "sent1 & sent2 -> int1: x y; int1 & sent3 -> hypothesis;");
  CHECK(ParseProof("").empty());
  CHECK(ParseProof("   ").empty());
}

TEST_CASE("malformed steps") {
  for (const char* bad : {"sent1 -> -> int1: x", "sent1 & sent2 int1: x;", " -> hypothesis;",
                          "sent1 & -> hypothesis;", "sent1 & sent2 -> sent3;",
                          "sent1 & sent2 -> int1;", "sent1 & sent2 -> int1:   ;",
                          "sent1 & sent2 -> hypothesis: the end;", "sent1 & sent1 -> hypothesis;",
                          "sent1 & sent2 -> int1: a; ; int1 -> hypothesis;", "sent1 & sent2 -> ;"}) {
    CAPTURE(bad);
    CHECK(CodeOf([&] { ParseProof(bad); }) == ErrorCode::kMalformedStep);
  }
  CHECK(CodeOf([&] { ParseProof("fact1 & sent2 -> hypothesis;"); }) == ErrorCode::kBadIdentifier);
  CHECK(CodeOf([&] { ParseProof("sent1 & sent2 -> int0: x;"); }) == ErrorCode::kBadIdentifier);
}

TEST_CASE("lenient parse keeps the well-formed clauses") {
  const auto parsed = ParseProofLenient("sent1 & sent2 -> int1: a; garbage; int1 -> -> x; int1 & sent3 -> hypothesis;");
  CHECK(parsed.steps.size() == 2);
  REQUIRE(parsed.issues.size() == 2);
  CHECK(parsed.issues[0].clause_index == 1);
  CHECK(parsed.issues[1].clause == "int1 -> -> x");
}

TEST_CASE("serialize canonical forms") {
  ProofStep step{{NodeId::Sent(1), NodeId::Sent(2)}, NodeId::Hypothesis(), std::nullopt};
  CHECK(SerializeProof({step}) == "sent1 & sent2 -> hypothesis;");
  CHECK(SerializeProof({}).empty());
  CHECK(SerializeProof(ParseProof(kGoldProof)) == kGoldProof);
}

TEST_CASE("step equality compares premise sets") {
  const auto a = ParseProof("sent1 & sent2 -> int1: x;")[0];
  const auto b = ParseProof("sent2 & sent1 -> int1: x;")[0];
  const auto c = ParseProof("sent2 & sent3 -> int1: x;")[0];
  CHECK(a == b);
  CHECK_FALSE(a == c);
}

TEST_CASE("facts reject DSL delimiters") {
  CHECK(CodeOf([] { MakeFact(NodeId::Sent(1), "a; b"); }) == ErrorCode::kBadFact);
  CHECK(CodeOf([] { MakeFact(NodeId::Sent(1), "a -> b"); }) == ErrorCode::kBadFact);
  CHECK(CodeOf([] { MakeFact(NodeId::Sent(1), "   "); }) == ErrorCode::kBadFact);
  CHECK(MakeFact(NodeId::Sent(1), " spaced ").text == "spaced");
}

TEST_CASE("build the case-study tree") {
  const auto tree = BuildTree("new york state has the least sunlight during december",
                              CaseStudyLeaves(), ParseProof(kGoldProof), ValidationMode::kStrict);
  CHECK(tree.leaves() == NodeSet{NodeId::Sent(14), NodeId::Sent(5), NodeId::Sent(23), NodeId::Sent(15)});
  CHECK(tree.intermediates().size() == 2);
  CHECK(tree.diagnostics().empty());
  CHECK(LeafSignature(tree, NodeId::Int(1)) == NodeSet{NodeId::Sent(14), NodeId::Sent(5)});
  CHECK(LeafSignature(tree, NodeId::Hypothesis()) == tree.leaves());
  CHECK(LeafSignature(tree, NodeId::Sent(22)) == NodeSet{NodeId::Sent(22)});
  CHECK(CodeOf([&] { LeafSignature(tree, NodeId::Int(7)); }) == ErrorCode::kUnknownNode);
  CHECK(CodeOf([&] { LeafSignature(tree, NodeId::Sent(99)); }) == ErrorCode::kUnknownNode);
  CHECK(*tree.text_of(NodeId::Int(2)) == "december is during the winter for new york state");
}

TEST_CASE("strict violations throw and lenient mode records them") {
  const std::vector<Fact> ctx = {MakeFact(NodeId::Sent(1), "a"), MakeFact(NodeId::Sent(2), "b")};
  const auto forward = ParseProof("int9 & sent1 -> int1: x; int1 & sent2 -> hypothesis;");
  CHECK(CodeOf([&] { BuildTree("h", ctx, forward, ValidationMode::kStrict); }) ==
        ErrorCode::kForwardReference);
  const auto lenient = BuildTree("h", ctx, forward, ValidationMode::kLenient);
  REQUIRE(lenient.diagnostics().size() == 1);
  CHECK(lenient.diagnostics()[0].code == "ForwardReference");
  CHECK(LeafSignature(lenient, NodeId::Int(1)) == NodeSet{NodeId::Sent(1)});

  CHECK(CodeOf([&] {
          BuildTree("h", ctx, ParseProof("sent1 & sent2 -> int1: x; sent1 & sent2 -> int1: y; int1 & sent2 -> hypothesis;"),
                    ValidationMode::kStrict);
        }) == ErrorCode::kDuplicateConclusion);
  CHECK(CodeOf([&] {
          BuildTree("h", ctx, ParseProof("sent1 & sent2 -> int1: x;"), ValidationMode::kStrict);
        }) == ErrorCode::kMissingHypothesisStep);
  CHECK(CodeOf([&] {
          BuildTree("h", ctx, ParseProof("sent1 & sent2 -> hypothesis; sent1 & sent2 -> int1: x;"),
                    ValidationMode::kStrict);
        }) == ErrorCode::kMissingHypothesisStep);
  CHECK(CodeOf([&] {
          BuildTree("h", ctx, ParseProof("sent1 & sent3 -> hypothesis;"), ValidationMode::kStrict);
        }) == ErrorCode::kUnknownPremise);
  CHECK(CodeOf([&] { BuildTree("h", ctx, {}, ValidationMode::kStrict); }) ==
        ErrorCode::kMissingHypothesisStep);

  const auto missing = BuildTree("h", ctx, ParseProof("sent1 & sent3 -> int1: x;"), ValidationMode::kLenient);
  CHECK(missing.diagnostics().size() == 2);  // unknown premise + no hypothesis step
  CHECK(missing.leaves().contains(NodeId::Sent(3)));
}

TEST_CASE("lenient cycles stay acyclic") {
  const std::vector<Fact> ctx = {MakeFact(NodeId::Sent(1), "a")};
  const auto tree = BuildTree("h", ctx, ParseProof("int2 & sent1 -> int1: x; int1 -> int2: y; int2 -> hypothesis;"),
                              ValidationMode::kLenient);
  CHECK(LeafSignature(tree, NodeId::Int(1)) == NodeSet{NodeId::Sent(1)});
  CHECK(LeafSignature(tree, NodeId::Hypothesis()) == NodeSet{NodeId::Sent(1)});
}

TEST_CASE("context must hold unique sent facts") {
  const std::vector<Fact> dup = {MakeFact(NodeId::Sent(1), "a"), MakeFact(NodeId::Sent(1), "b")};
  CHECK(CodeOf([&] { BuildTree("h", dup, ParseProof("sent1 -> hypothesis;"), ValidationMode::kStrict); }) ==
        ErrorCode::kDuplicateFact);
  const std::vector<Fact> wrong_kind = {Fact{NodeId::Int(1), "a"}};
  CHECK(CodeOf([&] { BuildTree("h", wrong_kind, {}, ValidationMode::kLenient); }) == ErrorCode::kBadFact);
}

TEST_CASE("single-premise steps are accepted with a warning") {
  const std::vector<Fact> ctx = {MakeFact(NodeId::Sent(1), "a")};
  const auto tree = BuildTree("h", ctx, ParseProof("sent1 -> hypothesis;"), ValidationMode::kStrict);
  REQUIRE(tree.diagnostics().size() == 1);
  CHECK(tree.diagnostics()[0].code == "SinglePremise");
}

TEST_CASE("property: random proofs round-trip and strict trees are topologically ordered") {
  std::mt19937_64 rng(20240601);
  for (int trial = 0; trial < 300; ++trial) {
    const auto spec = testing::RandomTree(rng);
    const auto text = SerializeProof(spec.steps);
    const auto parsed = ParseProof(text);
    REQUIRE(parsed == spec.steps);
    CHECK(SerializeProof(parsed) == text);

    const auto tree = BuildTree(spec.hypothesis, spec.context, parsed, ValidationMode::kStrict);
    for (std::size_t i = 0; i < tree.steps().size(); ++i) {
      for (const auto& p : tree.steps()[i].premises) {
        if (p.is_int()) CHECK(*tree.concluding_step(p) < i);
      }
    }
    // Every int is consumed, so the root covers exactly the leaves.
    CHECK(LeafSignature(tree, NodeId::Hypothesis()) == tree.leaves());
  }
}

TEST_CASE("root signature misses leaves beneath a dangling intermediate") {
  const std::vector<Fact> ctx = {MakeFact(NodeId::Sent(1), "a"), MakeFact(NodeId::Sent(2), "b"),
                                 MakeFact(NodeId::Sent(3), "c")};
  const auto tree = BuildTree("h", ctx, ParseProof("sent1 & sent2 -> int1: x; sent2 & sent3 -> hypothesis;"),
                              ValidationMode::kStrict);
  CHECK(LeafSignature(tree, NodeId::Hypothesis()) != tree.leaves());
}

}  // TEST_SUITE
