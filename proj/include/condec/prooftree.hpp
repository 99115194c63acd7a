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

#ifndef CONDEC_PROOFTREE_HPP_
#define CONDEC_PROOFTREE_HPP_

// Entailment-tree data model, the proof DSL and structural validation.
//
// DSL (canonical form):
//   proof := (step "; ")* step ";"
//   step  := id (" & " id)* " -> " ( "hypothesis" | intid ": " text )

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "condec/errors.hpp"

namespace condec {

enum class NodeKind : std::uint8_t { kSent = 0, kInt = 1, kHypothesis = 2 };

/// Identifier of a tree node: `sent<k>`, `int<k>` or `hypothesis`.
/// Ordering is by kind (sent < int < hypothesis), then by index.
struct NodeId {
  NodeKind kind = NodeKind::kSent;
  std::uint32_t index = 0;  // 0 only for the hypothesis

  static NodeId Sent(std::uint32_t k) { return {NodeKind::kSent, k}; }
  static NodeId Int(std::uint32_t k) { return {NodeKind::kInt, k}; }
  static NodeId Hypothesis() { return {NodeKind::kHypothesis, 0}; }

  bool is_sent() const { return kind == NodeKind::kSent; }
  bool is_int() const { return kind == NodeKind::kInt; }
  bool is_hypothesis() const { return kind == NodeKind::kHypothesis; }

  /// Lowercase canonical text form.
  std::string str() const;

  friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

/// Parses an identifier token. Case-insensitive; surrounding whitespace is
/// ignored. Throws Error(kBadIdentifier).
NodeId ParseNodeId(std::string_view token);

using NodeSet = std::set<NodeId>;

/// A context sentence or intermediate conclusion.
struct Fact {
  NodeId id;
  std::string text;

  friend bool operator==(const Fact&, const Fact&) = default;
};

/// Builds a fact, checking that the text is non-empty and free of the DSL
/// delimiters `;` and `->`. Throws Error(kBadFact).
Fact MakeFact(NodeId id, std::string_view text);

/// True when `text` may appear as a fact or conclusion text.
bool IsValidFactText(std::string_view text);

/// One entailment step `premises -> conclusion`.
struct ProofStep {
  std::vector<NodeId> premises;  // textual order kept for serialization
  NodeId conclusion;
  std::optional<std::string> conclusion_text;  // present iff conclusion is int

  NodeSet premise_set() const { return {premises.begin(), premises.end()}; }

  /// Premises compare as a set; the order is presentation only.
  friend bool operator==(const ProofStep& a, const ProofStep& b) {
    return a.conclusion == b.conclusion &&
           a.conclusion_text == b.conclusion_text &&
           a.premise_set() == b.premise_set() &&
           a.premises.size() == b.premises.size();
  }
};

/// Checks the per-step invariants and throws Error(kMalformedStep) on
/// violation.
void ValidateStep(const ProofStep& step);

/// Parses a `;`-separated proof. Throws Error(kMalformedStep) or
/// Error(kBadIdentifier) on the first bad clause.
std::vector<ProofStep> ParseProof(std::string_view text);

struct ParseIssue {
  std::size_t clause_index = 0;
  std::string clause;
  std::string message;
};

struct LenientParse {
  std::vector<ProofStep> steps;
  std::vector<ParseIssue> issues;
};

/// Parses clause by clause, keeping every well-formed step and reporting the
/// rest. Used for model output, which is often only partially well formed.
LenientParse ParseProofLenient(std::string_view text);

std::string SerializeStep(const ProofStep& step);
std::string SerializeProof(const std::vector<ProofStep>& steps);

enum class ValidationMode { kStrict, kLenient };

/// Non-fatal finding attached to a tree or pipeline result. `code` is an
/// ErrorCode name for violations, or a warning tag such as "SinglePremise".
struct Diagnostic {
  std::string code;
  std::optional<std::size_t> step_index;
  std::string message;
};

/// Validated entailment tree (hypothesis, leaves, intermediates, steps).
///
/// Immutable once built. In lenient mode a premise that refers to an int not
/// concluded by an earlier step is left unresolved: it contributes nothing to
/// leaf signatures, which keeps every derived structure acyclic.
class EntailmentTree {
 public:
  const std::string& hypothesis_text() const { return hypothesis_; }
  const std::map<NodeId, Fact>& context() const { return context_; }
  const std::vector<ProofStep>& steps() const { return steps_; }
  const NodeSet& leaves() const { return leaves_; }
  const std::map<NodeId, std::string>& intermediates() const {
    return intermediates_;
  }
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }
  ValidationMode mode() const { return mode_; }

  /// Index of the step that concludes `node` (first such step).
  std::optional<std::size_t> concluding_step(NodeId node) const;

  /// Nodes concluded by some step, in step order (int and hypothesis only).
  std::vector<NodeId> concluded_nodes() const;

  bool has_hypothesis_step() const {
    return concluding_step(NodeId::Hypothesis()).has_value();
  }

  /// Leaf ids beneath the conclusion of step `step_index`.
  const NodeSet& step_signature(std::size_t step_index) const {
    return step_signatures_.at(step_index);
  }

  /// Text for a sent (context), int (its conclusion) or the hypothesis.
  std::optional<std::string> text_of(NodeId node) const;

  /// All known node texts, used by the negatives pipeline.
  std::map<NodeId, std::string> texts() const;

 private:
  friend EntailmentTree BuildTree(std::string hypothesis,
                                  const std::vector<Fact>& context,
                                  std::vector<ProofStep> steps,
                                  ValidationMode mode);

  std::string hypothesis_;
  std::map<NodeId, Fact> context_;
  std::vector<ProofStep> steps_;
  NodeSet leaves_;
  std::map<NodeId, std::string> intermediates_;
  std::map<NodeId, std::size_t> concluded_by_;
  std::vector<NodeSet> step_signatures_;
  std::vector<Diagnostic> diagnostics_;
  ValidationMode mode_ = ValidationMode::kStrict;
};

/// Validates and assembles a tree. Context ids must be unique sent ids
/// (Error(kDuplicateFact) / Error(kBadFact) otherwise). Strict mode throws
/// kForwardReference, kDuplicateConclusion, kMissingHypothesisStep or
/// kUnknownPremise; lenient mode records them as diagnostics instead.
/// Single-premise steps are accepted with a warning diagnostic in both modes.
EntailmentTree BuildTree(std::string hypothesis,
                         const std::vector<Fact>& context,
                         std::vector<ProofStep> steps, ValidationMode mode);

/// Leaf ids reachable beneath `node`. Throws Error(kUnknownNode).
NodeSet LeafSignature(const EntailmentTree& tree, NodeId node);

}  // namespace condec

#endif  // CONDEC_PROOFTREE_HPP_
