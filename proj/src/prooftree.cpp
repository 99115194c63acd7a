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

#include "condec/prooftree.hpp"

#include <algorithm>
#include <charconv>

#include "condec/text.hpp"

namespace condec {
namespace {

constexpr std::string_view kArrow = "->";

std::optional<std::uint32_t> ParseIndex(std::string_view digits) {
  if (digits.empty() || digits.front() == '0') return std::nullopt;
  std::uint32_t value = 0;
  const auto* end = digits.data() + digits.size();
  auto [ptr, ec] = std::from_chars(digits.data(), end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

ProofStep ParseClause(std::string_view clause) {
  const auto arrow = clause.find(kArrow);
  if (arrow == std::string_view::npos) {
    throw Error(ErrorCode::kMalformedStep,
                "missing '->' in '" + std::string(clause) + "'");
  }
  if (clause.find(kArrow, arrow + kArrow.size()) != std::string_view::npos) {
    throw Error(ErrorCode::kMalformedStep,
                "more than one '->' in '" + std::string(clause) + "'");
  }

  ProofStep step;
  const auto lhs = Trim(clause.substr(0, arrow));
  if (lhs.empty()) {
    throw Error(ErrorCode::kMalformedStep,
                "empty premise list in '" + std::string(clause) + "'");
  }
  std::size_t begin = 0;
  while (true) {
    const auto amp = lhs.find('&', begin);
    const auto token = Trim(lhs.substr(
        begin, amp == std::string_view::npos ? std::string_view::npos
                                             : amp - begin));
    if (token.empty()) {
      throw Error(ErrorCode::kMalformedStep,
                  "empty premise in '" + std::string(clause) + "'");
    }
    step.premises.push_back(ParseNodeId(token));
    if (amp == std::string_view::npos) break;
    begin = amp + 1;
  }

  const auto rhs = clause.substr(arrow + kArrow.size());
  const auto colon = rhs.find(':');
  const auto id_part = Trim(rhs.substr(0, colon));
  if (id_part.empty()) {
    throw Error(ErrorCode::kMalformedStep,
                "missing conclusion in '" + std::string(clause) + "'");
  }
  step.conclusion = ParseNodeId(id_part);
  if (colon != std::string_view::npos) {
    step.conclusion_text = std::string(Trim(rhs.substr(colon + 1)));
  }
  ValidateStep(step);
  return step;
}

template <typename OnClause>
void ForEachClause(std::string_view text, OnClause&& on_clause) {
  std::size_t begin = 0;
  std::size_t index = 0;
  while (begin <= text.size()) {
    const auto semi = text.find(';', begin);
    const auto raw = text.substr(
        begin, semi == std::string_view::npos ? std::string_view::npos
                                              : semi - begin);
    const bool last = semi == std::string_view::npos;
    const auto clause = Trim(raw);
    if (clause.empty()) {
      // Only the tail after the final ';' (or an all-blank input) may be empty.
      if (!last) on_clause(index, clause, /*empty_inside=*/true);
    } else {
      on_clause(index, clause, false);
    }
    ++index;
    if (last) break;
    begin = semi + 1;
  }
}

}  // namespace

std::string NodeId::str() const {
  switch (kind) {
    case NodeKind::kSent: return "sent" + std::to_string(index);
    case NodeKind::kInt: return "int" + std::to_string(index);
    case NodeKind::kHypothesis: return "hypothesis";
  }
  return {};
}

NodeId ParseNodeId(std::string_view token) {
  const std::string lowered = ToLower(Trim(token));
  const std::string_view t = lowered;
  if (t == "hypothesis") return NodeId::Hypothesis();
  std::optional<std::uint32_t> index;
  NodeKind kind = NodeKind::kSent;
  if (t.starts_with("sent")) {
    index = ParseIndex(t.substr(4));
  } else if (t.starts_with("int")) {
    kind = NodeKind::kInt;
    index = ParseIndex(t.substr(3));
  }
  if (!index) {
    throw Error(ErrorCode::kBadIdentifier,
                "'" + std::string(Trim(token)) + "' is not sentN, intN or hypothesis");
  }
  return {kind, *index};
}

bool IsValidFactText(std::string_view text) {
  return !Trim(text).empty() && text.find(';') == std::string_view::npos &&
         text.find(kArrow) == std::string_view::npos;
}

Fact MakeFact(NodeId id, std::string_view text) {
  if (id.is_hypothesis()) {
    throw Error(ErrorCode::kBadFact, "the hypothesis is not a fact");
  }
  if (!IsValidFactText(text)) {
    throw Error(ErrorCode::kBadFact,
                id.str() + " text is empty or contains ';' or '->'");
  }
  return {id, std::string(Trim(text))};
}

void ValidateStep(const ProofStep& step) {
  if (step.premises.empty()) {
    throw Error(ErrorCode::kMalformedStep, "empty premise list");
  }
  if (step.premise_set().size() != step.premises.size()) {
    throw Error(ErrorCode::kMalformedStep,
                "repeated premise in step concluding " + step.conclusion.str());
  }
  switch (step.conclusion.kind) {
    case NodeKind::kSent:
      throw Error(ErrorCode::kMalformedStep,
                  "conclusion " + step.conclusion.str() + " is a sent id");
    case NodeKind::kInt:
      if (!step.conclusion_text || step.conclusion_text->empty()) {
        throw Error(ErrorCode::kMalformedStep,
                    step.conclusion.str() + " concluded without text");
      }
      if (!IsValidFactText(*step.conclusion_text)) {
        throw Error(ErrorCode::kMalformedStep,
                    step.conclusion.str() + " text contains ';' or '->'");
      }
      break;
    case NodeKind::kHypothesis:
      if (step.conclusion_text) {
        throw Error(ErrorCode::kMalformedStep,
                    "hypothesis conclusion must not carry text");
      }
      break;
  }
}

std::vector<ProofStep> ParseProof(std::string_view text) {
  std::vector<ProofStep> steps;
  ForEachClause(text, [&](std::size_t, std::string_view clause, bool empty) {
    if (empty) throw Error(ErrorCode::kMalformedStep, "empty clause");
    steps.push_back(ParseClause(clause));
  });
  return steps;
}

LenientParse ParseProofLenient(std::string_view text) {
  LenientParse out;
  ForEachClause(text, [&](std::size_t index, std::string_view clause,
                          bool empty) {
    if (empty) return;
    try {
      out.steps.push_back(ParseClause(clause));
    } catch (const Error& e) {
      out.issues.push_back({index, std::string(clause), e.what()});
    }
  });
  return out;
}

std::string SerializeStep(const ProofStep& step) {
  std::string out;
  for (std::size_t i = 0; i < step.premises.size(); ++i) {
    if (i) out += " & ";
    out += step.premises[i].str();
  }
  out += " -> ";
  out += step.conclusion.str();
  if (step.conclusion_text) {
    out += ": ";
    out += *step.conclusion_text;
  }
  return out;
}

std::string SerializeProof(const std::vector<ProofStep>& steps) {
  std::string out;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (i) out += ' ';
    out += SerializeStep(steps[i]);
    out += ';';
  }
  return out;
}

std::optional<std::size_t> EntailmentTree::concluding_step(NodeId node) const {
  auto it = concluded_by_.find(node);
  if (it == concluded_by_.end()) return std::nullopt;
  return it->second;
}

std::vector<NodeId> EntailmentTree::concluded_nodes() const {
  std::vector<std::pair<std::size_t, NodeId>> order;
  for (const auto& [node, step] : concluded_by_) order.emplace_back(step, node);
  std::sort(order.begin(), order.end());
  std::vector<NodeId> out;
  for (const auto& [step, node] : order) out.push_back(node);
  return out;
}

std::optional<std::string> EntailmentTree::text_of(NodeId node) const {
  switch (node.kind) {
    case NodeKind::kSent: {
      auto it = context_.find(node);
      if (it == context_.end()) return std::nullopt;
      return it->second.text;
    }
    case NodeKind::kInt: {
      auto it = intermediates_.find(node);
      if (it == intermediates_.end()) return std::nullopt;
      return it->second;
    }
    case NodeKind::kHypothesis:
      return hypothesis_;
  }
  return std::nullopt;
}

std::map<NodeId, std::string> EntailmentTree::texts() const {
  std::map<NodeId, std::string> out;
  for (const auto& [id, fact] : context_) out.emplace(id, fact.text);
  for (const auto& [id, text] : intermediates_) out.emplace(id, text);
  out.emplace(NodeId::Hypothesis(), hypothesis_);
  return out;
}

EntailmentTree BuildTree(std::string hypothesis,
                         const std::vector<Fact>& context,
                         std::vector<ProofStep> steps, ValidationMode mode) {
  EntailmentTree tree;
  tree.mode_ = mode;
  tree.hypothesis_ = std::move(hypothesis);
  for (const auto& fact : context) {
    if (!fact.id.is_sent()) {
      throw Error(ErrorCode::kBadFact,
                  "context id " + fact.id.str() + " is not a sent id");
    }
    if (!IsValidFactText(fact.text)) {
      throw Error(ErrorCode::kBadFact,
                  fact.id.str() + " text is empty or contains ';' or '->'");
    }
    if (!tree.context_.emplace(fact.id, fact).second) {
      throw Error(ErrorCode::kDuplicateFact, "duplicate context id " + fact.id.str());
    }
  }

  auto report = [&](ErrorCode code, std::optional<std::size_t> step,
                    const std::string& message) {
    if (mode == ValidationMode::kStrict) throw Error(code, message);
    tree.diagnostics_.push_back(
        {std::string(ErrorCodeName(code)), step, message});
  };

  for (std::size_t i = 0; i < steps.size(); ++i) {
    const ProofStep& step = steps[i];
    ValidateStep(step);
    if (step.premises.size() == 1) {
      tree.diagnostics_.push_back(
          {"SinglePremise", i, "step " + std::to_string(i + 1) +
                                   " has a single premise"});
    }
    NodeSet signature;
    for (const NodeId& premise : step.premises) {
      switch (premise.kind) {
        case NodeKind::kSent:
          if (!tree.context_.contains(premise)) {
            report(ErrorCode::kUnknownPremise, i,
                   premise.str() + " is not in the context");
          }
          tree.leaves_.insert(premise);
          signature.insert(premise);
          break;
        case NodeKind::kInt: {
          auto it = tree.concluded_by_.find(premise);
          if (it == tree.concluded_by_.end()) {
            report(ErrorCode::kForwardReference, i,
                   premise.str() + " is not concluded by an earlier step");
          } else {
            const auto& sub = tree.step_signatures_[it->second];
            signature.insert(sub.begin(), sub.end());
          }
          break;
        }
        case NodeKind::kHypothesis:
          report(ErrorCode::kForwardReference, i,
                 "hypothesis used as a premise");
          break;
      }
    }
    if (!tree.concluded_by_.emplace(step.conclusion, i).second) {
      report(ErrorCode::kDuplicateConclusion, i,
             step.conclusion.str() + " is concluded more than once");
    } else if (step.conclusion.is_int()) {
      tree.intermediates_.emplace(step.conclusion, *step.conclusion_text);
    }
    tree.step_signatures_.push_back(std::move(signature));
  }

  const auto hyp = tree.concluding_step(NodeId::Hypothesis());
  if (!hyp) {
    report(ErrorCode::kMissingHypothesisStep, std::nullopt,
           "no step concludes the hypothesis");
  } else if (*hyp + 1 != steps.size()) {
    report(ErrorCode::kMissingHypothesisStep, *hyp,
           "the hypothesis step is not the last step");
  }
  tree.steps_ = std::move(steps);
  return tree;
}

NodeSet LeafSignature(const EntailmentTree& tree, NodeId node) {
  if (node.is_sent()) {
    if (!tree.context().contains(node) && !tree.leaves().contains(node)) {
      throw Error(ErrorCode::kUnknownNode, node.str() + " is not in the tree");
    }
    return {node};
  }
  const auto step = tree.concluding_step(node);
  if (!step) {
    throw Error(ErrorCode::kUnknownNode, node.str() + " is never concluded");
  }
  return tree.step_signature(*step);
}

}  // namespace condec
