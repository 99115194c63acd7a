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

#ifndef CONDEC_EVALUATION_HPP_
#define CONDEC_EVALUATION_HPP_

// Leaves / Steps / Intermediates / Overall scoring of a predicted entailment
// tree against a gold tree.
//
// Predicted and gold conclusion nodes are aligned by the Jaccard similarity of
// their leaf signatures: the two hypothesis nodes are paired first, then the
// remaining pairs are taken greedily in descending Jaccard order (ties go to
// the earlier gold step, then the earlier predicted step). Pairs with Jaccard
// 0 are never formed.

#include <map>
#include <vector>

#include "condec/clients.hpp"
#include "condec/prooftree.hpp"

namespace condec::eval {

inline constexpr double kDefaultSimilarityThreshold = 0.28;

struct Alignment {
  std::map<NodeId, NodeId> pairs;    // predicted -> gold
  std::map<NodeId, double> jaccard;  // keyed by predicted node

  std::optional<NodeId> gold_for(NodeId pred) const {
    auto it = pairs.find(pred);
    if (it == pairs.end()) return std::nullopt;
    return it->second;
  }
};

struct Score {
  double f1 = 0.0;
  int all_correct = 0;  // 1 iff f1 == 1
};

struct EvalReport {
  double leaves_f1 = 0.0;
  double leaves_all = 0.0;
  double steps_f1 = 0.0;
  double steps_all = 0.0;
  double interm_f1 = 0.0;
  double interm_all = 0.0;
  double overall_all = 0.0;
  std::size_t trees = 1;  // number of trees averaged
};

/// F1 from a correct count and the two set sizes. Both sizes zero scores 1
/// (nothing to find, nothing wrongly claimed); a zero denominator otherwise
/// contributes 0.
double PrfF1(std::size_t correct, std::size_t predicted, std::size_t gold);

Alignment AlignTrees(const EntailmentTree& pred, const EntailmentTree& gold);

Score ScoreLeaves(const EntailmentTree& pred, const EntailmentTree& gold);

/// A predicted step is correct when it is the concluding step of an aligned
/// node and its premises, with int premises mapped through the alignment,
/// equal the premises of the aligned gold step.
Score ScoreSteps(const EntailmentTree& pred, const EntailmentTree& gold,
                 const Alignment& alignment);

/// An aligned predicted int is correct when scorer(pred, gold) > threshold.
Score ScoreIntermediates(const EntailmentTree& pred, const EntailmentTree& gold,
                         const Alignment& alignment,
                         clients::SimilarityScorer& scorer,
                         double threshold = kDefaultSimilarityThreshold);

EvalReport EvaluateTree(const EntailmentTree& pred, const EntailmentTree& gold,
                        clients::SimilarityScorer& scorer,
                        double threshold = kDefaultSimilarityThreshold);

/// Field-wise arithmetic mean; `trees` is the total tree count.
EvalReport Aggregate(const std::vector<EvalReport>& reports);

}  // namespace condec::eval

#endif  // CONDEC_EVALUATION_HPP_
