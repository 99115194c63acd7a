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

#include "condec/evaluation.hpp"

#include <algorithm>
#include <tuple>

namespace condec::eval {
namespace {

double Jaccard(const NodeSet& a, const NodeSet& b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t inter = 0;
  for (const auto& x : a) inter += b.contains(x) ? 1 : 0;
  const std::size_t uni = a.size() + b.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

Score MakeScore(std::size_t correct, std::size_t predicted, std::size_t gold) {
  Score s;
  s.f1 = PrfF1(correct, predicted, gold);
  s.all_correct = s.f1 == 1.0 ? 1 : 0;
  return s;
}

}  // namespace

double PrfF1(std::size_t correct, std::size_t predicted, std::size_t gold) {
  if (predicted == 0 && gold == 0) return 1.0;
  const double p = predicted ? static_cast<double>(correct) / predicted : 0.0;
  const double r = gold ? static_cast<double>(correct) / gold : 0.0;
  if (p + r == 0.0) return 0.0;
  return 2.0 * p * r / (p + r);
}

Alignment AlignTrees(const EntailmentTree& pred, const EntailmentTree& gold) {
  Alignment out;
  const NodeId root = NodeId::Hypothesis();
  const auto pred_nodes = pred.concluded_nodes();
  const auto gold_nodes = gold.concluded_nodes();

  if (pred.has_hypothesis_step() && gold.has_hypothesis_step()) {
    out.pairs.emplace(root, root);
    out.jaccard.emplace(root, Jaccard(LeafSignature(pred, root), LeafSignature(gold, root)));
  }

  struct Candidate {
    double jaccard;
    std::size_t gold_step;
    std::size_t pred_step;
    NodeId pred_node;
    NodeId gold_node;
  };
  std::vector<Candidate> candidates;
  for (const auto& p : pred_nodes) {
    if (out.pairs.contains(p)) continue;
    const auto p_step = *pred.concluding_step(p);
    for (const auto& g : gold_nodes) {
      if (g == root && out.pairs.contains(root)) continue;
      const auto g_step = *gold.concluding_step(g);
      const double j = Jaccard(pred.step_signature(p_step), gold.step_signature(g_step));
      if (j > 0.0) candidates.push_back({j, g_step, p_step, p, g});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
    return std::tuple(-a.jaccard, a.gold_step, a.pred_step) <
           std::tuple(-b.jaccard, b.gold_step, b.pred_step);
  });
  NodeSet used_gold;
  for (const auto& [g, _] : out.pairs) used_gold.insert(g);
  for (const auto& c : candidates) {
    if (out.pairs.contains(c.pred_node) || used_gold.contains(c.gold_node)) continue;
    out.pairs.emplace(c.pred_node, c.gold_node);
    out.jaccard.emplace(c.pred_node, c.jaccard);
    used_gold.insert(c.gold_node);
  }
  return out;
}

Score ScoreLeaves(const EntailmentTree& pred, const EntailmentTree& gold) {
  std::size_t correct = 0;
  for (const auto& leaf : pred.leaves()) correct += gold.leaves().contains(leaf) ? 1 : 0;
  if (pred.leaves().empty()) return {};
  return MakeScore(correct, pred.leaves().size(), gold.leaves().size());
}

Score ScoreSteps(const EntailmentTree& pred, const EntailmentTree& gold,
                 const Alignment& alignment) {
  std::size_t correct = 0;
  const auto& steps = pred.steps();
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto& step = steps[i];
    if (pred.concluding_step(step.conclusion) != i) continue;
    const auto gold_node = alignment.gold_for(step.conclusion);
    if (!gold_node) continue;
    const auto gold_step = gold.concluding_step(*gold_node);
    if (!gold_step) continue;

    NodeSet mapped;
    bool ok = true;
    for (const auto& premise : step.premises) {
      if (premise.is_sent()) {
        mapped.insert(premise);
      } else if (auto g = alignment.gold_for(premise); g && premise.is_int()) {
        mapped.insert(*g);
      } else {
        ok = false;
        break;
      }
    }
    if (ok && mapped == gold.steps()[*gold_step].premise_set()) ++correct;
  }
  return MakeScore(correct, steps.size(), gold.steps().size());
}

Score ScoreIntermediates(const EntailmentTree& pred, const EntailmentTree& gold,
                         const Alignment& alignment,
                         clients::SimilarityScorer& scorer, double threshold) {
  std::size_t correct = 0;
  for (const auto& [node, text] : pred.intermediates()) {
    const auto g = alignment.gold_for(node);
    if (!g || !g->is_int()) continue;
    const auto& gold_text = gold.intermediates().at(*g);
    if (scorer.Similarity(text, gold_text) > threshold) ++correct;
  }
  return MakeScore(correct, pred.intermediates().size(), gold.intermediates().size());
}

EvalReport EvaluateTree(const EntailmentTree& pred, const EntailmentTree& gold,
                        clients::SimilarityScorer& scorer, double threshold) {
  const auto alignment = AlignTrees(pred, gold);
  const auto leaves = ScoreLeaves(pred, gold);
  const auto steps = ScoreSteps(pred, gold, alignment);
  const auto interm = ScoreIntermediates(pred, gold, alignment, scorer, threshold);
  EvalReport r;
  r.leaves_f1 = leaves.f1;
  r.leaves_all = leaves.all_correct;
  r.steps_f1 = steps.f1;
  r.steps_all = steps.all_correct;
  r.interm_f1 = interm.f1;
  r.interm_all = interm.all_correct;
  r.overall_all = std::min({leaves.all_correct, steps.all_correct, interm.all_correct});
  r.trees = 1;
  return r;
}

EvalReport Aggregate(const std::vector<EvalReport>& reports) {
  EvalReport mean;
  mean.trees = 0;
  if (reports.empty()) return mean;
  std::size_t trees = 0;
  for (const auto& r : reports) {
    const double w = static_cast<double>(r.trees);
    mean.leaves_f1 += w * r.leaves_f1;
    mean.leaves_all += w * r.leaves_all;
    mean.steps_f1 += w * r.steps_f1;
    mean.steps_all += w * r.steps_all;
    mean.interm_f1 += w * r.interm_f1;
    mean.interm_all += w * r.interm_all;
    mean.overall_all += w * r.overall_all;
    trees += r.trees;
  }
  if (trees == 0) return mean;
  const double inv = 1.0 / static_cast<double>(trees);
  mean.leaves_f1 *= inv;
  mean.leaves_all *= inv;
  mean.steps_f1 *= inv;
  mean.steps_all *= inv;
  mean.interm_f1 *= inv;
  mean.interm_all *= inv;
  mean.overall_all *= inv;
  mean.trees = trees;
  return mean;
}

}  // namespace condec::eval
