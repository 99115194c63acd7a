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

#include "condec/negatives.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>
#include <unordered_map>

#include "condec/text.hpp"

namespace condec {
namespace {

std::string StripTrailingPeriods(std::string_view s) {
  s = Trim(s);
  while (!s.empty() && (s.back() == '.' || s.back() == ' ')) s.remove_suffix(1);
  return std::string(s);
}

const std::string& TextOrThrow(const std::map<NodeId, std::string>& texts,
                               NodeId id) {
  auto it = texts.find(id);
  if (it == texts.end()) {
    throw Error(ErrorCode::kMissingText, "no text for " + id.str());
  }
  return it->second;
}

std::vector<std::string> PremiseTexts(const std::vector<NodeId>& premises,
                                      const std::map<NodeId, std::string>& texts) {
  std::vector<std::string> out;
  out.reserve(premises.size());
  for (const auto& p : premises) out.push_back(TextOrThrow(texts, p));
  return out;
}

struct InstanceResult {
  std::vector<HardNegative> negatives;
  TaskStats stats;
  std::vector<ClientFailure> failures;
};

void Accumulate(TaskStats& into, const TaskStats& from) {
  into.gold_steps += from.gold_steps;
  into.vanilla += from.vanilla;
  into.candidates += from.candidates;
  into.retained += from.retained;
  into.collisions += from.collisions;
  into.no_candidates += from.no_candidates;
  into.bad_generations += from.bad_generations;
  into.client_failures += from.client_failures;
}

InstanceResult ProcessInstance(const TreeInstance& instance,
                               std::size_t instance_index,
                               const NegativeConfig& config,
                               clients::Generator* reasoner,
                               clients::Checker* checker) {
  InstanceResult result;
  const auto& steps = instance.gold_tree.steps();
  const auto texts = instance.gold_tree.texts();
  std::vector<NodeSet> gold_sets;
  for (const auto& s : steps) gold_sets.push_back(s.premise_set());

  result.stats.gold_steps = steps.size();
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (config.vanilla) {
      auto rng = DeriveRng(config.seed, instance_index, i, 0);
      auto neg = MakeVanillaNegative(steps[i], texts, rng);
      neg.instance_id = instance.id;
      neg.task = instance.task;
      neg.step_index = i;
      result.negatives.push_back(std::move(neg));
      ++result.stats.vanilla;
    }
    if (!config.enhanced) continue;

    for (int sample = 0; sample < config.samples_per_step; ++sample) {
      // Stream 0 is the vanilla draw; enhanced samples use 1, 2, ...
      auto rng = DeriveRng(config.seed, instance_index, i,
                           1 + static_cast<std::uint64_t>(sample));
      try {
        auto outcome =
            MakeEnhancedNegative(steps[i], instance.context, texts, gold_sets,
                                 *reasoner, *checker, config.enhanced_options, rng);
        switch (outcome.status) {
          case EnhancedStatus::kRetained:
            ++result.stats.candidates;
            ++result.stats.retained;
            outcome.negative->instance_id = instance.id;
            outcome.negative->task = instance.task;
            outcome.negative->step_index = i;
            result.negatives.push_back(std::move(*outcome.negative));
            break;
          case EnhancedStatus::kFiltered:
            ++result.stats.candidates;
            break;
          case EnhancedStatus::kCollision:
            ++result.stats.collisions;
            break;
          case EnhancedStatus::kBadGeneration:
            ++result.stats.bad_generations;
            break;
        }
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kNoCandidates) {
          ++result.stats.no_candidates;
          break;  // the same for every sample
        }
        if (!IsServiceError(e.code())) throw;
        ++result.stats.client_failures;
        result.failures.push_back({instance.id, i, e.what()});
      }
    }
  }
  return result;
}

}  // namespace

std::size_t UniformIndex(Rng& rng, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "UniformIndex over empty range");
  const std::uint64_t range = n;
  // 2^64 mod range; draws below it would bias the modulo.
  const std::uint64_t threshold = (0 - range) % range;
  while (true) {
    const std::uint64_t r = rng();
    if (r >= threshold) return static_cast<std::size_t>(r % range);
  }
}

Rng DeriveRng(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
              std::uint64_t c) {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{lo(seed), hi(seed), lo(a), hi(a), lo(b), hi(b), lo(c), hi(c)};
  return Rng(seq);
}

std::string_view ToString(NegativeKind kind) {
  return kind == NegativeKind::kVanilla ? "vanilla" : "enhanced";
}

std::string_view ToString(Selector selector) {
  return selector == Selector::kRandom ? "random" : "bm25";
}

std::vector<std::pair<NodeId, double>> Bm25Rank(std::string_view query,
                                               const std::vector<Fact>& candidates,
                                               const Bm25Params& params) {
  if (candidates.empty()) {
    throw Error(ErrorCode::kEmptyCandidates, "bm25 needs at least one candidate");
  }
  if (!(params.k1 > 0.0) || !(params.b >= 0.0 && params.b <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "bm25 needs k1 > 0 and b in [0, 1]");
  }
  const double n_docs = static_cast<double>(candidates.size());
  std::vector<std::unordered_map<std::string, int>> tf(candidates.size());
  std::vector<double> length(candidates.size());
  std::unordered_map<std::string, int> df;
  double total_length = 0.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto tokens = Tokenize(candidates[i].text);
    length[i] = static_cast<double>(tokens.size());
    total_length += length[i];
    for (const auto& t : tokens) ++tf[i][t];
    for (const auto& [t, count] : tf[i]) ++df[t];
  }
  const double avg_length = total_length / n_docs;

  std::vector<std::pair<NodeId, double>> ranked;
  ranked.reserve(candidates.size());
  const auto query_tokens = Tokenize(query);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    double score = 0.0;
    for (const auto& q : query_tokens) {
      auto it = tf[i].find(q);
      if (it == tf[i].end()) continue;
      const double f = it->second;
      const double d = df.at(q);
      const double idf = std::log((n_docs - d + 0.5) / (d + 0.5) + 1.0);
      const double norm =
          avg_length > 0.0 ? 1.0 - params.b + params.b * length[i] / avg_length : 1.0;
      score += idf * f * (params.k1 + 1.0) / (f + params.k1 * norm);
    }
    ranked.emplace_back(candidates[i].id, score);
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return ranked;
}

NodeId NegativeConclusionId(const ProofStep& base,
                            const std::map<NodeId, std::string>& texts) {
  if (base.conclusion.is_int()) return base.conclusion;
  std::uint32_t max_int = 0;
  for (const auto& [id, text] : texts) {
    if (id.is_int()) max_int = std::max(max_int, id.index);
  }
  for (const auto& p : base.premises) {
    if (p.is_int()) max_int = std::max(max_int, p.index);
  }
  return NodeId::Int(max_int + 1);
}

HardNegative MakeVanillaNegative(const ProofStep& step,
                                 const std::map<NodeId, std::string>& texts,
                                 Rng& rng) {
  ValidateStep(step);
  for (const auto& p : step.premises) TextOrThrow(texts, p);
  const auto& chosen = step.premises[UniformIndex(rng, step.premises.size())];

  HardNegative neg;
  neg.kind = NegativeKind::kVanilla;
  neg.base_step = step;
  neg.negative_step.premises = step.premises;
  neg.negative_step.conclusion = NegativeConclusionId(step, texts);
  neg.negative_step.conclusion_text = TextOrThrow(texts, chosen);
  return neg;
}

std::vector<NodeId> SamplePremiseSubstitution(
    const ProofStep& step, const std::vector<Fact>& context,
    const std::map<NodeId, std::string>& texts, Rng& rng,
    const SubstitutionOptions& options) {
  ValidateStep(step);
  const auto current = step.premise_set();
  std::vector<Fact> pool;
  for (const auto& fact : context) {
    if (!current.contains(fact.id)) pool.push_back(fact);
  }
  if (pool.empty()) {
    throw Error(ErrorCode::kNoCandidates,
                "context has no fact outside the premises of " + SerializeStep(step));
  }
  const std::size_t slot = UniformIndex(rng, step.premises.size());

  NodeId replacement;
  if (pool.size() == 1) {
    replacement = pool.front().id;
  } else if (options.selector == Selector::kRandom) {
    replacement = pool[UniformIndex(rng, pool.size())].id;
  } else {
    const auto& query = TextOrThrow(texts, step.premises[slot]);
    const auto ranked = Bm25Rank(query, pool, options.bm25);
    const std::size_t k = std::clamp<std::size_t>(options.bm25_top_k, 1, ranked.size());
    replacement = ranked[k == 1 ? 0 : UniformIndex(rng, k)].first;
  }
  auto premises = step.premises;
  premises[slot] = replacement;
  return premises;
}

ReasonerIo FormatReasonerIo(const std::vector<std::string>& premises,
                            const std::optional<std::string>& conclusion) {
  if (premises.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "reasoner input needs premises");
  }
  ReasonerIo io;
  io.input = "Because ";
  for (std::size_t i = 0; i < premises.size(); ++i) {
    if (i) io.input += " and ";
    io.input += StripTrailingPeriods(premises[i]);
  }
  io.input += '.';
  if (conclusion) io.target = "Therefore, " + StripTrailingPeriods(*conclusion) + ".";
  return io;
}

std::optional<std::string> ParseReasonerOutput(std::string_view generation) {
  auto text = Trim(generation);
  if (ToLower(text.substr(0, 9)) == "therefore") {
    text.remove_prefix(9);
    text = Trim(text);
    if (!text.empty() && text.front() == ',') text.remove_prefix(1);
  }
  auto conclusion = StripTrailingPeriods(text);
  if (!IsValidFactText(conclusion)) return std::nullopt;
  return conclusion;
}

EnhancedOutcome MakeEnhancedNegative(const ProofStep& step,
                                     const std::vector<Fact>& context,
                                     const std::map<NodeId, std::string>& texts,
                                     const std::vector<NodeSet>& gold_premise_sets,
                                     clients::Generator& reasoner,
                                     clients::Checker& checker,
                                     const EnhancedOptions& options, Rng& rng) {
  EnhancedOutcome outcome;
  bool unseen = false;
  for (int attempt = 0; attempt < std::max(1, options.max_attempts); ++attempt) {
    outcome.premises = SamplePremiseSubstitution(step, context, texts, rng,
                                                 options.substitution);
    const NodeSet sampled(outcome.premises.begin(), outcome.premises.end());
    if (std::find(gold_premise_sets.begin(), gold_premise_sets.end(), sampled) ==
        gold_premise_sets.end()) {
      unseen = true;
      break;
    }
  }
  if (!unseen) {
    outcome.status = EnhancedStatus::kCollision;
    return outcome;
  }

  const auto premise_texts = PremiseTexts(outcome.premises, texts);
  const auto io = FormatReasonerIo(premise_texts);
  const auto generated = ParseReasonerOutput(reasoner.Generate(io.input, options.max_tokens));
  if (!generated) {
    outcome.status = EnhancedStatus::kBadGeneration;
    return outcome;
  }
  outcome.conclusion = *generated;
  const double score = checker.Check(premise_texts, *generated);
  outcome.score = score;
  if (score < options.threshold) {
    outcome.status = EnhancedStatus::kFiltered;
    return outcome;
  }

  HardNegative neg;
  neg.kind = NegativeKind::kEnhanced;
  neg.base_step = step;
  neg.negative_step.premises = outcome.premises;
  neg.negative_step.conclusion = NegativeConclusionId(step, texts);
  neg.negative_step.conclusion_text = *generated;
  neg.checker_score = score;
  neg.selector = options.substitution.selector;
  outcome.negative = std::move(neg);
  outcome.status = EnhancedStatus::kRetained;
  return outcome;
}

std::vector<ReasonerPair> ExportReasonerPairs(const std::vector<TreeInstance>& instances) {
  std::vector<ReasonerPair> pairs;
  for (const auto& instance : instances) {
    const auto texts = instance.gold_tree.texts();
    const auto& steps = instance.gold_tree.steps();
    for (std::size_t i = 0; i < steps.size(); ++i) {
      const auto io = FormatReasonerIo(PremiseTexts(steps[i].premises, texts),
                                       TextOrThrow(texts, steps[i].conclusion));
      pairs.push_back({instance.id, i, io.input, *io.target});
    }
  }
  return pairs;
}

NegativeCorpus BuildNegativeCorpus(const std::vector<TreeInstance>& instances,
                                   const NegativeConfig& config,
                                   clients::Generator* reasoner,
                                   clients::Checker* checker) {
  if (config.enhanced && (reasoner == nullptr || checker == nullptr)) {
    throw Error(ErrorCode::kInvalidArgument,
                "enhanced negatives need a reasoner and a checker");
  }
  const double t = config.enhanced_options.threshold;
  if (!(t >= 0.0 && t <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "threshold must lie in [0, 1]");
  }
  if (config.samples_per_step < 1) {
    throw Error(ErrorCode::kInvalidArgument, "samples_per_step must be >= 1");
  }
  if (config.parallelism < 1) {
    throw Error(ErrorCode::kInvalidArgument, "parallelism must be >= 1");
  }

  std::vector<InstanceResult> results(instances.size());
  std::vector<std::exception_ptr> errors(instances.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < instances.size(); i = next++) {
      try {
        results[i] = ProcessInstance(instances[i], i, config, reasoner, checker);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto n_threads = std::min<std::size_t>(
      static_cast<std::size_t>(config.parallelism), std::max<std::size_t>(1, instances.size()));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t k = 0; k < n_threads; ++k) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  NegativeCorpus corpus;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    auto& r = results[i];
    Accumulate(corpus.stats[instances[i].task], r.stats);
    std::move(r.negatives.begin(), r.negatives.end(),
              std::back_inserter(corpus.negatives));
    std::move(r.failures.begin(), r.failures.end(),
              std::back_inserter(corpus.failures));
  }
  return corpus;
}

}  // namespace condec
