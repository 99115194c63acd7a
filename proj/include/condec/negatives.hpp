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

#ifndef CONDEC_NEGATIVES_HPP_
#define CONDEC_NEGATIVES_HPP_

// Hard-negative construction for contrastive training.
//
// Vanilla negatives keep a gold step's premises and replace its conclusion
// with the text of one premise (the repetition error). Enhanced negatives
// swap one premise for another context fact, let a reasoner write a
// conclusion for the new premise set, and keep the result only when a
// plausibility checker scores it at or above a threshold.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "condec/clients.hpp"
#include "condec/dataset.hpp"
#include "condec/prooftree.hpp"

namespace condec {

using Rng = std::mt19937_64;

/// Uniform integer in [0, n). Rejection sampling on the raw engine output so
/// results do not depend on the standard library's distribution code.
std::size_t UniformIndex(Rng& rng, std::size_t n);

/// Engine seeded from (seed, a, b, c) through std::seed_seq.
Rng DeriveRng(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
              std::uint64_t c);

enum class NegativeKind { kVanilla, kEnhanced };
enum class Selector { kRandom, kBm25 };

std::string_view ToString(NegativeKind kind);
std::string_view ToString(Selector selector);

struct HardNegative {
  std::string instance_id;
  int task = 0;
  std::size_t step_index = 0;
  ProofStep base_step;
  ProofStep negative_step;
  NegativeKind kind = NegativeKind::kVanilla;
  std::optional<double> checker_score;  // enhanced only
  std::optional<Selector> selector;     // enhanced only
};

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
};

/// Okapi BM25 with idf = ln((N - df + 0.5) / (df + 0.5) + 1). Every query
/// token occurrence contributes. Sorted by descending score, ties by
/// ascending id. Throws Error(kEmptyCandidates).
std::vector<std::pair<NodeId, double>> Bm25Rank(std::string_view query,
                                               const std::vector<Fact>& candidates,
                                               const Bm25Params& params = {});

/// Id the perturbed step concludes: the base int itself, or, for a
/// hypothesis-concluding base, the next int id after every int in `texts`.
NodeId NegativeConclusionId(const ProofStep& base,
                            const std::map<NodeId, std::string>& texts);

/// Replaces the conclusion text with the text of a uniformly chosen premise.
/// Throws Error(kMissingText) when a premise has no text.
HardNegative MakeVanillaNegative(const ProofStep& step,
                                 const std::map<NodeId, std::string>& texts,
                                 Rng& rng);

struct SubstitutionOptions {
  Selector selector = Selector::kRandom;
  Bm25Params bm25;
  std::size_t bm25_top_k = 1;  // bm25 picks uniformly among the top k
};

/// Returns the premise list with one uniformly chosen slot replaced by a
/// context fact that is not already a premise. The bm25 selector queries with
/// the replaced premise's text. Throws Error(kNoCandidates) or
/// Error(kMissingText).
std::vector<NodeId> SamplePremiseSubstitution(
    const ProofStep& step, const std::vector<Fact>& context,
    const std::map<NodeId, std::string>& texts, Rng& rng,
    const SubstitutionOptions& options = {});

struct ReasonerIo {
  std::string input;
  std::optional<std::string> target;
};

/// `Because p1 and p2 ... .` and, with a conclusion, `Therefore, c.`
/// Trailing periods on the inputs are dropped before templating.
ReasonerIo FormatReasonerIo(const std::vector<std::string>& premises,
                            const std::optional<std::string>& conclusion = std::nullopt);

/// Extracts the conclusion from a reasoner generation (`Therefore, c.` or a
/// bare sentence). Returns nullopt if nothing usable remains.
std::optional<std::string> ParseReasonerOutput(std::string_view generation);

struct EnhancedOptions {
  double threshold = 0.9;
  SubstitutionOptions substitution;
  int max_tokens = 64;
  int max_attempts = 10;  // re-samples when the premise set is a gold one
};

enum class EnhancedStatus { kRetained, kFiltered, kCollision, kBadGeneration };

struct EnhancedOutcome {
  EnhancedStatus status = EnhancedStatus::kFiltered;
  std::optional<HardNegative> negative;  // set iff kRetained
  std::optional<double> score;           // set for kRetained and kFiltered
  std::vector<NodeId> premises;          // the sampled premise list
  std::string conclusion;
};

/// One enhanced-negative attempt for `step`. `gold_premise_sets` holds the
/// premise sets of every gold step in the instance; a sampled set equal to one
/// of them is re-drawn up to max_attempts times, then reported as kCollision.
/// Client errors propagate.
EnhancedOutcome MakeEnhancedNegative(const ProofStep& step,
                                     const std::vector<Fact>& context,
                                     const std::map<NodeId, std::string>& texts,
                                     const std::vector<NodeSet>& gold_premise_sets,
                                     clients::Generator& reasoner,
                                     clients::Checker& checker,
                                     const EnhancedOptions& options, Rng& rng);

/// Reasoner training pair derived from one gold step.
struct ReasonerPair {
  std::string instance_id;
  std::size_t step_index = 0;
  std::string input;
  std::string target;
};

std::vector<ReasonerPair> ExportReasonerPairs(const std::vector<TreeInstance>& instances);

struct NegativeConfig {
  bool vanilla = true;
  bool enhanced = false;
  EnhancedOptions enhanced_options;
  int samples_per_step = 1;  // enhanced attempts per gold step
  std::uint64_t seed = 0;
  int parallelism = 1;
};

struct TaskStats {
  std::size_t gold_steps = 0;
  std::size_t vanilla = 0;
  std::size_t candidates = 0;  // enhanced negatives scored by the checker
  std::size_t retained = 0;    // enhanced negatives at or above threshold
  std::size_t collisions = 0;
  std::size_t no_candidates = 0;
  std::size_t bad_generations = 0;
  std::size_t client_failures = 0;
};

struct ClientFailure {
  std::string instance_id;
  std::size_t step_index = 0;
  std::string message;
};

struct NegativeCorpus {
  std::vector<HardNegative> negatives;  // ordered by (instance, step, kind)
  std::map<int, TaskStats> stats;       // keyed by task
  std::vector<ClientFailure> failures;
};

/// Builds the corpus. Each (instance, step, kind, sample) draws from its own engine
/// derived from the seed, so output order and content do not depend on
/// `parallelism`. Enhanced mode needs both clients.
NegativeCorpus BuildNegativeCorpus(const std::vector<TreeInstance>& instances,
                                   const NegativeConfig& config,
                                   clients::Generator* reasoner,
                                   clients::Checker* checker);

}  // namespace condec

#endif  // CONDEC_NEGATIVES_HPP_
