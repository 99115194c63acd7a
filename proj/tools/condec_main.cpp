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

// condec: batch pipelines over the toolkit.
//
// Exit status: 0 ok, 1 usage, 2 data, 3 service.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "condec/batch_io.hpp"
#include "condec/clients.hpp"
#include "condec/dataset.hpp"
#include "condec/evaluation.hpp"
#include "condec/inference.hpp"
#include "condec/losskernel.hpp"
#include "condec/negatives.hpp"
#include "condec/records.hpp"
#include "condec/text.hpp"

namespace {

using nlohmann::json;
using namespace condec;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitService = 3;

// Raised for bad flag combinations found after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Missing endpoints; reported with exit 3.
struct ServiceConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string out;
  bool pretty = false;
};

// Line-delimited output that always starts with the config echo.
class Sink {
 public:
  Sink(const Common& common, const json& config) : pretty_(common.pretty) {
    if (!common.out.empty()) {
      file_.open(common.out);
      if (!file_) throw Error(ErrorCode::kIoError, "cannot write " + common.out);
      os_ = &file_;
    }
    Write(config);
  }

  void Write(const json& record) {
    *os_ << (pretty_ ? record.dump(2) : record.dump()) << '\n';
  }

  std::ostream& stream() { return *os_; }

 private:
  bool pretty_;
  std::ofstream file_;
  std::ostream* os_ = &std::cout;
};

json Config(const std::string& subcommand, json fields) {
  json j = {{"record", "config"}, {"tool", "condec"}, {"version", "0.1.0"}, {"subcommand", subcommand}};
  for (auto& [k, v] : fields.items()) j[k] = v;
  return j;
}

// --- service role specs ------------------------------------------------------
//
//   http://host:port[/prefix]   remote service
//   mock:overlap                checker: 1.0 iff the conclusion shares a token with every premise
//   mock:const:<x>              checker: constant score
//   mock:conjoin                reasoner: "Because a and b." -> "Therefore, a and b."
//   mock:gold                   generator (infer): replays each instance's gold steps
//   mock:script:<file>          generator (infer): {"id", "responses": [..]} per instance

struct ServiceFlags {
  int timeout_ms = 30000;
  int retries = 2;
  std::string token;
};

clients::ServiceEndpoint Endpoint(const std::string& url, clients::Role role, const ServiceFlags& f) {
  clients::ServiceEndpoint e;
  e.base_url = url;
  e.role = role;
  e.timeout = std::chrono::milliseconds(f.timeout_ms);
  e.retries = f.retries;
  e.bearer_token = f.token;
  return e;
}

std::string ResolveSpec(const std::string& flag, clients::Role role) {
  if (!flag.empty()) return flag;
  return clients::EndpointFromEnv(role).value_or("");
}

bool IsUrl(const std::string& s) { return s.starts_with("http://") || s.starts_with("https://"); }

std::unique_ptr<clients::Checker> MakeChecker(const std::string& spec, const ServiceFlags& f) {
  if (spec == "mock:overlap") return clients::MakeOverlapChecker();
  if (spec.starts_with("mock:const:")) {
    try {
      return clients::MakeConstantChecker(std::stod(spec.substr(11)));
    } catch (const std::logic_error&) {
      throw UsageError("bad constant in checker spec '" + spec + "'");
    }
  }
  if (IsUrl(spec)) return std::make_unique<clients::RemoteChecker>(Endpoint(spec, clients::Role::kChecker, f));
  throw UsageError("unknown checker spec '" + spec + "' (use a URL, mock:overlap or mock:const:<x>)");
}

std::unique_ptr<clients::Generator> MakeReasoner(const std::string& spec, const ServiceFlags& f) {
  if (spec == "mock:conjoin") return clients::MakeConjoiningReasoner();
  if (IsUrl(spec)) return std::make_unique<clients::RemoteGenerator>(Endpoint(spec, clients::Role::kReasoner, f));
  throw UsageError("unknown reasoner spec '" + spec + "' (use a URL or mock:conjoin)");
}

// --- shared flag helpers -----------------------------------------------------

void AddCommon(CLI::App* cmd, Common& c) {
  cmd->add_option("-o,--out", c.out, "Output file (default: standard output)");
  cmd->add_flag("--pretty", c.pretty, "Indent JSON output");
}

void AddService(CLI::App* cmd, ServiceFlags& f) {
  cmd->add_option("--timeout-ms", f.timeout_ms, "Per-request timeout")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--retries", f.retries, "Retries on timeouts, 429 and 5xx")->capture_default_str()->check(CLI::NonNegativeNumber);
  cmd->add_option("--token", f.token, "Bearer token for remote services");
}

CLI::Option* AddTask(CLI::App* cmd, int& task) {
  return cmd->add_option("--task", task, "EntailmentBank task")->required()->check(CLI::Range(1, 3));
}

// --- subcommands ---------------------------------------------------------------

struct ParseArgs {
  Common common;
  std::string proof;
  bool lenient = false;
};

json StepJson(const ProofStep& s) {
  json premises = json::array();
  for (const auto& p : s.premises) premises.push_back(p.str());
  json j = {{"premises", premises}, {"conclusion", s.conclusion.str()}};
  if (s.conclusion_text) j["text"] = *s.conclusion_text;
  return j;
}

int RunParse(ParseArgs a) {
  if (a.proof == "-") a.proof.assign(std::istreambuf_iterator<char>(std::cin), {});
  Sink sink(a.common, Config("parse", {{"lenient", a.lenient}}));
  json out = {{"record", "proof"}};
  std::vector<ProofStep> steps;
  if (a.lenient) {
    auto parsed = ParseProofLenient(a.proof);
    steps = std::move(parsed.steps);
    json issues = json::array();
    for (const auto& i : parsed.issues) {
      issues.push_back({{"clause_index", i.clause_index}, {"clause", i.clause}, {"message", i.message}});
    }
    out["issues"] = issues;
  } else {
    steps = ParseProof(a.proof);
  }
  out["canonical"] = SerializeProof(steps);
  out["steps"] = json::array();
  for (const auto& s : steps) out["steps"].push_back(StepJson(s));
  sink.Write(out);
  return kExitOk;
}

struct ValidateArgs {
  Common common;
  std::string data;
  int task = 1;
  bool tolerant = false;
};

int RunValidate(const ValidateArgs& a) {
  const auto mode = a.tolerant ? Ingestion::kTolerant : Ingestion::kStrict;
  const auto loaded = LoadEntailmentBank(a.data, a.task, mode);
  Sink sink(a.common, Config("validate", {{"data", a.data}, {"task", a.task}, {"tolerant", a.tolerant}}));
  std::size_t warnings = 0;
  for (const auto& inst : loaded.instances) {
    json diags = json::array();
    for (const auto& d : inst.gold_tree.diagnostics()) diags.push_back(records::DiagnosticRecord(d));
    warnings += diags.size();
    sink.Write({{"record", "instance"},
                {"id", inst.id},
                {"steps", inst.gold_tree.steps().size()},
                {"leaves", inst.gold_tree.leaves().size()},
                {"intermediates", inst.gold_tree.intermediates().size()},
                {"context", inst.context.size()},
                {"diagnostics", diags}});
  }
  for (const auto& d : loaded.diagnostics) {
    sink.Write({{"record", "rejected"}, {"line", d.line}, {"cause", d.cause}});
  }
  sink.Write({{"record", "summary"},
              {"instances", loaded.instances.size()},
              {"rejected", loaded.diagnostics.size()},
              {"warnings", warnings}});
  return kExitOk;
}

struct StepwiseArgs {
  Common common;
  std::string data;
  int task = 1;
  std::string strategy = "per-step";
};

int RunMakeStepwise(const StepwiseArgs& a) {
  const auto strategy = a.strategy == "full-tree" ? SampleStrategy::kFullTree : SampleStrategy::kPerStep;
  const auto instances = LoadEntailmentBank(a.data, a.task).instances;
  Sink sink(a.common, Config("make-stepwise", {{"data", a.data}, {"task", a.task}, {"strategy", a.strategy}}));
  for (const auto& inst : instances) {
    for (const auto& s : ExtractStepwiseSamples(inst, strategy)) sink.Write(records::StepwiseRecord(s));
  }
  return kExitOk;
}

struct PairsArgs {
  Common common;
  std::vector<std::string> data;
  std::vector<int> tasks;
};

int RunExportPairs(const PairsArgs& a) {
  if (a.tasks.size() != 1 && a.tasks.size() != a.data.size()) {
    throw UsageError("give one --task for all files or one per --data");
  }
  std::vector<ReasonerPair> pairs;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const int task = a.tasks.size() == 1 ? a.tasks[0] : a.tasks[i];
    const auto batch = ExportReasonerPairs(LoadEntailmentBank(a.data[i], task).instances);
    pairs.insert(pairs.end(), batch.begin(), batch.end());
  }
  Sink sink(a.common, Config("export-reasoner-pairs", {{"data", a.data}, {"task", a.tasks}}));
  for (const auto& p : pairs) sink.Write(records::ReasonerPairRecord(p));
  std::cerr << "exported " << pairs.size() << " reasoner pairs\n";
  return kExitOk;
}

struct NegativesArgs {
  Common common;
  ServiceFlags service;
  std::string data;
  int task = 1;
  std::string mode = "vanilla";
  std::string selector = "random";
  std::size_t top_k = 1;
  double threshold = 0.9;
  int samples_per_step = 1;
  std::uint64_t seed = 0;
  int parallelism = 1;
  std::string reasoner;
  std::string checker;
};

int RunMakeNegatives(const NegativesArgs& a) {
  NegativeConfig cfg;
  cfg.vanilla = a.mode != "enhanced";
  cfg.enhanced = a.mode != "vanilla";
  cfg.enhanced_options.threshold = a.threshold;
  cfg.enhanced_options.substitution.selector = a.selector == "bm25" ? Selector::kBm25 : Selector::kRandom;
  cfg.enhanced_options.substitution.bm25_top_k = a.top_k;
  cfg.samples_per_step = a.samples_per_step;
  cfg.seed = a.seed;
  cfg.parallelism = a.parallelism;

  std::unique_ptr<clients::Generator> reasoner;
  std::unique_ptr<clients::Checker> checker;
  std::string reasoner_spec, checker_spec;
  if (cfg.enhanced) {
    reasoner_spec = ResolveSpec(a.reasoner, clients::Role::kReasoner);
    checker_spec = ResolveSpec(a.checker, clients::Role::kChecker);
    if (checker_spec.empty()) {
      throw ServiceConfigError(
          "enhanced negatives need a checker: pass --checker <url> or set CONDEC_CHECKER_URL "
          "(use --checker mock:overlap for an offline run)");
    }
    if (reasoner_spec.empty()) {
      throw ServiceConfigError(
          "enhanced negatives need a reasoner: pass --reasoner <url> or set CONDEC_GENERATOR_URL "
          "(use --reasoner mock:conjoin for an offline run)");
    }
    checker = MakeChecker(checker_spec, a.service);
    reasoner = MakeReasoner(reasoner_spec, a.service);
  }

  const auto instances = LoadEntailmentBank(a.data, a.task).instances;
  const auto corpus = BuildNegativeCorpus(instances, cfg, reasoner.get(), checker.get());

  Sink sink(a.common, Config("make-negatives", {{"data", a.data},
                                                {"task", a.task},
                                                {"mode", a.mode},
                                                {"selector", a.selector},
                                                {"top_k", a.top_k},
                                                {"threshold", a.threshold},
                                                {"samples_per_step", a.samples_per_step},
                                                {"seed", a.seed},
                                                {"parallelism", a.parallelism},
                                                {"reasoner", reasoner_spec},
                                                {"checker", checker_spec}}));
  for (const auto& n : corpus.negatives) sink.Write(records::NegativeRecord(n));
  for (const auto& f : corpus.failures) {
    sink.Write({{"record", "failure"}, {"instance_id", f.instance_id}, {"step_index", f.step_index}, {"message", f.message}});
  }
  sink.Write(records::StatsRecord(corpus.stats, corpus.failures.size()));
  if (!corpus.failures.empty()) {
    std::cerr << "condec: " << corpus.failures.size() << " steps failed on service errors; first: "
              << corpus.failures.front().message << '\n';
    return kExitService;
  }
  return kExitOk;
}

struct LossArgs {
  Common common;
  std::string batch;
  double tau = 0.05;
  double alpha = 0.1;
  std::string sim = "dot";
  double epsilon = 1e-5;
};

constexpr double kGradTolerance = 1e-4;

int RunLossCheck(const LossArgs& a) {
  const loss::LossConfig cfg{.tau = a.tau, .alpha = a.alpha,
                             .sim = a.sim == "cosine" ? loss::SimKind::kCosine : loss::SimKind::kDot};
  cfg.Validate();
  const auto batch = loss::ReadHiddenBatch(a.batch);
  const double value = loss::BatchLoss(batch, cfg);
  const auto report = loss::GradCheck(batch, cfg, a.epsilon);
  const bool ok = report.max_relative_error < kGradTolerance;
  Sink sink(a.common, Config("loss-check", {{"batch", a.batch}, {"tau", a.tau}, {"alpha", a.alpha},
                                            {"sim", a.sim}, {"epsilon", a.epsilon}}));
  sink.Write({{"record", "loss-check"},
              {"n", batch.n()},
              {"d", batch.d},
              {"p", batch.p},
              {"contrastive_loss", value},
              {"weighted", a.alpha * value},
              {"max_relative_error", report.max_relative_error},
              {"worst_entry", report.worst_entry},
              {"entries", report.entries},
              {"tolerance", kGradTolerance},
              {"pass", ok}});
  std::fprintf(stderr, "max relative gradient error %.3e at %s over %zu entries: %s\n",
               report.max_relative_error, report.worst_entry.c_str(), report.entries,
               ok ? "ok" : "FAILED");
  return ok ? kExitOk : kExitData;
}

struct EvalArgs {
  Common common;
  ServiceFlags service;
  std::string pred;
  std::string gold;
  int task = 2;
  std::string scorer = "builtin";
  std::string scorer_url;
  double threshold = eval::kDefaultSimilarityThreshold;
  bool per_tree = false;
};

json ReportFields(const eval::EvalReport& r) {
  auto j = records::ReportRecord(r);
  return j;
}

int RunEvaluate(const EvalArgs& a) {
  std::unique_ptr<clients::SimilarityScorer> scorer;
  std::string scorer_desc = "builtin";
  if (a.scorer == "builtin") {
    scorer = std::make_unique<clients::BuiltinScorer>();
  } else {
    const auto url = ResolveSpec(a.scorer_url, clients::Role::kScorer);
    if (url.empty()) {
      throw ServiceConfigError("--scorer remote needs --scorer-url <url> or CONDEC_SCORER_URL");
    }
    scorer = std::make_unique<clients::RemoteScorer>(Endpoint(url, clients::Role::kScorer, a.service));
    scorer_desc = url;
  }

  const auto gold = LoadEntailmentBank(a.gold, a.task).instances;
  std::map<std::string, std::string> predictions;
  for (const auto& p : records::LoadPredictions(a.pred)) {
    if (!predictions.emplace(p.id, p.proof).second) {
      throw Error(ErrorCode::kRecordError, "duplicate prediction for id '" + p.id + "'");
    }
  }

  Sink sink(a.common, Config("evaluate", {{"pred", a.pred}, {"gold", a.gold}, {"task", a.task},
                                          {"scorer", scorer_desc}, {"threshold", a.threshold}}));
  std::vector<eval::EvalReport> reports;
  std::size_t missing = 0;
  for (const auto& inst : gold) {
    auto it = predictions.find(inst.id);
    const bool found = it != predictions.end();
    missing += found ? 0 : 1;
    const auto steps = found ? ParseProofLenient(it->second).steps : std::vector<ProofStep>{};
    const auto tree = BuildTree(inst.hypothesis, inst.context, steps, ValidationMode::kLenient);
    reports.push_back(eval::EvaluateTree(tree, inst.gold_tree, *scorer, a.threshold));
    if (a.per_tree) {
      auto j = ReportFields(reports.back());
      j.erase("trees");
      j["record"] = "tree";
      j["id"] = inst.id;
      j["predicted"] = found;
      sink.Write(j);
    }
    if (found) predictions.erase(it);
  }
  for (const auto& [id, proof] : predictions) {
    std::cerr << "condec: prediction '" << id << "' has no gold tree; ignored\n";
  }
  if (missing) std::cerr << "condec: " << missing << " gold trees had no prediction and score 0\n";
  auto summary = ReportFields(eval::Aggregate(reports));
  summary["record"] = "summary";
  summary["label"] = "toolkit metric";
  summary["missing_predictions"] = missing;
  sink.Write(summary);
  return kExitOk;
}

struct InferArgs {
  Common common;
  ServiceFlags service;
  std::string data;
  int task = 2;
  std::string generator;
  int max_steps = 20;
  int max_tokens = 128;
};

// Per-instance generator source.
class GeneratorSource {
 public:
  GeneratorSource(const std::string& spec, const ServiceFlags& f) : spec_(spec) {
    if (spec.starts_with("mock:script:")) {
      for (const auto& j : records::ReadJsonLines(spec.substr(12))) {
        if (records::IsConfigHeader(j)) continue;
        try {
          scripts_[j.at("id").get<std::string>()] = j.at("responses").get<std::vector<std::string>>();
        } catch (const json::exception& e) {
          throw Error(ErrorCode::kRecordError, std::string("script needs 'id' and 'responses': ") + e.what());
        }
      }
    } else if (IsUrl(spec)) {
      remote_ = std::make_unique<clients::RemoteGenerator>(Endpoint(spec, clients::Role::kGenerator, f));
    } else if (spec != "mock:gold") {
      throw UsageError("unknown generator spec '" + spec + "' (use a URL, mock:gold or mock:script:<file>)");
    }
  }

  clients::Generator& For(const TreeInstance& inst) {
    if (remote_) return *remote_;
    std::vector<std::string> responses;
    if (spec_ == "mock:gold") {
      for (const auto& s : inst.gold_tree.steps()) responses.push_back(SerializeStep(s) + ";");
    } else if (auto it = scripts_.find(inst.id); it != scripts_.end()) {
      responses = it->second;
    }
    current_ = std::make_unique<clients::ScriptedGenerator>(responses);
    return *current_;
  }

 private:
  std::string spec_;
  std::map<std::string, std::vector<std::string>> scripts_;
  std::unique_ptr<clients::Generator> remote_;
  std::unique_ptr<clients::Generator> current_;
};

int RunInfer(const InferArgs& a) {
  const auto spec = ResolveSpec(a.generator, clients::Role::kGenerator);
  if (spec.empty()) {
    throw ServiceConfigError("infer needs a generator: pass --generator <url> or set CONDEC_GENERATOR_URL "
                             "(mock:gold replays the gold steps)");
  }
  GeneratorSource source(spec, a.service);
  const auto instances = LoadEntailmentBank(a.data, a.task).instances;
  Sink sink(a.common, Config("infer", {{"data", a.data}, {"task", a.task}, {"generator", spec},
                                       {"max_steps", a.max_steps}, {"max_tokens", a.max_tokens}}));
  std::size_t complete = 0;
  for (const auto& inst : instances) {
    const auto r = RunStepwiseInference(inst, source.For(inst), {.max_steps = a.max_steps, .max_tokens = a.max_tokens});
    complete += r.complete ? 1 : 0;
    json diags = json::array();
    for (const auto& d : r.diagnostics) diags.push_back(records::DiagnosticRecord(d));
    for (const auto& d : r.tree.diagnostics()) diags.push_back(records::DiagnosticRecord(d));
    sink.Write({{"id", inst.id},
                {"proof", SerializeProof(r.tree.steps())},
                {"complete", r.complete},
                {"calls", r.trace.size()},
                {"diagnostics", diags}});
  }
  sink.Write({{"record", "summary"}, {"instances", instances.size()}, {"complete", complete}});
  return kExitOk;
}

struct StatsArgs {
  Common common;
  std::vector<std::string> negatives;
};

int RunStats(const StatsArgs& a) {
  std::map<int, TaskStats> totals;
  for (const auto& path : a.negatives) {
    bool summarized = false;
    std::map<int, TaskStats> counted;
    for (const auto& j : records::ReadJsonLines(path)) {
      if (records::IsConfigHeader(j)) continue;
      const auto kind = j.value("record", "");
      if (kind == "summary") {
        for (const auto& [task, s] : records::StatsFromRecord(j)) {
          auto& t = totals[task];
          t.gold_steps += s.gold_steps;
          t.vanilla += s.vanilla;
          t.candidates += s.candidates;
          t.retained += s.retained;
          t.collisions += s.collisions;
          t.no_candidates += s.no_candidates;
          t.bad_generations += s.bad_generations;
          t.client_failures += s.client_failures;
        }
        summarized = true;
      } else if (kind.empty()) {
        const auto n = records::NegativeFromRecord(j);
        auto& t = counted[n.task];
        if (n.kind == NegativeKind::kVanilla) {
          ++t.vanilla;
        } else {
          ++t.retained;
        }
      }
    }
    if (!summarized) {
      // No summary record: retained counts only; candidates are unknown.
      std::cerr << "condec: " << path << " has no summary record; counting negatives only\n";
      for (const auto& [task, s] : counted) {
        totals[task].vanilla += s.vanilla;
        totals[task].retained += s.retained;
      }
    }
  }

  Sink sink(a.common, Config("stats", {{"negatives", a.negatives}}));
  std::size_t steps = 0;
  json enhanced = json::object(), filtered = json::object(), vanilla = json::object();
  for (const auto& [task, s] : totals) {
    const auto key = "task" + std::to_string(task);
    steps += s.gold_steps;
    enhanced[key] = s.candidates;
    filtered[key] = s.retained;
    vanilla[key] = s.vanilla;
  }
  sink.Write({{"record", "stats"},
              {"reasoner_steps", steps},
              {"enhanced_negative", enhanced},
              {"filtered_negative", filtered},
              {"vanilla_negative", vanilla}});
  if (a.common.pretty) {
    std::fprintf(stderr, "%-10s %-24s %-24s\n", "Reasoner", "Enhanced Negative", "Filtered Negative");
    std::string head, cand, kept;
    for (const auto& [task, s] : totals) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%-12s", ("Task " + std::to_string(task)).c_str());
      head += buf;
    }
    std::fprintf(stderr, "%-10s %-24s %-24s\n", "", head.c_str(), head.c_str());
    for (const auto& [task, s] : totals) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%-12zu", s.candidates);
      cand += buf;
      std::snprintf(buf, sizeof buf, "%-12zu", s.retained);
      kept += buf;
    }
    std::fprintf(stderr, "%-10zu %-24s %-24s\n", steps, cand.c_str(), kept.c_str());
  }
  return kExitOk;
}

int ExitFor(const Error& e) {
  if (IsServiceError(e.code())) return kExitService;
  if (e.code() == ErrorCode::kInvalidArgument) return kExitUsage;
  return kExitData;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"condec: contrastive stepwise proof generation toolkit"};
  app.require_subcommand(1);
  std::function<int()> run;

  ParseArgs parse_args;
  auto* parse = app.add_subcommand("parse", "Parse a proof and print its canonical form");
  parse->add_option("proof", parse_args.proof, "Proof text, or - to read standard input")->required();
  parse->add_flag("--lenient", parse_args.lenient, "Keep well-formed steps and report the rest");
  AddCommon(parse, parse_args.common);
  parse->callback([&] { run = [&] { return RunParse(parse_args); }; });

  ValidateArgs validate_args;
  auto* validate = app.add_subcommand("validate", "Load and validate an EntailmentBank file");
  validate->add_option("--data", validate_args.data, "Records (.jsonl)")->required();
  AddTask(validate, validate_args.task);
  validate->add_flag("--tolerant", validate_args.tolerant, "Skip and report bad records");
  AddCommon(validate, validate_args.common);
  validate->callback([&] { run = [&] { return RunValidate(validate_args); }; });

  StepwiseArgs stepwise_args;
  auto* stepwise = app.add_subcommand("make-stepwise", "Write stepwise training samples");
  stepwise->add_option("--data", stepwise_args.data, "Records (.jsonl)")->required();
  AddTask(stepwise, stepwise_args.task);
  stepwise->add_option("--strategy", stepwise_args.strategy, "per-step or full-tree")
      ->capture_default_str()
      ->check(CLI::IsMember({"per-step", "full-tree"}));
  AddCommon(stepwise, stepwise_args.common);
  stepwise->callback([&] { run = [&] { return RunMakeStepwise(stepwise_args); }; });

  PairsArgs pairs_args;
  auto* pairs = app.add_subcommand("export-reasoner-pairs", "Write Because/Therefore pairs for every gold step");
  pairs->add_option("--data", pairs_args.data, "Records (.jsonl); repeatable")->required();
  pairs->add_option("--task", pairs_args.tasks, "Task for all files, or one per --data")
      ->required()
      ->check(CLI::Range(1, 3));
  AddCommon(pairs, pairs_args.common);
  pairs->callback([&] { run = [&] { return RunExportPairs(pairs_args); }; });

  NegativesArgs neg_args;
  auto* neg = app.add_subcommand("make-negatives", "Build vanilla and/or enhanced hard negatives");
  neg->add_option("--data", neg_args.data, "Records (.jsonl)")->required();
  AddTask(neg, neg_args.task);
  neg->add_option("--mode", neg_args.mode, "vanilla, enhanced or both")
      ->capture_default_str()
      ->check(CLI::IsMember({"vanilla", "enhanced", "both"}));
  neg->add_option("--selector", neg_args.selector, "random or bm25")
      ->capture_default_str()
      ->check(CLI::IsMember({"random", "bm25"}));
  neg->add_option("--top-k", neg_args.top_k, "bm25 picks uniformly among the top k")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  neg->add_option("--threshold", neg_args.threshold, "Checker score needed to keep an enhanced negative")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  neg->add_option("--samples-per-step", neg_args.samples_per_step, "Enhanced attempts per gold step")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  neg->add_option("--seed", neg_args.seed, "Seed for every random choice")->capture_default_str();
  neg->add_option("--parallelism", neg_args.parallelism, "Worker threads")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  neg->add_option("--reasoner", neg_args.reasoner, "Reasoner URL or mock:conjoin");
  neg->add_option("--checker", neg_args.checker, "Checker URL, mock:overlap or mock:const:<x>");
  AddService(neg, neg_args.service);
  AddCommon(neg, neg_args.common);
  neg->callback([&] { run = [&] { return RunMakeNegatives(neg_args); }; });

  LossArgs loss_args;
  auto* lossc = app.add_subcommand("loss-check", "Contrastive loss and finite-difference gradient check");
  lossc->add_option("--batch", loss_args.batch, "Hidden-state batch (.bin binary, otherwise text)")->required();
  lossc->add_option("--tau", loss_args.tau, "Temperature")->capture_default_str();
  lossc->add_option("--alpha", loss_args.alpha, "Contrastive weight")->capture_default_str();
  lossc->add_option("--sim", loss_args.sim, "dot or cosine")
      ->capture_default_str()
      ->check(CLI::IsMember({"dot", "cosine"}));
  lossc->add_option("--epsilon", loss_args.epsilon, "Finite-difference step")->capture_default_str();
  AddCommon(lossc, loss_args.common);
  lossc->callback([&] { run = [&] { return RunLossCheck(loss_args); }; });

  EvalArgs eval_args;
  auto* evaluate = app.add_subcommand("evaluate", "Score predicted proofs against gold trees");
  evaluate->add_option("--pred", eval_args.pred, "Predictions {id, proof} (.jsonl)")->required();
  evaluate->add_option("--gold", eval_args.gold, "Gold records (.jsonl)")->required();
  evaluate->add_option("--task", eval_args.task, "EntailmentBank task")->capture_default_str()->check(CLI::Range(1, 3));
  evaluate->add_option("--scorer", eval_args.scorer, "builtin or remote")
      ->capture_default_str()
      ->check(CLI::IsMember({"builtin", "remote"}));
  evaluate->add_option("--scorer-url", eval_args.scorer_url, "Similarity service URL");
  evaluate->add_option("--threshold", eval_args.threshold, "Intermediate similarity threshold")->capture_default_str();
  evaluate->add_flag("--per-tree", eval_args.per_tree, "Also write one record per tree");
  AddService(evaluate, eval_args.service);
  AddCommon(evaluate, eval_args.common);
  evaluate->callback([&] { run = [&] { return RunEvaluate(eval_args); }; });

  InferArgs infer_args;
  auto* infer = app.add_subcommand("infer", "Stepwise proof generation");
  infer->add_option("--data", infer_args.data, "Records (.jsonl)")->required();
  infer->add_option("--task", infer_args.task, "EntailmentBank task")->capture_default_str()->check(CLI::Range(1, 3));
  infer->add_option("--generator", infer_args.generator, "Generator URL, mock:gold or mock:script:<file>");
  infer->add_option("--max-steps", infer_args.max_steps, "Generator calls per tree")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  infer->add_option("--max-tokens", infer_args.max_tokens, "Tokens per call")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  AddService(infer, infer_args.service);
  AddCommon(infer, infer_args.common);
  infer->callback([&] { run = [&] { return RunInfer(infer_args); }; });

  StatsArgs stats_args;
  auto* stats = app.add_subcommand("stats", "Candidate and retained counts per task from negative corpora");
  stats->add_option("negatives", stats_args.negatives, "Negative corpus files")->required();
  AddCommon(stats, stats_args.common);
  stats->callback([&] { run = [&] { return RunStats(stats_args); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    return run();
  } catch (const UsageError& e) {
    std::cerr << "condec: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ServiceConfigError& e) {
    std::cerr << "condec: " << e.what() << '\n';
    return kExitService;
  } catch (const Error& e) {
    std::cerr << "condec: " << e.what() << '\n';
    return ExitFor(e);
  } catch (const std::exception& e) {
    std::cerr << "condec: internal error: " << e.what() << '\n';
    return kExitData;
  }
}
