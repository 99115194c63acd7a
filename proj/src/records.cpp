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

#include "condec/records.hpp"

#include <fstream>

#include "condec/text.hpp"

namespace condec::records {
namespace {

[[noreturn]] void Bad(const std::string& what) {
  throw Error(ErrorCode::kRecordError, what);
}

ProofStep SingleStep(const std::string& dsl) {
  auto steps = ParseProof(dsl);
  if (steps.size() != 1) Bad("expected exactly one step in '" + dsl + "'");
  return steps.front();
}

json TaskStatsJson(const TaskStats& s) {
  return {{"gold_steps", s.gold_steps},
          {"vanilla", s.vanilla},
          {"enhanced_candidates", s.candidates},
          {"enhanced_retained", s.retained},
          {"collisions", s.collisions},
          {"no_candidates", s.no_candidates},
          {"bad_generations", s.bad_generations},
          {"client_failures", s.client_failures}};
}

}  // namespace

json StepwiseRecord(const StepwiseSample& sample) {
  return {{"instance_id", sample.instance_id},
          {"input", FormatModelInput(sample)},
          {"target", sample.target_text()}};
}

json ReasonerPairRecord(const ReasonerPair& pair) {
  return {{"instance_id", pair.instance_id},
          {"step_index", pair.step_index},
          {"input", pair.input},
          {"target", pair.target}};
}

json NegativeRecord(const HardNegative& negative) {
  json j = {{"instance_id", negative.instance_id},
            {"task", negative.task},
            {"step_index", negative.step_index},
            {"kind", std::string(ToString(negative.kind))},
            {"base_step", SerializeProof({negative.base_step})},
            {"negative_step", SerializeProof({negative.negative_step})}};
  if (negative.checker_score) j["checker_score"] = *negative.checker_score;
  if (negative.selector) j["selector"] = std::string(ToString(*negative.selector));
  return j;
}

HardNegative NegativeFromRecord(const json& record) {
  HardNegative n;
  try {
    n.instance_id = record.at("instance_id").get<std::string>();
    n.task = record.value("task", 0);
    n.step_index = record.value("step_index", std::size_t{0});
    const auto kind = record.at("kind").get<std::string>();
    if (kind == "vanilla") {
      n.kind = NegativeKind::kVanilla;
    } else if (kind == "enhanced") {
      n.kind = NegativeKind::kEnhanced;
    } else {
      Bad("unknown negative kind '" + kind + "'");
    }
    n.base_step = SingleStep(record.at("base_step").get<std::string>());
    n.negative_step = SingleStep(record.at("negative_step").get<std::string>());
    if (record.contains("checker_score")) {
      n.checker_score = record.at("checker_score").get<double>();
    }
    if (record.contains("selector")) {
      const auto sel = record.at("selector").get<std::string>();
      if (sel == "random") {
        n.selector = Selector::kRandom;
      } else if (sel == "bm25") {
        n.selector = Selector::kBm25;
      } else {
        Bad("unknown selector '" + sel + "'");
      }
    }
  } catch (const json::exception& e) {
    Bad(std::string("negative record: ") + e.what());
  }
  return n;
}

json StatsRecord(const std::map<int, TaskStats>& stats, std::size_t failures) {
  json tasks = json::object();
  for (const auto& [task, s] : stats) tasks[std::to_string(task)] = TaskStatsJson(s);
  return {{"record", "summary"}, {"tasks", tasks}, {"failures", failures}};
}

std::map<int, TaskStats> StatsFromRecord(const json& record) {
  std::map<int, TaskStats> out;
  try {
    for (const auto& [key, v] : record.at("tasks").items()) {
      TaskStats s;
      s.gold_steps = v.at("gold_steps").get<std::size_t>();
      s.vanilla = v.at("vanilla").get<std::size_t>();
      s.candidates = v.at("enhanced_candidates").get<std::size_t>();
      s.retained = v.at("enhanced_retained").get<std::size_t>();
      s.collisions = v.value("collisions", std::size_t{0});
      s.no_candidates = v.value("no_candidates", std::size_t{0});
      s.bad_generations = v.value("bad_generations", std::size_t{0});
      s.client_failures = v.value("client_failures", std::size_t{0});
      out[std::stoi(key)] = s;
    }
  } catch (const std::exception& e) {
    Bad(std::string("summary record: ") + e.what());
  }
  return out;
}

json ReportRecord(const eval::EvalReport& r) {
  return {{"leaves_f1", r.leaves_f1},   {"leaves_all", r.leaves_all},
          {"steps_f1", r.steps_f1},     {"steps_all", r.steps_all},
          {"interm_f1", r.interm_f1},   {"interm_all", r.interm_all},
          {"overall_all", r.overall_all}, {"trees", r.trees}};
}

json DiagnosticRecord(const Diagnostic& d) {
  json j = {{"code", d.code}, {"message", d.message}};
  if (d.step_index) j["step_index"] = *d.step_index;
  return j;
}

std::vector<json> ReadJsonLines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::vector<json> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::exception& e) {
      Bad(path.filename().string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

bool IsConfigHeader(const json& record) {
  return record.is_object() && record.value("record", "") == "config";
}

std::vector<Prediction> LoadPredictions(const std::filesystem::path& path) {
  std::vector<Prediction> out;
  for (const auto& j : ReadJsonLines(path)) {
    // infer output brackets its predictions with a config and a summary.
    if (IsConfigHeader(j) || (j.is_object() && j.value("record", "") == "summary")) continue;
    try {
      out.push_back({j.at("id").get<std::string>(), j.at("proof").get<std::string>()});
    } catch (const json::exception& e) {
      Bad(path.filename().string() + ": prediction needs string 'id' and 'proof': " + e.what());
    }
  }
  return out;
}

}  // namespace condec::records
