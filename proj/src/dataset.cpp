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

#include "condec/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include <nlohmann/json.hpp>

#include "condec/text.hpp"

namespace condec {
namespace {

using nlohmann::json;

bool IsDigit(char c) { return c >= '0' && c <= '9'; }

// Matches `sent<digits>\s*:` at `pos`, preceded by start or whitespace.
// Returns the offset just past the colon, or npos.
std::size_t MatchSentMarker(std::string_view s, std::size_t pos,
                            std::size_t* id_end) {
  if (pos > 0 && !std::isspace(static_cast<unsigned char>(s[pos - 1]))) {
    return std::string_view::npos;
  }
  if (ToLower(s.substr(pos, 4)) != "sent") return std::string_view::npos;
  std::size_t i = pos + 4;
  const std::size_t digits_begin = i;
  while (i < s.size() && IsDigit(s[i])) ++i;
  if (i == digits_begin) return std::string_view::npos;
  *id_end = i;
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  if (i >= s.size() || s[i] != ':') return std::string_view::npos;
  return i + 1;
}

[[noreturn]] void RecordFail(const std::string& cause) {
  throw Error(ErrorCode::kRecordError, cause);
}

std::vector<Fact> ContextFromObject(const json& obj) {
  std::vector<Fact> facts;
  for (const auto& [key, value] : obj.items()) {
    if (!value.is_string()) RecordFail("context value for " + key + " is not a string");
    facts.push_back(MakeFact(ParseNodeId(key), value.get<std::string>()));
  }
  // Object key order is not meaningful; present facts in id order.
  std::sort(facts.begin(), facts.end(),
            [](const Fact& a, const Fact& b) { return a.id < b.id; });
  return facts;
}

}  // namespace

std::vector<Fact> ParseContextBlock(std::string_view block) {
  struct Marker {
    std::size_t start, id_end, text_begin;
  };
  std::vector<Marker> markers;
  for (std::size_t pos = 0; pos < block.size(); ++pos) {
    std::size_t id_end = 0;
    const auto text_begin = MatchSentMarker(block, pos, &id_end);
    if (text_begin != std::string_view::npos) {
      markers.push_back({pos, id_end, text_begin});
      pos = text_begin - 1;
    }
  }
  if (markers.empty() && !Trim(block).empty()) {
    throw Error(ErrorCode::kRecordError, "context block has no sentN: markers");
  }
  std::vector<Fact> facts;
  for (std::size_t m = 0; m < markers.size(); ++m) {
    const auto end = m + 1 < markers.size() ? markers[m + 1].start : block.size();
    const auto id = ParseNodeId(
        block.substr(markers[m].start, markers[m].id_end - markers[m].start));
    facts.push_back(MakeFact(
        id, block.substr(markers[m].text_begin, end - markers[m].text_begin)));
  }
  return facts;
}

TreeInstance ParseRecord(std::string_view json_line, int task) {
  if (task < 1 || task > 3) {
    throw Error(ErrorCode::kInvalidArgument, "task must be 1, 2 or 3");
  }
  json record;
  try {
    record = json::parse(json_line);
  } catch (const json::exception& e) {
    RecordFail(std::string("invalid JSON: ") + e.what());
  }
  if (!record.is_object()) RecordFail("record is not a JSON object");

  TreeInstance instance;
  instance.task = task;
  try {
    if (record.contains("id")) instance.id = record.at("id").get<std::string>();
    instance.hypothesis = record.at("hypothesis").get<std::string>();
    const auto& ctx = record.at("context");
    if (ctx.is_string()) {
      instance.context = ParseContextBlock(ctx.get<std::string>());
    } else if (ctx.is_object()) {
      instance.context = ContextFromObject(ctx);
    } else {
      RecordFail("context must be a string or an object");
    }
    const auto proof = record.at("proof").get<std::string>();
    instance.gold_tree = BuildTree(instance.hypothesis, instance.context,
                                   ParseProof(proof), ValidationMode::kStrict);
  } catch (const json::exception& e) {
    RecordFail(std::string("missing or mistyped field: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kRecordError) throw;
    RecordFail(e.what());
  }
  if (Trim(instance.hypothesis).empty()) RecordFail("empty hypothesis");
  if (task == 2 &&
      instance.gold_tree.leaves().size() >= instance.context.size()) {
    RecordFail("task 2 record has no distractor facts");
  }
  return instance;
}

LoadResult LoadEntailmentBank(const std::filesystem::path& path, int task,
                              Ingestion mode) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  }
  LoadResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    try {
      auto instance = ParseRecord(line, task);
      if (instance.id.empty()) instance.id = "line" + std::to_string(line_no);
      result.instances.push_back(std::move(instance));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kRecordError) throw;
      if (mode == Ingestion::kStrict) {
        throw Error(ErrorCode::kRecordError, path.filename().string() + ":" +
                                                 std::to_string(line_no) + ": " +
                                                 e.what());
      }
      result.diagnostics.push_back({line_no, e.what()});
    }
  }
  if (in.bad()) throw Error(ErrorCode::kIoError, "read failure on " + path.string());
  return result;
}

std::vector<StepwiseSample> ExtractStepwiseSamples(const TreeInstance& instance,
                                                   SampleStrategy strategy) {
  const auto& steps = instance.gold_tree.steps();
  std::vector<StepwiseSample> samples;
  auto base = [&] {
    StepwiseSample s;
    s.instance_id = instance.id;
    s.hypothesis = instance.hypothesis;
    s.context = instance.context;
    return s;
  };
  if (strategy == SampleStrategy::kFullTree) {
    auto s = base();
    s.target = steps;
    samples.push_back(std::move(s));
    return samples;
  }
  for (std::size_t i = 0; i < steps.size(); ++i) {
    auto s = base();
    s.prior_steps.assign(steps.begin(), steps.begin() + static_cast<std::ptrdiff_t>(i));
    s.target = {steps[i]};
    samples.push_back(std::move(s));
  }
  return samples;
}

std::string FormatModelInput(const StepwiseSample& sample) {
  std::string out = "$hypothesis$ = ";
  out += sample.hypothesis;
  out += " ; $context$ =";
  for (const auto& fact : sample.context) {
    out += ' ';
    out += fact.id.str();
    out += ": ";
    out += fact.text;
  }
  for (const auto& step : sample.prior_steps) {
    if (!step.conclusion.is_int()) continue;
    out += ' ';
    out += step.conclusion.str();
    out += ": ";
    out += *step.conclusion_text;
  }
  out += " ; $proof$ = ";
  out += SerializeProof(sample.prior_steps);
  return out;
}

}  // namespace condec
