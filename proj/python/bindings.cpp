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

// Python surface over the core library: parsing, evaluation, BM25, the loss
// kernel and vanilla negatives. Errors surface as condec.CondecError with the
// stable code name in .code.

#include <map>
#include <string>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "condec/batch_io.hpp"
#include "condec/clients.hpp"
#include "condec/evaluation.hpp"
#include "condec/losskernel.hpp"
#include "condec/negatives.hpp"
#include "condec/prooftree.hpp"

namespace py = pybind11;
using namespace condec;

namespace {

py::dict StepDict(const ProofStep& s) {
  py::list premises;
  for (const auto& p : s.premises) premises.append(p.str());
  py::dict d;
  d["premises"] = premises;
  d["conclusion"] = s.conclusion.str();
  d["text"] = s.conclusion_text ? py::object(py::str(*s.conclusion_text)) : py::none();
  return d;
}

std::vector<Fact> Facts(const std::map<std::string, std::string>& context) {
  std::vector<Fact> facts;
  for (const auto& [id, text] : context) facts.push_back(MakeFact(ParseNodeId(id), text));
  return facts;
}

loss::SimKind Sim(const std::string& name) {
  if (name == "dot") return loss::SimKind::kDot;
  if (name == "cosine") return loss::SimKind::kCosine;
  throw Error(ErrorCode::kInvalidArgument, "sim must be 'dot' or 'cosine', got '" + name + "'");
}

std::vector<loss::Vector> Rows(const loss::Matrix& m) {
  std::vector<loss::Vector> out;
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(m.row(r).transpose());
  return out;
}

py::dict ReportDict(const eval::EvalReport& r) {
  py::dict d;
  d["leaves_f1"] = r.leaves_f1;
  d["leaves_all"] = r.leaves_all;
  d["steps_f1"] = r.steps_f1;
  d["steps_all"] = r.steps_all;
  d["interm_f1"] = r.interm_f1;
  d["interm_all"] = r.interm_all;
  d["overall_all"] = r.overall_all;
  return d;
}

}  // namespace

PYBIND11_MODULE(_condec, m) {
  m.doc() = "Core of the condec toolkit";

  // Held for the life of the interpreter; never released.
  static PyObject* error_type = py::exception<Error>(m, "CondecError", PyExc_ValueError).release().ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::handle(error_type)(e.what());
      exc.attr("code") = std::string(ErrorCodeName(e.code()));
      PyErr_SetObject(error_type, exc.ptr());
    }
  });

  m.def("parse_proof", [](const std::string& text) {
    py::list steps;
    for (const auto& s : ParseProof(text)) steps.append(StepDict(s));
    return steps;
  }, py::arg("text"));

  m.def("canonical_proof", [](const std::string& text) { return SerializeProof(ParseProof(text)); },
        py::arg("text"));

  m.def("validate_tree", [](const std::string& hypothesis, const std::map<std::string, std::string>& context,
                            const std::string& proof, bool lenient) {
    const auto tree = BuildTree(hypothesis, Facts(context),
                                lenient ? ParseProofLenient(proof).steps : ParseProof(proof),
                                lenient ? ValidationMode::kLenient : ValidationMode::kStrict);
    py::list diags;
    for (const auto& d : tree.diagnostics()) {
      py::dict j;
      j["code"] = d.code;
      j["step"] = d.step_index ? py::object(py::int_(*d.step_index)) : py::none();
      j["message"] = d.message;
      diags.append(j);
    }
    return diags;
  }, py::arg("hypothesis"), py::arg("context"), py::arg("proof"), py::arg("lenient") = false);

  // The gold proof is validated strictly, the prediction leniently; an
  // unparseable prediction scores as an empty tree.
  m.def("evaluate", [](const std::string& pred, const std::string& gold, const std::string& hypothesis,
                       const std::map<std::string, std::string>& context, double threshold) {
    const auto facts = Facts(context);
    const auto gold_tree = BuildTree(hypothesis, facts, ParseProof(gold), ValidationMode::kStrict);
    const auto pred_tree = BuildTree(hypothesis, facts, ParseProofLenient(pred).steps, ValidationMode::kLenient);
    clients::BuiltinScorer scorer;
    return ReportDict(eval::EvaluateTree(pred_tree, gold_tree, scorer, threshold));
  }, py::arg("pred"), py::arg("gold"), py::arg("hypothesis"), py::arg("context"),
     py::arg("threshold") = eval::kDefaultSimilarityThreshold);

  m.def("bm25_rank", [](const std::string& query, const std::map<std::string, std::string>& candidates,
                        double k1, double b) {
    std::vector<std::pair<std::string, double>> out;
    for (const auto& [id, score] : Bm25Rank(query, Facts(candidates), {.k1 = k1, .b = b})) {
      out.emplace_back(id.str(), score);
    }
    return out;
  }, py::arg("query"), py::arg("candidates"), py::arg("k1") = 1.2, py::arg("b") = 0.75);

  m.def("vanilla_negative", [](const std::string& step, const std::map<std::string, std::string>& texts,
                               std::uint64_t seed) {
    const auto steps = ParseProof(step);
    if (steps.size() != 1) throw Error(ErrorCode::kInvalidArgument, "expected exactly one step");
    std::map<NodeId, std::string> by_id;
    for (const auto& [id, text] : texts) by_id.emplace(ParseNodeId(id), text);
    Rng rng(seed);
    return StepDict(MakeVanillaNegative(steps[0], by_id, rng).negative_step);
  }, py::arg("step"), py::arg("texts"), py::arg("seed") = 0);

  // zx, zs: (n, p) arrays, one projection per row; zbar: optional list of
  // length-p vectors or None.
  m.def("contrastive_loss", [](const loss::Matrix& zx, const loss::Matrix& zs,
                               std::optional<std::vector<std::optional<loss::Vector>>> zbar,
                               double tau, const std::string& sim) {
    const auto x = Rows(zx), s = Rows(zs);
    const loss::LossConfig cfg{.tau = tau, .sim = Sim(sim)};
    if (!zbar) return loss::ContrastiveLoss(x, s, cfg);
    return loss::ContrastiveLossHard(x, s, *zbar, cfg);
  }, py::arg("zx"), py::arg("zs"), py::arg("zbar") = py::none(), py::arg("tau") = 0.05,
     py::arg("sim") = "dot");

  m.def("batch_loss", [](const std::string& path, double tau, const std::string& sim) {
    return loss::BatchLoss(loss::ReadHiddenBatch(path), {.tau = tau, .sim = Sim(sim)});
  }, py::arg("path"), py::arg("tau") = 0.05, py::arg("sim") = "dot");

  m.def("grad_check", [](const std::string& path, double tau, double alpha, const std::string& sim,
                         double epsilon) {
    const auto report = loss::GradCheck(loss::ReadHiddenBatch(path),
                                        {.tau = tau, .alpha = alpha, .sim = Sim(sim)}, epsilon);
    py::dict d;
    d["max_relative_error"] = report.max_relative_error;
    d["worst_entry"] = report.worst_entry;
    d["entries"] = report.entries;
    return d;
  }, py::arg("path"), py::arg("tau") = 0.05, py::arg("alpha") = 0.1, py::arg("sim") = "dot",
     py::arg("epsilon") = 1e-5);
}
