// Copyright 2026 The oul Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Python bindings: classes, dimensions, expert indices, trials and checkers.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "oul/concepts.h"
#include "oul/errors.h"
#include "oul/harness.h"
#include "oul/learners.h"
#include "oul/trees.h"

namespace py = pybind11;

namespace {

using namespace oul;

std::vector<PointId> Points(const ConceptClass& c,
                            const std::vector<std::string>& ids) {
  std::vector<PointId> out;
  for (const auto& id : ids) out.push_back(c.domain().Find(id));
  return out;
}

LabeledPrefix Prefix(const ConceptClass& c,
                     const std::vector<std::pair<std::string, int>>& pairs) {
  LabeledPrefix out;
  for (const auto& [id, y] : pairs) {
    if (y != 0 && y != 1) throw DomainError("labels are 0 or 1");
    out.push_back({c.domain().Find(id), LabelFromBit(y)});
  }
  return out;
}

py::object DimensionValue(const CappedDimension& d) {
  if (d.value < 0) return py::none();
  if (d.at_cap) return py::str(d.ToString());
  return py::int_(d.value);
}

py::dict ReportDict(const CheckReport& r) {
  py::dict d;
  d["name"] = r.name;
  d["verdict"] = std::string(VerdictName(r.verdict));
  d["n"] = r.n;
  d["value"] = r.value;
  d["bound"] = r.bound;
  d["note"] = r.note;
  d["csv"] = ReportToCsv(r);
  return d;
}

}  // namespace

PYBIND11_MODULE(_oul, m) {
  m.doc() = "Universal online learning toolkit";

  auto base = py::register_exception<Error>(m, "OulError", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", base);
  py::register_exception<SizeError>(m, "SizeError", base);
  py::register_exception<StateError>(m, "StateError", base);
  py::register_exception<InfeasibleError>(m, "InfeasibleError", base);
  py::register_exception<ConfigError>(m, "ConfigError", base);
  py::register_exception<RealizabilityError>(m, "RealizabilityError", base);
  py::register_exception<NumericError>(m, "NumericError", base);
  py::register_exception<InvariantViolation>(m, "InvariantViolation", base);

  py::class_<ConceptClass>(m, "ConceptClass")
      .def_property_readonly(
          "domain", [](const ConceptClass& c) { return c.domain().ids(); })
      .def_property_readonly("is_cube", &ConceptClass::is_cube)
      .def_property_readonly("empty", &ConceptClass::empty)
      .def("__len__",
           [](const ConceptClass& c) {
             auto s = c.size();
             if (!s) throw SizeError("class size exceeds 64 bits", 64);
             return *s;
           })
      .def("hypotheses",
           [](const ConceptClass& c) {
             std::vector<std::string> out;
             for (const auto& h : c.Enumerate()) out.push_back(h.ToString());
             return out;
           })
      .def("to_text", [](const ConceptClass& c) { return FormatClassText(c); })
      .def("__repr__", [](const ConceptClass& c) {
        return "<ConceptClass " + std::string(PresetName(c.preset())) +
               " over " + std::to_string(c.domain().size()) + " points>";
      });

  m.def("thresholds", &presets::Thresholds, py::arg("n"));
  m.def("singletons", &presets::Singletons, py::arg("n"));
  m.def("full", &presets::Full, py::arg("n"));
  m.def("union_split", &presets::UnionSplit, py::arg("n1"), py::arg("n2"));
  m.def("parse_class", [](const std::string& text) { return ParseClassText(text); },
        py::arg("text"));
  m.def("load_class", &LoadClassFile, py::arg("path"));

  m.def("is_realizable",
        [](const ConceptClass& c,
           const std::vector<std::pair<std::string, int>>& prefix) {
          return IsRealizable(c, Prefix(c, prefix));
        },
        py::arg("cls"), py::arg("prefix"));
  m.def("restrict",
        [](const ConceptClass& c,
           const std::vector<std::pair<std::string, int>>& prefix) {
          return Restrict(c, Prefix(c, prefix));
        },
        py::arg("cls"), py::arg("prefix"));
  m.def("shatters",
        [](const ConceptClass& c, const std::vector<std::string>& points) {
          return Shatters(c, Points(c, points));
        },
        py::arg("cls"), py::arg("points"));
  m.def("weight",
        [](const ConceptClass& c, const std::vector<std::string>& window) {
          return Weight(c, Points(c, window));
        },
        py::arg("cls"), py::arg("window"));

  m.def("vc_dimension", &VcDimension, py::arg("cls"));
  m.def("littlestone_dimension",
        [](const ConceptClass& c, int cap) {
          return DimensionValue(LittlestoneDimension(c, cap));
        },
        py::arg("cls"), py::arg("cap") = 64);
  m.def("vcl_depth",
        [](const ConceptClass& c, int cap) {
          return DimensionValue(VclDepth(c, cap));
        },
        py::arg("cls"), py::arg("cap") = 16);

  m.def("index_of_set",
        [](std::vector<std::uint64_t> set) {
          std::sort(set.begin(), set.end());
          return py::int_(py::str(IndexOfSet(set).str()));
        },
        py::arg("rounds"));
  m.def("set_of_index",
        [](const py::int_& index) {
          return SetOfIndex(BigIndex(py::str(index).cast<std::string>()));
        },
        py::arg("index"));

  m.def("run_trial",
        [](const std::string& config, const std::string& profile,
           std::optional<std::uint64_t> seed) {
          const Config cfg = Config::Parse(config, profile);
          const std::uint64_t s = seed ? *seed : cfg.Seeds("trial").front();
          TrialResult r = RunTrial(cfg.Learner(), cfg.Process(), cfg.Class(),
                                   cfg.Trial(), s);
          py::dict d;
          d["mistakes"] = r.trace.mistakes();
          d["regret"] = r.trace.rows.empty() ? 0 : r.trace.rows.back().cum_regret;
          d["rounds"] = r.trace.rows.size();
          d["mistake_rounds"] = r.mistake_rounds;
          d["advancements"] = r.advancements;
          d["csv"] = TraceToCsv(r.trace);
          return d;
        },
        py::arg("config"), py::arg("profile") = "", py::arg("seed") = py::none(),
        "Runs one trial described by INI text and returns its trace.");

  m.def("check_condition1",
        [](const std::string& config, const std::string& profile) {
          return ReportDict(CheckCondition1(Config::Parse(config, profile).Condition1()));
        },
        py::arg("config"), py::arg("profile") = "");
  m.def("check_c2",
        [](const std::string& config, const std::string& profile) {
          return ReportDict(CheckC2(Config::Parse(config, profile).C2()));
        },
        py::arg("config"), py::arg("profile") = "");

  m.def("two_expert_benchmark",
        [](std::size_t horizon, std::uint64_t seed, double flip, bool randomized) {
          SquintRun r = RunTwoExpertBenchmark(horizon, seed, flip, randomized);
          py::dict d;
          d["mistakes"] = r.mistakes;
          d["expert_mistakes"] = r.expert_mistakes;
          d["best"] = r.best;
          d["regret"] = r.regret;
          d["variation"] = r.variation;
          return d;
        },
        py::arg("horizon"), py::arg("seed"), py::arg("flip_probability") = 0.9,
        py::arg("randomized") = false);
}
