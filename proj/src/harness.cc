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

#include "oul/harness.h"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "oul/errors.h"

namespace oul {

namespace {

std::string Fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::vector<std::string> SplitWords(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

}  // namespace

// -- Specs ----------------------------------------------------------------------

ConceptClass BuildClass(const ClassSpec& spec) {
  if (spec.preset == "file") {
    if (spec.file.empty()) throw ConfigError("class preset 'file' needs a file");
    return LoadClassFile(spec.file);
  }
  if (spec.n == 0) throw ConfigError("class domain size must be positive");
  try {
    return presets::ByName(spec.preset, spec.n, spec.n2);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

namespace {

std::shared_ptr<const ProcessModel> BuildPointProcess(
    const DomainPtr& domain, const ProcessSpec& spec, std::uint64_t seed) {
  switch (spec.kind) {
    case ProcessKind::kIid:
      return std::make_shared<ProcessModel>(
          ProcessModel::Iid(domain, spec.weights, seed));
    case ProcessKind::kMarkov:
      if (spec.transition.empty()) {
        throw ConfigError("markov process needs a transition table");
      }
      return std::make_shared<ProcessModel>(ProcessModel::Markov(
          domain, spec.initial, spec.transition, seed));
    case ProcessKind::kDeterministic: {
      std::vector<PointId> seq;
      for (const auto& id : spec.sequence) {
        try {
          seq.push_back(domain->Find(id));
        } catch (const DomainError& e) {
          throw ConfigError(std::string("sequence: ") + e.what());
        }
      }
      return std::make_shared<ProcessModel>(
          ProcessModel::Deterministic(domain, std::move(seq)));
    }
    case ProcessKind::kNovel:
      return std::make_shared<ProcessModel>(ProcessModel::Novel(domain));
    default:
      throw ConfigError("walk processes have no point-process model");
  }
}

}  // namespace

LabeledStream GenerateStream(const ConceptClass& c, const ProcessSpec& process,
                             const TrialSpec& trial, std::uint64_t seed) {
  LabeledStream s;
  std::size_t horizon = trial.horizon;
  if (process.kind == ProcessKind::kLittlestoneWalk) {
    const int depth =
        process.depth > 0 ? process.depth : static_cast<int>(horizon);
    if (horizon == 0) horizon = static_cast<std::size_t>(depth);
    LittlestoneTree tree = BuildLittlestoneWitness(c, depth);
    s.adversary = LittlestoneAdversary(c, tree, horizon, seed);
    s.oracle = std::make_shared<LittlestoneWalkOracle>(std::move(tree));
  } else if (process.kind == ProcessKind::kVclWalk) {
    if (process.depth <= 0) throw ConfigError("vcl-walk needs depth >= 1");
    VclTree tree = BuildVclAdversaryTree(c, process.depth, process.layout);
    s.adversary = VclAdversary(c, tree, seed);
    if (horizon == 0) horizon = s.adversary->size();
    if (horizon > s.adversary->size()) {
      throw InfeasibleError("VCL walk has " +
                            std::to_string(s.adversary->size()) +
                            " points, " + std::to_string(horizon) +
                            " requested");
    }
    s.oracle = std::make_shared<VclWalkOracle>(std::move(tree));
  }
  if (s.adversary) {
    s.points.assign(s.adversary->points.begin(),
                    s.adversary->points.begin() + horizon);
    s.labels.assign(s.adversary->labels.begin(),
                    s.adversary->labels.begin() + horizon);
  } else {
    auto model = BuildPointProcess(c.domain_ptr(), process, seed);
    s.points = model->Sample(horizon);
    s.oracle = model;
    // Target function.
    Rng rng = MakeRng(seed, Stream::kTarget);
    std::vector<Label> target(c.domain().size());
    if (c.empty()) throw ConfigError("the class is empty");
    if (c.is_cube()) {
      if (trial.target) throw ConfigError("target index needs a tabulated class");
      for (std::size_t x = 0; x < target.size(); ++x) {
        target[x] = c.IsFree(PointId{static_cast<std::uint32_t>(x)})
                        ? LabelFromBit(FairBit(rng))
                        : c.cube_fixed()[x];
      }
    } else {
      const auto& hs = c.hypotheses();
      std::size_t idx;
      if (trial.target) {
        if (*trial.target < 1 || *trial.target > hs.size()) {
          throw ConfigError("target index outside 1.." +
                            std::to_string(hs.size()));
        }
        idx = *trial.target - 1;
      } else {
        idx = UniformIndex(rng, hs.size());
      }
      target = hs[idx].table();
    }
    for (PointId x : s.points) {
      if (target[x.value] == Label::kUndefined) {
        throw RealizabilityError("target is undefined at point " +
                                 c.domain().id(x));
      }
      s.labels.push_back(target[x.value]);
    }
  }
  s.clean = s.labels;
  if (trial.mode == TrialMode::kAgnostic && trial.noise > 0) {
    Rng noise = MakeRng(seed, Stream::kNoise);
    for (Label& y : s.labels) {
      if (Uniform01(noise) < trial.noise) y = Flip(y);
    }
  }
  return s;
}

LearnerFactory MakeBaseFactory(const LearnerSpec& spec, const ConceptClass& c,
                               std::shared_ptr<const ProcessOracle> oracle,
                               std::uint64_t seed) {
  const std::string& base = spec.base;
  if (base == "soa") {
    if (c.is_cube()) {
      return [c] { return std::make_unique<Soa>(c, false); };
    }
    auto solver = std::make_shared<LittlestoneSolver>(c);
    return [solver] { return std::make_unique<Soa>(solver, false); };
  }
  if (base == "constant-0" || base == "constant-1") {
    const Label l = base == "constant-1" ? Label::kOne : Label::kZero;
    return [l] { return std::make_unique<ConstantLearner>(l); };
  }
  if (base == "alg2" || base == "alg1") {
    LearnerSpec inner = spec;
    inner.name = base;
    return [inner, c, oracle, seed]() -> std::unique_ptr<OnlineLearner> {
      if (inner.name == "alg2") {
        PartialWeightOptions o;
        o.rollouts = inner.rollouts;
        o.seed = seed;
        o.keep_ledger = false;
        return std::make_unique<PartialWeightLearner>(c, oracle, o);
      }
      GameLearnerOptions o;
      o.inner.rollouts = inner.rollouts;
      o.inner.seed = seed;
      o.inner.keep_ledger = false;
      o.history_cap = inner.history_cap;
      o.strict = false;
      return std::make_unique<GameLearner>(c, oracle, o);
    };
  }
  throw ConfigError("unknown base learner '" + base + "'");
}

std::unique_ptr<OnlineLearner> MakeLearner(
    const LearnerSpec& spec, const ConceptClass& c,
    std::shared_ptr<const ProcessOracle> oracle, std::uint64_t seed) {
  const std::string& name = spec.name;
  if (name == "soa") return std::make_unique<Soa>(c, true);
  if (name == "constant-0") return std::make_unique<ConstantLearner>(Label::kZero);
  if (name == "constant-1") return std::make_unique<ConstantLearner>(Label::kOne);
  if (name == "alg2") {
    PartialWeightOptions o;
    o.rollouts = spec.rollouts;
    o.seed = SplitSeed(seed, Stream::kLearner);
    return std::make_unique<PartialWeightLearner>(c, std::move(oracle), o);
  }
  if (name == "alg1") {
    GameLearnerOptions o;
    o.inner.rollouts = spec.rollouts;
    o.inner.seed = SplitSeed(seed, Stream::kLearner);
    o.history_cap = spec.history_cap;
    return std::make_unique<GameLearner>(c, std::move(oracle), o);
  }
  if (name == "wm" || name == "squint") {
    if (spec.experts_max == 0) throw ConfigError("experts_max must be positive");
    auto pool = BuildExpertPool(
        MakeBaseFactory(spec, c, oracle, SplitSeed(seed, Stream::kLearner)),
        spec.experts_max);
    if (name == "wm") return std::make_unique<WeightedMajority>(std::move(pool));
    SquintOptions o;
    o.randomized = spec.randomized;
    o.seed = SplitSeed(seed, Stream::kLearner, 1);
    return std::make_unique<Squint>(std::move(pool), o);
  }
  throw ConfigError("unknown learner '" + name + "'");
}

// -- Traces ---------------------------------------------------------------------

void Trace::Append(std::string point_id, Label y, Label y_hat,
                   bool comparator_wrong) {
  TraceRow r;
  r.t = rows.size() + 1;
  r.point_id = std::move(point_id);
  r.y = y;
  r.y_hat = y_hat;
  r.mistake = y != y_hat;
  const std::uint64_t prev_m = rows.empty() ? 0 : rows.back().cum_mistakes;
  const std::int64_t prev_r = rows.empty() ? 0 : rows.back().cum_regret;
  r.cum_mistakes = prev_m + (r.mistake ? 1 : 0);
  r.cum_regret = prev_r + (r.mistake ? 1 : 0) - (comparator_wrong ? 1 : 0);
  rows.push_back(std::move(r));
}

std::string TraceToCsv(const Trace& trace) {
  std::ostringstream out;
  out << kTraceHeader << '\n';
  for (const auto& r : trace.rows) {
    out << r.t << ',' << r.point_id << ',' << LabelChar(r.y) << ','
        << LabelChar(r.y_hat) << ',' << (r.mistake ? 1 : 0) << ','
        << r.cum_mistakes << ',' << r.cum_regret << '\n';
  }
  return out.str();
}

Trace TraceFromCsv(std::string_view csv) {
  std::istringstream in{std::string(csv)};
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) {
    throw DomainError("trace CSV must start with '" +
                      std::string(kTraceHeader) + "'");
  }
  Trace trace;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 7) {
      throw DomainError("trace CSV line " + std::to_string(lineno) +
                        ": expected 7 fields");
    }
    try {
      TraceRow r;
      r.t = std::stoull(f[0]);
      r.point_id = f[1];
      r.y = LabelFromChar(f[2].at(0));
      r.y_hat = LabelFromChar(f[3].at(0));
      r.mistake = f[4] == "1";
      r.cum_mistakes = std::stoull(f[5]);
      r.cum_regret = std::stoll(f[6]);
      trace.rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw DomainError("trace CSV line " + std::to_string(lineno) +
                        ": bad number");
    }
  }
  return trace;
}

std::string TraceToJsonl(const Trace& trace) {
  std::ostringstream out;
  nlohmann::ordered_json meta;
  meta["metadata"] = trace.metadata;
  out << meta.dump() << '\n';
  for (const auto& r : trace.rows) {
    nlohmann::ordered_json j;
    j["t"] = r.t;
    j["point_id"] = r.point_id;
    j["y"] = LabelBit(r.y);
    j["y_hat"] = LabelBit(r.y_hat);
    j["mistake"] = r.mistake ? 1 : 0;
    j["cum_mistakes"] = r.cum_mistakes;
    j["cum_regret"] = r.cum_regret;
    out << j.dump() << '\n';
  }
  return out.str();
}

namespace {

constexpr double kSvgW = 640, kSvgH = 360, kPad = 48;

std::string Polyline(const std::vector<double>& xs,
                     const std::vector<double>& ys, double x_max, double y_max,
                     const std::string& color) {
  std::string pts;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double px = kPad + (kSvgW - 2 * kPad) * (x_max > 0 ? xs[i] / x_max : 0);
    const double py =
        kSvgH - kPad - (kSvgH - 2 * kPad) * (y_max > 0 ? ys[i] / y_max : 0);
    if (i) pts += ' ';
    pts += Fixed(px, 2) + "," + Fixed(py, 2);
  }
  return "<polyline fill=\"none\" stroke=\"" + color +
         "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
}

std::string SvgFrame(const std::string& title, const std::string& x_label,
                     const std::string& y_label, double x_max, double y_max,
                     const std::string& body) {
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSvgW
      << "\" height=\"" << kSvgH << "\" viewBox=\"0 0 " << kSvgW << ' '
      << kSvgH << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<line x1=\"" << kPad << "\" y1=\"" << kSvgH - kPad << "\" x2=\""
      << kSvgW - kPad << "\" y2=\"" << kSvgH - kPad
      << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << kPad << "\" y1=\"" << kPad << "\" x2=\"" << kPad
      << "\" y2=\"" << kSvgH - kPad << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << kSvgW / 2 << "\" y=\"20\" text-anchor=\"middle\" "
      << "font-size=\"14\">" << title << "</text>\n"
      << "<text x=\"" << kSvgW / 2 << "\" y=\"" << kSvgH - 10
      << "\" text-anchor=\"middle\" font-size=\"12\">" << x_label << " (max "
      << Fixed(x_max, 0) << ")</text>\n"
      << "<text x=\"12\" y=\"" << kSvgH / 2
      << "\" font-size=\"12\" transform=\"rotate(-90 12 " << kSvgH / 2
      << ")\" text-anchor=\"middle\">" << y_label << " (max "
      << Fixed(y_max, 3) << ")</text>\n"
      << body << "</svg>\n";
  return out.str();
}

std::string XmlEscape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

std::string TraceToSvg(const Trace& trace, bool regret) {
  std::vector<double> xs, ys;
  double y_max = 0;
  for (const auto& r : trace.rows) {
    const double v = regret ? static_cast<double>(r.cum_regret)
                            : static_cast<double>(r.cum_mistakes);
    xs.push_back(static_cast<double>(r.t));
    ys.push_back(v / static_cast<double>(r.t));
    y_max = std::max(y_max, std::abs(ys.back()));
  }
  if (y_max == 0) y_max = 1;
  const double x_max = xs.empty() ? 1 : xs.back();
  std::string title = regret ? "cumulative regret / t" : "cumulative mistakes / t";
  if (auto it = trace.metadata.find("learner"); it != trace.metadata.end()) {
    title += " (" + it->second + ")";
  }
  return SvgFrame(XmlEscape(title), "t", regret ? "regret/t" : "mistakes/t",
                  x_max, y_max, Polyline(xs, ys, x_max, y_max, "steelblue"));
}

// -- Trials ---------------------------------------------------------------------

TrialResult RunTrial(const LearnerSpec& learner, const ProcessSpec& process,
                     const ClassSpec& class_spec, const TrialSpec& trial,
                     std::uint64_t seed) {
  TrialResult r = RunTrial(learner, process, BuildClass(class_spec), trial, seed);
  r.trace.metadata["class"] = class_spec.preset == "file"
                                  ? class_spec.file
                                  : class_spec.preset + ":" +
                                        std::to_string(class_spec.n);
  return r;
}

namespace {

// Replay: the expert that flips the base learner at its own mistake
// rounds reproduces every label.
void AssertExpertReproduction(const LearnerFactory& base,
                              const LabeledStream& s) {
  auto learner = base();
  std::vector<std::uint64_t> flips;
  for (std::size_t t = 0; t < s.points.size(); ++t) {
    if (learner->Predict(s.points[t]) != s.labels[t]) flips.push_back(t + 1);
    learner->Observe(s.labels[t]);
  }
  ExpertRunner expert(base(), flips);
  for (std::size_t t = 0; t < s.points.size(); ++t) {
    const Label y = expert.Predict(s.points[t]);
    expert.Observe(s.labels[t]);
    if (y != s.labels[t]) {
      throw InvariantViolation("expert with the base mistake set deviates at t=" +
                               std::to_string(t + 1));
    }
  }
}

}  // namespace

TrialResult RunTrial(const LearnerSpec& learner_spec,
                     const ProcessSpec& process, const ConceptClass& c,
                     const TrialSpec& trial, std::uint64_t seed) {
  LabeledStream s = GenerateStream(c, process, trial, seed);
  if (trial.mode == TrialMode::kRealizable) {
    ConceptClass vs = c;
    for (std::size_t t = 0; t < s.points.size(); ++t) {
      vs = Restrict(vs, {{s.points[t], s.labels[t]}});
      if (vs.empty()) {
        throw RealizabilityError("prefix of length " + std::to_string(t + 1) +
                                 " is not realizable by the class");
      }
    }
  }
  auto learner = MakeLearner(learner_spec, c, s.oracle, seed);

  TrialResult result;
  Trace& trace = result.trace;
  trace.metadata["learner"] = learner->name();
  trace.metadata["process"] = std::string(ProcessKindName(process.kind));
  trace.metadata["class"] = std::string(PresetName(c.preset()));
  trace.metadata["seed"] = std::to_string(seed);
  trace.metadata["horizon"] = std::to_string(s.points.size());
  trace.metadata["mode"] =
      trial.mode == TrialMode::kRealizable ? "realizable" : "agnostic";
  trace.metadata["rollouts"] = std::to_string(learner_spec.rollouts);
  trace.metadata["experts_max"] = std::to_string(learner_spec.experts_max);
  trace.metadata["window_cap"] = std::to_string(kDefaultWindowCap);

  for (std::size_t t = 0; t < s.points.size(); ++t) {
    const Label y_hat = learner->Predict(s.points[t]);
    learner->Observe(s.labels[t]);
    trace.Append(c.domain().id(s.points[t]), s.labels[t], y_hat,
                 s.clean[t] != s.labels[t]);
    if (y_hat != s.labels[t]) result.mistake_rounds.push_back(t + 1);
  }

  if (auto* wm = dynamic_cast<WeightedMajority*>(learner.get())) {
    result.wm_bound_holds = wm->BoundHolds();
    if (!result.wm_bound_holds) {
      throw InvariantViolation("weighted-majority mistake bound violated");
    }
  }
  if ((learner_spec.name == "wm" || learner_spec.name == "squint") &&
      trial.mode == TrialMode::kRealizable) {
    AssertExpertReproduction(
        MakeBaseFactory(learner_spec, c, s.oracle, seed), s);
  }
  if (auto* alg2 = dynamic_cast<PartialWeightLearner*>(learner.get())) {
    result.ledger = alg2->ledger();
    if (s.oracle->deterministic() && trial.mode == TrialMode::kRealizable) {
      const int d = VcDimension(c).value_or(0);
      for (const auto& e : result.ledger) {
        if (!e.exact) continue;
        const double bound = d * std::log2(static_cast<double>(e.batch)) + 1;
        if (e.halving_mistakes > bound) {
          throw InvariantViolation("batch " + std::to_string(e.batch) +
                                   " has " +
                                   std::to_string(e.halving_mistakes) +
                                   " halving mistakes");
        }
      }
    }
  }
  if (auto* alg1 = dynamic_cast<GameLearner*>(learner.get())) {
    result.ledger = alg1->inner().ledger();
    result.advancements = alg1->advancements();
  }
  return result;
}

// -- Reports --------------------------------------------------------------------

std::string_view VerdictName(Verdict v) {
  switch (v) {
    case Verdict::kPass: return "pass";
    case Verdict::kFail: return "fail";
    default: return "inconclusive";
  }
}

std::string ReportToCsv(const CheckReport& r) {
  std::ostringstream out;
  out << "# check: " << r.name << '\n'
      << "# statistic: " << r.statistic << '\n'
      << "# threshold: " << r.threshold << '\n'
      << "# verdict: " << VerdictName(r.verdict) << '\n';
  if (!r.note.empty()) out << "# note: " << r.note << '\n';
  out << "n,value,bound\n";
  for (std::size_t i = 0; i < r.n.size(); ++i) {
    out << r.n[i] << ',' << Fixed(r.value[i], 9) << ',' << Fixed(r.bound[i], 9)
        << '\n';
  }
  return out.str();
}

std::string ReportToJsonl(const CheckReport& r) {
  std::ostringstream out;
  nlohmann::ordered_json head;
  head["check"] = r.name;
  head["statistic"] = r.statistic;
  head["threshold"] = r.threshold;
  head["verdict"] = std::string(VerdictName(r.verdict));
  head["note"] = r.note;
  head["seeds"] = r.seeds;
  out << head.dump() << '\n';
  for (std::size_t i = 0; i < r.n.size(); ++i) {
    nlohmann::ordered_json j;
    j["n"] = r.n[i];
    j["value"] = r.value[i];
    j["bound"] = r.bound[i];
    out << j.dump() << '\n';
  }
  return out.str();
}

std::string ReportToSvg(const CheckReport& r) {
  std::vector<double> xs;
  double y_max = 0;
  for (std::size_t i = 0; i < r.n.size(); ++i) {
    xs.push_back(static_cast<double>(r.n[i]));
    y_max = std::max({y_max, r.value[i], r.bound[i]});
  }
  if (y_max == 0) y_max = 1;
  const double x_max = xs.empty() ? 1 : xs.back();
  return SvgFrame(XmlEscape(r.name + ": " + std::string(VerdictName(r.verdict))),
                  "n", "statistic", x_max, y_max,
                  Polyline(xs, r.value, x_max, y_max, "steelblue") +
                      Polyline(xs, r.bound, x_max, y_max, "firebrick"));
}

// -- Condition 1 ----------------------------------------------------------------

CheckReport CheckCondition1(const Condition1Spec& spec) {
  if (spec.seeds.empty() || spec.n_grid.empty()) {
    throw ConfigError("condition1 needs seeds and an n grid");
  }
  std::vector<std::uint64_t> grid = spec.n_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid.front() == 0) throw ConfigError("n grid entries must be positive");
  const ConceptClass c = BuildClass(spec.class_spec);
  TrialSpec trial;
  trial.horizon = grid.back();

  struct SeedResult {
    std::vector<double> log_index;
  };
  auto per_seed = ParallelMap(spec.seeds, [&](std::uint64_t seed) {
    LabeledStream s = GenerateStream(c, spec.process, trial, seed);
    LearnerFactory base = MakeBaseFactory(spec.base, c, s.oracle, seed);
    AssertExpertReproduction(base, s);
    auto learner = base();
    std::vector<std::uint64_t> mistakes;
    for (std::size_t t = 0; t < s.points.size(); ++t) {
      if (learner->Predict(s.points[t]) != s.labels[t]) {
        mistakes.push_back(t + 1);
      }
      learner->Observe(s.labels[t]);
    }
    SeedResult r;
    for (std::uint64_t n : grid) {
      auto end = std::upper_bound(mistakes.begin(), mistakes.end(), n);
      std::vector<std::uint64_t> j_n(mistakes.begin(), end);
      r.log_index.push_back(LogIndex(IndexOfSet(j_n)));
    }
    return r;
  });

  CheckReport report;
  report.name = "condition1 per process";
  report.statistic =
      "mean over seeds of log(i_n)/n, i_n = index_of_set(base mistake rounds "
      "<= n)";
  report.threshold = "envelope " + Fixed(spec.envelope_scale, 4) +
                     "/sqrt(n) at the largest n";
  report.seeds = spec.seeds;
  bool capped = false;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    double sum = 0;
    for (const auto& r : per_seed) {
      if (r.log_index[g] > spec.max_log_index) capped = true;
      sum += r.log_index[g] / static_cast<double>(grid[g]);
    }
    report.n.push_back(grid[g]);
    report.value.push_back(sum / static_cast<double>(per_seed.size()));
    report.bound.push_back(spec.envelope_scale /
                           std::sqrt(static_cast<double>(grid[g])));
  }
  if (capped) {
    report.verdict = Verdict::kInconclusive;
    report.note = "an index exceeded the pool cap exp(" +
                  Fixed(spec.max_log_index, 1) + ")";
  } else {
    report.verdict = report.value.back() <= report.bound.back()
                         ? Verdict::kPass
                         : Verdict::kFail;
  }
  return report;
}

// -- C2 -------------------------------------------------------------------------

std::vector<int> BuildPartition(const Domain& domain, const C2Spec& spec) {
  std::vector<int> parts(domain.size(), -1);
  if (spec.partition == "singletons") {
    for (std::size_t i = 0; i < parts.size(); ++i) parts[i] = static_cast<int>(i);
  } else if (spec.partition == "one") {
    std::fill(parts.begin(), parts.end(), 0);
  } else if (spec.partition == "explicit") {
    for (std::size_t k = 0; k < spec.parts.size(); ++k) {
      for (const auto& id : spec.parts[k]) {
        PointId x;
        try {
          x = domain.Find(id);
        } catch (const DomainError& e) {
          throw ConfigError(std::string("partition: ") + e.what());
        }
        if (parts[x.value] >= 0) {
          throw ConfigError("partition sets overlap at point " + id);
        }
        parts[x.value] = static_cast<int>(k);
      }
    }
  } else {
    throw ConfigError("unknown partition '" + spec.partition + "'");
  }
  return parts;
}

CheckReport CheckC2(const C2Spec& spec) {
  if (spec.seeds.empty() || spec.t_grid.empty()) {
    throw ConfigError("c2 needs seeds and a T grid");
  }
  std::vector<std::uint64_t> grid = spec.t_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid.front() == 0) throw ConfigError("T grid entries must be positive");
  auto domain = Domain::Numbered(spec.domain_size);
  const std::vector<int> parts = BuildPartition(*domain, spec);

  auto counts = ParallelMap(spec.seeds, [&](std::uint64_t seed) {
    auto model = BuildPointProcess(domain, spec.process, seed);
    std::vector<PointId> xs = model->Sample(grid.back());
    std::vector<double> out;
    for (std::uint64_t t : grid) {
      out.push_back(static_cast<double>(
          VisitedParts(std::span<const PointId>(xs.data(), t), parts)));
    }
    return out;
  });

  CheckReport report;
  report.name = "c2";
  report.statistic = "mean over seeds of |{k : X_1..X_T meets A_k}| / T";
  report.threshold = "below " + Fixed(spec.threshold, 4) +
                     " at the largest T and non-increasing";
  report.seeds = spec.seeds;
  bool decreasing = true;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    double sum = 0;
    for (const auto& c : counts) sum += c[g];
    const double ratio =
        sum / static_cast<double>(counts.size()) / static_cast<double>(grid[g]);
    if (g > 0 && ratio > report.value.back() + 1e-12) decreasing = false;
    report.n.push_back(grid[g]);
    report.value.push_back(ratio);
    report.bound.push_back(spec.threshold);
  }
  report.verdict = report.value.back() < spec.threshold && decreasing
                       ? Verdict::kPass
                       : Verdict::kFail;
  if (!decreasing) report.note = "series increases somewhere on the grid";
  return report;
}

// -- Two-expert benchmark ---------------------------------------------------------

SquintRun RunTwoExpertBenchmark(std::size_t horizon, std::uint64_t seed,
                                double flip_probability, bool randomized) {
  SquintOptions o;
  o.randomized = randomized;
  o.seed = SplitSeed(seed, Stream::kLearner);
  Squint squint(2, o);
  Rng labels = MakeRng(seed, Stream::kLabels);
  const Label advice[2] = {Label::kZero, Label::kOne};
  Label y = LabelFromBit(FairBit(labels));
  for (std::size_t t = 0; t < horizon; ++t) {
    if (t > 0 && Uniform01(labels) < flip_probability) y = Flip(y);
    squint.PredictFromAdvice(advice);
    squint.Update(advice, y);
  }
  SquintRun run;
  run.mistakes = squint.mistakes();
  run.expert_mistakes = squint.expert_mistakes();
  run.best = run.expert_mistakes[1] < run.expert_mistakes[0] ? 1 : 0;
  run.regret = static_cast<double>(run.mistakes) -
               static_cast<double>(run.expert_mistakes[run.best]);
  run.variation = squint.variation()[run.best];
  const double i = static_cast<double>(run.best + 1);
  run.log_inv_prior = std::log(i) + std::log(i + 1);
  return run;
}

// -- Config ---------------------------------------------------------------------

namespace {

const std::map<std::string, std::set<std::string>>& KnownKeys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"class", {"preset", "n", "n2", "file"}},
      {"process",
       {"kind", "weights", "initial", "transition", "sequence", "depth",
        "layout"}},
      {"learner",
       {"name", "rollouts", "experts_max", "base", "randomized",
        "history_cap"}},
      {"trial", {"T", "mode", "noise", "target", "seed", "seeds"}},
      {"condition1",
       {"base", "seeds", "n_grid", "envelope_scale", "max_log_index"}},
      {"c2", {"domain", "partition", "parts", "seeds", "t_grid", "threshold"}},
  };
  return keys;
}

template <typename T>
T Convert(const std::string& section, const std::string& key,
          const std::string& value) {
  try {
    std::size_t used = 0;
    T v;
    if constexpr (std::is_same_v<T, double>) {
      v = std::stod(value, &used);
    } else if constexpr (std::is_signed_v<T>) {
      v = static_cast<T>(std::stoll(value, &used));
    } else {
      if (!value.empty() && value[0] == '-') throw std::invalid_argument("");
      v = static_cast<T>(std::stoull(value, &used));
    }
    if (used != value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError("[" + section + "] " + key + ": bad number '" + value +
                      "'");
  }
}

bool ConvertBool(const std::string& section, const std::string& key,
                 const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("[" + section + "] " + key + ": expected true or false");
}

std::vector<double> ConvertDoubles(const std::string& section,
                                   const std::string& key,
                                   const std::string& v) {
  std::vector<double> out;
  for (const auto& w : SplitWords(v)) out.push_back(Convert<double>(section, key, w));
  return out;
}

std::vector<std::uint64_t> ConvertInts(const std::string& section,
                                       const std::string& key,
                                       const std::string& v) {
  std::vector<std::uint64_t> out;
  for (const auto& w : SplitWords(v)) {
    out.push_back(Convert<std::uint64_t>(section, key, w));
  }
  return out;
}

}  // namespace

std::vector<std::uint64_t> ParseSeedList(const std::string& text) {
  std::string s = text;
  std::replace(s.begin(), s.end(), ',', ' ');
  std::vector<std::uint64_t> out;
  for (const auto& w : SplitWords(s)) {
    auto dash = w.find('-', 1);
    if (dash != std::string::npos) {
      auto lo = Convert<std::uint64_t>("seeds", "range", w.substr(0, dash));
      auto hi = Convert<std::uint64_t>("seeds", "range", w.substr(dash + 1));
      if (hi < lo) throw ConfigError("seed range '" + w + "' is empty");
      for (auto v = lo; v <= hi; ++v) out.push_back(v);
    } else {
      out.push_back(Convert<std::uint64_t>("seeds", "seed", w));
    }
  }
  return out;
}

Config Config::Load(const std::string& path, const std::string& profile) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Parse(buf.str(), profile);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

Config Config::Parse(const std::string& text, const std::string& profile) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("line " + std::to_string(e.line()) + ": " +
                      e.message());
  }
  Config config;
  config.profile_ = profile;
  for (const auto& [section, body] : tree) {
    if (!body.data().empty()) {
      throw ConfigError("key '" + section + "' outside any section");
    }
    std::string base = section;
    if (auto colon = section.find(':'); colon != std::string::npos) {
      base = section.substr(colon + 1);
    }
    auto known = KnownKeys().find(base);
    if (known == KnownKeys().end()) {
      throw ConfigError("unknown section [" + section + "]");
    }
    for (const auto& [key, value] : body) {
      if (!known->second.count(key)) {
        throw ConfigError("[" + section + "] unknown key '" + key + "'");
      }
      config.values_[section][key] = value.data();
    }
  }
  return config;
}

std::optional<std::string> Config::Get(const std::string& section,
                                       const std::string& key) const {
  if (!profile_.empty()) {
    auto s = values_.find(profile_ + ":" + section);
    if (s != values_.end()) {
      if (auto it = s->second.find(key); it != s->second.end()) return it->second;
    }
  }
  auto s = values_.find(section);
  if (s == values_.end()) return std::nullopt;
  auto it = s->second.find(key);
  if (it == s->second.end()) return std::nullopt;
  return it->second;
}

std::string Config::GetOr(const std::string& section, const std::string& key,
                          const std::string& fallback) const {
  return Get(section, key).value_or(fallback);
}

ClassSpec Config::Class() const {
  ClassSpec s;
  s.preset = GetOr("class", "preset", s.preset);
  if (auto v = Get("class", "n")) s.n = Convert<std::size_t>("class", "n", *v);
  if (auto v = Get("class", "n2")) s.n2 = Convert<std::size_t>("class", "n2", *v);
  s.file = GetOr("class", "file", "");
  if (!s.file.empty() && !Get("class", "preset")) s.preset = "file";
  return s;
}

ProcessSpec Config::Process() const {
  ProcessSpec s;
  if (auto v = Get("process", "kind")) s.kind = ProcessKindFromName(*v);
  if (auto v = Get("process", "weights")) {
    s.weights = ConvertDoubles("process", "weights", *v);
  }
  if (auto v = Get("process", "initial")) {
    s.initial = ConvertDoubles("process", "initial", *v);
  }
  if (auto v = Get("process", "transition")) {
    std::stringstream rows(*v);
    for (std::string row; std::getline(rows, row, ';');) {
      if (SplitWords(row).empty()) continue;
      s.transition.push_back(ConvertDoubles("process", "transition", row));
    }
  }
  if (auto v = Get("process", "sequence")) s.sequence = SplitWords(*v);
  if (auto v = Get("process", "depth")) {
    s.depth = Convert<int>("process", "depth", *v);
  }
  if (auto v = Get("process", "layout")) {
    try {
      s.layout = VclLayoutFromName(*v);
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
  return s;
}

LearnerSpec Config::Learner() const {
  LearnerSpec s;
  s.name = GetOr("learner", "name", s.name);
  if (auto v = Get("learner", "rollouts")) {
    s.rollouts = Convert<int>("learner", "rollouts", *v);
  }
  if (auto v = Get("learner", "experts_max")) {
    s.experts_max = Convert<std::size_t>("learner", "experts_max", *v);
  }
  s.base = GetOr("learner", "base", s.base);
  if (auto v = Get("learner", "randomized")) {
    s.randomized = ConvertBool("learner", "randomized", *v);
  }
  if (auto v = Get("learner", "history_cap")) {
    s.history_cap = Convert<std::size_t>("learner", "history_cap", *v);
  }
  return s;
}

TrialSpec Config::Trial() const {
  TrialSpec s;
  if (auto v = Get("trial", "T")) s.horizon = Convert<std::size_t>("trial", "T", *v);
  if (auto v = Get("trial", "mode")) {
    if (*v == "realizable") {
      s.mode = TrialMode::kRealizable;
    } else if (*v == "agnostic") {
      s.mode = TrialMode::kAgnostic;
    } else {
      throw ConfigError("[trial] mode: expected realizable or agnostic");
    }
  }
  if (auto v = Get("trial", "noise")) {
    s.noise = Convert<double>("trial", "noise", *v);
    if (s.noise < 0 || s.noise > 1) throw ConfigError("[trial] noise outside [0,1]");
  }
  if (auto v = Get("trial", "target")) {
    if (*v != "random") s.target = Convert<std::size_t>("trial", "target", *v);
  }
  return s;
}

std::vector<std::uint64_t> Config::Seeds(const std::string& section) const {
  if (auto v = Get(section, "seeds")) return ParseSeedList(*v);
  if (auto v = Get(section, "seed")) return ParseSeedList(*v);
  return {1};
}

Condition1Spec Config::Condition1() const {
  Condition1Spec s;
  s.base = Learner();
  s.base.base = GetOr("condition1", "base", s.base.base);
  s.process = Process();
  s.class_spec = Class();
  s.seeds = Seeds("condition1");
  if (auto v = Get("condition1", "n_grid")) {
    s.n_grid = ConvertInts("condition1", "n_grid", *v);
  } else {
    s.n_grid = {25, 50, 100, 200};
  }
  if (auto v = Get("condition1", "envelope_scale")) {
    s.envelope_scale = Convert<double>("condition1", "envelope_scale", *v);
  }
  if (auto v = Get("condition1", "max_log_index")) {
    s.max_log_index = Convert<double>("condition1", "max_log_index", *v);
  }
  return s;
}

C2Spec Config::C2() const {
  C2Spec s;
  s.process = Process();
  if (auto v = Get("c2", "domain")) {
    s.domain_size = Convert<std::size_t>("c2", "domain", *v);
  }
  s.partition = GetOr("c2", "partition", s.partition);
  if (auto v = Get("c2", "parts")) {
    s.partition = GetOr("c2", "partition", "explicit");
    std::stringstream in(*v);
    for (std::string part; std::getline(in, part, '|');) {
      s.parts.push_back(SplitWords(part));
    }
  }
  s.seeds = Seeds("c2");
  if (auto v = Get("c2", "t_grid")) {
    s.t_grid = ConvertInts("c2", "t_grid", *v);
  } else {
    s.t_grid = {100, 1000, 10000};
  }
  if (auto v = Get("c2", "threshold")) {
    s.threshold = Convert<double>("c2", "threshold", *v);
  }
  return s;
}

}  // namespace oul
