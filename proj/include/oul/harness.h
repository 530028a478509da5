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

// Trials, traces, the Condition 1 and C2 checkers, output formats, and the
// configuration file.

#ifndef OUL_HARNESS_H_
#define OUL_HARNESS_H_

#include <algorithm>
#include <cstdint>
#include <functional>
#include <atomic>
#include <exception>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "oul/concepts.h"
#include "oul/learners.h"
#include "oul/processes.h"
#include "oul/trees.h"

namespace oul {

// -- Specs ----------------------------------------------------------------------

struct ClassSpec {
  std::string preset = "thresholds";  // or "file"
  std::size_t n = 7;
  std::size_t n2 = 0;  // union-split only
  std::string file;
};

struct ProcessSpec {
  ProcessKind kind = ProcessKind::kIid;
  std::vector<double> weights;
  std::vector<double> initial;
  std::vector<std::vector<double>> transition;
  std::vector<std::string> sequence;  // point ids
  int depth = 0;  // walks: tree depth (0: the horizon for Littlestone walks)
  VclLayout layout = VclLayout::kShared;
};

struct LearnerSpec {
  std::string name = "soa";  // soa alg2 alg1 wm squint constant-0 constant-1
  int rollouts = 64;
  std::size_t experts_max = 64;  // pool size I for wm and squint
  std::string base = "soa";      // base learner of the expert pool
  bool randomized = false;       // squint
  std::size_t history_cap = 2000;
};

enum class TrialMode { kRealizable, kAgnostic };

struct TrialSpec {
  std::size_t horizon = 100;  // T; 0 takes a whole adversary trace
  TrialMode mode = TrialMode::kRealizable;
  double noise = 0.0;             // agnostic label flip probability
  std::optional<std::size_t> target;  // 1-based member; random when unset
};

ConceptClass BuildClass(const ClassSpec& spec);

// A labeled stream with its point-process oracle. `clean` holds the labels
// of the comparator.
struct LabeledStream {
  std::vector<PointId> points;
  std::vector<Label> labels;
  std::vector<Label> clean;
  std::shared_ptr<const ProcessOracle> oracle;
  std::optional<AdversaryTrace> adversary;
};

LabeledStream GenerateStream(const ConceptClass& c, const ProcessSpec& process,
                             const TrialSpec& trial, std::uint64_t seed);

// Learner by name. `c` is the hypothesis class, `oracle` may be null for
// learners that do not roll out.
std::unique_ptr<OnlineLearner> MakeLearner(
    const LearnerSpec& spec, const ConceptClass& c,
    std::shared_ptr<const ProcessOracle> oracle, std::uint64_t seed);
LearnerFactory MakeBaseFactory(const LearnerSpec& spec, const ConceptClass& c,
                               std::shared_ptr<const ProcessOracle> oracle,
                               std::uint64_t seed);

// -- Traces ---------------------------------------------------------------------

struct TraceRow {
  std::uint64_t t = 0;
  std::string point_id;
  Label y = Label::kZero;
  Label y_hat = Label::kZero;
  bool mistake = false;
  std::uint64_t cum_mistakes = 0;
  std::int64_t cum_regret = 0;
  bool operator==(const TraceRow&) const = default;
};

struct Trace {
  std::map<std::string, std::string> metadata;
  std::vector<TraceRow> rows;

  std::uint64_t mistakes() const {
    return rows.empty() ? 0 : rows.back().cum_mistakes;
  }
  void Append(std::string point_id, Label y, Label y_hat, bool comparator_wrong);
};

inline constexpr std::string_view kTraceHeader =
    "t,point_id,y,y_hat,mistake,cum_mistakes,cum_regret";

std::string TraceToCsv(const Trace& trace);
Trace TraceFromCsv(std::string_view csv);
std::string TraceToJsonl(const Trace& trace);
std::string TraceToSvg(const Trace& trace, bool regret = false);

struct TrialResult {
  Trace trace;
  std::vector<BatchLedger> ledger;          // alg2 / alg1
  std::vector<std::uint64_t> mistake_rounds;
  int advancements = 0;                     // alg1
  bool wm_bound_holds = true;
};

// Runs one trial and re-asserts the inline invariants: prefix realizability
// (realizable mode), the weighted-majority bound, expert reproduction for
// pooled learners, and the halving ledger on deterministic processes.
TrialResult RunTrial(const LearnerSpec& learner, const ProcessSpec& process,
                     const ClassSpec& class_spec, const TrialSpec& trial,
                     std::uint64_t seed);
TrialResult RunTrial(const LearnerSpec& learner, const ProcessSpec& process,
                     const ConceptClass& c, const TrialSpec& trial,
                     std::uint64_t seed);

// -- Checkers -------------------------------------------------------------------

enum class Verdict { kPass, kFail, kInconclusive };
std::string_view VerdictName(Verdict v);

struct CheckReport {
  std::string name;
  std::string statistic;  // definition of the series
  std::string threshold;  // definition of the envelope / threshold
  std::vector<std::uint64_t> seeds;
  std::vector<std::uint64_t> n;
  std::vector<double> value;
  std::vector<double> bound;
  Verdict verdict = Verdict::kInconclusive;
  std::string note;
};

std::string ReportToCsv(const CheckReport& r);
std::string ReportToJsonl(const CheckReport& r);
std::string ReportToSvg(const CheckReport& r);

struct Condition1Spec {
  LearnerSpec base;
  ProcessSpec process;
  ClassSpec class_spec;
  std::vector<std::uint64_t> seeds;
  std::vector<std::uint64_t> n_grid;
  double envelope_scale = 1.5;   // envelope(n) = scale / sqrt(n)
  double max_log_index = 1e6;    // pool cap, as log of the largest index
};

// For each seed the least index of an expert perfect on the first n rounds
// is index_of_set(J_n), J_n the base learner's mistake rounds up to n.
CheckReport CheckCondition1(const Condition1Spec& spec);

struct C2Spec {
  ProcessSpec process;
  std::size_t domain_size = 10;
  std::string partition = "singletons";  // singletons | one | explicit
  std::vector<std::vector<std::string>> parts;  // explicit parts by id
  std::vector<std::uint64_t> seeds;
  std::vector<std::uint64_t> t_grid;
  double threshold = 0.05;
};

// Part index per domain point; ConfigError when explicit parts overlap.
std::vector<int> BuildPartition(const Domain& domain, const C2Spec& spec);
CheckReport CheckC2(const C2Spec& spec);

// -- Two-expert benchmark ---------------------------------------------------------

struct SquintRun {
  std::uint64_t mistakes = 0;
  std::vector<std::uint64_t> expert_mistakes;
  std::size_t best = 0;  // 0-based index of the best expert
  double regret = 0;     // mistakes - best expert mistakes
  double variation = 0;  // V of the best expert
  double log_inv_prior = 0;
};

// Experts constant-0 and constant-1; labels flip each round with
// probability `flip_probability`.
SquintRun RunTwoExpertBenchmark(std::size_t horizon, std::uint64_t seed,
                                double flip_probability = 0.9,
                                bool randomized = false);

// -- Config ---------------------------------------------------------------------

// INI file: `key = value` lines under `[section]` headers; '#' and ';' start
// comments. With a profile, `[profile:section]` overrides `[section]`.
class Config {
 public:
  Config() = default;
  static Config Load(const std::string& path, const std::string& profile = "");
  static Config Parse(const std::string& text, const std::string& profile = "");

  std::optional<std::string> Get(const std::string& section,
                                 const std::string& key) const;
  std::string GetOr(const std::string& section, const std::string& key,
                    const std::string& fallback) const;

  ClassSpec Class() const;
  ProcessSpec Process() const;
  LearnerSpec Learner() const;
  TrialSpec Trial() const;
  std::vector<std::uint64_t> Seeds(const std::string& section) const;
  Condition1Spec Condition1() const;
  C2Spec C2() const;

 private:
  std::map<std::string, std::map<std::string, std::string>> values_;
  std::string profile_;
};

// "1-5" or "1 2 3" or "1,2,3".
std::vector<std::uint64_t> ParseSeedList(const std::string& text);

// -- Parallel map -----------------------------------------------------------------

// Applies fn to every item on up to `threads` workers; results keep the
// input order.
template <typename T, typename Fn>
auto ParallelMap(const std::vector<T>& items, Fn fn, unsigned threads = 0)
    -> std::vector<decltype(fn(items[0]))> {
  using R = decltype(fn(items[0]));
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::optional<R>> slots(items.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < items.size();) {
      try {
        slots[i].emplace(fn(items[i]));
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < threads && w < items.size(); ++w) {
    pool.emplace_back(worker);
  }
  worker();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  std::vector<R> out;
  out.reserve(items.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace oul

#endif  // OUL_HARNESS_H_
