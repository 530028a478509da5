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

// Online learners: SOA, the partial-class weight learner, the learner driven
// by the VCL game, and the expert aggregators.

#ifndef OUL_LEARNERS_H_
#define OUL_LEARNERS_H_

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "oul/concepts.h"
#include "oul/rng.h"
#include "oul/trees.h"

namespace oul {

// Conditional rollouts of a data process. Implemented in processes.h.
class ProcessOracle {
 public:
  virtual ~ProcessOracle() = default;

  // Every conditional law is a point mass.
  virtual bool deterministic() const = 0;
  // A continuation X_{t+1..t+horizon} given history X_{<=t}. `draw` selects
  // an independent sample. Shorter when a finite stream ends.
  virtual std::vector<PointId> Rollout(std::span<const PointId> history,
                                       std::size_t horizon,
                                       std::uint64_t draw) const = 0;
};

// Protocol: Predict(x_t), then Observe(y_t), once per round.
class OnlineLearner {
 public:
  virtual ~OnlineLearner() = default;
  virtual std::string name() const = 0;
  virtual Label Predict(PointId x) = 0;
  virtual void Observe(Label y) = 0;
};

using LearnerFactory = std::function<std::unique_ptr<OnlineLearner>()>;

class ConstantLearner : public OnlineLearner {
 public:
  explicit ConstantLearner(Label label) : label_(label) {}
  std::string name() const override {
    return label_ == Label::kOne ? "constant-1" : "constant-0";
  }
  Label Predict(PointId) override { return label_; }
  void Observe(Label) override {}

 private:
  Label label_;
};

// -- SOA ----------------------------------------------------------------------

// Predicts the label whose restriction keeps the larger Littlestone
// dimension (ties to 0). Strict mode throws RealizabilityError when a label
// empties the version space; otherwise the learner keeps predicting 0.
class Soa : public OnlineLearner {
 public:
  explicit Soa(ConceptClass c, bool strict = true);
  // Shares one memo table among several learners over the same class.
  Soa(std::shared_ptr<LittlestoneSolver> solver, bool strict);

  std::string name() const override { return "soa"; }
  Label Predict(PointId x) override;
  void Observe(Label y) override;

  std::size_t version_space_size() const;

 private:
  int RestrictedDimension(PointId x, Label y) const;

  ConceptClass base_;
  bool strict_;
  std::shared_ptr<LittlestoneSolver> solver_;  // tabulated classes
  HypothesisMask mask_;                        // tabulated classes
  ConceptClass cube_;                          // cube classes
  bool empty_ = false;
  std::optional<PointId> pending_;
};

// -- Partial-class weight learner -----------------------------------------------

inline std::uint64_t BatchEnd(std::uint64_t m) { return m * (m + 1) / 2; }

// Per-batch record. A halving mistake at round t satisfies
// w(H_{L_t}, X_(t, end]) <= w(H_{L_{t-1}}, X_[t, end]) / 2 on the realized
// window; it is only known once the window has been observed.
struct BatchLedger {
  std::uint64_t batch = 0;  // m
  std::uint64_t first_round = 0;
  std::uint64_t last_round = 0;  // window end t(m) + t'
  int mistakes = 0;
  int halving_mistakes = 0;
  bool exact = true;  // every halving event has been decided
};

struct PartialWeightOptions {
  int rollouts = 64;                      // M
  std::size_t window_cap = kDefaultWindowCap;
  std::uint64_t seed = 0;
  bool keep_ledger = true;
};

class PartialWeightLearner : public OnlineLearner {
 public:
  PartialWeightLearner(ConceptClass h,
                       std::shared_ptr<const ProcessOracle> oracle,
                       PartialWeightOptions options = {});

  std::string name() const override { return "alg2"; }
  Label Predict(PointId x) override;
  void Observe(Label y) override;

  // Replaces the class and restarts the schedule: L <- {}, m <- 1,
  // t' <- offset. Used by the game learner on advancement.
  void Reset(ConceptClass h, std::uint64_t offset);
  // Lets the game learner own the history; rounds are counted from it.
  void SetExternalHistory(const std::vector<PointId>* history);

  const ConceptClass& hypothesis_class() const { return h_; }
  const LabeledPrefix& mistakes() const { return l_; }
  std::uint64_t batch() const { return m_; }
  std::uint64_t offset() const { return t_prime_; }
  std::uint64_t window_end() const { return BatchEnd(m_) + t_prime_; }
  // Probability estimates for the last prediction, indexed by label.
  const std::array<double, 2>& last_probabilities() const { return probs_; }
  const std::vector<BatchLedger>& ledger() const { return ledger_; }

 private:
  struct PendingHalving {
    std::uint64_t round;
    std::size_t ledger_index;
    ConceptClass before;  // H_{L_{t-1}}
    ConceptClass after;   // H_{L_t}
  };

  const std::vector<PointId>& history() const {
    return external_ ? *external_ : own_history_;
  }
  void OpenBatch(std::uint64_t round);
  bool ResolveHalving(const PendingHalving& p, std::span<const PointId> window);
  void ResolvePending();

  ConceptClass h_;
  std::shared_ptr<const ProcessOracle> oracle_;
  PartialWeightOptions options_;
  LabeledPrefix l_;
  ConceptClass h_l_;  // H_L
  std::uint64_t m_ = 1;
  std::uint64_t t_prime_ = 0;
  std::uint64_t rounds_ = 0;
  std::uint64_t draws_ = 0;
  std::vector<PointId> own_history_;
  const std::vector<PointId>* external_ = nullptr;
  std::optional<PointId> pending_;
  Label pending_prediction_ = Label::kZero;
  std::array<double, 2> probs_ = {0.0, 0.0};
  bool batch_open_ = false;
  std::vector<BatchLedger> ledger_;
  std::vector<int> unresolved_;  // per ledger entry
  std::vector<PendingHalving> halvings_;
};

// -- Game learner ---------------------------------------------------------------

struct GameLearnerOptions {
  PartialWeightOptions inner;
  std::size_t history_cap = 2000;
  // Throw RealizabilityError when an advancement empties H_U. Otherwise the
  // game is treated as over and the guard is switched off.
  bool strict = true;
};

class GameLearner : public OnlineLearner {
 public:
  GameLearner(ConceptClass c, std::shared_ptr<const ProcessOracle> oracle,
              GameLearnerOptions options = {});
  GameLearner(const GameLearner&) = delete;
  GameLearner& operator=(const GameLearner&) = delete;

  std::string name() const override { return "alg1"; }
  Label Predict(PointId x) override;
  void Observe(Label y) override;

  const GameRecord& record() const { return u_; }
  int k() const { return u_.current_k(); }
  int advancements() const { return static_cast<int>(u_.rounds().size()); }
  bool game_over() const { return game_over_; }
  const PartialWeightLearner& inner() const { return inner_; }

 private:
  struct PairStat {
    PointId point;
    Label label;
    int multiplicity;
  };

  std::optional<std::vector<std::size_t>> SearchGuard();
  void Advance(const std::vector<std::size_t>& pair_tuple);

  ConceptClass c_;
  GameLearnerOptions options_;
  GameRecord u_;
  std::optional<ConceptClass> h_u_;  // H_U while the game is on
  PartialWeightLearner inner_;
  std::vector<PointId> history_;
  std::vector<PairStat> pairs_;  // distinct (x, y) seen, first-seen order
  bool dirty_ = false;
  bool game_over_ = false;
  std::map<std::vector<PointId>, Pattern> strategy_cache_;
};

// -- Experts --------------------------------------------------------------------

using BigIndex = boost::multiprecision::cpp_int;

// Canonical bijection between finite sets of positive integers and positive
// integers: sort by |J| * max J (empty set first), then |J|, then the sorted
// elements lexicographically. Indices are 1-based.
BigIndex IndexOfSet(std::span<const std::uint64_t> set);
std::uint64_t IndexOfSetU64(std::span<const std::uint64_t> set);
std::vector<std::uint64_t> SetOfIndex(const BigIndex& index);
std::uint64_t SetKey(std::span<const std::uint64_t> set);
// Natural logarithm of a positive index.
double LogIndex(const BigIndex& index);

// Expert pool files: one set per line, indices separated by spaces; an empty
// line is the empty set. '#' starts a comment line.
std::string FormatExpertSets(const std::vector<std::vector<std::uint64_t>>& sets);
std::vector<std::vector<std::uint64_t>> ParseExpertSets(std::string_view text);

// Runs a base learner on its own outputs and flips it at rounds in J.
class ExpertRunner : public OnlineLearner {
 public:
  ExpertRunner(std::unique_ptr<OnlineLearner> base,
               std::vector<std::uint64_t> flips);

  std::string name() const override { return "expert"; }
  Label Predict(PointId x) override;
  // The true label is ignored; the base learner sees the expert's output.
  void Observe(Label y) override;

  const std::vector<std::uint64_t>& flips() const { return flips_; }

 private:
  std::unique_ptr<OnlineLearner> base_;
  std::vector<std::uint64_t> flips_;  // sorted
  std::size_t next_flip_ = 0;
  std::uint64_t t_ = 0;
  Label last_ = Label::kZero;
};

// Experts e_1..e_I with J = SetOfIndex(i).
std::vector<std::unique_ptr<OnlineLearner>> BuildExpertPool(
    const LearnerFactory& base, std::size_t pool_size);

// Weighted majority with initial weights 1/(i(i+1)), halving wrong experts.
class WeightedMajority : public OnlineLearner {
 public:
  explicit WeightedMajority(std::vector<std::unique_ptr<OnlineLearner>> experts);

  std::string name() const override { return "wm"; }
  Label Predict(PointId x) override;
  void Observe(Label y) override;

  // Stateless step on given expert advice; returns the prediction.
  Label PredictFromAdvice(std::span<const Label> advice) const;
  void Update(std::span<const Label> advice, Label y);

  std::size_t size() const { return log_weights_.size(); }
  std::uint64_t mistakes() const { return mistakes_; }
  const std::vector<std::uint64_t>& expert_mistakes() const {
    return expert_mistakes_;
  }
  const std::vector<double>& log_weights() const { return log_weights_; }
  // Mass on label 1 divided by total mass.
  double MassOnOne(std::span<const Label> advice) const;
  // mistakes <= 3 m_i + 3 log2(i(i+1)) for every expert i.
  bool BoundHolds() const;
  // The smallest right-hand side over experts.
  double BestBound() const;

 private:
  std::vector<std::unique_ptr<OnlineLearner>> experts_;
  std::vector<double> log_weights_;
  std::vector<std::uint64_t> expert_mistakes_;
  std::vector<Label> advice_;
  std::uint64_t mistakes_ = 0;
  Label last_prediction_ = Label::kZero;
};

inline constexpr int kSquintGridSize = 30;

struct SquintOptions {
  bool randomized = false;
  std::uint64_t seed = 0;
};

// Squint over the grid eta_j = 2^-j, j = 1..30, with prior 1/(i(i+1)).
class Squint : public OnlineLearner {
 public:
  Squint(std::size_t num_experts, SquintOptions options = {});
  Squint(std::vector<std::unique_ptr<OnlineLearner>> experts,
         SquintOptions options = {});

  std::string name() const override { return "squint"; }
  Label Predict(PointId x) override;
  void Observe(Label y) override;

  // Mixture mass on label 1.
  double MassOnOne(std::span<const Label> advice) const;
  Label PredictFromAdvice(std::span<const Label> advice);
  // Regrets use the prediction returned by the last PredictFromAdvice.
  void Update(std::span<const Label> advice, Label y);

  std::size_t size() const { return regret_.size(); }
  const std::vector<double>& regret() const { return regret_; }
  const std::vector<double>& variation() const { return variation_; }
  std::vector<double> LogWeights() const;
  std::uint64_t mistakes() const { return mistakes_; }
  const std::vector<std::uint64_t>& expert_mistakes() const {
    return expert_mistakes_;
  }

 private:
  std::vector<std::unique_ptr<OnlineLearner>> experts_;
  SquintOptions options_;
  Rng rng_;
  std::vector<double> log_prior_;
  std::vector<double> regret_;
  std::vector<double> variation_;
  std::vector<std::uint64_t> expert_mistakes_;
  std::vector<Label> advice_;
  std::uint64_t mistakes_ = 0;
  Label last_prediction_ = Label::kZero;
};

}  // namespace oul

#endif  // OUL_LEARNERS_H_
