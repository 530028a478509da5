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

#include "oul/learners.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "oracles.h"
#include "oul/errors.h"
#include "oul/processes.h"

namespace oul {
namespace {

PointId P(std::uint32_t v) { return PointId{v}; }

ConceptClass Table(std::size_t n, std::vector<std::string> rows) {
  std::vector<Hypothesis> hs;
  for (const auto& r : rows) hs.push_back(Hypothesis::FromString(r));
  return ConceptClass::Tabulated(Domain::Numbered(n), std::move(hs));
}

// Worst case over every realizable sequence of the given length: the
// adversary picks any point and any label some member still supports.
int WorstSoaMistakes(const ConceptClass& c, const Soa& learner,
                     const LabeledPrefix& so_far, int remaining) {
  if (remaining == 0) return 0;
  int worst = 0;
  for (std::uint32_t x = 0; x < c.domain().size(); ++x) {
    for (int b = 0; b < 2; ++b) {
      LabeledPrefix next = so_far;
      next.push_back({P(x), LabelFromBit(b)});
      if (!IsRealizable(c, next)) continue;
      Soa copy = learner;
      const bool wrong = copy.Predict(P(x)) != LabelFromBit(b);
      copy.Observe(LabelFromBit(b));
      worst = std::max(worst, wrong + WorstSoaMistakes(c, copy, next,
                                                       remaining - 1));
    }
  }
  return worst;
}

TEST(Soa, ExhaustiveMistakesEqualLdim) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 3 + rng() % 2;
    auto c = ConceptClass::Tabulated(Domain::Numbered(n),
                                     oracle::RandomTable(rng, n, 1 + rng() % 10));
    const int d = oracle::Ldim(c.hypotheses(), n);
    EXPECT_EQ(WorstSoaMistakes(c, Soa(c), {}, d + 1), d);
  }
  auto th = presets::Thresholds(7);
  EXPECT_EQ(WorstSoaMistakes(th, Soa(th), {}, 4), 3);
}

TEST(Soa, TwoHypothesesAtMostOneMistake) {
  auto c = Table(3, {"010", "011"});
  EXPECT_EQ(WorstSoaMistakes(c, Soa(c), {}, 3), 1);
}

TEST(Soa, CubeAndStrictness) {
  auto cube = presets::Full(4);
  Soa s(cube);
  EXPECT_EQ(s.Predict(P(2)), Label::kZero);
  s.Observe(Label::kOne);
  EXPECT_EQ(s.Predict(P(2)), Label::kOne);
  EXPECT_THROW(s.Observe(Label::kZero), RealizabilityError);

  auto one = Table(2, {"01"});
  Soa lenient(one, false);
  EXPECT_EQ(lenient.Predict(P(0)), Label::kZero);
  lenient.Observe(Label::kOne);
  EXPECT_EQ(lenient.Predict(P(1)), Label::kZero);
  lenient.Observe(Label::kOne);
}

// -- Partial-class weight learner ---------------------------------------------

std::shared_ptr<const ProcessOracle> Fixed(const ConceptClass& c,
                                           std::vector<std::uint32_t> seq) {
  std::vector<PointId> pts;
  for (auto v : seq) pts.push_back(P(v));
  return std::make_shared<ProcessModel>(
      ProcessModel::Deterministic(c.domain_ptr(), pts));
}

TEST(PartialWeight, WindowExample) {
  auto h = Table(2, {"00", "11", "01"});
  PartialWeightLearner alg(h, Fixed(h, {0, 1}));
  // Window X_[1, 2] = (a, b): w(H) = 3, w(H_(a,1)) = 1, w(H_(a,0)) = 2.
  alg.Reset(h, 1);
  EXPECT_EQ(alg.window_end(), 2u);
  EXPECT_EQ(alg.Predict(P(0)), Label::kZero);
  EXPECT_EQ(alg.last_probabilities()[0], 1.0);
  EXPECT_EQ(alg.last_probabilities()[1], 0.0);
}

TEST(PartialWeight, RejectsZeroRollouts) {
  auto h = presets::Thresholds(3);
  PartialWeightOptions o;
  o.rollouts = 0;
  EXPECT_THROW(PartialWeightLearner(h, Fixed(h, {0}), o), ConfigError);
  EXPECT_THROW(PartialWeightLearner(h, nullptr), ConfigError);
}

TEST(PartialWeight, RolloutCountIrrelevantWhenDeterministic) {
  std::mt19937_64 rng(31);
  auto c = presets::Full(6).Tabulate();
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::uint32_t> seq;
    for (int t = 0; t < 40; ++t) seq.push_back(rng() % 6);
    auto target = c.hypotheses()[rng() % 64];
    auto oracle = Fixed(c, seq);
    PartialWeightOptions one, many;
    one.rollouts = 1;
    many.rollouts = 64;
    many.seed = 99;
    PartialWeightLearner a(c, oracle, one), b(c, oracle, many);
    for (auto x : seq) {
      EXPECT_EQ(a.Predict(P(x)), b.Predict(P(x)));
      a.Observe(target[x]);
      b.Observe(target[x]);
    }
  }
}

TEST(PartialWeight, ScheduleAndLedger) {
  auto c = presets::Full(6).Tabulate();
  std::vector<std::uint32_t> seq;
  for (int t = 0; t < 60; ++t) seq.push_back((t * 7 + 3) % 6);
  PartialWeightLearner alg(c, Fixed(c, seq));
  const auto& target = c.hypotheses()[41];
  for (std::size_t t = 0; t < seq.size(); ++t) {
    alg.Predict(P(seq[t]));
    alg.Observe(target[seq[t]]);
    EXPECT_GT(alg.window_end(), t + 1);
  }
  // Batches end at m(m+1)/2: 1, 3, 6, ...; round 60 closes batch 10.
  EXPECT_EQ(alg.batch(), 11u);
  int total = 0;
  for (const auto& b : alg.ledger()) {
    EXPECT_EQ(b.last_round, BatchEnd(b.batch));
    EXPECT_TRUE(b.exact);
    EXPECT_LE(b.halving_mistakes, b.mistakes);
    EXPECT_LE(b.halving_mistakes,
              6 * std::log2(double(b.batch)) + 1 + 1e-9);
    total += b.mistakes;
  }
  EXPECT_EQ(static_cast<std::size_t>(total), alg.mistakes().size());
}

// -- Game learner ---------------------------------------------------------------

TEST(GameLearner, SingletonClassNeverAdvances) {
  auto c = Table(4, {"0110"});
  std::vector<std::uint32_t> seq = {0, 1, 2, 3, 2, 1, 0, 3, 3, 1};
  auto oracle = Fixed(c, seq);
  GameLearner g(c, oracle);
  PartialWeightLearner a(c, oracle);
  for (auto x : seq) {
    EXPECT_EQ(g.Predict(P(x)), a.Predict(P(x)));
    g.Observe(c.hypotheses()[0][x]);
    a.Observe(c.hypotheses()[0][x]);
  }
  EXPECT_EQ(g.advancements(), 0);
  EXPECT_EQ(g.k(), 1);
}

TEST(GameLearner, AdvancementsBounded) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 5;
    auto table = oracle::RandomTable(rng, n, 2 + rng() % 20);
    auto c = ConceptClass::Tabulated(Domain::Numbered(n), table);
    std::vector<std::uint32_t> seq;
    for (int t = 0; t < 30; ++t) seq.push_back(rng() % n);
    GameLearnerOptions o;
    o.strict = false;
    GameLearner g(c, Fixed(c, seq), o);
    for (auto x : seq) {
      g.Predict(P(x));
      g.Observe(LabelFromBit(static_cast<int>(rng() & 1u)));
    }
    const int bound =
        static_cast<int>(std::ceil(std::log2(double(table.size())))) + 1;
    EXPECT_LE(g.advancements(), bound);
    // Every recorded round is a pattern the realized stream agrees with.
    for (const auto& r : g.record().rounds()) {
      EXPECT_EQ(static_cast<int>(r.tuple.size()),
                &r - g.record().rounds().data() + 1);
    }
  }
}

TEST(GameLearner, StrictRaisesWhenStreamLeavesClass) {
  auto c = Table(2, {"01"});
  std::vector<std::uint32_t> seq = {0, 0, 0};
  GameLearner g(c, Fixed(c, seq));
  // The strategy plays the flipped label 1 at point 0; seeing it wins the
  // game outright, which a realizable stream never allows.
  g.Predict(P(0));
  g.Observe(Label::kOne);
  EXPECT_THROW(g.Predict(P(0)), RealizabilityError);
}

TEST(GameLearner, HistoryCap) {
  auto c = presets::Thresholds(3);
  std::vector<std::uint32_t> seq(5, 0);
  GameLearnerOptions o;
  o.history_cap = 3;
  GameLearner g(c, Fixed(c, seq), o);
  for (int t = 0; t < 3; ++t) {
    g.Predict(P(0));
    g.Observe(Label::kOne);
  }
  EXPECT_THROW(g.Predict(P(0)), SizeError);
}

// -- Expert indices ---------------------------------------------------------------

TEST(ExpertIndex, Examples) {
  using S = std::vector<std::uint64_t>;
  EXPECT_EQ(IndexOfSetU64(S{}), 1u);
  EXPECT_EQ(IndexOfSetU64(S{1}), 2u);
  EXPECT_EQ(IndexOfSetU64(S{2}), 3u);
  EXPECT_EQ(IndexOfSetU64(S{3}), 4u);
  EXPECT_EQ(IndexOfSetU64(S{4}), 5u);
  EXPECT_EQ(IndexOfSetU64(S{1, 2}), 6u);
  EXPECT_EQ(SetOfIndex(6), (S{1, 2}));
  EXPECT_THROW(SetOfIndex(0), DomainError);
  EXPECT_THROW(IndexOfSetU64(S{0}), DomainError);
}

// All sets with |J| max J <= 30, ordered by (key, size, elements).
TEST(ExpertIndex, MatchesBruteForceOrder) {
  std::vector<std::vector<std::uint64_t>> sets;
  std::function<void(std::vector<std::uint64_t>&, std::uint64_t)> grow =
      [&](std::vector<std::uint64_t>& cur, std::uint64_t from) {
        sets.push_back(cur);
        for (std::uint64_t e = from; e <= 30; ++e) {
          cur.push_back(e);
          if (cur.size() * e <= 30) grow(cur, e + 1);
          cur.pop_back();
        }
      };
  std::vector<std::uint64_t> cur;
  grow(cur, 1);
  std::sort(sets.begin(), sets.end(), [](const auto& a, const auto& b) {
    const auto ka = SetKey(a), kb = SetKey(b);
    if (ka != kb) return ka < kb;
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  for (std::size_t i = 0; i < sets.size(); ++i) {
    ASSERT_EQ(IndexOfSetU64(sets[i]), i + 1);
    ASSERT_EQ(SetOfIndex(i + 1), sets[i]);
  }
}

TEST(ExpertIndex, InverseAndMonotoneKey) {
  std::uint64_t last_key = 0;
  for (std::uint64_t i = 1; i <= 100000; ++i) {
    auto s = SetOfIndex(i);
    ASSERT_TRUE(std::is_sorted(s.begin(), s.end()));
    ASSERT_EQ(IndexOfSetU64(s), i);
    const auto key = SetKey(s);
    ASSERT_GE(key, last_key);
    last_key = key;
  }
}

TEST(ExpertIndex, GrowthBound) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<std::uint64_t> s;
    const std::uint64_t size = rng() % 6;
    const std::uint64_t span = size + 1 + rng() % 400;
    while (s.size() < size) {
      std::uint64_t e = 1 + rng() % span;
      if (std::find(s.begin(), s.end(), e) == s.end()) s.push_back(e);
    }
    std::sort(s.begin(), s.end());
    const double k = static_cast<double>(SetKey(s));
    const BigIndex idx = IndexOfSet(s);
    EXPECT_LE(LogIndex(idx), std::log(k + 1) + std::sqrt(k) + 1e-9);
    EXPECT_EQ(SetOfIndex(idx), s);
  }
}

TEST(ExpertIndex, LogIndexOfLargeIndices) {
  std::vector<std::uint64_t> s = {3, 100, 5000, 90000};
  const BigIndex idx = IndexOfSet(s);
  EXPECT_GT(idx, BigIndex(std::numeric_limits<std::uint64_t>::max()));
  EXPECT_NEAR(LogIndex(idx), std::log(idx.convert_to<double>()), 1e-9);
  EXPECT_EQ(SetOfIndex(idx), s);
  EXPECT_NEAR(LogIndex(BigIndex(1)), 0.0, 1e-15);
}

TEST(ExpertSets, FileFormat) {
  std::vector<std::vector<std::uint64_t>> sets = {{}, {1}, {2, 5}};
  auto text = FormatExpertSets(sets);
  EXPECT_EQ(ParseExpertSets(text), sets);
  EXPECT_EQ(ParseExpertSets("# pool\n3 1\n"),
            (std::vector<std::vector<std::uint64_t>>{{1, 3}}));
  EXPECT_THROW(ParseExpertSets("1 x\n"), ConfigError);
}

// -- Experts ----------------------------------------------------------------------

std::vector<Label> Play(OnlineLearner& l, const std::vector<PointId>& xs,
                       const std::vector<Label>& ys) {
  std::vector<Label> out;
  for (std::size_t t = 0; t < xs.size(); ++t) {
    out.push_back(l.Predict(xs[t]));
    l.Observe(ys[t]);
  }
  return out;
}

TEST(ExpertRunner, EmptySetFollowsOwnPredictions) {
  auto c = presets::Thresholds(7);
  std::vector<PointId> xs;
  for (std::uint32_t t = 0; t < 20; ++t) xs.push_back(P((t * 3) % 7));
  Soa alone(c, false);
  std::vector<Label> own;
  for (auto x : xs) {
    own.push_back(alone.Predict(x));
    alone.Observe(own.back());
  }
  ExpertRunner e(std::make_unique<Soa>(c, false), {});
  std::vector<Label> noise(xs.size(), Label::kOne);
  EXPECT_EQ(Play(e, xs, noise), own);
}

// The expert flipping exactly the base learner's mistake rounds reproduces
// the labels.
TEST(ExpertRunner, MistakeSetReproducesLabels) {
  std::mt19937_64 rng(43);
  auto c = presets::Thresholds(9);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<PointId> xs;
    std::vector<Label> ys;
    const auto& h = c.hypotheses()[rng() % 10];
    for (int t = 0; t < 30; ++t) {
      xs.push_back(P(static_cast<std::uint32_t>(rng() % 9)));
      ys.push_back(trial % 2 ? h[xs.back().value]
                             : LabelFromBit(static_cast<int>(rng() & 1u)));
    }
    Soa base(c, false);
    auto preds = Play(base, xs, ys);
    std::vector<std::uint64_t> j;
    for (std::size_t t = 0; t < xs.size(); ++t) {
      if (preds[t] != ys[t]) j.push_back(t + 1);
    }
    ExpertRunner e(std::make_unique<Soa>(c, false), j);
    EXPECT_EQ(Play(e, xs, ys), ys);
  }
}

TEST(ExpertPool, UsesCanonicalSets) {
  auto pool = BuildExpertPool(
      [] { return std::make_unique<ConstantLearner>(Label::kZero); }, 6);
  ASSERT_EQ(pool.size(), 6u);
  // Expert 6 flips rounds 1 and 2.
  std::vector<Label> out;
  for (int t = 0; t < 3; ++t) {
    out.push_back(pool[5]->Predict(P(0)));
    pool[5]->Observe(Label::kZero);
  }
  EXPECT_EQ(out, (std::vector<Label>{Label::kOne, Label::kOne, Label::kZero}));
}

// -- Weighted majority ------------------------------------------------------------

TEST(WeightedMajority, Examples) {
  WeightedMajority wm(
      BuildExpertPool([] { return std::make_unique<ConstantLearner>(Label::kZero); }, 2));
  std::vector<Label> advice = {Label::kZero, Label::kOne};
  // Prior weights 1/2 and 1/6.
  EXPECT_NEAR(wm.MassOnOne(advice), 0.25, 1e-12);
  EXPECT_EQ(wm.PredictFromAdvice(advice), Label::kZero);

  WeightedMajority five(
      BuildExpertPool([] { return std::make_unique<ConstantLearner>(Label::kZero); }, 5));
  std::vector<Label> ones(5, Label::kOne), zeros(5, Label::kZero);
  EXPECT_EQ(five.PredictFromAdvice(ones), Label::kOne);
  EXPECT_EQ(five.PredictFromAdvice(zeros), Label::kZero);
  five.Update(std::vector<Label>{Label::kOne, Label::kZero, Label::kZero,
                                 Label::kZero, Label::kZero},
              Label::kOne);
  EXPECT_EQ(five.PredictFromAdvice(ones), Label::kOne);
  EXPECT_NEAR(five.log_weights()[1] - std::log(1.0 / 6), std::log(0.5), 1e-12);
}

TEST(WeightedMajority, BoundOnRandomAdvice) {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t k = 1 + rng() % 40;
    WeightedMajority wm(BuildExpertPool(
        [] { return std::make_unique<ConstantLearner>(Label::kZero); }, k));
    for (int t = 0; t < 300; ++t) {
      std::vector<Label> advice(k);
      for (auto& a : advice) a = LabelFromBit(static_cast<int>(rng() & 1u));
      wm.PredictFromAdvice(advice);
      wm.Update(advice, LabelFromBit(static_cast<int>(rng() % 3 == 0)));
      ASSERT_TRUE(wm.BoundHolds());
    }
    for (std::size_t i = 0; i < k; ++i) {
      const double ii = static_cast<double>(i + 1);
      EXPECT_LE(double(wm.mistakes()),
                3.0 * wm.expert_mistakes()[i] + 3.0 * std::log2(ii * (ii + 1)) + 1e-9);
    }
  }
}

TEST(WeightedMajority, EmptyPoolRejected) {
  EXPECT_THROW(WeightedMajority({}), StateError);
}

// -- Squint -------------------------------------------------------------------------

TEST(Squint, SingleExpertIsFollowed) {
  Squint sq(1);
  std::mt19937_64 rng(53);
  for (int t = 0; t < 200; ++t) {
    std::vector<Label> advice = {LabelFromBit(static_cast<int>(rng() & 1u))};
    EXPECT_EQ(sq.PredictFromAdvice(advice), advice[0]);
    sq.Update(advice, LabelFromBit(static_cast<int>(rng() & 1u)));
    EXPECT_LE(sq.regret()[0], 0.0);
  }
}

TEST(Squint, ZeroRegretKeepsWeights) {
  Squint sq(4);
  const auto before = sq.LogWeights();
  std::vector<Label> advice(4, Label::kOne);
  for (int t = 0; t < 10; ++t) {
    sq.PredictFromAdvice(advice);
    sq.Update(advice, LabelFromBit(t % 2));
  }
  EXPECT_EQ(sq.LogWeights(), before);
  const double w1 = std::exp(before[0]);
  EXPECT_NEAR(w1, 0.5, 1e-12);
}

TEST(Squint, LongRunsStayFinite) {
  Squint sq(3);
  std::vector<Label> advice = {Label::kZero, Label::kOne, Label::kOne};
  for (int t = 0; t < 200000; ++t) {
    sq.PredictFromAdvice(advice);
    sq.Update(advice, Label::kZero);
  }
  for (double w : sq.LogWeights()) EXPECT_TRUE(std::isfinite(w));
  EXPECT_LE(sq.mistakes(), 100u);
}

TEST(Squint, RandomizedUsesMixture) {
  SquintOptions o;
  o.randomized = true;
  o.seed = 3;
  Squint sq(2, o);
  std::vector<Label> advice = {Label::kOne, Label::kZero};
  // Prior 1/2 vs 1/6: mass on 1 is 3/4.
  EXPECT_NEAR(sq.MassOnOne(advice), 0.75, 1e-12);
  int ones = 0;
  for (int t = 0; t < 4000; ++t) ones += sq.PredictFromAdvice(advice) == Label::kOne;
  EXPECT_NEAR(ones / 4000.0, 0.75, 0.03);
}

}  // namespace
}  // namespace oul
