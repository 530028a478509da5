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

#include "oul/concepts.h"

#include <gtest/gtest.h>

#include <random>

#include "oracles.h"
#include "oul/errors.h"

namespace oul {
namespace {

PointId P(std::uint32_t v) { return PointId{v}; }

ConceptClass Table(std::vector<std::string> ids,
                   std::vector<std::string> rows) {
  auto d = std::make_shared<const Domain>(std::move(ids));
  std::vector<Hypothesis> hs;
  for (const auto& r : rows) hs.push_back(Hypothesis::FromString(r));
  return ConceptClass::Tabulated(d, std::move(hs));
}

std::vector<std::uint32_t> Raw(std::span<const PointId> ps) {
  std::vector<std::uint32_t> v;
  for (auto p : ps) v.push_back(p.value);
  return v;
}

TEST(Evaluate, Thresholds) {
  auto c = presets::Thresholds(3);
  const Hypothesis& h2 = c.hypotheses()[1];
  EXPECT_EQ(Evaluate(h2, c.domain().Find("1")), Label::kZero);
  EXPECT_EQ(Evaluate(h2, c.domain().Find("3")), Label::kOne);
  EXPECT_EQ(Evaluate(Hypothesis::FromString("0*1"), P(1)), Label::kUndefined);
  EXPECT_THROW(Evaluate(h2, P(3)), DomainError);
}

TEST(Domain, Lookup) {
  Domain d({"a", "b"});
  EXPECT_EQ(d.Find("b"), P(1));
  EXPECT_THROW(d.Find("c"), DomainError);
  EXPECT_THROW(Domain({"a", "a"}), DomainError);
}

TEST(Realizable, SpecExamples) {
  auto c = presets::Thresholds(3);
  EXPECT_TRUE(IsRealizable(c, {{P(0), Label::kZero}, {P(2), Label::kOne}}));
  EXPECT_FALSE(IsRealizable(c, {{P(0), Label::kOne}, {P(2), Label::kZero}}));
  EXPECT_TRUE(IsRealizable(c, {}));
  for (std::size_t n = 2; n <= 6; ++n) {
    auto s = presets::Singletons(n);
    LabeledPrefix zeros;
    for (std::uint32_t x = 0; x + 1 < n; ++x) zeros.push_back({P(x), Label::kZero});
    EXPECT_TRUE(IsRealizable(s, zeros)) << n;
  }
}

TEST(Restrict, SpecExamples) {
  auto c = presets::Thresholds(3);
  auto r = Restrict(c, {{P(1), Label::kOne}});
  ASSERT_EQ(r.hypotheses().size(), 2u);
  EXPECT_EQ(r.hypotheses()[0], c.hypotheses()[0]);
  EXPECT_EQ(r.hypotheses()[1], c.hypotheses()[1]);
  EXPECT_TRUE(Restrict(c, {}).SameMembers(c));
  EXPECT_TRUE(Restrict(c, {{P(0), Label::kOne}, {P(2), Label::kZero}}).empty());
}

TEST(Shatters, SpecExamples) {
  auto full = presets::Full(2);
  std::vector<PointId> ab = {P(0), P(1)};
  EXPECT_TRUE(Shatters(full, ab));
  auto th = presets::Thresholds(3);
  std::vector<PointId> s13 = {P(0), P(2)};
  EXPECT_FALSE(Shatters(th, s13));
  EXPECT_FALSE(Shatters(ConceptClass::Empty(th.domain_ptr()), {}));
  EXPECT_TRUE(Shatters(th, {}));
}

TEST(Weight, SpecExamples) {
  std::vector<PointId> ab = {P(0), P(1)};
  EXPECT_EQ(Weight(presets::Full(2), ab), 4u);
  EXPECT_EQ(Weight(presets::Full(2).Tabulate(), ab), 4u);
  EXPECT_EQ(Weight(Table({"a", "b"}, {"01"}), ab), 1u);
  EXPECT_EQ(Weight(ConceptClass::Empty(Domain::Numbered(2)), ab), 0u);
}

TEST(Weight, DuplicatesCollapseAndCap) {
  auto full = presets::Full(3);
  std::vector<PointId> w = {P(0), P(0), P(1), P(0)};
  EXPECT_EQ(Weight(full, w), 4u);
  auto big = presets::Full(25);
  std::vector<PointId> all;
  for (std::uint32_t i = 0; i < 25; ++i) all.push_back(P(i));
  EXPECT_THROW(Weight(big, all), SizeError);
  EXPECT_EQ(Weight(big, all, 25), std::uint64_t{1} << 25);
}

// Weight, Shatters, Restrict and IsRealizable against the brute-force oracle
// on random partial tables.
TEST(Oracle, RandomPartialTables) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 5;
    auto table = oracle::RandomPartialTable(rng, n, 1 + rng() % 12);
    auto c = ConceptClass::Tabulated(Domain::Numbered(n), table);
    std::vector<PointId> window;
    for (std::size_t i = 0, len = rng() % 7; i < len; ++i) {
      window.push_back(P(static_cast<std::uint32_t>(rng() % n)));
    }
    EXPECT_EQ(Weight(c, window), oracle::Weight(table, Raw(window)));
    auto distinct = DistinctPoints(window);
    EXPECT_EQ(Shatters(c, distinct), oracle::Shatters(table, Raw(distinct)));
    LabeledPrefix p;
    for (std::size_t i = 0, len = rng() % 4; i < len; ++i) {
      p.push_back({P(static_cast<std::uint32_t>(rng() % n)),
                   LabelFromBit(static_cast<int>(rng() & 1u))});
    }
    auto expected = oracle::Filter(table, p);
    auto r = Restrict(c, p);
    EXPECT_EQ(r.hypotheses(), expected);
    EXPECT_EQ(IsRealizable(c, p), !expected.empty());
  }
}

// A cube behaves exactly like its tabulation.
TEST(Cube, MatchesTabulation) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 6;
    auto cube = presets::Full(n);
    LabeledPrefix p;
    for (std::size_t i = 0, len = rng() % 4; i < len; ++i) {
      p.push_back({P(static_cast<std::uint32_t>(rng() % n)),
                   LabelFromBit(static_cast<int>(rng() & 1u))});
    }
    auto rc = Restrict(cube, p);
    auto rt = Restrict(cube.Tabulate(), p);
    EXPECT_TRUE(rc.SameMembers(rt));
    EXPECT_EQ(rc.empty(), rt.empty());
    EXPECT_EQ(IsRealizable(cube, p), IsRealizable(cube.Tabulate(), p));
    std::vector<PointId> window;
    for (std::size_t i = 0, len = rng() % 6; i < len; ++i) {
      window.push_back(P(static_cast<std::uint32_t>(rng() % n)));
    }
    EXPECT_EQ(Weight(rc, window), Weight(rt, window));
    auto d = DistinctPoints(window);
    EXPECT_EQ(Shatters(rc, d), Shatters(rt, d));
    auto fc = rc.FindConsistent({});
    auto ft = rt.FindConsistent({});
    EXPECT_EQ(fc.has_value(), ft.has_value());
    if (fc) {
      EXPECT_TRUE(rt.Contains(*fc));
    }
  }
}

TEST(Properties, RestrictMonotoneAndWeightBounds) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng() % 4;
    auto table = oracle::RandomTable(rng, n, 1 + rng() % 10);
    auto c = ConceptClass::Tabulated(Domain::Numbered(n), table);
    LabeledPrefix p, q;
    for (int i = 0; i < 2; ++i) {
      p.push_back({P(static_cast<std::uint32_t>(rng() % n)),
                   LabelFromBit(static_cast<int>(rng() & 1u))});
      q.push_back({P(static_cast<std::uint32_t>(rng() % n)),
                   LabelFromBit(static_cast<int>(rng() & 1u))});
    }
    LabeledPrefix pq = p;
    pq.insert(pq.end(), q.begin(), q.end());
    auto rp = Restrict(c, p);
    auto rpq = Restrict(c, pq);
    for (const auto& h : rpq.hypotheses()) EXPECT_TRUE(rp.Contains(h));
    EXPECT_EQ(IsRealizable(c, p), !rp.empty());

    std::vector<PointId> w;
    for (std::uint32_t x = 0; x < n; ++x) w.push_back(P(x));
    const auto wc = Weight(c, w);
    EXPECT_LE(Weight(rp, w), wc);
    EXPECT_GE(wc, 1u);
    const int d = oracle::Vc(table, n);
    std::uint64_t sauer = 0, binom = 1;
    for (int i = 0; i <= d; ++i) {
      sauer += binom;
      binom = binom * (n - i) / (i + 1);
    }
    EXPECT_LE(wc, sauer);
  }
}

TEST(Presets, Shapes) {
  EXPECT_EQ(presets::Thresholds(7).hypotheses().size(), 8u);
  EXPECT_EQ(presets::Singletons(4).hypotheses().size(), 4u);
  EXPECT_EQ(*presets::Full(10).size(), 1024u);
  EXPECT_FALSE(presets::Full(70).size().has_value());
  auto us = presets::UnionSplit(3, 2);
  EXPECT_EQ(us.domain().size(), 5u);
  EXPECT_EQ(us.domain().id(P(0)), "a1");
  EXPECT_EQ(us.domain().id(P(3)), "b1");
  EXPECT_THROW(presets::ByName("nonsense", 3), DomainError);
}

TEST(ClassFile, RoundTrip) {
  auto c = Table({"x", "y", "z"}, {"01*", "110", "000"});
  auto text = FormatClassText(c);
  EXPECT_EQ(text, "domain: x y z\n01*\n110\n000\n");
  auto back = ParseClassText("# comment\n\n" + text);
  EXPECT_TRUE(back.SameMembers(c));
  EXPECT_THROW(ParseClassText("01\n"), DomainError);
  EXPECT_THROW(ParseClassText("domain: a b\n012\n"), DomainError);
  EXPECT_THROW(ParseClassText("domain: a b\n0\n"), DomainError);
}

TEST(Tabulated, RejectsDuplicatesAndWrongLength) {
  EXPECT_THROW(Table({"a", "b"}, {"01", "01"}), DomainError);
  EXPECT_THROW(Table({"a", "b"}, {"011"}), DomainError);
}

}  // namespace
}  // namespace oul
