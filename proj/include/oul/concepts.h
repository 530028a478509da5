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

// Hypotheses, partial hypotheses and finite concept classes over an explicit
// finite domain.
//
// A ConceptClass is stored one of two ways:
//   * tabulated: an explicit list of pairwise distinct (partial) hypotheses;
//   * cube: every total function that agrees with a fixed partial labeling
//     (the "full" class and all of its version spaces). Cubes let the full
//     class scale to domains far beyond what a table could hold while every
//     operation keeps its exact semantics.
// Both are immutable and cheap to copy.

#ifndef OUL_CONCEPTS_H_
#define OUL_CONCEPTS_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace oul {

enum class Label : std::uint8_t { kZero = 0, kOne = 1, kUndefined = 2 };

char LabelChar(Label l);
Label LabelFromChar(char c);
inline Label LabelFromBit(int bit) { return bit ? Label::kOne : Label::kZero; }
inline int LabelBit(Label l) { return l == Label::kOne ? 1 : 0; }
inline Label Flip(Label l) {
  return l == Label::kOne ? Label::kZero
                          : (l == Label::kZero ? Label::kOne : l);
}

struct PointId {
  std::uint32_t value = 0;
  auto operator<=>(const PointId&) const = default;
};

class Domain {
 public:
  explicit Domain(std::vector<std::string> ids);

  // Domain with ids prefix1 .. prefixN.
  static std::shared_ptr<const Domain> Numbered(std::size_t n,
                                                const std::string& prefix = "");

  std::size_t size() const { return ids_.size(); }
  const std::vector<std::string>& ids() const { return ids_; }
  const std::string& id(PointId p) const;
  PointId Find(std::string_view id) const;
  bool Contains(PointId p) const { return p.value < ids_.size(); }
  void Check(PointId p) const;
  PointId At(std::size_t i) const;

  bool operator==(const Domain& other) const { return ids_ == other.ids_; }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

using DomainPtr = std::shared_ptr<const Domain>;

// A map Point -> {0,1,*}. Total when no entry is undefined.
class Hypothesis {
 public:
  Hypothesis() = default;
  explicit Hypothesis(std::vector<Label> table) : table_(std::move(table)) {}
  static Hypothesis FromString(std::string_view s);
  static Hypothesis Constant(std::size_t n, Label l) {
    return Hypothesis(std::vector<Label>(n, l));
  }

  Label Evaluate(PointId x) const;
  Label operator[](std::size_t i) const { return table_[i]; }
  std::size_t size() const { return table_.size(); }
  bool IsTotal() const;
  std::string ToString() const;
  const std::vector<Label>& table() const { return table_; }
  void Set(PointId x, Label l);

  auto operator<=>(const Hypothesis&) const = default;

 private:
  std::vector<Label> table_;
};

struct LabeledExample {
  PointId point;
  Label label;
  bool operator==(const LabeledExample&) const = default;
};

using LabeledPrefix = std::vector<LabeledExample>;

// Fixed-width bitset over the hypotheses of a tabulated class.
class HypothesisMask {
 public:
  HypothesisMask() = default;
  explicit HypothesisMask(std::size_t n, bool all = false);

  std::size_t universe() const { return n_; }
  bool Test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void Set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void Reset(std::size_t i) {
    words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
  }
  std::size_t Count() const;
  bool Any() const;
  HypothesisMask& operator&=(const HypothesisMask& o);
  friend HypothesisMask operator&(HypothesisMask a, const HypothesisMask& b) {
    a &= b;
    return a;
  }
  bool operator==(const HypothesisMask&) const = default;
  std::vector<std::size_t> Indices() const;
  std::size_t Hash() const;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

struct HypothesisMaskHash {
  std::size_t operator()(const HypothesisMask& m) const { return m.Hash(); }
};

enum class Preset { kThresholds, kSingletons, kFull, kUnionSplit, kCustom };

std::string_view PresetName(Preset p);
Preset PresetFromName(std::string_view name);

class ConceptClass {
 public:
  static ConceptClass Tabulated(DomainPtr domain,
                                std::vector<Hypothesis> hypotheses,
                                Preset preset = Preset::kCustom);
  static ConceptClass Cube(DomainPtr domain, Hypothesis fixed,
                           Preset preset = Preset::kCustom);
  static ConceptClass Empty(DomainPtr domain, Preset preset = Preset::kCustom);

  const Domain& domain() const { return *impl_->domain; }
  const DomainPtr& domain_ptr() const { return impl_->domain; }
  Preset preset() const { return impl_->preset; }
  bool is_cube() const { return impl_->is_cube; }
  bool empty() const;

  // Number of members; nullopt when it overflows 64 bits.
  std::optional<std::uint64_t> size() const;

  // Tabulated classes only.
  const std::vector<Hypothesis>& hypotheses() const;
  // Membership masks: hypotheses labeling point x with 0 (resp. 1).
  const HypothesisMask& ZeroMask(PointId x) const;
  const HypothesisMask& OneMask(PointId x) const;
  HypothesisMask MaskOf(const LabeledPrefix& prefix) const;
  ConceptClass Subclass(const HypothesisMask& mask) const;

  // Cube classes only: the fixed labels, undefined where free.
  const Hypothesis& cube_fixed() const;
  std::size_t free_count() const;
  bool IsFree(PointId x) const;

  // All members as a table. Throws SizeError for cubes with more than
  // `max_free` free points.
  std::vector<Hypothesis> Enumerate(std::size_t max_free = 20) const;
  ConceptClass Tabulate(std::size_t max_free = 20) const;

  bool Contains(const Hypothesis& h) const;

  // First member (table order; for cubes the completion that labels every
  // free point 0) consistent with all constraints.
  std::optional<Hypothesis> FindConsistent(
      const LabeledPrefix& constraints) const;

  // Equal as sets of functions over equal domains.
  bool SameMembers(const ConceptClass& other) const;

 private:
  struct Impl {
    DomainPtr domain;
    Preset preset = Preset::kCustom;
    bool is_cube = false;
    std::vector<Hypothesis> table;
    std::vector<HypothesisMask> zeros;
    std::vector<HypothesisMask> ones;
    Hypothesis fixed;
    bool cube_empty = false;
  };
  explicit ConceptClass(std::shared_ptr<const Impl> impl)
      : impl_(std::move(impl)) {}

  std::shared_ptr<const Impl> impl_;
};

Label Evaluate(const Hypothesis& h, PointId x);

// True iff some member agrees (with a defined label) on every pair.
bool IsRealizable(const ConceptClass& c, const LabeledPrefix& prefix);

// Version space: the members consistent with every pair. May be empty.
ConceptClass Restrict(const ConceptClass& c, const LabeledPrefix& prefix);

// Every labeling of the point set is realized by a member defined on it.
// The empty set is shattered iff the class is nonempty.
bool Shatters(const ConceptClass& c, std::span<const PointId> points);

inline constexpr std::size_t kDefaultWindowCap = 20;

// Number of subsets of the window's point set (duplicates collapsed)
// shattered by the class, counting the empty set.
std::uint64_t Weight(const ConceptClass& c, std::span<const PointId> window,
                     std::size_t cap = kDefaultWindowCap);

// Distinct points in order of first appearance.
std::vector<PointId> DistinctPoints(std::span<const PointId> points);

namespace presets {

// h_a(x) = 1[x >= a] over {1..n}, for a = 1..n+1.
ConceptClass Thresholds(std::size_t n);
// Indicators of single points over {1..n}.
ConceptClass Singletons(std::size_t n);
// All total functions on {1..n}.
ConceptClass Full(std::size_t n);
// Domain a1..a{n1} b1..b{n2}: thresholds on the a-points that are 0 on the
// b-points, together with every function on the b-points that is constant
// on the a-points.
ConceptClass UnionSplit(std::size_t n1, std::size_t n2);
ConceptClass ByName(std::string_view name, std::size_t n, std::size_t n2 = 0);

}  // namespace presets

// Class file: a `domain: id1 id2 ...` header followed by one hypothesis per
// line as a string over {0,1,*} aligned with the domain order. Blank lines
// and lines starting with '#' are ignored.
ConceptClass ParseClassText(std::string_view text);
ConceptClass LoadClassFile(const std::string& path);
std::string FormatClassText(const ConceptClass& c);

}  // namespace oul

#endif  // OUL_CONCEPTS_H_
