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

#include <algorithm>
#include <bit>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "oul/errors.h"

namespace oul {

char LabelChar(Label l) {
  switch (l) {
    case Label::kZero:
      return '0';
    case Label::kOne:
      return '1';
    case Label::kUndefined:
      return '*';
  }
  return '?';
}

Label LabelFromChar(char c) {
  switch (c) {
    case '0':
      return Label::kZero;
    case '1':
      return Label::kOne;
    case '*':
      return Label::kUndefined;
    default:
      throw DomainError(std::string("invalid label character '") + c + "'");
  }
}

// -- Domain -------------------------------------------------------------------

Domain::Domain(std::vector<std::string> ids) : ids_(std::move(ids)) {
  if (ids_.empty()) throw DomainError("domain must contain at least one point");
  for (std::uint32_t i = 0; i < ids_.size(); ++i) {
    if (ids_[i].empty()) throw DomainError("empty point id");
    if (!index_.emplace(ids_[i], i).second) {
      throw DomainError("duplicate point id '" + ids_[i] + "'");
    }
  }
}

std::shared_ptr<const Domain> Domain::Numbered(std::size_t n,
                                               const std::string& prefix) {
  std::vector<std::string> ids;
  ids.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) ids.push_back(prefix + std::to_string(i));
  return std::make_shared<const Domain>(std::move(ids));
}

const std::string& Domain::id(PointId p) const {
  Check(p);
  return ids_[p.value];
}

PointId Domain::Find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) {
    throw DomainError("unknown point '" + std::string(id) + "'");
  }
  return PointId{it->second};
}

void Domain::Check(PointId p) const {
  if (!Contains(p)) {
    throw DomainError("point index " + std::to_string(p.value) +
                      " outside domain of size " + std::to_string(size()));
  }
}

PointId Domain::At(std::size_t i) const {
  PointId p{static_cast<std::uint32_t>(i)};
  Check(p);
  return p;
}

// -- Hypothesis ---------------------------------------------------------------

Hypothesis Hypothesis::FromString(std::string_view s) {
  std::vector<Label> table;
  table.reserve(s.size());
  for (char c : s) table.push_back(LabelFromChar(c));
  return Hypothesis(std::move(table));
}

Label Hypothesis::Evaluate(PointId x) const {
  if (x.value >= table_.size()) {
    throw DomainError("point index " + std::to_string(x.value) +
                      " outside hypothesis domain of size " +
                      std::to_string(table_.size()));
  }
  return table_[x.value];
}

bool Hypothesis::IsTotal() const {
  return std::none_of(table_.begin(), table_.end(),
                      [](Label l) { return l == Label::kUndefined; });
}

std::string Hypothesis::ToString() const {
  std::string s;
  s.reserve(table_.size());
  for (Label l : table_) s.push_back(LabelChar(l));
  return s;
}

void Hypothesis::Set(PointId x, Label l) {
  if (x.value >= table_.size()) throw DomainError("point outside hypothesis");
  table_[x.value] = l;
}

Label Evaluate(const Hypothesis& h, PointId x) { return h.Evaluate(x); }

// -- HypothesisMask -----------------------------------------------------------

HypothesisMask::HypothesisMask(std::size_t n, bool all)
    : n_(n), words_((n + 63) / 64, all ? ~std::uint64_t{0} : 0) {
  if (all && (n & 63)) words_.back() &= (std::uint64_t{1} << (n & 63)) - 1;
}

std::size_t HypothesisMask::Count() const {
  std::size_t c = 0;
  for (auto w : words_) c += std::popcount(w);
  return c;
}

bool HypothesisMask::Any() const {
  return std::any_of(words_.begin(), words_.end(),
                     [](std::uint64_t w) { return w != 0; });
}

HypothesisMask& HypothesisMask::operator&=(const HypothesisMask& o) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
  return *this;
}

std::vector<std::size_t> HypothesisMask::Indices() const {
  std::vector<std::size_t> out;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    std::uint64_t bits = words_[w];
    while (bits) {
      out.push_back(w * 64 + std::countr_zero(bits));
      bits &= bits - 1;
    }
  }
  return out;
}

std::size_t HypothesisMask::Hash() const {
  std::uint64_t h = n_;
  for (auto w : words_) h = (h ^ w) * 0x100000001b3ULL + (h >> 29);
  return static_cast<std::size_t>(h);
}

// -- Presets names ------------------------------------------------------------

std::string_view PresetName(Preset p) {
  switch (p) {
    case Preset::kThresholds:
      return "thresholds";
    case Preset::kSingletons:
      return "singletons";
    case Preset::kFull:
      return "full";
    case Preset::kUnionSplit:
      return "union-split";
    case Preset::kCustom:
      return "custom";
  }
  return "custom";
}

Preset PresetFromName(std::string_view name) {
  for (Preset p : {Preset::kThresholds, Preset::kSingletons, Preset::kFull,
                   Preset::kUnionSplit, Preset::kCustom}) {
    if (PresetName(p) == name) return p;
  }
  throw DomainError("unknown preset '" + std::string(name) + "'");
}

// -- ConceptClass -------------------------------------------------------------

ConceptClass ConceptClass::Tabulated(DomainPtr domain,
                                     std::vector<Hypothesis> hypotheses,
                                     Preset preset) {
  if (!domain) throw DomainError("null domain");
  auto impl = std::make_shared<Impl>();
  const std::size_t n = domain->size();
  std::vector<Hypothesis> sorted;
  sorted.reserve(hypotheses.size());
  for (const auto& h : hypotheses) {
    if (h.size() != n) {
      throw DomainError("hypothesis '" + h.ToString() + "' has " +
                        std::to_string(h.size()) + " entries, domain has " +
                        std::to_string(n));
    }
    sorted.push_back(h);
  }
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw DomainError("hypotheses must be pairwise distinct");
  }
  impl->domain = std::move(domain);
  impl->preset = preset;
  impl->table = std::move(hypotheses);
  const std::size_t m = impl->table.size();
  impl->zeros.assign(n, HypothesisMask(m));
  impl->ones.assign(n, HypothesisMask(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t x = 0; x < n; ++x) {
      Label l = impl->table[i][x];
      if (l == Label::kZero) impl->zeros[x].Set(i);
      if (l == Label::kOne) impl->ones[x].Set(i);
    }
  }
  return ConceptClass(std::move(impl));
}

ConceptClass ConceptClass::Cube(DomainPtr domain, Hypothesis fixed,
                                Preset preset) {
  if (!domain) throw DomainError("null domain");
  if (fixed.size() != domain->size()) {
    throw DomainError("cube pattern size does not match domain");
  }
  auto impl = std::make_shared<Impl>();
  impl->domain = std::move(domain);
  impl->preset = preset;
  impl->is_cube = true;
  impl->fixed = std::move(fixed);
  return ConceptClass(std::move(impl));
}

ConceptClass ConceptClass::Empty(DomainPtr domain, Preset preset) {
  return Tabulated(std::move(domain), {}, preset);
}

bool ConceptClass::empty() const {
  return is_cube() ? impl_->cube_empty : impl_->table.empty();
}

std::optional<std::uint64_t> ConceptClass::size() const {
  if (!is_cube()) return impl_->table.size();
  const std::size_t f = free_count();
  if (f >= 64) return std::nullopt;
  return std::uint64_t{1} << f;
}

const std::vector<Hypothesis>& ConceptClass::hypotheses() const {
  if (is_cube()) throw StateError("cube class has no table; call Enumerate()");
  return impl_->table;
}

const HypothesisMask& ConceptClass::ZeroMask(PointId x) const {
  domain().Check(x);
  if (is_cube()) throw StateError("masks are defined for tabulated classes");
  return impl_->zeros[x.value];
}

const HypothesisMask& ConceptClass::OneMask(PointId x) const {
  domain().Check(x);
  if (is_cube()) throw StateError("masks are defined for tabulated classes");
  return impl_->ones[x.value];
}

HypothesisMask ConceptClass::MaskOf(const LabeledPrefix& prefix) const {
  HypothesisMask mask(hypotheses().size(), true);
  for (const auto& [x, y] : prefix) {
    if (y == Label::kUndefined) return HypothesisMask(mask.universe());
    mask &= (y == Label::kOne ? OneMask(x) : ZeroMask(x));
  }
  return mask;
}

ConceptClass ConceptClass::Subclass(const HypothesisMask& mask) const {
  std::vector<Hypothesis> subset;
  for (std::size_t i : mask.Indices()) subset.push_back(impl_->table[i]);
  return Tabulated(domain_ptr(), std::move(subset), preset());
}

const Hypothesis& ConceptClass::cube_fixed() const {
  if (!is_cube()) throw StateError("not a cube class");
  return impl_->fixed;
}

std::size_t ConceptClass::free_count() const {
  if (!is_cube()) throw StateError("not a cube class");
  return std::count(impl_->fixed.table().begin(), impl_->fixed.table().end(),
                    Label::kUndefined);
}

bool ConceptClass::IsFree(PointId x) const {
  return cube_fixed().Evaluate(x) == Label::kUndefined;
}

std::vector<Hypothesis> ConceptClass::Enumerate(std::size_t max_free) const {
  if (!is_cube()) return impl_->table;
  if (empty()) return {};
  std::vector<std::size_t> free;
  for (std::size_t i = 0; i < impl_->fixed.size(); ++i) {
    if (impl_->fixed[i] == Label::kUndefined) free.push_back(i);
  }
  if (free.size() > max_free) {
    throw SizeError("cube class with " + std::to_string(free.size()) +
                        " free points is too large to enumerate",
                    static_cast<long long>(max_free));
  }
  std::vector<Hypothesis> out;
  out.reserve(std::size_t{1} << free.size());
  const std::size_t f = free.size();
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << f); ++bits) {
    std::vector<Label> table = impl_->fixed.table();
    // First free point is the most significant bit: lexicographic order.
    for (std::size_t j = 0; j < f; ++j) {
      table[free[j]] = LabelFromBit((bits >> (f - 1 - j)) & 1u);
    }
    out.emplace_back(std::move(table));
  }
  return out;
}

ConceptClass ConceptClass::Tabulate(std::size_t max_free) const {
  if (!is_cube()) return *this;
  return Tabulated(domain_ptr(), Enumerate(max_free), preset());
}

bool ConceptClass::Contains(const Hypothesis& h) const {
  if (h.size() != domain().size()) return false;
  if (!is_cube()) {
    return std::find(impl_->table.begin(), impl_->table.end(), h) !=
           impl_->table.end();
  }
  if (empty() || !h.IsTotal()) return false;
  for (std::size_t i = 0; i < h.size(); ++i) {
    Label f = impl_->fixed[i];
    if (f != Label::kUndefined && f != h[i]) return false;
  }
  return true;
}

std::optional<Hypothesis> ConceptClass::FindConsistent(
    const LabeledPrefix& constraints) const {
  for (const auto& c : constraints) domain().Check(c.point);
  if (!is_cube()) {
    for (const auto& h : impl_->table) {
      bool ok = std::all_of(constraints.begin(), constraints.end(),
                            [&](const LabeledExample& c) {
                              return c.label != Label::kUndefined &&
                                     h[c.point.value] == c.label;
                            });
      if (ok) return h;
    }
    return std::nullopt;
  }
  if (empty()) return std::nullopt;
  std::vector<Label> table = impl_->fixed.table();
  for (const auto& [x, y] : constraints) {
    if (y == Label::kUndefined) return std::nullopt;
    Label& cur = table[x.value];
    if (impl_->fixed[x.value] != Label::kUndefined) {
      if (cur != y) return std::nullopt;
    } else if (cur == Label::kUndefined) {
      cur = y;
    } else if (cur != y) {
      return std::nullopt;
    }
  }
  for (Label& l : table) {
    if (l == Label::kUndefined) l = Label::kZero;
  }
  return Hypothesis(std::move(table));
}

bool ConceptClass::SameMembers(const ConceptClass& other) const {
  if (!(domain() == other.domain())) return false;
  if (is_cube() && other.is_cube()) {
    if (empty() || other.empty()) return empty() == other.empty();
    return cube_fixed() == other.cube_fixed();
  }
  auto a = Enumerate();
  auto b = other.Enumerate();
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

// -- Operations ---------------------------------------------------------------

namespace {

void CheckPrefix(const ConceptClass& c, const LabeledPrefix& prefix) {
  for (const auto& e : prefix) c.domain().Check(e.point);
}

// Fixed labels of a cube after adding `prefix`; nullopt on conflict.
std::optional<Hypothesis> CubeAfter(const ConceptClass& c,
                                    const LabeledPrefix& prefix) {
  if (c.empty()) return std::nullopt;
  Hypothesis fixed = c.cube_fixed();
  for (const auto& [x, y] : prefix) {
    if (y == Label::kUndefined) return std::nullopt;
    Label cur = fixed[x.value];
    if (cur == Label::kUndefined) {
      fixed.Set(x, y);
    } else if (cur != y) {
      return std::nullopt;
    }
  }
  return fixed;
}

}  // namespace

bool IsRealizable(const ConceptClass& c, const LabeledPrefix& prefix) {
  CheckPrefix(c, prefix);
  if (c.is_cube()) return CubeAfter(c, prefix).has_value();
  return c.MaskOf(prefix).Any();
}

ConceptClass Restrict(const ConceptClass& c, const LabeledPrefix& prefix) {
  CheckPrefix(c, prefix);
  if (c.is_cube()) {
    auto fixed = CubeAfter(c, prefix);
    if (!fixed) return ConceptClass::Empty(c.domain_ptr(), c.preset());
    return ConceptClass::Cube(c.domain_ptr(), *std::move(fixed), c.preset());
  }
  if (prefix.empty()) return c;
  return c.Subclass(c.MaskOf(prefix));
}

std::vector<PointId> DistinctPoints(std::span<const PointId> points) {
  std::vector<PointId> out;
  std::unordered_set<std::uint32_t> seen;
  for (PointId p : points) {
    if (seen.insert(p.value).second) out.push_back(p);
  }
  return out;
}

namespace {

struct ProjectedRow {
  std::uint32_t defined = 0;
  std::uint32_t value = 0;
};

// Each hypothesis projected onto `points` (at most 32 of them).
std::vector<ProjectedRow> Project(const ConceptClass& c,
                                  std::span<const PointId> points) {
  std::vector<ProjectedRow> rows;
  rows.reserve(c.hypotheses().size());
  for (const auto& h : c.hypotheses()) {
    ProjectedRow r;
    for (std::size_t i = 0; i < points.size(); ++i) {
      Label l = h[points[i].value];
      if (l == Label::kUndefined) continue;
      r.defined |= 1u << i;
      if (l == Label::kOne) r.value |= 1u << i;
    }
    rows.push_back(r);
  }
  return rows;
}

bool ShattersSubset(const std::vector<ProjectedRow>& rows, std::uint32_t subset,
                    std::vector<std::uint32_t>& scratch) {
  const int k = std::popcount(subset);
  if (k >= 32 || rows.size() < (std::size_t{1} << k)) return false;
  scratch.clear();
  for (const auto& r : rows) {
    if ((r.defined & subset) == subset) scratch.push_back(r.value & subset);
  }
  std::sort(scratch.begin(), scratch.end());
  auto last = std::unique(scratch.begin(), scratch.end());
  return static_cast<std::size_t>(last - scratch.begin()) ==
         (std::size_t{1} << k);
}

}  // namespace

bool Shatters(const ConceptClass& c, std::span<const PointId> points) {
  for (PointId p : points) c.domain().Check(p);
  if (c.empty()) return false;
  auto set = DistinctPoints(points);
  if (set.empty()) return true;
  if (c.is_cube()) {
    return std::all_of(set.begin(), set.end(),
                       [&](PointId p) { return c.IsFree(p); });
  }
  if (set.size() >= 32) return false;
  auto rows = Project(c, set);
  std::vector<std::uint32_t> scratch;
  return ShattersSubset(rows, (std::uint32_t{1} << set.size()) - 1, scratch);
}

std::uint64_t Weight(const ConceptClass& c, std::span<const PointId> window,
                     std::size_t cap) {
  for (PointId p : window) c.domain().Check(p);
  auto set = DistinctPoints(window);
  if (set.size() > cap) {
    throw SizeError("weight window has " + std::to_string(set.size()) +
                        " distinct points",
                    static_cast<long long>(cap));
  }
  if (c.empty()) return 0;
  if (c.is_cube()) {
    auto free = std::count_if(set.begin(), set.end(),
                              [&](PointId p) { return c.IsFree(p); });
    return std::uint64_t{1} << free;
  }
  const std::size_t s = set.size();
  auto rows = Project(c, set);
  // Shattered sets are closed under taking subsets, and every proper subset
  // of `subset` is numerically smaller, so one pass in increasing order can
  // skip any set with an unshattered child.
  std::vector<bool> shattered(std::size_t{1} << s, false);
  std::vector<std::uint32_t> scratch;
  std::uint64_t count = 0;
  for (std::uint32_t subset = 0; subset < (std::uint32_t{1} << s); ++subset) {
    bool candidate = true;
    for (std::uint32_t bits = subset; bits && candidate; bits &= bits - 1) {
      candidate = shattered[subset & ~(bits & -bits)];
    }
    if (candidate && ShattersSubset(rows, subset, scratch)) {
      shattered[subset] = true;
      ++count;
    }
  }
  return count;
}

// -- Presets ------------------------------------------------------------------

namespace presets {

ConceptClass Thresholds(std::size_t n) {
  auto domain = Domain::Numbered(n);
  std::vector<Hypothesis> hs;
  for (std::size_t a = 1; a <= n + 1; ++a) {
    std::vector<Label> t(n);
    for (std::size_t x = 1; x <= n; ++x) t[x - 1] = LabelFromBit(x >= a);
    hs.emplace_back(std::move(t));
  }
  return ConceptClass::Tabulated(domain, std::move(hs), Preset::kThresholds);
}

ConceptClass Singletons(std::size_t n) {
  auto domain = Domain::Numbered(n);
  std::vector<Hypothesis> hs;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Label> t(n, Label::kZero);
    t[i] = Label::kOne;
    hs.emplace_back(std::move(t));
  }
  return ConceptClass::Tabulated(domain, std::move(hs), Preset::kSingletons);
}

ConceptClass Full(std::size_t n) {
  auto domain = Domain::Numbered(n);
  return ConceptClass::Cube(domain, Hypothesis::Constant(n, Label::kUndefined),
                            Preset::kFull);
}

ConceptClass UnionSplit(std::size_t n1, std::size_t n2) {
  if (n1 == 0 || n2 == 0) throw DomainError("union-split needs n1, n2 >= 1");
  if (n2 > 16) throw SizeError("union-split b-side too large", 16);
  std::vector<std::string> ids;
  for (std::size_t i = 1; i <= n1; ++i) ids.push_back("a" + std::to_string(i));
  for (std::size_t i = 1; i <= n2; ++i) ids.push_back("b" + std::to_string(i));
  auto domain = std::make_shared<const Domain>(std::move(ids));
  std::vector<Hypothesis> hs;
  for (std::size_t a = 1; a <= n1 + 1; ++a) {
    std::vector<Label> t(n1 + n2, Label::kZero);
    for (std::size_t x = 1; x <= n1; ++x) t[x - 1] = LabelFromBit(x >= a);
    hs.emplace_back(std::move(t));
  }
  for (int constant = 0; constant <= 1; ++constant) {
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n2); ++bits) {
      std::vector<Label> t(n1 + n2, LabelFromBit(constant));
      for (std::size_t j = 0; j < n2; ++j) {
        t[n1 + j] = LabelFromBit((bits >> (n2 - 1 - j)) & 1u);
      }
      Hypothesis h(std::move(t));
      if (std::find(hs.begin(), hs.end(), h) == hs.end()) {
        hs.push_back(std::move(h));
      }
    }
  }
  return ConceptClass::Tabulated(domain, std::move(hs), Preset::kUnionSplit);
}

ConceptClass ByName(std::string_view name, std::size_t n, std::size_t n2) {
  switch (PresetFromName(name)) {
    case Preset::kThresholds:
      return Thresholds(n);
    case Preset::kSingletons:
      return Singletons(n);
    case Preset::kFull:
      return Full(n);
    case Preset::kUnionSplit:
      return UnionSplit(n, n2);
    case Preset::kCustom:
      break;
  }
  throw DomainError("the custom preset is loaded from a class file");
}

}  // namespace presets

// -- Class files --------------------------------------------------------------

ConceptClass ParseClassText(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  DomainPtr domain;
  std::vector<Hypothesis> hs;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    auto last = line.find_last_not_of(" \t\r");
    std::string body = line.substr(first, last - first + 1);
    if (!domain) {
      constexpr std::string_view kHeader = "domain:";
      if (body.rfind(kHeader, 0) != 0) {
        throw DomainError("line " + std::to_string(lineno) +
                          ": expected 'domain:' header");
      }
      std::istringstream ids(body.substr(kHeader.size()));
      std::vector<std::string> v;
      for (std::string id; ids >> id;) v.push_back(id);
      domain = std::make_shared<const Domain>(std::move(v));
      continue;
    }
    try {
      hs.push_back(Hypothesis::FromString(body));
    } catch (const DomainError& e) {
      throw DomainError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!domain) throw DomainError("class file has no 'domain:' header");
  return ConceptClass::Tabulated(domain, std::move(hs), Preset::kCustom);
}

ConceptClass LoadClassFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open class file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return ParseClassText(buf.str());
  } catch (const DomainError& e) {
    throw DomainError(path + ": " + e.what());
  }
}

std::string FormatClassText(const ConceptClass& c) {
  std::string out = "domain:";
  for (const auto& id : c.domain().ids()) out += " " + id;
  out += "\n";
  for (const auto& h : c.Enumerate()) out += h.ToString() + "\n";
  return out;
}

}  // namespace oul
