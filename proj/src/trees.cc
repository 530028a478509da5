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

#include "oul/trees.h"

#include <algorithm>
#include <bit>
#include <deque>
#include <sstream>
#include <unordered_set>

#include "oul/errors.h"
#include "oul/rng.h"

namespace oul {

namespace {

// Calls fn on each size-k subset of [0, n) in lexicographic order until it
// returns true. Returns whether it did.
template <typename Fn>
bool ForEachCombination(std::size_t n, std::size_t k, Fn&& fn) {
  if (k > n) return false;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    if (fn(static_cast<const std::vector<std::size_t>&>(idx))) return true;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return false;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

int FloorLog2(std::uint64_t v) { return v ? 63 - std::countl_zero(v) : -1; }

}  // namespace

LabeledPrefix PatternPrefix(std::span<const PointId> tuple,
                            const Pattern& pattern) {
  LabeledPrefix prefix;
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    prefix.push_back({tuple[i], pattern.labels[i]});
  }
  return prefix;
}

std::string CappedDimension::ToString() const {
  return at_cap ? ">=" + std::to_string(value) : std::to_string(value);
}

// -- Dimensions ---------------------------------------------------------------

std::optional<int> VcDimension(const ConceptClass& c) {
  if (c.empty()) return std::nullopt;
  if (c.is_cube()) return static_cast<int>(c.free_count());
  const std::size_t n = c.domain().size();
  const std::size_t m = c.hypotheses().size();
  int d = 0;
  for (std::size_t s = 1; s <= n && (std::size_t{1} << s) <= m; ++s) {
    bool found = ForEachCombination(n, s, [&](const auto& idx) {
      std::vector<PointId> pts;
      for (auto i : idx) pts.push_back(PointId{static_cast<std::uint32_t>(i)});
      return Shatters(c, pts);
    });
    if (!found) break;
    d = static_cast<int>(s);
  }
  return d;
}

LittlestoneSolver::LittlestoneSolver(ConceptClass base)
    : base_(std::move(base)) {
  if (base_.is_cube()) {
    throw StateError("LittlestoneSolver needs a tabulated class");
  }
}

int LittlestoneSolver::Dimension(const HypothesisMask& vs) {
  const std::size_t count = vs.Count();
  if (count == 0) return -1;
  if (count == 1) return 0;
  if (auto it = memo_.find(vs); it != memo_.end()) return it->second;
  const int upper = FloorLog2(count);
  int best = 0;
  const std::size_t n = base_.domain().size();
  for (std::size_t x = 0; x < n && best < upper; ++x) {
    PointId p{static_cast<std::uint32_t>(x)};
    HypothesisMask m0 = vs & base_.ZeroMask(p);
    HypothesisMask m1 = vs & base_.OneMask(p);
    std::size_t c0 = m0.Count(), c1 = m1.Count();
    if (c0 == 0 || c1 == 0) continue;
    if (1 + FloorLog2(std::min(c0, c1)) <= best) continue;
    if (c1 < c0) std::swap(m0, m1);
    int first = Dimension(m0);
    if (1 + first <= best) continue;
    int second = Dimension(m1);
    best = std::max(best, 1 + std::min(first, second));
  }
  memo_.emplace(vs, best);
  return best;
}

CappedDimension LittlestoneDimension(const ConceptClass& c, int cap) {
  if (c.empty()) return {-1, false};
  int v;
  if (c.is_cube()) {
    v = static_cast<int>(c.free_count());
  } else {
    LittlestoneSolver solver(c);
    v = solver.Dimension(HypothesisMask(c.hypotheses().size(), true));
  }
  return {std::min(v, cap), v >= cap};
}

namespace {

struct VclKey {
  HypothesisMask mask;
  int level;
  int remaining;
  bool operator==(const VclKey&) const = default;
};

struct VclKeyHash {
  std::size_t operator()(const VclKey& k) const {
    return k.mask.Hash() ^ (static_cast<std::size_t>(k.level) << 40) ^
           (static_cast<std::size_t>(k.remaining) << 52);
  }
};

class VclSearch {
 public:
  explicit VclSearch(const ConceptClass& c) : c_(c) {}

  // A tree with `remaining` more levels, the first carrying level+1 points,
  // exists inside the version space.
  bool Exists(const HypothesisMask& mask, int level, int remaining) {
    if (remaining == 0) return true;
    VclKey key{mask, level, remaining};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const std::size_t s = static_cast<std::size_t>(level) + 1;
    bool result = false;
    if (s < 63 && (std::uint64_t{1} << s) <= mask.Count()) {
      std::vector<PointId> free;
      for (std::size_t x = 0; x < c_.domain().size(); ++x) {
        PointId p{static_cast<std::uint32_t>(x)};
        if ((mask & c_.ZeroMask(p)).Any() && (mask & c_.OneMask(p)).Any()) {
          free.push_back(p);
        }
      }
      result = ForEachCombination(free.size(), s, [&](const auto& idx) {
        for (std::uint64_t pat = 0; pat < (std::uint64_t{1} << s); ++pat) {
          HypothesisMask child = mask;
          for (std::size_t i = 0; i < s; ++i) {
            bool one = (pat >> (s - 1 - i)) & 1u;
            child &= one ? c_.OneMask(free[idx[i]]) : c_.ZeroMask(free[idx[i]]);
          }
          if (!child.Any() || !Exists(child, level + 1, remaining - 1)) {
            return false;
          }
        }
        return true;
      });
    }
    memo_.emplace(std::move(key), result);
    return result;
  }

 private:
  const ConceptClass& c_;
  std::unordered_map<VclKey, bool, VclKeyHash> memo_;
};

}  // namespace

CappedDimension VclDepth(const ConceptClass& c, int cap) {
  if (c.empty()) return {-1, false};
  int d = 0;
  if (c.is_cube()) {
    const std::size_t f = c.free_count();
    while (d < cap && static_cast<std::size_t>(d + 1) * (d + 2) / 2 <= f) ++d;
    return {d, d >= cap};
  }
  VclSearch search(c);
  const HypothesisMask all(c.hypotheses().size(), true);
  while (d < cap && search.Exists(all, 0, d + 1)) ++d;
  return {d, d >= cap};
}

// -- Pattern / GameRecord -----------------------------------------------------

Pattern Pattern::FromIndex(std::uint64_t index, std::size_t length) {
  Pattern p;
  p.labels.resize(length);
  for (std::size_t i = 0; i < length; ++i) {
    p.labels[i] = LabelFromBit((index >> (length - 1 - i)) & 1u);
  }
  return p;
}

Pattern Pattern::FromString(std::string_view bits) {
  Pattern p;
  for (char ch : bits) {
    Label l = LabelFromChar(ch);
    if (l == Label::kUndefined) throw DomainError("pattern must be binary");
    p.labels.push_back(l);
  }
  return p;
}

std::uint64_t Pattern::Index() const {
  if (labels.size() > 63) throw SizeError("pattern too long", 63);
  std::uint64_t v = 0;
  for (Label l : labels) v = (v << 1) | static_cast<std::uint64_t>(LabelBit(l));
  return v;
}

std::string Pattern::ToString() const {
  std::string s;
  for (Label l : labels) s.push_back(LabelChar(l));
  return s;
}

void GameRecord::Record(std::vector<PointId> tuple, Pattern pattern) {
  const std::size_t k = rounds_.size() + 1;
  if (tuple.size() != k || pattern.size() != k) {
    throw DomainError("round " + std::to_string(k) + " needs a " +
                      std::to_string(k) + "-tuple and a pattern of length " +
                      std::to_string(k));
  }
  rounds_.push_back({std::move(tuple), std::move(pattern)});
}

LabeledPrefix GameRecord::AsPrefix() const {
  LabeledPrefix prefix;
  for (const auto& r : rounds_) {
    auto part = PatternPrefix(r.tuple, r.pattern);
    prefix.insert(prefix.end(), part.begin(), part.end());
  }
  return prefix;
}

ConceptClass GameVersionSpace(const GameRecord& u, const ConceptClass& c) {
  return Restrict(c, u.AsPrefix());
}

// -- Strategy -----------------------------------------------------------------

Pattern GreedyPattern(const ConceptClass& vs, Preset preset, int k,
                      std::span<const PointId> tuple) {
  if (static_cast<int>(tuple.size()) != k) {
    throw DomainError("strategy expects a " + std::to_string(k) +
                      "-tuple, got " + std::to_string(tuple.size()));
  }
  for (PointId p : tuple) vs.domain().Check(p);
  if (vs.empty()) throw StateError("version space is empty: game already won");
  if (k > 24) throw SizeError("tuple too long for pattern enumeration", 24);
  const std::size_t s = tuple.size();

  if (preset == Preset::kThresholds && k == 2 && tuple[0] != tuple[1]) {
    // Non-monotone: the smaller point gets 1, the larger 0.
    Pattern p;
    p.labels = {LabelFromBit(tuple[0] < tuple[1]),
                LabelFromBit(tuple[1] < tuple[0])};
    return p;
  }

  if (vs.is_cube()) {
    auto realized = [&](std::uint64_t pat) {
      for (std::size_t i = 0; i < s; ++i) {
        Label want = LabelFromBit((pat >> (s - 1 - i)) & 1u);
        Label fixed = vs.cube_fixed()[tuple[i].value];
        if (fixed != Label::kUndefined && fixed != want) return false;
        for (std::size_t j = 0; j < i; ++j) {
          if (tuple[j] == tuple[i] &&
              LabelFromBit((pat >> (s - 1 - j)) & 1u) != want) {
            return false;
          }
        }
      }
      return true;
    };
    auto distinct = DistinctPoints(tuple);
    bool all_free = distinct.size() == s &&
                    std::all_of(tuple.begin(), tuple.end(),
                                [&](PointId p) { return vs.IsFree(p); });
    if (!all_free) {
      for (std::uint64_t pat = 0; pat < (std::uint64_t{1} << s); ++pat) {
        if (!realized(pat)) return Pattern::FromIndex(pat, s);
      }
    }
    // Every pattern leaves the same number of hypotheses.
    return Pattern::FromIndex(0, s);
  }

  std::unordered_map<std::uint64_t, std::size_t> counts;
  for (const auto& h : vs.hypotheses()) {
    std::uint64_t pat = 0;
    bool defined = true;
    for (PointId p : tuple) {
      Label l = h[p.value];
      if (l == Label::kUndefined) {
        defined = false;
        break;
      }
      pat = (pat << 1) | static_cast<std::uint64_t>(LabelBit(l));
    }
    if (defined) ++counts[pat];
  }
  if (counts.size() < (std::uint64_t{1} << s)) {
    std::vector<std::uint64_t> seen;
    for (const auto& [pat, n] : counts) seen.push_back(pat);
    std::sort(seen.begin(), seen.end());
    std::uint64_t least = 0;
    for (auto pat : seen) {
      if (pat != least) break;
      ++least;
    }
    return Pattern::FromIndex(least, s);
  }
  std::uint64_t best = 0;
  std::size_t best_count = SIZE_MAX;
  for (const auto& [pat, n] : counts) {
    if (n < best_count || (n == best_count && pat < best)) {
      best = pat;
      best_count = n;
    }
  }
  return Pattern::FromIndex(best, s);
}

Pattern WinningStrategy(const GameRecord& u, const ConceptClass& c,
                        std::span<const PointId> tuple) {
  return GreedyPattern(GameVersionSpace(u, c), c.preset(), u.current_k(),
                       tuple);
}

ConceptClass InducedPartialClass(const GameRecord& u, const ConceptClass& c,
                                 const Strategy& strategy) {
  const int k = u.current_k();
  const std::size_t n = c.domain().size();
  const std::size_t cap = k == 1 ? 20 : kInducedDomainCap;
  if (n > cap) {
    throw SizeError("induced class over a domain of " + std::to_string(n) +
                        " points",
                    static_cast<long long>(cap));
  }
  std::optional<ConceptClass> vs;
  Strategy g = strategy;
  if (!g) {
    vs = GameVersionSpace(u, c);
    g = [&](const GameRecord&, std::span<const PointId> tuple) {
      return GreedyPattern(*vs, c.preset(), k, tuple);
    };
  }

  // Hypotheses as bit strings: bit n-1-x holds the label of point x.
  const std::uint64_t total = std::uint64_t{1} << n;
  std::vector<bool> alive(total, true);
  if (static_cast<std::size_t>(k) <= n) {
    std::vector<PointId> tuple(k);
    std::vector<bool> used(n, false);
    std::function<void(int)> rec = [&](int depth) {
      if (depth == k) {
        Pattern p = g(u, tuple);
        if (p.size() != static_cast<std::size_t>(k)) {
          throw StateError("strategy returned a pattern of the wrong length");
        }
        std::uint64_t care = 0, want = 0;
        for (int i = 0; i < k; ++i) {
          std::uint64_t bit = std::uint64_t{1} << (n - 1 - tuple[i].value);
          care |= bit;
          if (p.labels[i] == Label::kOne) want |= bit;
        }
        // Only the hypotheses matching `want` on `care` die; walk them.
        const std::uint64_t rest = (total - 1) & ~care;
        for (std::uint64_t sub = rest;; sub = (sub - 1) & rest) {
          alive[sub | want] = false;
          if (sub == 0) break;
        }
        return;
      }
      for (std::size_t x = 0; x < n; ++x) {
        if (used[x]) continue;
        used[x] = true;
        tuple[depth] = PointId{static_cast<std::uint32_t>(x)};
        rec(depth + 1);
        used[x] = false;
      }
    };
    rec(0);
  }
  std::vector<Hypothesis> kept;
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    if (!alive[bits]) continue;
    std::vector<Label> t(n);
    for (std::size_t x = 0; x < n; ++x) {
      t[x] = LabelFromBit((bits >> (n - 1 - x)) & 1u);
    }
    kept.emplace_back(std::move(t));
  }
  return ConceptClass::Tabulated(c.domain_ptr(), std::move(kept));
}

// -- Littlestone trees --------------------------------------------------------

LittlestoneTree LittlestoneTree::Uniform(std::vector<PointId> level_points) {
  LittlestoneTree t;
  t.depth_ = static_cast<int>(level_points.size());
  t.uniform_ = true;
  t.points_ = std::move(level_points);
  return t;
}

LittlestoneTree LittlestoneTree::Explicit(int depth, std::vector<PointId> heap) {
  if (heap.size() != (std::size_t{1} << depth)) {
    throw DomainError("explicit Littlestone tree needs 2^depth heap slots");
  }
  LittlestoneTree t;
  t.depth_ = depth;
  t.uniform_ = false;
  t.points_ = std::move(heap);
  return t;
}

PointId LittlestoneTree::PointAt(std::uint64_t heap_index) const {
  const int level = FloorLog2(heap_index);
  if (heap_index == 0 || level >= depth_) {
    throw DomainError("node " + std::to_string(heap_index) +
                      " outside a tree of depth " + std::to_string(depth_));
  }
  return uniform_ ? points_[level] : points_[heap_index];
}

PointId LittlestoneTree::PointAtLevel(int level) const {
  if (!uniform_) throw StateError("level points exist only in uniform trees");
  if (level < 0 || level >= depth_) {
    throw DomainError("level " + std::to_string(level) +
                      " outside a tree of depth " + std::to_string(depth_));
  }
  return points_[level];
}

std::string LittlestoneTree::ToText(const Domain& domain) const {
  std::ostringstream out;
  if (uniform_) {
    for (int d = 0; d < depth_; ++d) {
      out << "depth " << d + 1 << ": " << domain.id(points_[d])
          << " (both edges)\n";
    }
    return out.str();
  }
  std::function<void(std::uint64_t, int, const std::string&)> rec =
      [&](std::uint64_t node, int level, const std::string& edge) {
        if (level >= depth_) return;
        out << std::string(2 * level, ' ') << edge << domain.id(PointAt(node))
            << "\n";
        rec(Child(node, Label::kZero), level + 1, "0: ");
        rec(Child(node, Label::kOne), level + 1, "1: ");
      };
  rec(1, 0, "");
  return out.str();
}

LittlestoneTree BuildLittlestoneWitness(const ConceptClass& c, int depth) {
  if (depth <= 0) return LittlestoneTree::Uniform({});
  if (c.empty()) throw InfeasibleError("empty class has no Littlestone tree");
  if (c.is_cube()) {
    std::vector<PointId> pts;
    for (std::size_t x = 0; x < c.domain().size() && pts.size() < static_cast<std::size_t>(depth); ++x) {
      PointId p{static_cast<std::uint32_t>(x)};
      if (c.IsFree(p)) pts.push_back(p);
    }
    if (pts.size() < static_cast<std::size_t>(depth)) {
      throw InfeasibleError("Littlestone dimension " +
                            std::to_string(c.free_count()) + " < depth " +
                            std::to_string(depth));
    }
    return LittlestoneTree::Uniform(std::move(pts));
  }
  if (depth > 20) throw SizeError("explicit Littlestone tree depth", 20);
  LittlestoneSolver solver(c);
  const HypothesisMask all(c.hypotheses().size(), true);
  const int ldim = solver.Dimension(all);
  if (ldim < depth) {
    throw InfeasibleError("Littlestone dimension " + std::to_string(ldim) +
                          " < depth " + std::to_string(depth));
  }
  std::vector<PointId> heap(std::size_t{1} << depth);
  std::function<void(std::uint64_t, const HypothesisMask&, int)> fill =
      [&](std::uint64_t node, const HypothesisMask& vs, int remaining) {
        if (remaining == 0) return;
        for (std::size_t x = 0; x < c.domain().size(); ++x) {
          PointId p{static_cast<std::uint32_t>(x)};
          HypothesisMask m0 = vs & c.ZeroMask(p);
          HypothesisMask m1 = vs & c.OneMask(p);
          if (solver.Dimension(m0) >= remaining - 1 &&
              solver.Dimension(m1) >= remaining - 1) {
            heap[node] = p;
            fill(LittlestoneTree::Child(node, Label::kZero), m0, remaining - 1);
            fill(LittlestoneTree::Child(node, Label::kOne), m1, remaining - 1);
            return;
          }
        }
        throw InfeasibleError("Littlestone witness search failed");
      };
  fill(1, all, depth);
  return LittlestoneTree::Explicit(depth, std::move(heap));
}

bool CheckLittlestoneTree(const ConceptClass& c, const LittlestoneTree& t,
                          int max_exhaustive_depth,
                          std::uint64_t sample_paths) {
  const int depth = t.depth();
  if (depth == 0) return !c.empty();
  const bool exhaustive = depth <= max_exhaustive_depth;
  const std::uint64_t paths =
      exhaustive ? (std::uint64_t{1} << depth) : sample_paths;
  for (std::uint64_t i = 0; i < paths; ++i) {
    std::uint64_t bits = exhaustive ? i : Mix64(i);
    LabeledPrefix prefix;
    std::uint64_t node = 1;
    for (int level = 0; level < depth; ++level) {
      Label edge = LabelFromBit((bits >> (level % 64)) & 1u);
      prefix.push_back({t.PointAt(node), edge});
      node = LittlestoneTree::Child(node, edge);
    }
    if (!IsRealizable(c, prefix)) return false;
  }
  return true;
}

// -- VCL trees ----------------------------------------------------------------

std::string_view VclLayoutName(VclLayout l) {
  return l == VclLayout::kShared ? "shared" : "distinct";
}

VclLayout VclLayoutFromName(std::string_view name) {
  if (name == "shared") return VclLayout::kShared;
  if (name == "distinct") return VclLayout::kDistinct;
  throw DomainError("unknown VCL layout '" + std::string(name) + "'");
}

const VclNode& VclTree::node(int bfs_index) const {
  if (bfs_index < 1 || bfs_index > static_cast<int>(nodes_.size())) {
    throw DomainError("no VCL node " + std::to_string(bfs_index));
  }
  return nodes_[bfs_index - 1];
}

int VclTree::Child(int bfs_index, const Pattern& pattern) const {
  const VclNode& n = node(bfs_index);
  if (pattern.size() != n.points.size()) {
    throw DomainError("pattern length does not match node size");
  }
  if (n.level + 1 >= depth_) return 0;
  if (layout_ == VclLayout::kShared) return bfs_index + 1;
  return n.children[pattern.Index()];
}

std::size_t VclTree::total_points() const {
  std::size_t s = 0;
  for (const auto& n : nodes_) s += n.points.size();
  return s;
}

std::string VclTree::ToTreeFile(const Domain& domain) const {
  std::ostringstream out;
  for (const auto& n : nodes_) {
    out << n.bfs_index << ' ' << n.parent << ' ';
    if (n.parent == 0) {
      out << '-';
    } else if (layout_ == VclLayout::kShared) {
      out << '*';
    } else {
      out << n.edge.ToString();
    }
    for (PointId p : n.points) out << ' ' << domain.id(p);
    out << '\n';
  }
  return out.str();
}

std::optional<Hypothesis> ChildWitness(const ConceptClass& c,
                                       const VclTree& tree, int node,
                                       const Hypothesis& node_witness,
                                       const Pattern& pattern) {
  LabeledPrefix constraints;
  for (int v = 1; v < node; ++v) {
    for (PointId p : tree.node(v).points) {
      constraints.push_back({p, node_witness[p.value]});
    }
  }
  const auto& pts = tree.node(node).points;
  if (pattern.size() != pts.size()) {
    throw DomainError("pattern length does not match node size");
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    constraints.push_back({pts[i], pattern.labels[i]});
  }
  return c.FindConsistent(constraints);
}

namespace {

std::vector<PointId> FreePoints(const ConceptClass& c) {
  std::vector<PointId> out;
  for (std::size_t x = 0; x < c.domain().size(); ++x) {
    PointId p{static_cast<std::uint32_t>(x)};
    if (!c.is_cube() || c.IsFree(p)) out.push_back(p);
  }
  return out;
}

VclTree BuildShared(const ConceptClass& c, int depth) {
  const std::size_t need = (std::size_t{1} << depth) - 1;
  auto candidates = FreePoints(c);
  if (candidates.size() < need) {
    throw InfeasibleError("shared layout of depth " + std::to_string(depth) +
                          " needs " + std::to_string(need) + " points, have " +
                          std::to_string(candidates.size()));
  }
  std::vector<PointId> chosen;
  if (c.is_cube()) {
    chosen.assign(candidates.begin(), candidates.begin() + need);
  } else {
    if (need > 20) throw SizeError("shared layout over a table", 20);
    bool ok = ForEachCombination(candidates.size(), need, [&](const auto& idx) {
      std::vector<PointId> pts;
      for (auto i : idx) pts.push_back(candidates[i]);
      if (!Shatters(c, pts)) return false;
      chosen = std::move(pts);
      return true;
    });
    if (!ok) {
      throw InfeasibleError("no shattered set of " + std::to_string(need) +
                            " points for the shared layout");
    }
  }
  std::vector<VclNode> nodes;
  std::size_t next = 0;
  Hypothesis witness = *c.FindConsistent({});
  for (int k = 1; k <= depth; ++k) {
    VclNode n;
    n.bfs_index = k;
    n.parent = k - 1;
    n.level = k - 1;
    n.points.assign(chosen.begin() + next,
                    chosen.begin() + next + (std::size_t{1} << (k - 1)));
    next += n.points.size();
    if (k > 1) n.edge = Pattern::FromIndex(0, nodes.back().points.size());
    n.witness = witness;
    nodes.push_back(std::move(n));
    VclTree partial(VclLayout::kShared, depth, nodes);
    auto child = ChildWitness(c, partial, k, witness,
                              Pattern::FromIndex(0, nodes.back().points.size()));
    if (!child) throw InfeasibleError("shared layout lost consistency");
    witness = *std::move(child);
  }
  return VclTree(VclLayout::kShared, depth, std::move(nodes));
}

VclTree BuildDistinct(const ConceptClass& c, int depth) {
  auto candidates = FreePoints(c);
  // Node count and total points before doing any work.
  {
    std::uint64_t nodes = 1, level_nodes = 1;
    for (int level = 1; level < depth; ++level) {
      std::uint64_t next = 0;
      for (std::uint64_t i = 0; i < level_nodes; ++i) {
        const std::uint64_t size_exp = nodes - level_nodes + i;  // k - 1
        if (size_exp >= 20) {
          throw InfeasibleError("distinct layout of depth " +
                                std::to_string(depth) +
                                " is too large");
        }
        next += std::uint64_t{1} << (std::uint64_t{1} << size_exp);
        if (nodes + next > 40) {
          throw InfeasibleError("distinct layout of depth " +
                                std::to_string(depth) + " is too large");
        }
      }
      nodes += next;
      level_nodes = next;
    }
    const std::uint64_t need = (std::uint64_t{1} << nodes) - 1;
    if (nodes >= 40 || candidates.size() < need) {
      throw InfeasibleError("distinct layout of depth " +
                            std::to_string(depth) + " needs " +
                            std::to_string(need) + " points, have " +
                            std::to_string(candidates.size()));
    }
  }

  struct Pending {
    int parent;
    Pattern edge;
    int level;
    Hypothesis witness;
  };
  std::deque<Pending> queue;
  queue.push_back({0, {}, 0, *c.FindConsistent({})});
  std::vector<VclNode> nodes;
  std::vector<bool> used(c.domain().size(), false);
  while (!queue.empty()) {
    Pending pending = std::move(queue.front());
    queue.pop_front();
    const int k = static_cast<int>(nodes.size()) + 1;
    const std::size_t s = std::size_t{1} << (k - 1);
    VclNode node;
    node.bfs_index = k;
    node.parent = pending.parent;
    node.edge = pending.edge;
    node.level = pending.level;
    node.witness = pending.witness;
    nodes.push_back(node);

    std::vector<PointId> fresh;
    for (PointId p : candidates) {
      if (!used[p.value]) fresh.push_back(p);
    }
    std::vector<std::optional<Hypothesis>> child_witnesses;
    std::size_t tries = 0;
    bool ok = ForEachCombination(fresh.size(), s, [&](const auto& idx) {
      if (++tries > 100000) throw SizeError("VCL node point search", 100000);
      nodes.back().points.clear();
      for (auto i : idx) nodes.back().points.push_back(fresh[i]);
      VclTree partial(VclLayout::kDistinct, depth, nodes);
      child_witnesses.clear();
      for (std::uint64_t pat = 0; pat < (std::uint64_t{1} << s); ++pat) {
        auto w = ChildWitness(c, partial, k, pending.witness,
                              Pattern::FromIndex(pat, s));
        if (!w) return false;
        child_witnesses.push_back(std::move(w));
      }
      return true;
    });
    if (!ok) {
      throw InfeasibleError("no points left for VCL node " + std::to_string(k));
    }
    for (PointId p : nodes.back().points) used[p.value] = true;
    if (pending.level + 1 < depth) {
      for (std::uint64_t pat = 0; pat < (std::uint64_t{1} << s); ++pat) {
        nodes.back().children.push_back(static_cast<int>(
            nodes.size() + queue.size() + 1));
        queue.push_back({k, Pattern::FromIndex(pat, s), pending.level + 1,
                         *child_witnesses[pat]});
      }
    }
  }
  return VclTree(VclLayout::kDistinct, depth, std::move(nodes));
}

}  // namespace

VclTree BuildVclAdversaryTree(const ConceptClass& c, int depth,
                              VclLayout layout) {
  if (depth < 0) throw DomainError("negative depth");
  if (depth == 0) return VclTree(layout, 0, {});
  if (c.empty()) throw InfeasibleError("empty class has no VCL tree");
  const CappedDimension vcl = VclDepth(c, depth);
  if (vcl.value < depth) {
    throw InfeasibleError("VCL depth " + std::to_string(vcl.value) +
                          " < requested depth " + std::to_string(depth));
  }
  return layout == VclLayout::kShared ? BuildShared(c, depth)
                                      : BuildDistinct(c, depth);
}

bool CheckIndifference(const ConceptClass& c, const VclTree& tree) {
  if (tree.nodes().empty()) return true;
  if (tree.layout() == VclLayout::kShared) {
    std::vector<PointId> all;
    for (const auto& n : tree.nodes()) {
      all.insert(all.end(), n.points.begin(), n.points.end());
    }
    return Shatters(c, all);
  }
  // Functions of every descendant of u (leaf completions included).
  std::function<void(int, std::vector<Hypothesis>&)> collect =
      [&](int node, std::vector<Hypothesis>& out) {
        const VclNode& n = tree.node(node);
        out.push_back(n.witness);
        const std::size_t s = n.points.size();
        for (std::uint64_t pat = 0; pat < (std::uint64_t{1} << s); ++pat) {
          Pattern p = Pattern::FromIndex(pat, s);
          int child = tree.Child(node, p);
          if (child) {
            collect(child, out);
          } else {
            auto w = ChildWitness(c, tree, node, n.witness, p);
            if (!w) throw InvariantViolation("leaf completion missing");
            out.push_back(*std::move(w));
          }
        }
      };
  for (const auto& u : tree.nodes()) {
    if (!c.Contains(u.witness)) return false;
    // u's function realizes the edges along its path.
    for (int a = u.bfs_index; tree.node(a).parent != 0;
         a = tree.node(a).parent) {
      const VclNode& parent = tree.node(tree.node(a).parent);
      for (std::size_t i = 0; i < parent.points.size(); ++i) {
        if (u.witness[parent.points[i].value] !=
            tree.node(a).edge.labels[i]) {
          return false;
        }
      }
    }
    std::vector<Hypothesis> descendants;
    collect(u.bfs_index, descendants);
    for (const auto& w : descendants) {
      for (int v = 1; v < u.bfs_index; ++v) {
        for (PointId p : tree.node(v).points) {
          if (w[p.value] != u.witness[p.value]) return false;
        }
      }
    }
  }
  return true;
}

}  // namespace oul
