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

// Combinatorial dimensions, the VCL game, and witness trees.

#ifndef OUL_TREES_H_
#define OUL_TREES_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "oul/concepts.h"

namespace oul {

// A dimension computed by a search that stops at `cap`. `value` is -1 for the
// empty class.
struct CappedDimension {
  int value = 0;
  bool at_cap = false;
  std::string ToString() const;
};

// Largest shattered set size; nullopt for the empty class.
std::optional<int> VcDimension(const ConceptClass& c);

// Depth of the deepest Littlestone tree, by exhaustive game search.
CappedDimension LittlestoneDimension(const ConceptClass& c, int cap = 64);

// Depth of the deepest VCL tree (level n carries an (n+1)-tuple).
CappedDimension VclDepth(const ConceptClass& c, int cap = 16);

// Memoized Littlestone game search over version spaces of one tabulated
// class. Not thread-safe; give each trial its own solver.
class LittlestoneSolver {
 public:
  explicit LittlestoneSolver(ConceptClass base);

  const ConceptClass& base() const { return base_; }
  // Exact Littlestone dimension of the given version space, -1 if empty.
  int Dimension(const HypothesisMask& version_space);
  std::size_t memo_size() const { return memo_.size(); }

 private:
  ConceptClass base_;
  std::unordered_map<HypothesisMask, int, HypothesisMaskHash> memo_;
};

// Binary label pattern over an ordered tuple. Numeric index order equals
// lexicographic order, with the first tuple element most significant.
struct Pattern {
  std::vector<Label> labels;

  static Pattern FromIndex(std::uint64_t index, std::size_t length);
  static Pattern FromString(std::string_view bits);
  std::uint64_t Index() const;
  std::size_t size() const { return labels.size(); }
  std::string ToString() const;
  auto operator<=>(const Pattern&) const = default;
};

// Pairs (tuple[i], pattern[i]).
LabeledPrefix PatternPrefix(std::span<const PointId> tuple,
                            const Pattern& pattern);

// Record U of the VCL game: round r holds an r-tuple and the learner's
// pattern on it.
class GameRecord {
 public:
  struct Round {
    std::vector<PointId> tuple;
    Pattern pattern;
  };

  int current_k() const { return static_cast<int>(rounds_.size()) + 1; }
  const std::vector<Round>& rounds() const { return rounds_; }
  void Record(std::vector<PointId> tuple, Pattern pattern);
  LabeledPrefix AsPrefix() const;

 private:
  std::vector<Round> rounds_;
};

// H_U: members of c consistent with every recorded (tuple, pattern).
ConceptClass GameVersionSpace(const GameRecord& u, const ConceptClass& c);

using Strategy =
    std::function<Pattern(const GameRecord&, std::span<const PointId>)>;

// Greedy learner strategy. Plays the lexicographically least pattern that
// H_{U} does not realize on the tuple when one exists (an immediate win);
// otherwise the pattern leaving the fewest consistent hypotheses. Thresholds
// at k = 2 play the non-monotone pattern directly. Throws StateError when
// H_U is already empty.
Pattern WinningStrategy(const GameRecord& u, const ConceptClass& c,
                        std::span<const PointId> tuple);

// Same rule against a precomputed version space.
Pattern GreedyPattern(const ConceptClass& version_space, Preset preset, int k,
                      std::span<const PointId> tuple);

inline constexpr std::size_t kInducedDomainCap = 12;

// H^{g_U}: every total function on the domain whose labels differ from the
// strategy's pattern on each k-tuple of distinct domain points. Defaults to
// WinningStrategy. Domains above kInducedDomainCap (20 when k = 1) throw.
ConceptClass InducedPartialClass(const GameRecord& u, const ConceptClass& c,
                                 const Strategy& strategy = {});

// Complete binary mistake tree. Nodes use heap numbering: root 1, children
// 2i (edge 0) and 2i + 1 (edge 1). A uniform tree labels every node at
// depth t with the same point.
class LittlestoneTree {
 public:
  static LittlestoneTree Uniform(std::vector<PointId> level_points);
  static LittlestoneTree Explicit(int depth, std::vector<PointId> heap);

  int depth() const { return depth_; }
  bool uniform() const { return uniform_; }
  PointId PointAt(std::uint64_t heap_index) const;
  // Uniform trees only: the point of every node at depth `level` (0-based).
  // Heap indices overflow past 63 levels; deep walks go through this.
  PointId PointAtLevel(int level) const;
  static std::uint64_t Child(std::uint64_t node, Label edge) {
    return 2 * node + static_cast<std::uint64_t>(LabelBit(edge));
  }
  std::string ToText(const Domain& domain) const;

 private:
  int depth_ = 0;
  bool uniform_ = true;
  std::vector<PointId> points_;  // per level, or heap array (index 0 unused)
};

// Littlestone tree of the given depth for c; InfeasibleError if none.
// Tabulated classes are searched (depth <= 20); cubes use free points.
LittlestoneTree BuildLittlestoneWitness(const ConceptClass& c, int depth);

// Every root path (all of them when depth <= max_exhaustive_depth, else the
// first `sample_paths` paths in a deterministic stride) is consistent with c.
bool CheckLittlestoneTree(const ConceptClass& c, const LittlestoneTree& t,
                          int max_exhaustive_depth = 16,
                          std::uint64_t sample_paths = 4096);

enum class VclLayout {
  // Every node of a level holds the same points, so BFS node k is the single
  // node at level k - 1. Depth D needs 2^D - 1 points.
  kShared,
  // Every node holds its own points. Grows doubly exponentially; only
  // depths 1 and 2 are practical.
  kDistinct,
};

std::string_view VclLayoutName(VclLayout l);
VclLayout VclLayoutFromName(std::string_view name);

struct VclNode {
  int bfs_index = 0;  // 1-based
  int parent = 0;     // 0 for the root
  Pattern edge;       // pattern on the parent's points leading here
  int level = 0;
  std::vector<PointId> points;
  std::vector<int> children;  // by pattern index; distinct layout only
  Hypothesis witness;         // consistent function chosen for this node
};

class VclTree {
 public:
  VclTree() = default;
  VclTree(VclLayout layout, int depth, std::vector<VclNode> nodes)
      : layout_(layout), depth_(depth), nodes_(std::move(nodes)) {}

  VclLayout layout() const { return layout_; }
  int depth() const { return depth_; }
  const std::vector<VclNode>& nodes() const { return nodes_; }
  const VclNode& node(int bfs_index) const;
  // BFS index of the child along `pattern`, 0 past the last level.
  int Child(int bfs_index, const Pattern& pattern) const;
  std::size_t total_points() const;
  // One node per line: bfs_index parent edge_pattern point ids.
  std::string ToTreeFile(const Domain& domain) const;

 private:
  VclLayout layout_ = VclLayout::kShared;
  int depth_ = 0;
  std::vector<VclNode> nodes_;
};

// The reweighted tree used by the VCL adversary: BFS node k carries 2^{k-1}
// points. InfeasibleError when the class has VCL depth below `depth` or the
// domain runs out of points.
VclTree BuildVclAdversaryTree(const ConceptClass& c, int depth,
                              VclLayout layout = VclLayout::kShared);

// Consistent function for the child of `node` along `pattern`: agrees with
// the node's function on every point of an earlier BFS node and takes
// `pattern` on the node's points. Applied at every level, this keeps the
// chosen functions indifferent.
std::optional<Hypothesis> ChildWitness(const ConceptClass& c,
                                       const VclTree& tree, int node,
                                       const Hypothesis& node_witness,
                                       const Pattern& pattern);

// Distinct layout: for every (v, u, w) with bfs(v) < bfs(u) and w a
// descendant of u (leaf completions included), h_u and h_w agree on v.
// Also checks that each node's function realizes its path.
bool CheckIndifference(const ConceptClass& c, const VclTree& tree);

}  // namespace oul

#endif  // OUL_TREES_H_
