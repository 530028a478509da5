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

// Data processes with conditional rollouts, and the two adversaries that
// walk Littlestone and VCL trees.

#ifndef OUL_PROCESSES_H_
#define OUL_PROCESSES_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "oul/concepts.h"
#include "oul/learners.h"
#include "oul/trees.h"

namespace oul {

enum class ProcessKind {
  kIid,
  kMarkov,
  kDeterministic,
  kNovel,
  kLittlestoneWalk,
  kVclWalk,
};

std::string_view ProcessKindName(ProcessKind k);
ProcessKind ProcessKindFromName(std::string_view name);

// Point processes whose law does not depend on labels. X_t is a function of
// (seed, t) and, for Markov chains, the previous point.
class ProcessModel : public ProcessOracle {
 public:
  // `weights` over the domain; empty means uniform.
  static ProcessModel Iid(DomainPtr domain, std::vector<double> weights,
                          std::uint64_t seed);
  // Row x of `transition` is the law of X_{t+1} given X_t = x. `initial`
  // empty means uniform.
  static ProcessModel Markov(DomainPtr domain, std::vector<double> initial,
                             std::vector<std::vector<double>> transition,
                             std::uint64_t seed);
  static ProcessModel Deterministic(DomainPtr domain,
                                    std::vector<PointId> sequence);
  // X_t is the t-th domain point: every point is new.
  static ProcessModel Novel(DomainPtr domain);

  ProcessKind kind() const { return kind_; }
  const Domain& domain() const { return *domain_; }
  const DomainPtr& domain_ptr() const { return domain_; }
  std::uint64_t seed() const { return seed_; }
  // Number of points before the stream ends, if finite.
  std::optional<std::size_t> length() const;

  // X_t for t = |history| + 1; nullopt at the end of a finite stream.
  std::optional<PointId> Next(std::span<const PointId> history) const;
  // X_1..X_T. Throws InfeasibleError when a finite stream is shorter.
  std::vector<PointId> Sample(std::size_t horizon) const;

  bool deterministic() const override;
  std::vector<PointId> Rollout(std::span<const PointId> history,
                               std::size_t horizon,
                               std::uint64_t draw) const override;

 private:
  ProcessModel() = default;
  PointId Draw(Rng& rng, std::span<const PointId> history) const;

  ProcessKind kind_ = ProcessKind::kIid;
  DomainPtr domain_;
  std::uint64_t seed_ = 0;
  std::vector<double> weights_;  // cumulative; empty = uniform
  std::vector<double> initial_;  // cumulative; empty = uniform
  std::vector<std::vector<double>> transition_;  // cumulative rows
  std::vector<PointId> sequence_;
};

// Labeled stream produced by an adversary.
struct AdversaryTrace {
  std::vector<PointId> points;
  std::vector<Label> labels;
  // Heap index (Littlestone; 0 below depth 64) or BFS index (VCL).
  std::vector<std::uint64_t> nodes;
  std::vector<bool> on_path;
  std::vector<Pattern> path;         // chosen pattern at each path node
  std::vector<int> path_nodes;       // BFS indices of path nodes (VCL)
  std::vector<std::uint64_t> boundaries;  // n_{K_d}

  std::size_t size() const { return points.size(); }
  LabeledPrefix AsPrefix() const;
  // Columns t, point_id, y, node_bfs_index, on_path.
  std::string ToCsv(const Domain& domain) const;
};

// Random walk down a Littlestone tree with uniform labels drawn from the
// kLabels stream of `seed`, or from `bits` when given.
AdversaryTrace LittlestoneAdversary(const ConceptClass& c,
                                    const LittlestoneTree& tree,
                                    std::size_t horizon, std::uint64_t seed,
                                    std::span<const int> bits = {});

// Emits every tree point in BFS order (node order within a node) along a
// uniformly random root-to-leaf walk. Off-path nodes take the labels of the
// earliest on-path node after them in BFS order.
AdversaryTrace VclAdversary(const ConceptClass& c, const VclTree& tree,
                            std::uint64_t seed);

// Rollouts for the walk processes. The VCL walk emits every tree point in a
// fixed order, and the Littlestone walk on a uniform tree visits the same
// points on every walk; both are deterministic as point processes.
class LittlestoneWalkOracle : public ProcessOracle {
 public:
  explicit LittlestoneWalkOracle(LittlestoneTree tree)
      : tree_(std::move(tree)) {}
  bool deterministic() const override { return tree_.uniform(); }
  std::vector<PointId> Rollout(std::span<const PointId> history,
                               std::size_t horizon,
                               std::uint64_t draw) const override;

 private:
  LittlestoneTree tree_;
};

class VclWalkOracle : public ProcessOracle {
 public:
  explicit VclWalkOracle(VclTree tree) : tree_(std::move(tree)) {}
  bool deterministic() const override { return true; }
  std::vector<PointId> Rollout(std::span<const PointId> history,
                               std::size_t horizon,
                               std::uint64_t draw) const override;

 private:
  VclTree tree_;
};

// Number of distinct parts A_k hit by the points; parts[x] is the part of
// point x, or -1 when x lies in none.
std::size_t VisitedParts(std::span<const PointId> points,
                         std::span<const int> parts);

}  // namespace oul

#endif  // OUL_PROCESSES_H_
