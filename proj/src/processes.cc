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

#include "oul/processes.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "oul/errors.h"

namespace oul {

namespace {

constexpr std::string_view kKindNames[] = {
    "iid", "markov", "deterministic", "novel", "littlestone-walk", "vcl-walk"};

std::vector<double> Cumulative(const std::vector<double>& w, std::size_t n,
                               const std::string& what) {
  if (w.empty()) return {};
  if (w.size() != n) {
    throw ConfigError(what + " has " + std::to_string(w.size()) +
                      " entries for a domain of " + std::to_string(n));
  }
  std::vector<double> c(n);
  double total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(w[i] >= 0) || !std::isfinite(w[i])) {
      throw ConfigError(what + " has a negative or non-finite entry");
    }
    total += w[i];
    c[i] = total;
  }
  if (total <= 0) throw ConfigError(what + " has zero total mass");
  for (double& v : c) v /= total;
  c.back() = 1.0;
  return c;
}

PointId Pick(Rng& rng, const std::vector<double>& cumulative, std::size_t n) {
  if (cumulative.empty()) {
    return PointId{static_cast<std::uint32_t>(UniformIndex(rng, n))};
  }
  const double u = Uniform01(rng);
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  // Skip zero-mass points that share the cumulative value.
  return PointId{static_cast<std::uint32_t>(
      std::min<std::size_t>(it - cumulative.begin(), n - 1))};
}

}  // namespace

std::string_view ProcessKindName(ProcessKind k) {
  return kKindNames[static_cast<int>(k)];
}

ProcessKind ProcessKindFromName(std::string_view name) {
  for (int i = 0; i < 6; ++i) {
    if (kKindNames[i] == name) return static_cast<ProcessKind>(i);
  }
  if (name == "novel-point") return ProcessKind::kNovel;
  throw ConfigError("unknown process kind '" + std::string(name) + "'");
}

// -- ProcessModel ---------------------------------------------------------------

ProcessModel ProcessModel::Iid(DomainPtr domain, std::vector<double> weights,
                               std::uint64_t seed) {
  ProcessModel p;
  p.kind_ = ProcessKind::kIid;
  p.weights_ = Cumulative(weights, domain->size(), "iid weights");
  p.domain_ = std::move(domain);
  p.seed_ = seed;
  if (p.domain_->size() == 0) throw ConfigError("empty domain");
  return p;
}

ProcessModel ProcessModel::Markov(DomainPtr domain, std::vector<double> initial,
                                  std::vector<std::vector<double>> transition,
                                  std::uint64_t seed) {
  ProcessModel p;
  p.kind_ = ProcessKind::kMarkov;
  const std::size_t n = domain->size();
  if (n == 0) throw ConfigError("empty domain");
  if (transition.size() != n) {
    throw ConfigError("transition table needs one row per point");
  }
  p.initial_ = Cumulative(initial, n, "initial law");
  for (std::size_t i = 0; i < n; ++i) {
    if (transition[i].empty()) {
      throw ConfigError("transition row " + std::to_string(i + 1) +
                        " is empty");
    }
    p.transition_.push_back(Cumulative(
        transition[i], n, "transition row " + std::to_string(i + 1)));
  }
  p.domain_ = std::move(domain);
  p.seed_ = seed;
  return p;
}

ProcessModel ProcessModel::Deterministic(DomainPtr domain,
                                         std::vector<PointId> sequence) {
  ProcessModel p;
  p.kind_ = ProcessKind::kDeterministic;
  for (PointId x : sequence) domain->Check(x);
  p.domain_ = std::move(domain);
  p.sequence_ = std::move(sequence);
  return p;
}

ProcessModel ProcessModel::Novel(DomainPtr domain) {
  ProcessModel p;
  p.kind_ = ProcessKind::kNovel;
  p.domain_ = std::move(domain);
  return p;
}

std::optional<std::size_t> ProcessModel::length() const {
  switch (kind_) {
    case ProcessKind::kDeterministic:
      return sequence_.size();
    case ProcessKind::kNovel:
      return domain_->size();
    default:
      return std::nullopt;
  }
}

bool ProcessModel::deterministic() const {
  return kind_ == ProcessKind::kDeterministic || kind_ == ProcessKind::kNovel;
}

PointId ProcessModel::Draw(Rng& rng, std::span<const PointId> history) const {
  const std::size_t n = domain_->size();
  if (kind_ == ProcessKind::kIid) return Pick(rng, weights_, n);
  // Markov.
  if (history.empty()) return Pick(rng, initial_, n);
  return Pick(rng, transition_[history.back().value], n);
}

std::optional<PointId> ProcessModel::Next(
    std::span<const PointId> history) const {
  const std::size_t t = history.size() + 1;
  switch (kind_) {
    case ProcessKind::kIid:
    case ProcessKind::kMarkov: {
      Rng rng = MakeRng(seed_, Stream::kProcess, t);
      return Draw(rng, history);
    }
    case ProcessKind::kDeterministic:
      if (t > sequence_.size()) return std::nullopt;
      return sequence_[t - 1];
    case ProcessKind::kNovel:
      if (t > domain_->size()) return std::nullopt;
      return PointId{static_cast<std::uint32_t>(t - 1)};
    default:
      throw StateError("walk processes are generated by their adversary");
  }
}

std::vector<PointId> ProcessModel::Sample(std::size_t horizon) const {
  std::vector<PointId> xs;
  xs.reserve(horizon);
  while (xs.size() < horizon) {
    auto x = Next(xs);
    if (!x) {
      throw InfeasibleError(
          std::string(ProcessKindName(kind_)) + " process ends after " +
          std::to_string(xs.size()) + " points, " + std::to_string(horizon) +
          " requested");
    }
    xs.push_back(*x);
  }
  return xs;
}

std::vector<PointId> ProcessModel::Rollout(std::span<const PointId> history,
                                           std::size_t horizon,
                                           std::uint64_t draw) const {
  std::vector<PointId> ext(history.begin(), history.end());
  std::vector<PointId> out;
  out.reserve(horizon);
  if (deterministic()) {
    for (std::size_t i = 0; i < horizon; ++i) {
      auto x = Next(ext);
      if (!x) break;
      ext.push_back(*x);
      out.push_back(*x);
    }
    return out;
  }
  Rng rng(draw);
  for (std::size_t i = 0; i < horizon; ++i) {
    PointId x = Draw(rng, ext);
    ext.push_back(x);
    out.push_back(x);
  }
  return out;
}

// -- Traces ---------------------------------------------------------------------

LabeledPrefix AdversaryTrace::AsPrefix() const {
  LabeledPrefix p;
  for (std::size_t i = 0; i < points.size(); ++i) {
    p.push_back({points[i], labels[i]});
  }
  return p;
}

std::string AdversaryTrace::ToCsv(const Domain& domain) const {
  std::ostringstream out;
  out << "t,point_id,y,node_bfs_index,on_path\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    out << i + 1 << ',' << domain.id(points[i]) << ',' << LabelChar(labels[i])
        << ',' << nodes[i] << ',' << (on_path[i] ? 1 : 0) << '\n';
  }
  return out.str();
}

namespace {

// Incremental prefix realizability.
class RealizabilityMonitor {
 public:
  explicit RealizabilityMonitor(const ConceptClass& c) : vs_(c) {}
  void Add(PointId x, Label y, std::size_t t) {
    vs_ = Restrict(vs_, {{x, y}});
    if (vs_.empty()) {
      throw InvariantViolation("adversary prefix of length " +
                               std::to_string(t) + " is not realizable");
    }
  }

 private:
  ConceptClass vs_;
};

}  // namespace

// Heap indices of depth-64 nodes still fit in 64 bits.
constexpr std::size_t kHeapLevels = 64;

AdversaryTrace LittlestoneAdversary(const ConceptClass& c,
                                    const LittlestoneTree& tree,
                                    std::size_t horizon, std::uint64_t seed,
                                    std::span<const int> bits) {
  if (horizon > static_cast<std::size_t>(tree.depth())) {
    throw InfeasibleError("Littlestone walk of " + std::to_string(horizon) +
                          " rounds needs a tree of that depth; witness has " +
                          std::to_string(tree.depth()));
  }
  if (!bits.empty() && bits.size() < horizon) {
    throw DomainError("fewer injected bits than rounds");
  }
  Rng rng = MakeRng(seed, Stream::kLabels);
  RealizabilityMonitor monitor(c);
  AdversaryTrace trace;
  std::uint64_t node = 1;
  for (std::size_t t = 1; t <= horizon; ++t) {
    const int bit = bits.empty() ? FairBit(rng) : (bits[t - 1] != 0);
    const Label y = LabelFromBit(bit);
    const PointId x = tree.uniform() ? tree.PointAtLevel(static_cast<int>(t - 1))
                                     : tree.PointAt(node);
    monitor.Add(x, y, t);
    trace.points.push_back(x);
    trace.labels.push_back(y);
    trace.nodes.push_back(t <= kHeapLevels ? node : 0);
    trace.on_path.push_back(true);
    Pattern edge;
    edge.labels = {y};
    trace.path.push_back(edge);
    if (t < kHeapLevels) node = LittlestoneTree::Child(node, y);
  }
  return trace;
}

AdversaryTrace VclAdversary(const ConceptClass& c, const VclTree& tree,
                            std::uint64_t seed) {
  AdversaryTrace trace;
  if (tree.nodes().empty()) return trace;
  Rng rng = MakeRng(seed, Stream::kWalk);
  auto random_pattern = [&](std::size_t len) {
    Pattern p;
    for (std::size_t i = 0; i < len; ++i) {
      p.labels.push_back(LabelFromBit(FairBit(rng)));
    }
    return p;
  };

  // The walk: one pattern per path node; the last one picks the leaf.
  std::vector<int> path_nodes;
  std::vector<Pattern> path;
  std::vector<Hypothesis> witnesses;
  int node = 1;
  Hypothesis witness = tree.node(1).witness;
  while (node != 0) {
    path_nodes.push_back(node);
    witnesses.push_back(witness);
    Pattern z = random_pattern(tree.node(node).points.size());
    auto next = ChildWitness(c, tree, node, witness, z);
    if (!next) throw InvariantViolation("VCL tree node lost its witness");
    witness = *std::move(next);
    path.push_back(z);
    node = tree.Child(node, z);
  }
  const Hypothesis& leaf = witness;

  const int total_nodes = static_cast<int>(tree.nodes().size());
  std::vector<int> on_path_index(total_nodes + 1, -1);
  for (std::size_t i = 0; i < path_nodes.size(); ++i) {
    on_path_index[path_nodes[i]] = static_cast<int>(i);
  }
  RealizabilityMonitor monitor(c);
  std::size_t next_path = 0;
  for (int v = 1; v <= total_nodes; ++v) {
    const VclNode& n = tree.node(v);
    const int pi = on_path_index[v];
    if (pi >= 0) next_path = static_cast<std::size_t>(pi) + 1;
    // Off-path: the earliest on-path node after v, else the leaf function.
    const Hypothesis* source = &leaf;
    if (pi < 0 && next_path < path_nodes.size()) {
      source = &witnesses[next_path];
    }
    for (std::size_t i = 0; i < n.points.size(); ++i) {
      const PointId x = n.points[i];
      const Label y =
          pi >= 0 ? path[pi].labels[i] : (*source)[x.value];
      monitor.Add(x, y, trace.points.size() + 1);
      trace.points.push_back(x);
      trace.labels.push_back(y);
      trace.nodes.push_back(static_cast<std::uint64_t>(v));
      trace.on_path.push_back(pi >= 0);
    }
  }
  trace.path = std::move(path);
  trace.path_nodes = path_nodes;
  for (int k : path_nodes) {
    trace.boundaries.push_back((std::uint64_t{1} << k) - 1);
  }
  return trace;
}

// -- Walk oracles -----------------------------------------------------------------

std::vector<PointId> LittlestoneWalkOracle::Rollout(
    std::span<const PointId> history, std::size_t horizon,
    std::uint64_t draw) const {
  const std::size_t depth = static_cast<std::size_t>(tree_.depth());
  std::vector<PointId> out;
  if (history.size() >= depth) return out;
  if (tree_.uniform()) {
    for (std::size_t t = history.size(); t < depth && out.size() < horizon;
         ++t) {
      out.push_back(tree_.PointAtLevel(static_cast<int>(t)));
    }
    return out;
  }
  // Recover the walk from the points; an ambiguous step takes edge 0.
  std::uint64_t node = 1;
  for (std::size_t t = 1; t < history.size(); ++t) {
    const std::uint64_t zero = LittlestoneTree::Child(node, Label::kZero);
    node = tree_.PointAt(zero) == history[t]
               ? zero
               : LittlestoneTree::Child(node, Label::kOne);
  }
  Rng rng(draw);
  for (std::size_t t = history.size(); t < depth && out.size() < horizon;
       ++t) {
    node = LittlestoneTree::Child(node, LabelFromBit(FairBit(rng)));
    out.push_back(tree_.PointAt(node));
  }
  return out;
}

std::vector<PointId> VclWalkOracle::Rollout(std::span<const PointId> history,
                                            std::size_t horizon,
                                            std::uint64_t) const {
  std::vector<PointId> out;
  std::size_t skip = history.size();
  for (const auto& n : tree_.nodes()) {
    for (PointId p : n.points) {
      if (skip > 0) {
        --skip;
        continue;
      }
      if (out.size() == horizon) return out;
      out.push_back(p);
    }
  }
  return out;
}

std::size_t VisitedParts(std::span<const PointId> points,
                         std::span<const int> parts) {
  std::unordered_set<int> seen;
  for (PointId x : points) {
    if (x.value >= parts.size()) {
      throw DomainError("point outside the partition table");
    }
    if (parts[x.value] >= 0) seen.insert(parts[x.value]);
  }
  return seen.size();
}

}  // namespace oul
