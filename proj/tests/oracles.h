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

// Brute-force reference implementations over explicit hypothesis tables.
// Deliberately naive: no masks, no memo tables, no closed forms.

#ifndef OUL_TESTS_ORACLES_H_
#define OUL_TESTS_ORACLES_H_

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "oul/concepts.h"

namespace oul::oracle {

using Table = std::vector<Hypothesis>;

inline bool Consistent(const Hypothesis& h, const LabeledPrefix& p) {
  for (const auto& [x, y] : p) {
    if (h[x.value] != y) return false;
  }
  return true;
}

inline Table Filter(const Table& t, const LabeledPrefix& p) {
  Table out;
  for (const auto& h : t) {
    if (Consistent(h, p)) out.push_back(h);
  }
  return out;
}

inline bool Shatters(const Table& t, const std::vector<std::uint32_t>& pts) {
  if (t.empty()) return false;
  for (std::uint64_t pat = 0; pat < (std::uint64_t{1} << pts.size()); ++pat) {
    bool found = false;
    for (const auto& h : t) {
      bool ok = true;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        Label want = LabelFromBit((pat >> i) & 1u);
        if (h[pts[i]] != want) {
          ok = false;
          break;
        }
      }
      if (ok) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

inline std::uint64_t Weight(const Table& t,
                            const std::vector<std::uint32_t>& window) {
  std::vector<std::uint32_t> pts = window;
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::uint64_t w = 0;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << pts.size()); ++s) {
    std::vector<std::uint32_t> sub;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if ((s >> i) & 1u) sub.push_back(pts[i]);
    }
    if (Shatters(t, sub)) ++w;
  }
  return w;
}

inline int Vc(const Table& t, std::size_t n) {
  if (t.empty()) return -1;
  int best = 0;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
    std::vector<std::uint32_t> sub;
    for (std::uint32_t i = 0; i < n; ++i) {
      if ((s >> i) & 1u) sub.push_back(i);
    }
    if (Shatters(t, sub)) best = std::max(best, static_cast<int>(sub.size()));
  }
  return best;
}

// Plain minimax over explicit version spaces.
inline int Ldim(const Table& t, std::size_t n) {
  if (t.empty()) return -1;
  int best = 0;
  for (std::uint32_t x = 0; x < n; ++x) {
    Table t0 = Filter(t, {{PointId{x}, Label::kZero}});
    Table t1 = Filter(t, {{PointId{x}, Label::kOne}});
    if (t0.empty() || t1.empty()) continue;
    best = std::max(best, 1 + std::min(Ldim(t0, n), Ldim(t1, n)));
  }
  return best;
}

// VCL tree search with explicit tuples: level `level` holds level+1 points.
inline bool VclExists(const Table& t, std::size_t n, int level, int remaining) {
  if (remaining == 0) return true;
  const std::size_t s = static_cast<std::size_t>(level) + 1;
  std::vector<std::uint32_t> tuple(s, 0);
  // Every s-tuple of points (with repeats; repeats never shatter).
  while (true) {
    bool all = true;
    for (std::uint64_t pat = 0; pat < (std::uint64_t{1} << s) && all; ++pat) {
      LabeledPrefix p;
      for (std::size_t i = 0; i < s; ++i) {
        p.push_back({PointId{tuple[i]}, LabelFromBit((pat >> i) & 1u)});
      }
      Table child = Filter(t, p);
      all = !child.empty() && VclExists(child, n, level + 1, remaining - 1);
    }
    if (all) return true;
    std::size_t i = 0;
    while (i < s && ++tuple[i] == n) tuple[i++] = 0;
    if (i == s) return false;
  }
}

inline int VclDepth(const Table& t, std::size_t n, int cap) {
  if (t.empty()) return -1;
  int d = 0;
  while (d < cap && VclExists(t, n, 0, d + 1)) ++d;
  return d;
}

// Random table of distinct total hypotheses.
inline Table RandomTable(std::mt19937_64& rng, std::size_t n,
                         std::size_t count) {
  std::set<std::vector<Label>> seen;
  Table t;
  const std::size_t limit = std::min<std::size_t>(count, std::size_t{1} << n);
  while (t.size() < limit) {
    std::vector<Label> v(n);
    for (auto& l : v) l = LabelFromBit(static_cast<int>(rng() & 1u));
    if (seen.insert(v).second) t.emplace_back(v);
  }
  return t;
}

// Random partial hypotheses: each entry undefined with probability 1/4.
inline Table RandomPartialTable(std::mt19937_64& rng, std::size_t n,
                                std::size_t count) {
  std::set<std::vector<Label>> seen;
  Table t;
  int guard = 0;
  while (t.size() < count && ++guard < 10000) {
    std::vector<Label> v(n);
    for (auto& l : v) {
      auto r = rng() % 4;
      l = r == 0 ? Label::kUndefined : LabelFromBit(static_cast<int>(r & 1u));
    }
    if (seen.insert(v).second) t.emplace_back(v);
  }
  return t;
}

}  // namespace oul::oracle

#endif  // OUL_TESTS_ORACLES_H_
