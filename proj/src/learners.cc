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

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "oul/errors.h"

namespace oul {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double LogSumExp(std::span<const double> v) {
  double hi = kNegInf;
  for (double x : v) hi = std::max(hi, x);
  if (hi == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : v) s += std::exp(x - hi);
  return hi + std::log(s);
}

// Log masses of the experts advising 0 and 1.
std::array<double, 2> SplitMass(std::span<const double> log_weights,
                                std::span<const Label> advice) {
  if (advice.size() != log_weights.size()) {
    throw DomainError("advice has " + std::to_string(advice.size()) +
                      " entries for " + std::to_string(log_weights.size()) +
                      " experts");
  }
  std::vector<double> groups[2];
  for (std::size_t i = 0; i < advice.size(); ++i) {
    groups[LabelBit(advice[i])].push_back(log_weights[i]);
  }
  return {LogSumExp(groups[0]), LogSumExp(groups[1])};
}

double MassOne(const std::array<double, 2>& lm) {
  if (lm[1] == kNegInf) return 0.0;
  if (lm[0] == kNegInf) return 1.0;
  return 1.0 / (1.0 + std::exp(lm[0] - lm[1]));
}

}  // namespace

// -- SOA ----------------------------------------------------------------------

Soa::Soa(ConceptClass c, bool strict)
    : base_(c), strict_(strict), cube_(c) {
  if (c.empty()) throw StateError("SOA needs a nonempty class");
  if (!c.is_cube()) {
    solver_ = std::make_shared<LittlestoneSolver>(c);
    mask_ = HypothesisMask(c.hypotheses().size(), true);
  }
}

Soa::Soa(std::shared_ptr<LittlestoneSolver> solver, bool strict)
    : base_(solver->base()), strict_(strict), solver_(std::move(solver)),
      cube_(base_) {
  if (base_.empty()) throw StateError("SOA needs a nonempty class");
  mask_ = HypothesisMask(base_.hypotheses().size(), true);
}

int Soa::RestrictedDimension(PointId x, Label y) const {
  if (solver_) {
    return solver_->Dimension(mask_ &
                              (y == Label::kOne ? base_.OneMask(x)
                                                : base_.ZeroMask(x)));
  }
  if (cube_.empty()) return -1;
  Label fixed = cube_.cube_fixed()[x.value];
  if (fixed == Label::kUndefined) {
    return static_cast<int>(cube_.free_count()) - 1;
  }
  return fixed == y ? static_cast<int>(cube_.free_count()) : -1;
}

Label Soa::Predict(PointId x) {
  base_.domain().Check(x);
  pending_ = x;
  if (empty_) return Label::kZero;
  const int d0 = RestrictedDimension(x, Label::kZero);
  const int d1 = RestrictedDimension(x, Label::kOne);
  return d1 > d0 ? Label::kOne : Label::kZero;
}

void Soa::Observe(Label y) {
  if (!pending_) throw StateError("Observe without Predict");
  const PointId x = *pending_;
  pending_.reset();
  if (empty_) return;
  bool now_empty;
  if (solver_) {
    HypothesisMask next =
        mask_ & (y == Label::kOne ? base_.OneMask(x) : base_.ZeroMask(x));
    now_empty = !next.Any();
    if (!now_empty) mask_ = std::move(next);
  } else {
    ConceptClass next = Restrict(cube_, {{x, y}});
    now_empty = next.empty();
    if (!now_empty) cube_ = std::move(next);
  }
  if (now_empty) {
    if (strict_) {
      throw RealizabilityError("label " + std::string(1, LabelChar(y)) +
                               " at point " + base_.domain().id(x) +
                               " contradicts every remaining hypothesis");
    }
    empty_ = true;
  }
}

std::size_t Soa::version_space_size() const {
  if (empty_) return 0;
  if (solver_) return mask_.Count();
  auto s = cube_.size();
  return s ? static_cast<std::size_t>(*s) : SIZE_MAX;
}

// -- Partial-class weight learner -----------------------------------------------

PartialWeightLearner::PartialWeightLearner(
    ConceptClass h, std::shared_ptr<const ProcessOracle> oracle,
    PartialWeightOptions options)
    : h_(h), oracle_(std::move(oracle)), options_(options), h_l_(h) {
  if (options_.rollouts < 1) throw ConfigError("rollouts must be at least 1");
  if (!oracle_) throw ConfigError("the weight learner needs a process oracle");
  if (h_.empty()) throw StateError("the weight learner needs a nonempty class");
}

void PartialWeightLearner::SetExternalHistory(
    const std::vector<PointId>* history) {
  external_ = history;
}

void PartialWeightLearner::Reset(ConceptClass h, std::uint64_t offset) {
  h_ = h;
  h_l_ = std::move(h);
  l_.clear();
  m_ = 1;
  t_prime_ = offset;
  batch_open_ = false;
}

void PartialWeightLearner::OpenBatch(std::uint64_t round) {
  batch_open_ = true;
  if (!options_.keep_ledger) return;
  BatchLedger entry;
  entry.batch = m_;
  entry.first_round = round;
  entry.last_round = window_end();
  ledger_.push_back(entry);
  unresolved_.push_back(0);
}

Label PartialWeightLearner::Predict(PointId x) {
  h_.domain().Check(x);
  if (!external_) own_history_.push_back(x);
  const std::uint64_t t = history().size();
  if (t == 0 || history().back() != x) {
    throw StateError("history does not end with the current point");
  }
  rounds_ = t;
  if (!batch_open_) OpenBatch(t);
  const std::uint64_t end = window_end();
  if (end < t) throw StateError("window ends before the current round");

  // y = 0 is judged by H_{L u (x,1)}, y = 1 by H_{L u (x,0)}.
  const ConceptClass flipped[2] = {Restrict(h_l_, {{x, Label::kOne}}),
                                   Restrict(h_l_, {{x, Label::kZero}})};
  const int draws = oracle_->deterministic() ? 1 : options_.rollouts;
  int hits[2] = {0, 0};
  std::vector<PointId> window;
  for (int d = 0; d < draws; ++d) {
    window.assign(1, x);
    auto cont = oracle_->Rollout(
        history(), end - t,
        SplitSeed(options_.seed, Stream::kRollout, draws_++));
    window.insert(window.end(), cont.begin(), cont.end());
    const std::uint64_t w = Weight(h_l_, window, options_.window_cap);
    for (int y = 0; y < 2; ++y) {
      if (2 * Weight(flipped[y], window, options_.window_cap) <= w) ++hits[y];
    }
  }
  probs_ = {static_cast<double>(hits[0]) / draws,
            static_cast<double>(hits[1]) / draws};
  pending_ = x;
  pending_prediction_ = hits[1] > hits[0] ? Label::kOne : Label::kZero;
  return pending_prediction_;
}

bool PartialWeightLearner::ResolveHalving(const PendingHalving& p,
                                          std::span<const PointId> window) {
  const std::uint64_t before = Weight(p.before, window, options_.window_cap);
  const std::uint64_t after =
      Weight(p.after, window.subspan(1), options_.window_cap);
  return 2 * after <= before;
}

void PartialWeightLearner::ResolvePending() {
  const auto& hist = history();
  std::erase_if(halvings_, [&](const PendingHalving& p) {
    BatchLedger& entry = ledger_[p.ledger_index];
    if (hist.size() < entry.last_round) return false;
    std::span<const PointId> window(hist.data() + p.round - 1,
                                    entry.last_round - p.round + 1);
    if (ResolveHalving(p, window)) ++entry.halving_mistakes;
    if (--unresolved_[p.ledger_index] == 0) entry.exact = true;
    return true;
  });
}

void PartialWeightLearner::Observe(Label y) {
  if (!pending_) throw StateError("Observe without Predict");
  const PointId x = *pending_;
  pending_.reset();
  const std::uint64_t t = rounds_;
  if (y != pending_prediction_) {
    ConceptClass before = h_l_;
    l_.push_back({x, y});
    h_l_ = Restrict(h_l_, {{x, y}});
    if (options_.keep_ledger) {
      const std::size_t idx = ledger_.size() - 1;
      BatchLedger& entry = ledger_[idx];
      ++entry.mistakes;
      PendingHalving p{t, idx, std::move(before), h_l_};
      if (oracle_->deterministic()) {
        std::vector<PointId> window{x};
        auto cont = oracle_->Rollout(history(), entry.last_round - t, 0);
        window.insert(window.end(), cont.begin(), cont.end());
        if (ResolveHalving(p, window)) ++entry.halving_mistakes;
      } else {
        ++unresolved_[idx];
        entry.exact = false;
        halvings_.push_back(std::move(p));
      }
    }
  }
  if (options_.keep_ledger) ResolvePending();
  if (t >= window_end()) {
    ++m_;
    batch_open_ = false;
  }
}

// -- Game learner ---------------------------------------------------------------

namespace {

ConceptClass InitialInduced(const ConceptClass& c) {
  if (c.empty()) throw StateError("the game learner needs a nonempty class");
  return InducedPartialClass(GameRecord{}, c);
}

}  // namespace

GameLearner::GameLearner(ConceptClass c,
                         std::shared_ptr<const ProcessOracle> oracle,
                         GameLearnerOptions options)
    : c_(c),
      options_(options),
      h_u_(c),
      inner_(InitialInduced(c), std::move(oracle), options.inner) {
  inner_.SetExternalHistory(&history_);
}

Label GameLearner::Predict(PointId x) {
  c_.domain().Check(x);
  if (history_.size() >= options_.history_cap) {
    throw SizeError("game learner history",
                    static_cast<long long>(options_.history_cap));
  }
  history_.push_back(x);
  if (!game_over_ && dirty_) {
    dirty_ = false;
    if (auto hit = SearchGuard()) Advance(*hit);
  }
  return inner_.Predict(x);
}

void GameLearner::Observe(Label y) {
  const PointId x = history_.back();
  inner_.Observe(y);
  auto it = std::find_if(pairs_.begin(), pairs_.end(), [&](const PairStat& p) {
    return p.point == x && p.label == y;
  });
  if (it == pairs_.end()) {
    pairs_.push_back({x, y, 1});
    dirty_ = true;
  } else if (it->multiplicity < u_.current_k() + 1) {
    // Repeats beyond k never create a new k-tuple of distinct rounds.
    ++it->multiplicity;
    dirty_ = true;
  }
}

std::optional<std::vector<std::size_t>> GameLearner::SearchGuard() {
  const int k = u_.current_k();
  const std::size_t n = pairs_.size();
  double work = 1;
  for (int i = 0; i < k; ++i) work *= static_cast<double>(n);
  if (work > 5e6) throw SizeError("guard search tuples", 5000000);

  std::vector<std::size_t> tuple(k);
  std::vector<int> used(n, 0);
  std::vector<PointId> points(k);
  std::function<bool(int)> rec = [&](int depth) -> bool {
    if (depth == k) {
      auto it = strategy_cache_.find(points);
      if (it == strategy_cache_.end()) {
        it = strategy_cache_
                 .emplace(points,
                          GreedyPattern(*h_u_, c_.preset(), k, points))
                 .first;
      }
      for (int i = 0; i < k; ++i) {
        if (it->second.labels[i] != pairs_[tuple[i]].label) return false;
      }
      return true;
    }
    for (std::size_t p = 0; p < n; ++p) {
      if (used[p] >= pairs_[p].multiplicity) continue;
      ++used[p];
      tuple[depth] = p;
      points[depth] = pairs_[p].point;
      if (rec(depth + 1)) return true;
      --used[p];
    }
    return false;
  };
  if (rec(0)) return tuple;
  return std::nullopt;
}

void GameLearner::Advance(const std::vector<std::size_t>& pair_tuple) {
  std::vector<PointId> points;
  Pattern pattern;
  for (std::size_t p : pair_tuple) {
    points.push_back(pairs_[p].point);
    pattern.labels.push_back(pairs_[p].label);
  }
  LabeledPrefix round = PatternPrefix(points, pattern);
  u_.Record(std::move(points), std::move(pattern));
  strategy_cache_.clear();
  dirty_ = true;
  const std::uint64_t t = history_.size();
  h_u_ = Restrict(*h_u_, round);
  if (h_u_->empty()) {
    if (options_.strict) {
      throw RealizabilityError(
          "labels recorded by the game contradict every hypothesis");
    }
    game_over_ = true;
    inner_.Reset(inner_.hypothesis_class(), t - 1);
    return;
  }
  const int k = u_.current_k();
  Strategy g = [&](const GameRecord&, std::span<const PointId> tuple) {
    std::vector<PointId> key(tuple.begin(), tuple.end());
    auto it = strategy_cache_.find(key);
    if (it == strategy_cache_.end()) {
      it = strategy_cache_
               .emplace(key, GreedyPattern(*h_u_, c_.preset(), k, tuple))
               .first;
    }
    return it->second;
  };
  inner_.Reset(InducedPartialClass(u_, c_, g), t - 1);
}

// -- Expert indexing -------------------------------------------------------------

namespace {

BigIndex Binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigIndex r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

// Sets with key below K.
BigIndex CountKeyLess(std::uint64_t key) {
  if (key == 0) return 0;
  BigIndex total = 1;  // the empty set
  for (std::uint64_t s = 1; s * s <= key - 1; ++s) {
    // Hockey stick: sum over max M <= (K-1)/s of C(M-1, s-1).
    total += Binomial((key - 1) / s, s);
  }
  return total;
}

// Sets with key exactly K and size below `size_limit`.
BigIndex CountKeyEqual(std::uint64_t key, std::uint64_t size_limit) {
  BigIndex total = 0;
  for (std::uint64_t s = 1; s < size_limit && s * s <= key; ++s) {
    if (key % s == 0) total += Binomial(key / s - 1, s - 1);
  }
  return total;
}

void CheckSet(std::span<const std::uint64_t> set) {
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (set[i] == 0) throw DomainError("expert sets hold positive rounds");
    if (i > 0 && set[i] <= set[i - 1]) {
      throw DomainError("expert sets must be strictly increasing");
    }
  }
}

}  // namespace

std::uint64_t SetKey(std::span<const std::uint64_t> set) {
  CheckSet(set);
  return set.empty() ? 0 : set.size() * set.back();
}

BigIndex IndexOfSet(std::span<const std::uint64_t> set) {
  const std::uint64_t key = SetKey(set);
  if (set.empty()) return 1;
  const std::uint64_t s = set.size();
  BigIndex index = 1 + CountKeyLess(key) + CountKeyEqual(key, s);
  // Lexicographic rank of the first s-1 elements among subsets of [1, M-1].
  const std::uint64_t n = set.back() - 1;
  const std::uint64_t r = s - 1;
  std::uint64_t prev = 0;
  for (std::uint64_t i = 1; i <= r; ++i) {
    const std::uint64_t c = set[i - 1];
    if (c > prev + 1) {
      // sum_{v = prev+1}^{c-1} C(n - v, r - i)
      index += Binomial(n - prev, r - i + 1) - Binomial(n - c + 1, r - i + 1);
    }
    prev = c;
  }
  return index;
}

std::uint64_t IndexOfSetU64(std::span<const std::uint64_t> set) {
  BigIndex i = IndexOfSet(set);
  if (i > std::numeric_limits<std::uint64_t>::max()) {
    throw SizeError("expert index exceeds 64 bits", 64);
  }
  return i.convert_to<std::uint64_t>();
}

std::vector<std::uint64_t> SetOfIndex(const BigIndex& index) {
  if (index < 1) throw DomainError("expert indices start at 1");
  if (index == 1) return {};
  // Sets with key K hold indices (CountKeyLess(K), CountKeyLess(K + 1)].
  std::uint64_t hi = 1;
  while (CountKeyLess(hi + 1) < index) hi *= 2;
  std::uint64_t lo = 1;
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (CountKeyLess(mid + 1) < index) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  const std::uint64_t key = lo;
  BigIndex rem = index - CountKeyLess(key);  // 1-based rank within the key
  for (std::uint64_t s = 1; s * s <= key; ++s) {
    if (key % s) continue;
    const std::uint64_t max = key / s;
    BigIndex count = Binomial(max - 1, s - 1);
    if (rem > count) {
      rem -= count;
      continue;
    }
    // Unrank rem - 1 among (s-1)-subsets of [1, max-1]. The sets whose next
    // element lies in [v, c) number C(n-v+1, r-i+1) - C(n-c+1, r-i+1).
    BigIndex q = rem - 1;
    const std::uint64_t n = max - 1;
    const std::uint64_t r = s - 1;
    std::vector<std::uint64_t> out;
    std::uint64_t v = 1;
    for (std::uint64_t i = 1; i <= r; ++i) {
      const BigIndex head = Binomial(n - v + 1, r - i + 1);
      std::uint64_t a = v, b = n - (r - i);
      while (a < b) {
        const std::uint64_t c = a + (b - a + 1) / 2;
        if (head - Binomial(n - c + 1, r - i + 1) <= q) {
          a = c;
        } else {
          b = c - 1;
        }
      }
      q -= head - Binomial(n - a + 1, r - i + 1);
      out.push_back(a);
      v = a + 1;
    }
    out.push_back(max);
    return out;
  }
  throw StateError("expert index out of range");
}

double LogIndex(const BigIndex& index) {
  if (index < 1) throw DomainError("log of a non-positive index");
  const std::size_t bits = boost::multiprecision::msb(index);
  if (bits < 60) return std::log(index.convert_to<double>());
  const std::size_t shift = bits - 60;
  const double top = BigIndex(index >> shift).convert_to<double>();
  return std::log(top) + static_cast<double>(shift) * std::log(2.0);
}

std::string FormatExpertSets(
    const std::vector<std::vector<std::uint64_t>>& sets) {
  std::ostringstream out;
  for (const auto& set : sets) {
    for (std::size_t i = 0; i < set.size(); ++i) {
      out << (i ? " " : "") << set[i];
    }
    out << '\n';
  }
  return out.str();
}

std::vector<std::vector<std::uint64_t>> ParseExpertSets(std::string_view text) {
  std::vector<std::vector<std::uint64_t>> sets;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string line(text.substr(pos, nl - pos));
    pos = nl + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line[0] == '#') continue;
    std::istringstream in(line);
    std::vector<std::uint64_t> set;
    std::string tok;
    while (in >> tok) {
      std::size_t used = 0;
      unsigned long long v = 0;
      try {
        v = std::stoull(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size() || tok[0] == '-') {
        throw ConfigError("bad round index '" + tok + "' in expert set");
      }
      set.push_back(v);
    }
    std::sort(set.begin(), set.end());
    CheckSet(set);
    sets.push_back(std::move(set));
  }
  return sets;
}

// -- Expert runner ---------------------------------------------------------------

ExpertRunner::ExpertRunner(std::unique_ptr<OnlineLearner> base,
                           std::vector<std::uint64_t> flips)
    : base_(std::move(base)), flips_(std::move(flips)) {
  std::sort(flips_.begin(), flips_.end());
  CheckSet(flips_);
}

Label ExpertRunner::Predict(PointId x) {
  ++t_;
  Label y = base_->Predict(x);
  if (next_flip_ < flips_.size() && flips_[next_flip_] == t_) {
    y = Flip(y);
    ++next_flip_;
  }
  last_ = y;
  return y;
}

void ExpertRunner::Observe(Label) { base_->Observe(last_); }

std::vector<std::unique_ptr<OnlineLearner>> BuildExpertPool(
    const LearnerFactory& base, std::size_t pool_size) {
  std::vector<std::unique_ptr<OnlineLearner>> pool;
  pool.reserve(pool_size);
  for (std::size_t i = 1; i <= pool_size; ++i) {
    pool.push_back(std::make_unique<ExpertRunner>(
        base(), SetOfIndex(BigIndex(i))));
  }
  return pool;
}

// -- Weighted majority -----------------------------------------------------------

WeightedMajority::WeightedMajority(
    std::vector<std::unique_ptr<OnlineLearner>> experts)
    : experts_(std::move(experts)) {
  if (experts_.empty()) throw StateError("weighted majority needs experts");
  log_weights_.resize(experts_.size());
  expert_mistakes_.assign(experts_.size(), 0);
  for (std::size_t i = 0; i < experts_.size(); ++i) {
    const double n = static_cast<double>(i + 1);
    log_weights_[i] = -std::log(n) - std::log(n + 1);
  }
}

double WeightedMajority::MassOnOne(std::span<const Label> advice) const {
  return MassOne(SplitMass(log_weights_, advice));
}

Label WeightedMajority::PredictFromAdvice(std::span<const Label> advice) const {
  // Mass on 1 is at least half exactly when it is at least the mass on 0.
  auto lm = SplitMass(log_weights_, advice);
  return lm[1] >= lm[0] ? Label::kOne : Label::kZero;
}

Label WeightedMajority::Predict(PointId x) {
  advice_.clear();
  for (auto& e : experts_) advice_.push_back(e->Predict(x));
  last_prediction_ = PredictFromAdvice(advice_);
  return last_prediction_;
}

void WeightedMajority::Update(std::span<const Label> advice, Label y) {
  if (PredictFromAdvice(advice) != y) ++mistakes_;
  const double half = std::log(0.5);
  for (std::size_t i = 0; i < advice.size(); ++i) {
    if (advice[i] != y) {
      log_weights_[i] += half;
      ++expert_mistakes_[i];
    }
  }
}

void WeightedMajority::Observe(Label y) {
  if (advice_.size() != experts_.size()) {
    throw StateError("Observe without Predict");
  }
  Update(advice_, y);
  for (auto& e : experts_) e->Observe(y);
  advice_.clear();
}

bool WeightedMajority::BoundHolds() const {
  for (std::size_t i = 0; i < expert_mistakes_.size(); ++i) {
    const double n = static_cast<double>(i + 1);
    const double rhs = 3.0 * static_cast<double>(expert_mistakes_[i]) +
                       3.0 * std::log2(n * (n + 1));
    if (static_cast<double>(mistakes_) > rhs) return false;
  }
  return true;
}

double WeightedMajority::BestBound() const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < expert_mistakes_.size(); ++i) {
    const double n = static_cast<double>(i + 1);
    best = std::min(best, 3.0 * static_cast<double>(expert_mistakes_[i]) +
                              3.0 * std::log2(n * (n + 1)));
  }
  return best;
}

// -- Squint ----------------------------------------------------------------------

Squint::Squint(std::size_t num_experts, SquintOptions options)
    : options_(options),
      rng_(MakeRng(options.seed, Stream::kLearner)),
      log_prior_(num_experts),
      regret_(num_experts, 0.0),
      variation_(num_experts, 0.0),
      expert_mistakes_(num_experts, 0) {
  if (num_experts == 0) throw StateError("Squint needs experts");
  for (std::size_t i = 0; i < num_experts; ++i) {
    const double n = static_cast<double>(i + 1);
    log_prior_[i] = -std::log(n) - std::log(n + 1);
  }
}

Squint::Squint(std::vector<std::unique_ptr<OnlineLearner>> experts,
               SquintOptions options)
    : Squint(experts.size(), options) {
  experts_ = std::move(experts);
}

std::vector<double> Squint::LogWeights() const {
  std::vector<double> out(regret_.size());
  std::array<double, kSquintGridSize> terms;
  const double log_grid = -std::log(static_cast<double>(kSquintGridSize));
  for (std::size_t i = 0; i < regret_.size(); ++i) {
    double eta = 1.0;
    for (int j = 0; j < kSquintGridSize; ++j) {
      eta *= 0.5;
      terms[j] = eta * regret_[i] - eta * eta * variation_[i];
    }
    out[i] = log_prior_[i] + log_grid + LogSumExp(terms);
    if (!std::isfinite(out[i])) {
      throw NumericError("Squint weight of expert " + std::to_string(i + 1) +
                         " is not finite");
    }
  }
  return out;
}

double Squint::MassOnOne(std::span<const Label> advice) const {
  return MassOne(SplitMass(LogWeights(), advice));
}

Label Squint::PredictFromAdvice(std::span<const Label> advice) {
  const auto lm = SplitMass(LogWeights(), advice);
  if (options_.randomized) {
    last_prediction_ = LabelFromBit(Uniform01(rng_) < MassOne(lm));
  } else {
    last_prediction_ = lm[1] >= lm[0] ? Label::kOne : Label::kZero;
  }
  return last_prediction_;
}

Label Squint::Predict(PointId x) {
  advice_.clear();
  for (auto& e : experts_) advice_.push_back(e->Predict(x));
  return PredictFromAdvice(advice_);
}

void Squint::Update(std::span<const Label> advice, Label y) {
  if (advice.size() != regret_.size()) {
    throw DomainError("advice size does not match the expert count");
  }
  const int loss = last_prediction_ != y;
  mistakes_ += loss;
  for (std::size_t i = 0; i < advice.size(); ++i) {
    const int expert_loss = advice[i] != y;
    expert_mistakes_[i] += expert_loss;
    const double r = loss - expert_loss;
    regret_[i] += r;
    variation_[i] += r * r;
  }
}

void Squint::Observe(Label y) {
  if (advice_.size() != experts_.size() || experts_.empty()) {
    throw StateError("Observe without Predict");
  }
  Update(advice_, y);
  for (auto& e : experts_) e->Observe(y);
  advice_.clear();
}

}  // namespace oul
