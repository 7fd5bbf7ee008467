#include "scrip/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace scrip {

bool decide_volunteer(const ThresholdStrategy& strategy, int balance, int requesterBalance,
                      double randomDraw) {
  if (requesterBalance <= 0) return false;
  int k = strategy.k();
  if (balance < k) return true;
  if (balance == k) return randomDraw < strategy.gamma_prime();
  return false;
}

RoundOutcome simulate_round(SystemState& state, std::span<const AgentKind> kinds,
                            const GameParams& params, RngStreams& streams) {
  const int n = params.n;
  RoundOutcome out;
  out.requester = static_cast<int>(streams.requester.next_below(static_cast<std::uint64_t>(n)));
  const int p = out.requester;
  const int requesterBalance = state.balances[static_cast<std::size_t>(p)];

  out.ableSet.reserve(static_cast<std::size_t>(n) - 1);
  for (int i = 0; i < n; ++i) {
    if (i == p) continue;
    if (params.beta >= 1.0 || streams.ability.next_double() < params.beta)
      out.ableSet.push_back(i);
  }

  for (int i : out.ableSet) {
    const AgentKind& kind = kinds[static_cast<std::size_t>(i)];
    if (std::holds_alternative<Altruist>(kind)) {
      out.volunteerSet.push_back(i);
      continue;
    }
    const ThresholdStrategy& s = std::get<Standard>(kind).strategy;
    if (requesterBalance <= 0) continue;
    const int b = state.balances[static_cast<std::size_t>(i)];
    double draw = 0.0;
    if (b == s.k() && s.gamma_prime() > 0.0) draw = streams.volunteer.next_double();
    if (decide_volunteer(s, b, requesterBalance, draw)) out.volunteerSet.push_back(i);
  }

  if (!out.volunteerSet.empty()) {
    std::size_t idx = 0;
    if (out.volunteerSet.size() > 1)
      idx = streams.server.next_below(out.volunteerSet.size());
    out.server = out.volunteerSet[idx];
    out.satisfied = true;
  }

  if (out.satisfied) {
    const double disc = std::pow(effective_discount(params.delta, n),
                                 static_cast<double>(state.round));
    state.utilities[static_cast<std::size_t>(p)] += disc;
    const AgentKind& serverKind = kinds[static_cast<std::size_t>(out.server)];
    if (std::holds_alternative<Altruist>(serverKind))
      state.utilities[static_cast<std::size_t>(out.server)] +=
          std::get<Altruist>(serverKind).alphaPrime * disc;
    else
      state.utilities[static_cast<std::size_t>(out.server)] -= params.alpha * disc;
    if (requesterBalance > 0) {
      state.balances[static_cast<std::size_t>(p)] -= 1;
      state.balances[static_cast<std::size_t>(out.server)] += 1;
      out.transferred = true;
    }
  }
  state.round += 1;
  return out;
}

// ---------------------------------------------------------------------------
// FastEngine
// ---------------------------------------------------------------------------

FastEngine::FastEngine(const GameParams& params, std::span<const AgentKind> kinds,
                       std::vector<int> initialBalances, std::uint64_t seed)
    : params_(params),
      roundDiscount_(effective_discount(params.delta, params.n)),
      balances_(std::move(initialBalances)),
      streams_(RngStreams::from_seed(seed)) {
  params_.validate();
  const int n = params_.n;
  if (kinds.size() != static_cast<std::size_t>(n) ||
      balances_.size() != static_cast<std::size_t>(n))
    throw DomainError("FastEngine: kinds/balances size must equal n");
  log1mBeta_ = params_.beta < 1.0 ? std::log1p(-params_.beta) : 0.0;

  utilities_.assign(static_cast<std::size_t>(n), 0.0);
  groupOf_.assign(static_cast<std::size_t>(n), -1);
  posInLevel_.assign(static_cast<std::size_t>(n), -1);
  altruistGain_.assign(static_cast<std::size_t>(n), 0.0);
  altruistPos_.assign(static_cast<std::size_t>(n), -1);

  int maxBal = 0;
  std::int64_t total = 0;
  for (int b : balances_) {
    if (b < 0) throw DomainError("FastEngine: negative initial balance");
    maxBal = std::max(maxBal, b);
    total += b;
  }
  if (total != params_.money)
    throw DomainError("FastEngine: initial balances sum to " + std::to_string(total) +
                      ", expected money = " + std::to_string(params_.money));
  histogram_.assign(static_cast<std::size_t>(maxBal) + 2, 0);
  for (int b : balances_) histogram_[static_cast<std::size_t>(b)] += 1;

  std::map<std::pair<int, double>, int> groupIndex;  // (k, gamma') -> group
  for (int i = 0; i < n; ++i) {
    const AgentKind& kind = kinds[static_cast<std::size_t>(i)];
    if (std::holds_alternative<Altruist>(kind)) {
      altruistGain_[static_cast<std::size_t>(i)] = std::get<Altruist>(kind).alphaPrime;
      altruistPos_[static_cast<std::size_t>(i)] = static_cast<int>(altruistMembers_.size());
      altruistMembers_.push_back(i);
      continue;
    }
    const ThresholdStrategy& s = std::get<Standard>(kind).strategy;
    auto key = std::make_pair(s.k(), s.gamma_prime());
    auto [it, inserted] = groupIndex.try_emplace(key, static_cast<int>(groups_.size()));
    if (inserted) {
      StandardGroup g;
      g.k = s.k();
      g.gammaPrime = s.gamma_prime();
      groups_.push_back(std::move(g));
    }
    int gi = it->second;
    StandardGroup& g = groups_[static_cast<std::size_t>(gi)];
    int b = balances_[static_cast<std::size_t>(i)];
    if (static_cast<int>(g.levels.size()) <= b) g.levels.resize(static_cast<std::size_t>(b) + 1);
    groupOf_[static_cast<std::size_t>(i)] = gi;
    posInLevel_[static_cast<std::size_t>(i)] =
        static_cast<int>(g.levels[static_cast<std::size_t>(b)].size());
    g.levels[static_cast<std::size_t>(b)].push_back(i);
    if (b < g.k) g.belowCount += 1;
  }
}

void FastEngine::move_agent(int agent, int delta) {
  int b0 = balances_[static_cast<std::size_t>(agent)];
  int b1 = b0 + delta;
  histogram_[static_cast<std::size_t>(b0)] -= 1;
  if (static_cast<std::size_t>(b1) + 1 >= histogram_.size())
    histogram_.resize(static_cast<std::size_t>(b1) + 2, 0);
  histogram_[static_cast<std::size_t>(b1)] += 1;
  balances_[static_cast<std::size_t>(agent)] = b1;

  int gi = groupOf_[static_cast<std::size_t>(agent)];
  if (gi < 0) return;  // altruists keep a flat member list
  StandardGroup& g = groups_[static_cast<std::size_t>(gi)];
  auto& from = g.levels[static_cast<std::size_t>(b0)];
  int pos = posInLevel_[static_cast<std::size_t>(agent)];
  int moved = from.back();
  from[static_cast<std::size_t>(pos)] = moved;
  posInLevel_[static_cast<std::size_t>(moved)] = pos;
  from.pop_back();
  if (static_cast<int>(g.levels.size()) <= b1) g.levels.resize(static_cast<std::size_t>(b1) + 1);
  auto& to = g.levels[static_cast<std::size_t>(b1)];
  posInLevel_[static_cast<std::size_t>(agent)] = static_cast<int>(to.size());
  to.push_back(agent);
  if (b0 < g.k) g.belowCount -= 1;
  if (b1 < g.k) g.belowCount += 1;
}

int FastEngine::pick_standard(const StandardGroup& g, std::uint64_t r, int skip) const {
  const int skipBal =
      (skip >= 0 && groupOf_[static_cast<std::size_t>(skip)] >= 0 &&
       &groups_[static_cast<std::size_t>(groupOf_[static_cast<std::size_t>(skip)])] == &g)
          ? balances_[static_cast<std::size_t>(skip)]
          : -1;
  const int top = std::min<int>(g.k, static_cast<int>(g.levels.size()));
  for (int level = 0; level < top; ++level) {
    const auto& members = g.levels[static_cast<std::size_t>(level)];
    std::uint64_t c = members.size();
    if (skipBal == level) c -= 1;
    if (r < c) {
      std::uint64_t idx = r;
      if (skipBal == level &&
          idx >= static_cast<std::uint64_t>(posInLevel_[static_cast<std::size_t>(skip)]))
        idx += 1;
      return members[static_cast<std::size_t>(idx)];
    }
    r -= c;
  }
  throw InvariantError("FastEngine: willing-set walk ran past the last bucket");
}

void FastEngine::step() {
  const int n = params_.n;
  const int p = static_cast<int>(streams_.requester.next_below(static_cast<std::uint64_t>(n)));
  const bool solvent = balances_[static_cast<std::size_t>(p)] > 0;
  const int pGroup = groupOf_[static_cast<std::size_t>(p)];

  // Willing counts: altruists always, standard agents only for a solvent
  // requester. The walk order below must mirror this accumulation order.
  std::uint64_t altruistWilling = altruistMembers_.size();
  if (pGroup < 0 && !altruistMembers_.empty()) altruistWilling -= 1;
  std::uint64_t willing = altruistWilling;

  if (solvent) {
    for (StandardGroup& g : groups_) {
      std::int64_t below = g.belowCount;
      if (pGroup >= 0 && &groups_[static_cast<std::size_t>(pGroup)] == &g &&
          balances_[static_cast<std::size_t>(p)] < g.k)
        below -= 1;
      willing += static_cast<std::uint64_t>(below);
      g.scratch.clear();
      if (g.gammaPrime > 0.0 && g.k < static_cast<int>(g.levels.size())) {
        for (int a : g.levels[static_cast<std::size_t>(g.k)]) {
          if (a == p) continue;
          if (streams_.volunteer.next_double() < g.gammaPrime) g.scratch.push_back(a);
        }
        willing += g.scratch.size();
      }
    }
  }

  last_ = LastEvent{p, -1, false, false};
  if (willing > 0) {
    bool sat = true;
    if (params_.beta < 1.0) {
      double pSat = -std::expm1(static_cast<double>(willing) * log1mBeta_);
      sat = streams_.ability.next_double() < pSat;
    }
    if (sat) {
      std::uint64_t r = streams_.server.next_below(willing);
      int v = -1;
      if (r < altruistWilling) {
        std::uint64_t idx = r;
        if (pGroup < 0 &&
            idx >= static_cast<std::uint64_t>(altruistPos_[static_cast<std::size_t>(p)]))
          idx += 1;
        v = altruistMembers_[static_cast<std::size_t>(idx)];
      } else {
        r -= altruistWilling;
        for (StandardGroup& g : groups_) {
          std::int64_t below = g.belowCount;
          if (pGroup >= 0 && &groups_[static_cast<std::size_t>(pGroup)] == &g &&
              balances_[static_cast<std::size_t>(p)] < g.k)
            below -= 1;
          if (r < static_cast<std::uint64_t>(below)) {
            v = pick_standard(g, r, p);
            break;
          }
          r -= static_cast<std::uint64_t>(below);
          if (r < g.scratch.size()) {
            v = g.scratch[static_cast<std::size_t>(r)];
            break;
          }
          r -= g.scratch.size();
        }
      }
      if (v < 0) throw InvariantError("FastEngine: no server found for nonzero willing count");

      utilities_[static_cast<std::size_t>(p)] += discPow_;
      if (groupOf_[static_cast<std::size_t>(v)] < 0)
        utilities_[static_cast<std::size_t>(v)] +=
            altruistGain_[static_cast<std::size_t>(v)] * discPow_;
      else
        utilities_[static_cast<std::size_t>(v)] -= params_.alpha * discPow_;

      bool transferred = false;
      if (solvent) {
        move_agent(p, -1);
        move_agent(v, +1);
        transfers_ += 1;
        transferred = true;
      }
      satisfied_ += 1;
      last_ = LastEvent{p, v, true, transferred};
    }
  }

  round_ += 1;
  discPow_ *= roundDiscount_;
  if ((round_ & 0xfff) == 0)
    discPow_ = std::pow(roundDiscount_, static_cast<double>(round_));
}

SystemState FastEngine::snapshot_state() const {
  return SystemState{round_, balances_, utilities_};
}

// ---------------------------------------------------------------------------
// Batch driver
// ---------------------------------------------------------------------------

namespace {

int derived_support(const std::vector<AgentKind>& kinds, const std::vector<int>& balances) {
  int support = 1;
  for (const AgentKind& kind : kinds)
    if (std::holds_alternative<Standard>(kind))
      support = std::max(
          support, static_cast<int>(std::ceil(std::get<Standard>(kind).strategy.gamma())));
  for (int b : balances) support = std::max(support, b);
  return support;
}

}  // namespace

Trajectory run_simulation(const GameParams& params, const std::vector<AgentKind>& kinds,
                          std::int64_t rounds, std::uint64_t seed, RunOptions options) {
  params.validate();
  if (rounds < 0) throw DomainError("run_simulation: rounds must be >= 0");
  if (rounds * params.n > options.budget)
    throw BudgetError("run_simulation: rounds*n = " + std::to_string(rounds * params.n) +
                      " exceeds budget " + std::to_string(options.budget));
  std::vector<int> start = options.initialBalances.empty()
                               ? even_balances(params.n, params.money)
                               : options.initialBalances;
  const std::int64_t stride =
      options.stride > 0 ? options.stride : std::max<std::int64_t>(1, params.n / 10);
  const int support =
      options.support >= 1 ? options.support : derived_support(kinds, start);

  Trajectory out;
  auto snapshot_from = [&](std::span<const std::int64_t> hist, int n, std::int64_t round) {
    int maxBal = support;
    for (std::size_t b = hist.size(); b-- > 0;)
      if (hist[b] > 0) {
        maxBal = std::max(maxBal, static_cast<int>(b));
        break;
      }
    out.snapshots.push_back({round, empirical_distribution(hist, n, maxBal)});
  };

  if (options.engine == Engine::Fast) {
    FastEngine engine(params, kinds, std::move(start), seed);
    snapshot_from(engine.histogram(), params.n, 0);
    for (std::int64_t t = 1; t <= rounds; ++t) {
      engine.step();
      if (t % stride == 0 || t == rounds) snapshot_from(engine.histogram(), params.n, t);
    }
    out.finalState = engine.snapshot_state();
  } else {
    SystemState state{0, std::move(start), std::vector<double>(kinds.size(), 0.0)};
    RngStreams streams = RngStreams::from_seed(seed);
    std::vector<std::int64_t> hist;
    auto rebuild = [&] {
      int maxBal = 0;
      for (int b : state.balances) maxBal = std::max(maxBal, b);
      hist.assign(static_cast<std::size_t>(maxBal) + 1, 0);
      for (int b : state.balances) hist[static_cast<std::size_t>(b)] += 1;
    };
    rebuild();
    snapshot_from(hist, params.n, 0);
    for (std::int64_t t = 1; t <= rounds; ++t) {
      simulate_round(state, kinds, params, streams);
      if (t % stride == 0 || t == rounds) {
        rebuild();
        snapshot_from(hist, params.n, t);
      }
    }
    out.finalState = std::move(state);
  }
  return out;
}

MoneyDistribution empirical_distribution(std::span<const std::int64_t> histogram, int n,
                                         int support) {
  std::vector<double> probs(static_cast<std::size_t>(support) + 1, 0.0);
  std::int64_t seen = 0;
  for (std::size_t b = 0; b < histogram.size(); ++b) {
    if (histogram[b] == 0) continue;
    if (static_cast<int>(b) > support)
      throw DomainError("empirical_distribution: balance " + std::to_string(b) +
                        " exceeds support " + std::to_string(support));
    probs[b] = static_cast<double>(histogram[b]) / n;
    seen += histogram[b];
  }
  if (seen != n) throw DomainError("empirical_distribution: histogram does not cover n agents");
  return MoneyDistribution(std::move(probs));
}

MoneyDistribution empirical_distribution(const SystemState& state, int support) {
  std::vector<std::int64_t> hist(static_cast<std::size_t>(support) + 1, 0);
  for (int b : state.balances) {
    if (b > support)
      throw DomainError("empirical_distribution: balance " + std::to_string(b) +
                        " exceeds support " + std::to_string(support));
    hist[static_cast<std::size_t>(b)] += 1;
  }
  return empirical_distribution(hist, static_cast<int>(state.balances.size()), support);
}

std::vector<int> even_balances(int n, std::int64_t money) {
  std::vector<int> out(static_cast<std::size_t>(n), static_cast<int>(money / n));
  std::int64_t rest = money % n;
  for (std::int64_t i = 0; i < rest; ++i) out[static_cast<std::size_t>(i)] += 1;
  return out;
}

std::vector<int> extreme_balances(int n, int top, std::int64_t money) {
  if (top < 1 || money > static_cast<std::int64_t>(n) * top)
    throw DomainError("extreme_balances: money does not fit below the top balance");
  std::vector<int> out(static_cast<std::size_t>(n), 0);
  std::int64_t full = money / top;
  for (std::int64_t i = 0; i < full; ++i)
    out[static_cast<std::size_t>(n - 1 - i)] = top;
  int rest = static_cast<int>(money % top);
  if (rest > 0) out[static_cast<std::size_t>(n - 1 - full)] = rest;
  return out;
}

std::vector<int> near_maxent_balances(int n, int support, std::int64_t money) {
  MoneyDistribution target = max_entropy_distribution(support, static_cast<double>(money) / n);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(support) + 1, 0);
  std::int64_t assigned = 0;
  for (int j = 0; j <= support; ++j) {
    counts[static_cast<std::size_t>(j)] = std::llround(target(j) * n);
    assigned += counts[static_cast<std::size_t>(j)];
  }
  // Fix the agent count, preferring the most populated level.
  while (assigned != n) {
    int j = static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
    counts[static_cast<std::size_t>(j)] += (assigned < n) ? 1 : -1;
    assigned += (assigned < n) ? 1 : -1;
  }
  auto total = [&] {
    std::int64_t s = 0;
    for (int j = 0; j <= support; ++j) s += j * counts[static_cast<std::size_t>(j)];
    return s;
  };
  // Fix the money by shifting single agents between adjacent levels.
  while (total() < money) {
    int best = -1;
    for (int j = 0; j < support; ++j)
      if (counts[static_cast<std::size_t>(j)] > 0 &&
          (best < 0 || counts[static_cast<std::size_t>(j)] > counts[static_cast<std::size_t>(best)]))
        best = j;
    if (best < 0) throw InvariantError("near_maxent_balances: cannot raise the total");
    counts[static_cast<std::size_t>(best)] -= 1;
    counts[static_cast<std::size_t>(best) + 1] += 1;
  }
  while (total() > money) {
    int best = -1;
    for (int j = 1; j <= support; ++j)
      if (counts[static_cast<std::size_t>(j)] > 0 &&
          (best < 0 || counts[static_cast<std::size_t>(j)] > counts[static_cast<std::size_t>(best)]))
        best = j;
    if (best < 0) throw InvariantError("near_maxent_balances: cannot lower the total");
    counts[static_cast<std::size_t>(best)] -= 1;
    counts[static_cast<std::size_t>(best) - 1] += 1;
  }
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j <= support; ++j)
    out.insert(out.end(), static_cast<std::size_t>(counts[static_cast<std::size_t>(j)]), j);
  return out;
}

}  // namespace scrip
