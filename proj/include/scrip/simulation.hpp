#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "scrip/distribution.hpp"
#include "scrip/params.hpp"
#include "scrip/rng.hpp"

namespace scrip {

struct SystemState {
  std::int64_t round = 0;
  std::vector<int> balances;
  std::vector<double> utilities;  // discounted utility accumulated per agent
};

struct RoundOutcome {
  int requester = -1;
  std::vector<int> ableSet;       // ascending agent ids, requester excluded
  std::vector<int> volunteerSet;  // ascending subset of ableSet
  int server = -1;                // -1 when unsatisfied
  bool satisfied = false;
  bool transferred = false;       // a dollar moved (requester was solvent)
};

/// Threshold rule: volunteer iff the requester can pay and own balance is
/// below k, mixing at balance exactly k with probability gamma'.
bool decide_volunteer(const ThresholdStrategy& strategy, int balance, int requesterBalance,
                      double randomDraw);

/// Executes one round in place: requester drawn uniformly, abilities drawn per
/// other agent, volunteers per strategy (altruists whenever able), server
/// uniform over volunteers. Draw order is fixed: requester, abilities in
/// agent order, volunteer mixing in agent order, server. Draws are consumed
/// only where an outcome actually depends on them (no ability draws at
/// beta = 1, no mixing draw at integer thresholds).
RoundOutcome simulate_round(SystemState& state, std::span<const AgentKind> kinds,
                            const GameParams& params, RngStreams& streams);

struct LastEvent {
  int requester = -1;
  int server = -1;
  bool satisfied = false;
  bool transferred = false;
};

/// Sampler drawing from the same per-round outcome law as simulate_round but
/// in O(max threshold) per round via per-balance buckets: a request is
/// satisfied with probability 1-(1-beta)^W for W willing agents, and the
/// server is then uniform over the willing set (ability draws are exchangeable
/// across willing agents, so the marginal server law is uniform). Holds its
/// own RNG streams; trajectories are deterministic per seed but not
/// draw-for-draw identical to simulate_round's.
class FastEngine {
 public:
  FastEngine(const GameParams& params, std::span<const AgentKind> kinds,
             std::vector<int> initialBalances, std::uint64_t seed);

  void step();

  std::int64_t round() const { return round_; }
  const std::vector<int>& balances() const { return balances_; }
  const std::vector<double>& utilities() const { return utilities_; }
  /// Balance histogram over all agents; index = balance.
  const std::vector<std::int64_t>& histogram() const { return histogram_; }
  std::int64_t transfers() const { return transfers_; }
  std::int64_t satisfiedRounds() const { return satisfied_; }
  const LastEvent& lastEvent() const { return last_; }
  int solventCount() const { return params_.n - static_cast<int>(histogram_[0]); }

  SystemState snapshot_state() const;

 private:
  struct StandardGroup {
    int k = 0;
    double gammaPrime = 0.0;
    std::int64_t belowCount = 0;              // members with balance < k
    std::vector<std::vector<int>> levels;     // members per balance
    std::vector<int> scratch;                 // mixed willing at balance k, per round
  };

  void move_agent(int agent, int delta);
  int pick_standard(const StandardGroup& g, std::uint64_t r, int skip) const;

  GameParams params_;
  double roundDiscount_ = 1.0;
  double log1mBeta_ = 0.0;
  std::vector<int> balances_;
  std::vector<double> utilities_;
  std::vector<std::int64_t> histogram_;
  std::vector<int> groupOf_;      // standard group index, -1 for altruists
  std::vector<int> posInLevel_;   // position within the group level bucket
  std::vector<double> altruistGain_;
  std::vector<int> altruistMembers_;
  std::vector<int> altruistPos_;
  std::vector<StandardGroup> groups_;
  RngStreams streams_;
  std::int64_t round_ = 0;
  double discPow_ = 1.0;
  std::int64_t transfers_ = 0;
  std::int64_t satisfied_ = 0;
  LastEvent last_;
};

struct TrajectorySnapshot {
  std::int64_t round = 0;
  MoneyDistribution distribution;
};

struct Trajectory {
  std::vector<TrajectorySnapshot> snapshots;
  SystemState finalState;
};

enum class Engine { Fast, Reference };

struct RunOptions {
  std::int64_t stride = 0;             // 0: max(1, n/10)
  int support = -1;                    // -1: derived from strategies and start
  std::int64_t budget = 100'000'000;   // cap on rounds * n
  Engine engine = Engine::Fast;
  std::vector<int> initialBalances;    // empty: even spread of the money
};

/// Deterministic batch driver: snapshots the balance distribution every
/// stride rounds and returns the final state with per-agent discounted
/// utilities. Throws BudgetError when rounds * n exceeds the budget.
Trajectory run_simulation(const GameParams& params, const std::vector<AgentKind>& kinds,
                          std::int64_t rounds, std::uint64_t seed, RunOptions options = {});

/// Fraction of agents at each balance 0..support; the mean is money/n exactly.
MoneyDistribution empirical_distribution(const SystemState& state, int support);
MoneyDistribution empirical_distribution(std::span<const std::int64_t> histogram, int n,
                                         int support);

// Deterministic initial-balance constructors.
std::vector<int> even_balances(int n, std::int64_t money);
std::vector<int> extreme_balances(int n, int top, std::int64_t money);
std::vector<int> near_maxent_balances(int n, int support, std::int64_t money);

}  // namespace scrip
