#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "scrip/chain.hpp"
#include "scrip/equilibrium.hpp"
#include "scrip/simulation.hpp"

namespace scrip {

/// Convergence of the balance distribution towards the maximum-entropy one,
/// measured as the squared Euclidean distance (the form the concentration set
/// uses), averaged over seeds. Starts from the extreme split (everyone at $0
/// or at the threshold).
struct ConvergenceSeries {
  std::vector<std::int64_t> rounds;
  std::vector<double> meanSq;
  std::vector<double> stderrSq;
};
ConvergenceSeries convergence_series(const GameParams& params, int threshold,
                                     std::int64_t rounds, std::int64_t stride,
                                     std::span<const std::uint64_t> seeds);

/// Maximum squared distance from the maximum-entropy distribution over a long
/// run started right next to it.
struct MaxDistanceResult {
  std::int64_t rounds = 0;
  double maxSq = 0.0;
};
MaxDistanceResult max_distance_run(const GameParams& params, int threshold,
                                   std::int64_t rounds, std::uint64_t seed);

/// First round at which the squared distance drops below the threshold,
/// per seed, from the extreme start.
struct CrossingResult {
  std::vector<std::int64_t> perSeed;
  double meanRounds = 0.0;
  double stderrRounds = 0.0;
  bool allCrossed = true;
};
CrossingResult rounds_to_distance(const GameParams& params, int threshold, double sqDistance,
                                  std::int64_t maxRounds, std::span<const std::uint64_t> seeds);

/// Paired comparison of one agent's discounted utility under two strategies,
/// everyone else playing the population strategy. Positive meanDiff means the
/// deviation earned more than the candidate strategy.
struct PairedUtility {
  double meanBase = 0.0;
  double meanOther = 0.0;
  double meanDiff = 0.0;   // other - base
  double stderrDiff = 0.0;
  int seeds = 0;
};
PairedUtility paired_deviation(const GameParams& params, double populationGamma,
                               double baseGamma, double otherGamma, std::int64_t rounds,
                               std::span<const std::uint64_t> seeds);

/// Same paired design in a population of altruists plus never-volunteering
/// agents: the probe agent plays S_0 (base) against S_k (other).
PairedUtility altruist_dominance(const GameParams& params, int altruists, int probeThreshold,
                                 std::int64_t rounds, std::span<const std::uint64_t> seeds);

/// Mean-field event probabilities against simulated frequencies, everyone
/// playing the same integer threshold.
struct RateComparison {
  double modelSpend = 0.0, empiricalSpend = 0.0, relSpendError = 0.0;
  double modelEarn = 0.0, empiricalEarn = 0.0, relEarnError = 0.0;
};
RateComparison mean_field_rate_check(const GameParams& params, int threshold,
                                     std::int64_t rounds, std::uint64_t seed);

/// Total-variation distance between the per-round state occupancy of a
/// simulated run and the given distribution over the enumerated state space.
double occupancy_total_variation(const ChainStateSpace& space, const GameParams& params,
                                 std::int64_t rounds, std::uint64_t seed,
                                 std::span<const double> pi, Engine engine = Engine::Reference);

}  // namespace scrip
