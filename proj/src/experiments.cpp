#include "scrip/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "scrip/errors.hpp"
#include "scrip/parallel.hpp"

namespace scrip {

namespace {

double squared_to_target(std::span<const std::int64_t> hist, int n,
                         const MoneyDistribution& target) {
  double sq = 0.0;
  const int support = target.support();
  for (int j = 0; j <= support; ++j) {
    double emp = static_cast<std::size_t>(j) < hist.size()
                     ? static_cast<double>(hist[static_cast<std::size_t>(j)]) / n
                     : 0.0;
    double d = emp - target(j);
    sq += d * d;
  }
  for (std::size_t b = static_cast<std::size_t>(support) + 1; b < hist.size(); ++b)
    if (hist[b] != 0)
      throw InvariantError("squared_to_target: balance outside the target support");
  return sq;
}

struct MeanStderr {
  double mean = 0.0, stderrOfMean = 0.0;
};

MeanStderr mean_stderr(std::span<const double> xs) {
  MeanStderr out;
  if (xs.empty()) return out;
  for (double x : xs) out.mean += x;
  out.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.stderrOfMean = std::sqrt(ss / (static_cast<double>(xs.size()) - 1.0) /
                                 static_cast<double>(xs.size()));
  }
  return out;
}

}  // namespace

ConvergenceSeries convergence_series(const GameParams& params, int threshold,
                                     std::int64_t rounds, std::int64_t stride,
                                     std::span<const std::uint64_t> seeds) {
  if (stride < 1) throw DomainError("convergence_series: stride must be >= 1");
  MoneyDistribution target = max_entropy_distribution(threshold, params.mean());
  const std::size_t samples = static_cast<std::size_t>(rounds / stride) + 1;
  std::vector<std::vector<double>> bySeed(seeds.size());

  parallel::for_index(static_cast<std::int64_t>(seeds.size()), [&](std::int64_t si) {
    FastEngine engine(params, uniform_population(params.n, threshold),
                      extreme_balances(params.n, threshold, params.money),
                      seeds[static_cast<std::size_t>(si)]);
    std::vector<double>& row = bySeed[static_cast<std::size_t>(si)];
    row.reserve(samples);
    row.push_back(squared_to_target(engine.histogram(), params.n, target));
    for (std::int64_t t = 1; t <= rounds; ++t) {
      engine.step();
      if (t % stride == 0)
        row.push_back(squared_to_target(engine.histogram(), params.n, target));
    }
  });

  ConvergenceSeries out;
  for (std::size_t s = 0; s < samples; ++s) {
    std::vector<double> col;
    col.reserve(seeds.size());
    for (const auto& row : bySeed) col.push_back(row[s]);
    MeanStderr ms = mean_stderr(col);
    out.rounds.push_back(static_cast<std::int64_t>(s) * stride);
    out.meanSq.push_back(ms.mean);
    out.stderrSq.push_back(ms.stderrOfMean);
  }
  return out;
}

MaxDistanceResult max_distance_run(const GameParams& params, int threshold,
                                   std::int64_t rounds, std::uint64_t seed) {
  MoneyDistribution target = max_entropy_distribution(threshold, params.mean());
  FastEngine engine(params, uniform_population(params.n, threshold),
                    near_maxent_balances(params.n, threshold, params.money), seed);
  MaxDistanceResult out{rounds, 0.0};
  out.maxSq = squared_to_target(engine.histogram(), params.n, target);
  for (std::int64_t t = 1; t <= rounds; ++t) {
    engine.step();
    out.maxSq = std::max(out.maxSq, squared_to_target(engine.histogram(), params.n, target));
  }
  return out;
}

CrossingResult rounds_to_distance(const GameParams& params, int threshold, double sqDistance,
                                  std::int64_t maxRounds, std::span<const std::uint64_t> seeds) {
  MoneyDistribution target = max_entropy_distribution(threshold, params.mean());
  CrossingResult out;
  out.perSeed.assign(seeds.size(), maxRounds);
  parallel::for_index(static_cast<std::int64_t>(seeds.size()), [&](std::int64_t si) {
    FastEngine engine(params, uniform_population(params.n, threshold),
                      extreme_balances(params.n, threshold, params.money),
                      seeds[static_cast<std::size_t>(si)]);
    for (std::int64_t t = 1; t <= maxRounds; ++t) {
      engine.step();
      if (squared_to_target(engine.histogram(), params.n, target) < sqDistance) {
        out.perSeed[static_cast<std::size_t>(si)] = t;
        return;
      }
    }
  });
  std::vector<double> asDouble(out.perSeed.begin(), out.perSeed.end());
  MeanStderr ms = mean_stderr(asDouble);
  out.meanRounds = ms.mean;
  out.stderrRounds = ms.stderrOfMean;
  out.allCrossed =
      std::none_of(out.perSeed.begin(), out.perSeed.end(),
                   [&](std::int64_t t) { return t >= maxRounds; });
  return out;
}

namespace {

double probe_utility(const GameParams& params, double populationGamma, double probeGamma,
                     std::int64_t rounds, std::uint64_t seed) {
  std::vector<AgentKind> kinds = uniform_population(params.n, populationGamma);
  kinds[0] = make_standard(probeGamma);
  FastEngine engine(params, kinds, even_balances(params.n, params.money), seed);
  for (std::int64_t t = 0; t < rounds; ++t) engine.step();
  return engine.utilities()[0];
}

}  // namespace

PairedUtility paired_deviation(const GameParams& params, double populationGamma,
                               double baseGamma, double otherGamma, std::int64_t rounds,
                               std::span<const std::uint64_t> seeds) {
  std::vector<double> base(seeds.size()), other(seeds.size());
  parallel::for_index(static_cast<std::int64_t>(seeds.size()), [&](std::int64_t si) {
    std::uint64_t seed = seeds[static_cast<std::size_t>(si)];
    base[static_cast<std::size_t>(si)] =
        probe_utility(params, populationGamma, baseGamma, rounds, seed);
    other[static_cast<std::size_t>(si)] =
        probe_utility(params, populationGamma, otherGamma, rounds, seed);
  });
  std::vector<double> diff(seeds.size());
  for (std::size_t i = 0; i < seeds.size(); ++i) diff[i] = other[i] - base[i];
  PairedUtility out;
  out.meanBase = mean_stderr(base).mean;
  out.meanOther = mean_stderr(other).mean;
  MeanStderr ms = mean_stderr(diff);
  out.meanDiff = ms.mean;
  out.stderrDiff = ms.stderrOfMean;
  out.seeds = static_cast<int>(seeds.size());
  return out;
}

PairedUtility altruist_dominance(const GameParams& params, int altruists, int probeThreshold,
                                 std::int64_t rounds, std::span<const std::uint64_t> seeds) {
  if (altruists < 0 || altruists >= params.n)
    throw DomainError("altruist_dominance: altruist count must lie in [0, n)");
  auto run = [&](int probeGamma, std::uint64_t seed) {
    std::vector<AgentKind> kinds;
    kinds.reserve(static_cast<std::size_t>(params.n));
    for (int i = 0; i < altruists; ++i) kinds.push_back(make_altruist(params.alpha));
    for (int i = altruists; i < params.n; ++i) kinds.push_back(make_standard(0.0));
    kinds[static_cast<std::size_t>(altruists)] = make_standard(probeGamma);
    FastEngine engine(params, kinds, even_balances(params.n, params.money), seed);
    for (std::int64_t t = 0; t < rounds; ++t) engine.step();
    return engine.utilities()[static_cast<std::size_t>(altruists)];
  };
  std::vector<double> base(seeds.size()), other(seeds.size());
  parallel::for_index(static_cast<std::int64_t>(seeds.size()), [&](std::int64_t si) {
    std::uint64_t seed = seeds[static_cast<std::size_t>(si)];
    base[static_cast<std::size_t>(si)] = run(0, seed);
    other[static_cast<std::size_t>(si)] = run(probeThreshold, seed);
  });
  std::vector<double> diff(seeds.size());
  for (std::size_t i = 0; i < seeds.size(); ++i) diff[i] = other[i] - base[i];
  PairedUtility out;
  out.meanBase = mean_stderr(base).mean;
  out.meanOther = mean_stderr(other).mean;
  MeanStderr ms = mean_stderr(diff);
  out.meanDiff = ms.mean;
  out.stderrDiff = ms.stderrOfMean;
  out.seeds = static_cast<int>(seeds.size());
  return out;
}

RateComparison mean_field_rate_check(const GameParams& params, int threshold,
                                     std::int64_t rounds, std::uint64_t seed) {
  ThresholdStrategy gamma(threshold);
  MoneyDistribution dStar = max_entropy_distribution(threshold, params.mean());
  MeanFieldModel model = mean_field_model(dStar, gamma, params);

  FastEngine engine(params, uniform_population(params.n, threshold),
                    even_balances(params.n, params.money), seed);
  std::int64_t solventRounds = 0, willingRounds = 0;
  for (std::int64_t t = 0; t < rounds; ++t) {
    solventRounds += engine.solventCount();
    const auto& hist = engine.histogram();
    std::int64_t below = 0;
    for (int j = 0; j < threshold && static_cast<std::size_t>(j) < hist.size(); ++j)
      below += hist[static_cast<std::size_t>(j)];
    willingRounds += below;
    engine.step();
  }
  RateComparison out;
  out.modelSpend = model.spendProb;
  out.modelEarn = model.earnProb;
  out.empiricalSpend =
      static_cast<double>(engine.transfers()) / static_cast<double>(solventRounds);
  out.empiricalEarn =
      static_cast<double>(engine.transfers()) / static_cast<double>(willingRounds);
  out.relSpendError = std::abs(out.empiricalSpend - out.modelSpend) / out.modelSpend;
  out.relEarnError = std::abs(out.empiricalEarn - out.modelEarn) / out.modelEarn;
  return out;
}

double occupancy_total_variation(const ChainStateSpace& space, const GameParams& params,
                                 std::int64_t rounds, std::uint64_t seed,
                                 std::span<const double> pi, Engine engine) {
  if (pi.size() != space.size())
    throw DomainError("occupancy_total_variation: pi size mismatch");
  std::vector<std::int64_t> visits(space.size(), 0);
  std::vector<AgentKind> kinds = uniform_population(params.n, space.k());

  if (engine == Engine::Fast) {
    FastEngine fast(params, kinds, even_balances(params.n, params.money), seed);
    for (std::int64_t t = 0; t < rounds; ++t) {
      fast.step();
      visits[space.index_of(std::span<const int>(fast.balances()))] += 1;
    }
  } else {
    SystemState state{0, even_balances(params.n, params.money),
                      std::vector<double>(static_cast<std::size_t>(params.n), 0.0)};
    RngStreams streams = RngStreams::from_seed(seed);
    for (std::int64_t t = 0; t < rounds; ++t) {
      simulate_round(state, kinds, params, streams);
      visits[space.index_of(std::span<const int>(state.balances))] += 1;
    }
  }
  double tv = 0.0;
  for (std::size_t i = 0; i < space.size(); ++i)
    tv += std::abs(static_cast<double>(visits[i]) / static_cast<double>(rounds) - pi[i]);
  return 0.5 * tv;
}

}  // namespace scrip
