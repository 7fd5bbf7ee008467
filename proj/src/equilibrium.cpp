#include "scrip/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "scrip/errors.hpp"
#include "scrip/parallel.hpp"

namespace scrip {

namespace {

constexpr int kHardGammaCap = 4096;

GameParams with_money(const GameParams& base, std::int64_t money) {
  GameParams p = base;
  p.money = money;
  p.validate();
  return p;
}

}  // namespace

BrCurve compute_br_curve(const GameParams& params, int gammaMax,
                         const BestResponseOptions& options) {
  if (gammaMax < 0) throw DomainError("compute_br_curve: gammaMax must be >= 0");
  BrCurve curve;
  curve.params = params;
  curve.points.resize(static_cast<std::size_t>(gammaMax) + 1);
  parallel::for_index(gammaMax + 1, [&](std::int64_t g) {
    curve.points[static_cast<std::size_t>(g)] = BrCurvePoint{
        static_cast<int>(g),
        best_response(params, ThresholdStrategy(static_cast<double>(g)), options)};
  });
  return curve;
}

std::vector<FixedPointCandidate> find_fixed_points(const BrCurve& curve) {
  std::vector<FixedPointCandidate> out;
  out.push_back(FixedPointCandidate{false, 0.0, 0, 0});
  for (int g = 1; g <= curve.gammaMax(); ++g)
    if (curve.at(g).contains(static_cast<double>(g)))
      out.push_back(FixedPointCandidate{false, static_cast<double>(g), g, g});
  for (int g = 0; g < curve.gammaMax(); ++g) {
    const bool belowHere = curve.at(g).hi() <= static_cast<double>(g);
    const bool aboveNext = curve.at(g + 1).lo() >= static_cast<double>(g + 1);
    const bool jumps = curve.at(g + 1).lo() > curve.at(g).hi();
    if (belowHere && aboveNext && jumps)
      out.push_back(FixedPointCandidate{true, 0.5 + g, g, g + 1});
  }
  std::sort(out.begin(), out.end(),
            [](const FixedPointCandidate& a, const FixedPointCandidate& b) {
              return a.gamma < b.gamma;
            });
  return out;
}

double refine_crossing(const GameParams& params, double lo, double hi, double tol,
                       const BestResponseOptions& options) {
  if (!(lo < hi)) throw DomainError("refine_crossing: empty bracket");
  auto side = [&](double g) {
    BestResponseResult r = best_response(params, ThresholdStrategy(g), options);
    if (r.contains(g)) return 0;
    return r.lo() > g ? +1 : -1;
  };
  int sLo = side(lo);
  if (sLo == 0) return lo;
  int sHi = side(hi);
  if (sHi == 0) return hi;
  if (sLo == sHi)
    throw InvariantError("refine_crossing: response does not cross the diagonal in the bracket");
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    int s = side(mid);
    if (s == 0) return mid;
    if (s == sLo)
      lo = mid;
    else
      hi = mid;
  }
  double at = 0.5 * (lo + hi);
  // The response jumps at integer gammas (the balance support grows there);
  // a bracket hugging an integer means the jump is exactly at it.
  if (std::abs(at - std::round(at)) <= 2.0 * tol) at = std::round(at);
  return at;
}

double efficiency(const ThresholdStrategy& gamma, double m, const GameParams& params) {
  if (gamma.gamma() <= 0.0) return 0.0;
  const int support = static_cast<int>(std::ceil(gamma.gamma()));
  if (m >= static_cast<double>(support)) return 0.0;  // nobody ever works
  MoneyDistribution dStar = max_entropy_distribution(support, m);
  MeanFieldModel model = mean_field_model(dStar, gamma, params);
  return model.payingFraction * model.satisfyProb * (1.0 - params.alpha) / params.n;
}

namespace {

bool verify_fixed_point(const GameParams& params, const FixedPoint& fp, double tol,
                        const BestResponseOptions& options) {
  if (!fp.crossing) {
    BestResponseResult r = best_response(params, ThresholdStrategy(fp.gamma), options);
    return r.contains(fp.gamma);
  }
  // Crossing points are verified by bracketing: the response sits at or below
  // the diagonal just left of the jump and at or above it just right.
  const double lo = std::max(0.0, fp.gamma - tol);
  const double hi = fp.gamma + tol;
  BestResponseResult rLo = best_response(params, ThresholdStrategy(lo), options);
  BestResponseResult rHi = best_response(params, ThresholdStrategy(hi), options);
  const bool loOk = rLo.hi() <= fp.gamma + tol || rLo.contains(lo);
  const bool hiOk = rHi.lo() >= fp.gamma - tol || rHi.contains(hi);
  return loOk && hiOk;
}

}  // namespace

EquilibriumReport analyze_equilibria(const GameParams& params, int gammaMax,
                                     const BestResponseOptions& options) {
  params.validate();
  const double m = params.mean();
  int cap = gammaMax > 0 ? gammaMax
                         : std::max(16, 2 * static_cast<int>(std::ceil(m)) + 8);
  BrCurve curve = compute_br_curve(params, cap, options);
  while (gammaMax == 0 && curve.at(cap).hi() >= static_cast<double>(cap)) {
    cap *= 2;
    if (cap > kHardGammaCap)
      throw InvariantError("analyze_equilibria: best response exceeds the sampling cap " +
                           std::to_string(kHardGammaCap));
    curve = compute_br_curve(params, cap, options);
  }

  EquilibriumReport report;
  report.params = params;
  report.gammaMax = cap;
  const double refineTol = 1e-6;
  for (const FixedPointCandidate& c : find_fixed_points(curve)) {
    FixedPoint fp;
    fp.crossing = c.crossing;
    fp.gamma = c.crossing ? refine_crossing(params, c.bracketLo, c.bracketHi, refineTol, options)
                          : c.gamma;
    fp.efficiency = efficiency(ThresholdStrategy(fp.gamma), m, params);
    fp.verified = fp.gamma == 0.0 || verify_fixed_point(params, fp, 2.0 * refineTol, options);
    report.fixedPoints.push_back(fp);
  }
  std::sort(report.fixedPoints.begin(), report.fixedPoints.end(),
            [](const FixedPoint& a, const FixedPoint& b) {
              if (a.gamma != b.gamma) return a.gamma < b.gamma;
              return a.crossing < b.crossing;  // keep the integer entry first
            });
  // A crossing can refine onto an integer fixed point; keep one entry.
  std::vector<FixedPoint> unique;
  for (const FixedPoint& fp : report.fixedPoints)
    if (unique.empty() || fp.gamma - unique.back().gamma > 2.0 * refineTol)
      unique.push_back(fp);
  report.fixedPoints = std::move(unique);
  report.selected = 0;
  for (std::size_t i = 1; i < report.fixedPoints.size(); ++i)
    if (report.fixedPoints[i].efficiency >
        report.fixedPoints[report.selected].efficiency + 1e-15)
      report.selected = i;
  return report;
}

// ---------------------------------------------------------------------------
// Ratio sweep
// ---------------------------------------------------------------------------

namespace {

/// Resolves the true (unsaturated) response at an integer gamma, enlarging
/// the balance cap until the policy stops volunteering below it.
BestResponseResult unsaturated_response(const GameParams& params, int gamma,
                                        BestResponseOptions options) {
  BestResponseResult r = best_response(params, ThresholdStrategy(gamma), options);
  int cap = std::max({gamma + 2, static_cast<int>(std::ceil(params.mean())) + 2, 8});
  while (r.capSaturated) {
    cap *= 4;
    if (cap > kHardGammaCap)
      throw InvariantError("unsaturated_response: policy volunteers past the hard cap");
    options.bMaxOverride = cap;
    r = best_response(params, ThresholdStrategy(gamma), options);
  }
  return r;
}

struct AscentResult {
  bool found = false;
  double gamma = 0.0;
};

/// Finds the fixed point of the best-response step function above the dead
/// zone without sampling the whole curve: exponential probing until the
/// response falls below the diagonal, then bisection on the sign of
/// br(gamma) - gamma. The curves are nondecreasing with the diagonal deficit
/// changing sign once, which the full-curve route cross-checks in the tests.
AscentResult ascend_to_fixed_point(const GameParams& params,
                                   const BestResponseOptions& options) {
  const double m = params.mean();
  const int g0 = static_cast<int>(std::floor(m)) + 1;
  // The live block can start an integer or two above the dead zone when the
  // distribution is very top-heavy; probe a handful of entry points. Wherever
  // the response first jumps across the diagonal, the crossing just left of
  // it is the lowest fixed point, and the lowest one tops the efficiency
  // ordering (smaller thresholds concentrate balances less). A crossing that
  // collapses onto the dead boundary itself carries no welfare, so the search
  // continues upward past it.
  int above = -1;
  int lastBelow = g0 - 1;  // the dead boundary responds 0
  BestResponseResult r;
  for (int g = g0; g <= g0 + 6; ++g) {
    r = unsaturated_response(params, g, options);
    if (r.contains(static_cast<double>(g))) return {true, static_cast<double>(g)};
    if (r.lo() > static_cast<double>(g)) {
      above = g;
      break;
    }
    lastBelow = g;
  }
  if (above < 0) return {};  // below the diagonal everywhere near entry: dead
  double entryCrossing = refine_crossing(params, lastBelow, above, 1e-6, options);
  if (efficiency(ThresholdStrategy(entryCrossing), m, params) > 0.0)
    return {true, entryCrossing};

  int below = -1;
  int g = std::max(above + 4, static_cast<int>(r.lo()));
  for (int iter = 0; iter < 48; ++iter) {
    if (g > kHardGammaCap)
      throw InvariantError("ascend_to_fixed_point: response exceeds the hard cap");
    r = unsaturated_response(params, g, options);
    if (r.contains(static_cast<double>(g))) return {true, static_cast<double>(g)};
    if (r.lo() > static_cast<double>(g)) {
      above = g;
      g = std::max(2 * g, static_cast<int>(r.lo()));
      continue;
    }
    below = g;
    break;
  }
  if (below < 0)
    throw InvariantError("ascend_to_fixed_point: response never fell below the diagonal");

  while (below - above > 1) {
    int mid = above + (below - above) / 2;
    r = unsaturated_response(params, mid, options);
    if (r.contains(static_cast<double>(mid))) return {true, static_cast<double>(mid)};
    if (r.lo() > static_cast<double>(mid))
      above = mid;
    else
      below = mid;
  }
  // Adjacent integers with the response strictly above then strictly below:
  // the step function crosses the diagonal in between.
  return {true, refine_crossing(params, above, below, 1e-6, options)};
}

}  // namespace

RatioTable optimal_ratio(const GameParams& base, std::span<const double> mGrid,
                         const BestResponseOptions& options) {
  if (mGrid.empty()) throw DomainError("optimal_ratio: empty m grid");
  RatioTable table;
  table.rows.resize(mGrid.size());
  parallel::for_index(static_cast<std::int64_t>(mGrid.size()), [&](std::int64_t i) {
    const double m = mGrid[static_cast<std::size_t>(i)];
    const double moneyReal = m * base.n;
    const std::int64_t money = std::llround(moneyReal);
    if (std::abs(moneyReal - static_cast<double>(money)) > 1e-9)
      throw DomainError("optimal_ratio: m*n must be an integer for m = " + std::to_string(m));
    GameParams params = with_money(base, money);
    RatioRow row;
    row.m = m;
    AscentResult fp = ascend_to_fixed_point(params, options);
    if (fp.found) {
      double eff = efficiency(ThresholdStrategy(fp.gamma), m, params);
      if (eff > 0.0) {
        row.hasEquilibrium = true;
        row.gammaStar = fp.gamma;
        row.efficiency = eff;
      }
    }
    table.rows[static_cast<std::size_t>(i)] = row;
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < table.rows.size(); ++i)
    if (table.rows[i].efficiency > table.rows[best].efficiency + 1e-15) best = i;
  table.mStar = table.rows[best].m;
  table.degenerate = table.rows[best].efficiency <= 0.0;
  return table;
}

RatioInvarianceResult ratio_invariance_check(int n1, std::int64_t money1, int n2,
                                             std::int64_t money2, double delta, double alpha,
                                             double beta, const BestResponseOptions& options) {
  if (static_cast<__int128>(money1) * n2 != static_cast<__int128>(money2) * n1)
    throw DomainError("ratio_invariance_check: money1/n1 must equal money2/n2 exactly");
  GameParams p1(n1, delta, alpha, beta, money1);
  GameParams p2(n2, delta, alpha, beta, money2);
  EquilibriumReport r1 = analyze_equilibria(p1, 0, options);
  EquilibriumReport r2 = analyze_equilibria(p2, 0, options);
  const int cap = std::max(r1.gammaMax, r2.gammaMax);

  RatioInvarianceResult out;
  out.first = compute_br_curve(p1, cap, options);
  out.second = compute_br_curve(p2, cap, options);
  out.selectedFirst = r1.fixedPoints[r1.selected].gamma;
  out.selectedSecond = r2.fixedPoints[r2.selected].gamma;
  bool curvesEqual = true;
  for (int g = 0; g <= cap; ++g)
    if (!(out.first.at(g) == out.second.at(g))) {
      curvesEqual = false;
      break;
    }
  out.equal = curvesEqual && std::abs(out.selectedFirst - out.selectedSecond) <= 1e-6;
  return out;
}

double altruist_threshold_bound(double alpha, double beta, double delta) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DomainError("altruist_threshold: alpha must lie in (0,1)");
  if (!(beta > 0.0 && beta <= 1.0))
    throw DomainError("altruist_threshold: beta must lie in (0,1]");
  if (!(delta > 0.0 && delta < 1.0))
    throw DomainError("altruist_threshold: delta must lie in (0,1)");
  if (beta == 1.0) return 0.0;  // any single altruist already serves every round
  return std::log(alpha * (1.0 - delta)) / std::log(1.0 - beta);
}

int altruist_threshold(double alpha, double beta, double delta) {
  double bound = altruist_threshold_bound(alpha, beta, delta);
  if (beta == 1.0) return 1;
  // Smallest integer a with (1-beta)^a < alpha (1-delta); the log bound can
  // sit within an ulp of an integer, so settle it with the direct predicate.
  const double target = alpha * (1.0 - delta);
  int a = std::max(1, static_cast<int>(std::floor(bound)) - 1);
  while (std::pow(1.0 - beta, a) >= target) {
    ++a;
    if (a > 100'000'000) throw InvariantError("altruist_threshold: bound search ran away");
  }
  return a;
}

}  // namespace scrip
