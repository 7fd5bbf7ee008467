#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "scrip/mdp.hpp"

namespace scrip {

struct BrCurvePoint {
  int gamma = 0;
  BestResponseResult response;
};

/// Best-response step function sampled at every integer threshold 0..gammaMax.
struct BrCurve {
  GameParams params;
  std::vector<BrCurvePoint> points;

  int gammaMax() const { return static_cast<int>(points.size()) - 1; }
  const BestResponseResult& at(int gamma) const {
    return points[static_cast<std::size_t>(gamma)].response;
  }
};

/// Samples br at each integer in [0, gammaMax]. Points are independent and
/// evaluated in parallel; the result does not depend on the thread count.
BrCurve compute_br_curve(const GameParams& params, int gammaMax,
                         const BestResponseOptions& options = {});

struct FixedPointCandidate {
  bool crossing = false;  // response jumps across the diagonal inside the bracket
  double gamma = 0.0;     // exact location for integer fixed points
  int bracketLo = 0;
  int bracketHi = 0;
};

/// Fixed points visible in the sampled curve: 0 always, every integer whose
/// response set contains it, and a crossing candidate wherever the step
/// function jumps across the diagonal between consecutive samples (the
/// vertical joining segment meets the diagonal somewhere inside).
std::vector<FixedPointCandidate> find_fixed_points(const BrCurve& curve);

/// Locates the jump of the best-response step function across the diagonal
/// inside (lo, hi) by bisection over real (mixing) thresholds. Returns the
/// diagonal intersection within tol.
double refine_crossing(const GameParams& params, double lo, double hi, double tol = 1e-6,
                       const BestResponseOptions& options = {});

struct FixedPoint {
  double gamma = 0.0;
  bool crossing = false;
  double efficiency = 0.0;
  bool verified = false;
};

struct EquilibriumReport {
  GameParams params;
  int gammaMax = 0;
  std::vector<FixedPoint> fixedPoints;  // ascending; always contains 0
  std::size_t selected = 0;             // index of the efficiency maximizer
};

/// Full pipeline: adaptive curve, fixed points (crossings refined),
/// efficiency at each, selection of the most efficient one, and an
/// independent re-verification pass of every reported point.
EquilibriumReport analyze_equilibria(const GameParams& params, int gammaMax = 0,
                                     const BestResponseOptions& options = {});

/// Steady-state welfare rate per agent per round when everyone plays
/// S_gamma: a satisfied request is worth 1 - alpha, and requests are served
/// at rate rho * q per round.
double efficiency(const ThresholdStrategy& gamma, double m, const GameParams& params);

struct RatioRow {
  double m = 0.0;
  bool hasEquilibrium = false;
  double gammaStar = 0.0;     // selected equilibrium (0 when none)
  double efficiency = 0.0;
};

struct RatioTable {
  double mStar = 0.0;
  bool degenerate = false;  // no grid point has positive efficiency
  std::vector<RatioRow> rows;
};

/// Sweeps average money per agent over the grid and reports the efficiency
/// maximizer (ties toward smaller m). Uses a staircase ascent to the
/// efficiency-selected fixed point instead of sampling whole curves; the two
/// routes are checked against each other in the tests.
RatioTable optimal_ratio(const GameParams& base, std::span<const double> mGrid,
                         const BestResponseOptions& options = {});

struct RatioInvarianceResult {
  bool equal = false;
  BrCurve first, second;
  double selectedFirst = 0.0, selectedSecond = 0.0;
};

/// Same money-per-agent ratio must yield the same best-response curve and the
/// same selected equilibrium. The ratio precondition is checked exactly.
RatioInvarianceResult ratio_invariance_check(int n1, std::int64_t money1, int n2,
                                             std::int64_t money2, double delta, double alpha,
                                             double beta,
                                             const BestResponseOptions& options = {});

/// Smallest number of altruists that makes never volunteering dominant for
/// every standard agent: the least a with (1-beta)^a < alpha * (1-delta).
/// One altruist suffices at beta = 1.
int altruist_threshold(double alpha, double beta, double delta);

/// The raw bound log_{1-beta}(alpha (1-delta)) before rounding.
double altruist_threshold_bound(double alpha, double beta, double delta);

}  // namespace scrip
