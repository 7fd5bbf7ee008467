#include <doctest.h>

#include <cmath>

#include "scrip/equilibrium.hpp"
#include "scrip/parallel.hpp"

using namespace scrip;

namespace {

BrCurve synthetic_curve(const std::vector<int>& responses) {
  BrCurve curve;
  curve.params = GameParams(10, 0.9, 0.1, 1.0, 10);
  for (std::size_t g = 0; g < responses.size(); ++g) {
    BestResponseResult r;
    r.value = responses[g];
    curve.points.push_back({static_cast<int>(g), r});
  }
  return curve;
}

bool has_integer_fp(const std::vector<FixedPointCandidate>& fps, double gamma) {
  for (const FixedPointCandidate& c : fps)
    if (!c.crossing && c.gamma == gamma) return true;
  return false;
}

}  // namespace

TEST_CASE("fixed points of synthetic curves") {
  auto dead = find_fixed_points(synthetic_curve({0, 0, 0, 0}));
  REQUIRE(dead.size() == 1);
  CHECK(dead[0].gamma == 0.0);

  auto withTwo = find_fixed_points(synthetic_curve({0, 0, 2, 2}));
  CHECK(has_integer_fp(withTwo, 0.0));
  CHECK(has_integer_fp(withTwo, 2.0));

  // a jump across the diagonal between 2 and 3 yields a crossing candidate
  auto jump = find_fixed_points(synthetic_curve({0, 0, 0, 5, 5, 5}));
  bool crossing = false;
  for (const FixedPointCandidate& c : jump)
    if (c.crossing) {
      crossing = true;
      CHECK(c.bracketLo == 2);
      CHECK(c.bracketHi == 3);
    }
  CHECK(crossing);

  // interval responses count as containment
  BrCurve curve = synthetic_curve({0, 0, 0});
  curve.points[2].response.kind = BestResponseResult::Kind::Interval;
  curve.points[2].response.value = 2;
  CHECK(has_integer_fp(find_fixed_points(curve), 2.0));
}

TEST_CASE("efficiency formula") {
  GameParams params(1000, 0.9, 0.1, 1.0, 2000);
  CHECK(efficiency(ThresholdStrategy(0.0), 2.0, params) == 0.0);
  CHECK(efficiency(ThresholdStrategy(2.0), 2.0, params) == 0.0);  // rich regime

  double eff = efficiency(ThresholdStrategy(5.0), 2.0, params);
  MoneyDistribution d = max_entropy_distribution(5, 2.0);
  CHECK(eff == doctest::Approx((1.0 - d(0)) * 1.0 * 0.9 / 1000.0).epsilon(1e-12));
}

TEST_CASE("full equilibrium analysis at delta 0.9, m 3") {
  GameParams params(1000, 0.9, 0.1, 1.0, 3000);
  EquilibriumReport report = analyze_equilibria(params);
  REQUIRE(report.fixedPoints.size() == 3);
  CHECK(report.fixedPoints[0].gamma == 0.0);
  CHECK(report.fixedPoints[1].gamma == doctest::Approx(3.0).epsilon(1e-5));
  CHECK(report.fixedPoints[1].crossing);
  CHECK(report.fixedPoints[1].efficiency == 0.0);  // the boundary point is dead
  CHECK(report.fixedPoints[2].gamma == 10.0);
  CHECK(report.fixedPoints[2].efficiency > 0.0);
  CHECK(report.selected == 2);
  for (const FixedPoint& fp : report.fixedPoints) CHECK(fp.verified);
}

TEST_CASE("no nontrivial equilibrium when the future is cheap") {
  for (double delta : {0.3, 0.5}) {
    GameParams params(1000, delta, 0.1, 1.0, 2000);
    EquilibriumReport report = analyze_equilibria(params);
    REQUIRE(report.fixedPoints.size() == 1);
    CHECK(report.fixedPoints[0].gamma == 0.0);
    CHECK(report.selected == 0);
  }
}

TEST_CASE("ratio sweep agrees with the full analysis") {
  for (double delta : {0.7, 0.9}) {
    GameParams base(400, delta, 0.1, 1.0, 1);
    std::vector<double> grid{1.0, 1.5, 2.0, 2.5, 3.0};
    RatioTable table = optimal_ratio(base, grid);
    for (const RatioRow& row : table.rows) {
      GameParams params(400, delta, 0.1, 1.0,
                        static_cast<std::int64_t>(std::llround(row.m * 400)));
      EquilibriumReport report = analyze_equilibria(params);
      const FixedPoint& sel = report.fixedPoints[report.selected];
      if (row.hasEquilibrium) {
        CHECK(row.gammaStar == doctest::Approx(sel.gamma).epsilon(1e-5));
        CHECK(row.efficiency == doctest::Approx(sel.efficiency).epsilon(1e-9));
      } else {
        CHECK(sel.efficiency == 0.0);
      }
    }
  }
}

TEST_CASE("ratio sweep flags the dead grid") {
  GameParams base(200, 0.05, 0.5, 1.0, 1);
  std::vector<double> grid{1.0, 2.0};
  RatioTable table = optimal_ratio(base, grid);
  CHECK(table.degenerate);
  for (const RatioRow& row : table.rows) CHECK(!row.hasEquilibrium);
}

TEST_CASE("price and money supply are interchangeable") {
  // Doubling the price of a request with the money fixed plays the same game
  // as halving the money at unit price.
  GameParams halved(500, 0.9, 0.1, 1.0, 1000);
  const std::int64_t money = 2000, price = 2;
  GameParams priced(500, 0.9, 0.1, 1.0, money / price);
  EquilibriumReport a = analyze_equilibria(halved);
  EquilibriumReport b = analyze_equilibria(priced);
  CHECK(a.fixedPoints[a.selected].gamma == b.fixedPoints[b.selected].gamma);
}

TEST_CASE("equal money-per-agent ratios give identical curves") {
  RatioInvarianceResult same = ratio_invariance_check(200, 300, 200, 300, 0.9, 0.1, 1.0);
  CHECK(same.equal);

  RatioInvarianceResult scaled = ratio_invariance_check(200, 300, 400, 600, 0.9, 0.1, 1.0);
  CHECK(scaled.equal);
  CHECK(scaled.selectedFirst == scaled.selectedSecond);

  CHECK_THROWS_AS(ratio_invariance_check(200, 300, 200, 400, 0.9, 0.1, 1.0), DomainError);
}

TEST_CASE("altruist threshold closed form") {
  CHECK(altruist_threshold(0.1, 0.01, 0.9999) == 1146);
  double bound = altruist_threshold_bound(0.1, 0.01, 0.9999);
  CHECK(bound > 1145.0);
  CHECK(bound < 1146.0);

  CHECK(altruist_threshold(0.5, 0.5, 0.5) == 3);  // log_{1/2}(1/4) = 2, strict bound
  CHECK(altruist_threshold(0.1, 1.0, 0.9) == 1);
  CHECK(altruist_threshold(0.9, 0.9, 0.1) == 1);  // bound below one
  CHECK_THROWS_AS(altruist_threshold(0.0, 0.5, 0.5), DomainError);
  CHECK_THROWS_AS(altruist_threshold(0.5, 0.0, 0.5), DomainError);
  CHECK_THROWS_AS(altruist_threshold(0.5, 0.5, 1.0), DomainError);
}

TEST_CASE("curves do not depend on the worker count") {
  GameParams params(300, 0.85, 0.1, 1.0, 600);
  parallel::set_threads(1);
  BrCurve serial = compute_br_curve(params, 12);
  parallel::set_threads(parallel::enabled() ? 2 : 1);
  BrCurve par = compute_br_curve(params, 12);
  REQUIRE(serial.points.size() == par.points.size());
  for (std::size_t i = 0; i < serial.points.size(); ++i)
    CHECK(serial.points[i].response == par.points[i].response);
}
