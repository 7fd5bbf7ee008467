#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "scrip/mdp.hpp"
#include "scrip/rng.hpp"

using namespace scrip;

namespace {

MeanFieldModel toy_model(double spend, double earn, double discount, int n = 100) {
  MeanFieldModel m;
  m.n = n;
  m.spendProb = spend;
  m.earnProb = earn;
  m.roundDiscount = discount;
  m.payingFraction = 0.8;
  m.willingFraction = 0.5;
  m.expectedWilling = (n - 1) * 0.5;
  m.satisfyProb = spend * n;
  return m;
}

}  // namespace

TEST_CASE("mean field model basics") {
  GameParams params(1000, 0.9, 0.1, 1.0, 2000);

  SUBCASE("gamma = 0 is the dead system") {
    MeanFieldModel m = mean_field_model(max_entropy_distribution(5, 2.0),
                                        ThresholdStrategy(0.0), params);
    CHECK(m.spendProb == 0.0);
    CHECK(m.earnProb == 0.0);
    CHECK(m.willingFraction == 0.0);
  }

  SUBCASE("beta = 1 collapses the selection factors") {
    MoneyDistribution d = max_entropy_distribution(5, 2.0);
    MeanFieldModel m = mean_field_model(d, ThresholdStrategy(5.0), params);
    CHECK(m.satisfyProb == doctest::Approx(1.0));
    CHECK(m.payingFraction == doctest::Approx(1.0 - d(0)));
    CHECK(m.willingFraction == doctest::Approx(d.cdf(4)));
    // chi = 1/Wc at beta = 1, so earn = ((n-1)/n) rho / Wc
    double expected = (999.0 / 1000.0) * m.payingFraction / m.expectedWilling;
    CHECK(m.earnProb == doctest::Approx(expected).epsilon(1e-12));
  }

  SUBCASE("aggregate spending balances aggregate earning") {
    for (double beta : {1.0, 0.6, 0.2}) {
      GameParams p(500, 0.9, 0.1, beta, 750);
      MoneyDistribution d = max_entropy_distribution(4, 1.5);
      MeanFieldModel m = mean_field_model(d, ThresholdStrategy(4.0), p);
      double spendSide = p.n * m.payingFraction * m.spendProb;
      double earnSide = p.n * m.willingFraction * m.earnProb;
      CHECK(std::abs(spendSide - earnSide) < 1e-9);
    }
  }

  SUBCASE("positive gamma with nobody willing is rejected") {
    MoneyDistribution rich({0.0, 0.0, 1.0});  // everyone sits at the threshold
    CHECK_THROWS_AS(mean_field_model(rich, ThresholdStrategy(2.0), params), DomainError);
  }
}

TEST_CASE("value iteration equals the all-policy linear-solve oracle") {
  Rng rng(31);
  for (int trial = 0; trial < 12; ++trial) {
    double spend = 0.002 + 0.01 * rng.next_double();
    double earn = 0.002 + 0.01 * rng.next_double();
    double discount = 0.9 + 0.099 * rng.next_double();
    double alpha = 0.05 + 0.6 * rng.next_double();
    int bMax = 3 + static_cast<int>(rng.next_below(3));
    MeanFieldModel model = toy_model(spend, earn, discount);

    std::vector<double> expected = oracle::optimal_value_bruteforce(model, alpha, bMax);
    ValueFunction uni = solve_mdp(model, alpha, bMax, 1e-11, MdpMethod::Uniformized);
    ValueFunction per = solve_mdp(model, alpha, bMax, 1e-11, MdpMethod::PerRound);
    for (int b = 0; b <= bMax; ++b) {
      CHECK(uni.value[static_cast<std::size_t>(b)] ==
            doctest::Approx(expected[static_cast<std::size_t>(b)]).epsilon(1e-7));
      CHECK(per.value[static_cast<std::size_t>(b)] ==
            doctest::Approx(expected[static_cast<std::size_t>(b)]).epsilon(1e-7));
      CHECK(uni.volunteer[static_cast<std::size_t>(b)] ==
            per.volunteer[static_cast<std::size_t>(b)]);
    }
  }
}

TEST_CASE("value function structure: monotone, concave, threshold policy") {
  Rng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    MeanFieldModel model = toy_model(0.001 + 0.01 * rng.next_double(),
                                     0.001 + 0.01 * rng.next_double(),
                                     0.95 + 0.0499 * rng.next_double());
    double alpha = 0.05 + 0.9 * rng.next_double();
    ValueFunction vf = solve_mdp(model, alpha, 8, 1e-10);
    for (std::size_t b = 1; b < vf.value.size(); ++b) CHECK(vf.value[b] >= vf.value[b - 1] - 1e-12);
    for (std::size_t b = 2; b < vf.value.size(); ++b)
      CHECK(vf.value[b] - vf.value[b - 1] <= vf.value[b - 1] - vf.value[b - 2] + 1e-10);
    CHECK_NOTHROW(extract_threshold(vf));
  }
}

TEST_CASE("degenerate models never volunteer") {
  ValueFunction noEarn = solve_mdp(toy_model(0.005, 0.0, 0.999), 0.1, 5, 1e-10);
  for (auto v : noEarn.volunteer) CHECK(!v);

  // a nearly myopic agent sees only the immediate serving cost
  ValueFunction myopic =
      solve_mdp(toy_model(0.005, 0.01, 0.01), 0.1, 5, 1e-10, MdpMethod::PerRound);
  for (auto v : myopic.volunteer) CHECK(!v);
}

TEST_CASE("extract_threshold reads the policy") {
  ValueFunction vf;
  vf.value = {0, 1, 2, 3, 4};
  vf.volunteer = {1, 1, 1, 0, 0};
  vf.actionGap = {0.5, 0.4, 0.3, -0.2, -0.4};
  BestResponseResult r = extract_threshold(vf);
  CHECK(r.kind == BestResponseResult::Kind::Unique);
  CHECK(r.value == 3);
  CHECK(!r.capSaturated);
  CHECK(r.contains(3.0));
  CHECK(!r.contains(2.5));

  vf.volunteer = {1, 1, 1, 1, 1};
  r = extract_threshold(vf);
  CHECK(r.value == 4);
  CHECK(r.capSaturated);

  vf.volunteer = {1, 0, 1, 0, 0};
  CHECK_THROWS_AS(extract_threshold(vf), InvariantError);

  // a vanishing action gap at the last volunteering balance means both
  // adjacent thresholds (and all mixtures between) are best responses
  vf.volunteer = {1, 1, 1, 0, 0};
  vf.actionGap = {0.5, 0.4, 1e-12, -0.2, -0.4};
  r = extract_threshold(vf);
  CHECK(r.kind == BestResponseResult::Kind::Interval);
  CHECK(r.value == 2);
  CHECK(r.lo() == 2.0);
  CHECK(r.hi() == 3.0);
  CHECK(r.contains(2.4));
}

TEST_CASE("an engineered indifference is reported as an interval") {
  // Tune alpha by bisection on the oracle's value difference between the
  // threshold-2 and threshold-3 policies so both are exactly optimal.
  MeanFieldModel model = toy_model(0.004, 0.006, 0.999);
  const int bMax = 4;
  auto gap = [&](double alpha) {
    std::vector<double> v2 = oracle::policy_value(model, alpha, bMax, {1, 1, 0, 0, 0});
    std::vector<double> v3 = oracle::policy_value(model, alpha, bMax, {1, 1, 1, 0, 0});
    return v3[0] - v2[0];
  };
  double lo = 0.01, hi = 0.9;
  REQUIRE(gap(lo) > 0.0);
  REQUIRE(gap(hi) < 0.0);
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (gap(mid) > 0.0 ? lo : hi) = mid;
  }
  double alphaStar = 0.5 * (lo + hi);
  ValueFunction vf = solve_mdp(model, alphaStar, bMax, 1e-12);
  BestResponseResult r = extract_threshold(vf, 1e-9);
  CHECK(r.kind == BestResponseResult::Kind::Interval);
  CHECK(r.value == 2);
}

TEST_CASE("best response composition") {
  GameParams params(1000, 0.9, 0.1, 1.0, 3000);

  SUBCASE("dead and rich regimes respond 0") {
    CHECK(best_response(params, ThresholdStrategy(0.0)).value == 0);
    CHECK(best_response(params, ThresholdStrategy(2.0)).value == 0);  // m >= ceil(gamma)
    CHECK(best_response(params, ThresholdStrategy(3.0)).value == 0);
    GameParams impatient(1000, 1e-9, 0.1, 1.0, 2000);
    BestResponseResult r = best_response(impatient, ThresholdStrategy(5.0));
    CHECK(r.value == 0);
  }

  SUBCASE("pinned curve values at delta 0.9, m 3") {
    // cross-checked against an independent prototype of the same pipeline
    CHECK(best_response(params, ThresholdStrategy(4.0)).value == 5);
    CHECK(best_response(params, ThresholdStrategy(5.0)).value == 7);
    CHECK(best_response(params, ThresholdStrategy(8.0)).value == 10);
    CHECK(best_response(params, ThresholdStrategy(10.0)).value == 10);  // fixed point
  }

  SUBCASE("uniformized and per-round solves pick the same threshold") {
    GameParams small(50, 0.9, 0.1, 1.0, 100);
    for (double g : {3.0, 4.0, 6.0}) {
      BestResponseOptions uni, per;
      per.method = MdpMethod::PerRound;
      CHECK(best_response(small, ThresholdStrategy(g), uni) ==
            best_response(small, ThresholdStrategy(g), per));
    }
  }
}
