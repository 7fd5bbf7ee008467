#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "scrip/distribution.hpp"
#include "scrip/rng.hpp"

using namespace scrip;

TEST_CASE("MoneyDistribution validates probabilities") {
  CHECK_NOTHROW(MoneyDistribution({0.5, 0.5}));
  CHECK_THROWS_AS(MoneyDistribution({0.5, 0.6}), DomainError);
  CHECK_THROWS_AS(MoneyDistribution({1.5, -0.5}), DomainError);
  CHECK_THROWS_AS(MoneyDistribution({}), DomainError);
  MoneyDistribution d({0.25, 0.5, 0.25});
  CHECK(d.mean() == doctest::Approx(1.0));
  CHECK(d.cdf(0) == doctest::Approx(0.25));
  CHECK(d.cdf(-1) == 0.0);
  CHECK(d.cdf(2) == 1.0);
}

TEST_CASE("entropy basics") {
  CHECK(entropy(MoneyDistribution({0.0, 1.0, 0.0})) == 0.0);
  CHECK(entropy(MoneyDistribution({0.5, 0.5})) == doctest::Approx(std::log(2.0)));
  int K = 7;
  std::vector<double> u(K + 1, 1.0 / (K + 1));
  CHECK(entropy(MoneyDistribution(u)) == doctest::Approx(std::log(K + 1.0)));
}

TEST_CASE("max entropy closed forms") {
  MoneyDistribution half = max_entropy_distribution(1, 0.5);
  CHECK(half(0) == doctest::Approx(0.5));
  CHECK(half(1) == doctest::Approx(0.5));

  MoneyDistribution uniform = max_entropy_distribution(2, 1.0);
  for (int j = 0; j <= 2; ++j) CHECK(uniform(j) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

  CHECK(max_entropy_distribution(4, 0.0)(0) == 1.0);
  CHECK(max_entropy_distribution(4, 4.0)(4) == 1.0);
  CHECK_THROWS_AS(max_entropy_distribution(4, 4.5), DomainError);
  CHECK_THROWS_AS(max_entropy_distribution(0, 0.0), DomainError);
}

TEST_CASE("max entropy on {0..5} with mean 2 matches the pinned solution") {
  MoneyDistribution d = max_entropy_distribution(5, 2.0);
  for (int j = 0; j <= 5; ++j)
    CHECK(d(j) == doctest::Approx(oracle::kMaxEnt52[static_cast<std::size_t>(j)])
                      .epsilon(1e-10));
  CHECK(entropy(d) == doctest::Approx(oracle::kMaxEnt52Entropy).epsilon(1e-12));
  CHECK(max_entropy_weight(5, 2.0) == doctest::Approx(oracle::kMaxEnt52Weight).epsilon(1e-10));
  // and the coordinate-search oracle agrees
  std::vector<double> viaSearch = oracle::max_entropy_search(5, 2.0);
  CHECK(std::abs(oracle::entropy_of(viaSearch) - entropy(d)) < 1e-6);
}

TEST_CASE("max entropy interior properties") {
  for (int K : {1, 2, 3, 5, 8}) {
    double prevWeight = 0.0;
    for (int i = 1; i < 10; ++i) {
      double m = K * i / 10.0;
      MoneyDistribution d = max_entropy_distribution(K, m);
      CHECK(std::abs(d.mean() - m) < 1e-9);
      // mirror symmetry: d*_{K,m}(j) = d*_{K,K-m}(K-j)
      MoneyDistribution mirror = max_entropy_distribution(K, K - m);
      for (int j = 0; j <= K; ++j) CHECK(std::abs(d(j) - mirror(K - j)) < 1e-10);
      // the family weight grows with the mean
      double w = max_entropy_weight(K, m);
      CHECK(w > prevWeight);
      prevWeight = w;
    }
  }
}

TEST_CASE("distances") {
  MoneyDistribution a({1.0, 0.0}), b({0.0, 1.0});
  CHECK(euclidean_distance(a, a) == 0.0);
  CHECK(euclidean_distance(a, b) == doctest::Approx(std::sqrt(2.0)));
  CHECK(squared_distance(a, b) == doctest::Approx(2.0));
  CHECK_THROWS_AS(euclidean_distance(a, MoneyDistribution({1.0, 0.0, 0.0})), DomainError);

  // triangle inequality on random triples
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    auto random_dist = [&] {
      std::vector<double> p(4);
      double sum = 0.0;
      for (double& v : p) {
        v = rng.next_double() + 1e-3;
        sum += v;
      }
      for (double& v : p) v /= sum;
      return MoneyDistribution(p);
    };
    MoneyDistribution x = random_dist(), y = random_dist(), z = random_dist();
    CHECK(euclidean_distance(x, z) <=
          euclidean_distance(x, y) + euclidean_distance(y, z) + 1e-12);
  }
}
