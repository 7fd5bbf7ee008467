#pragma once

#include <vector>

#include "scrip/errors.hpp"

namespace scrip {

/// Probability distribution over balances {0..K}. Probabilities must be
/// nonnegative and sum to 1 within 1e-12.
class MoneyDistribution {
 public:
  explicit MoneyDistribution(std::vector<double> probs);

  int support() const { return static_cast<int>(probs_.size()) - 1; }
  double operator()(int j) const { return probs_[static_cast<std::size_t>(j)]; }
  const std::vector<double>& probs() const { return probs_; }
  double mean() const { return mean_; }

  /// P(balance <= j); j < 0 yields 0.
  double cdf(int j) const;

 private:
  std::vector<double> probs_;
  double mean_ = 0.0;
};

/// Shannon entropy in nats; zero-probability terms contribute nothing.
double entropy(const MoneyDistribution& d);

/// The unique entropy maximizer on {0..support} with the given mean, i.e. the
/// exponential family d(j) proportional to lambda^j with lambda solved by
/// bisection on the (strictly increasing) mean. Endpoint means return point
/// masses; mean = support/2 returns the exact uniform distribution.
MoneyDistribution max_entropy_distribution(int support, double mean, double tol = 1e-12);

/// The lambda solved for by max_entropy_distribution; exposed so monotonicity
/// in the mean can be checked directly. Means at or beyond the endpoints and
/// the uniform midpoint are reported as 0, +inf is never returned.
double max_entropy_weight(int support, double mean, double tol = 1e-12);

double euclidean_distance(const MoneyDistribution& a, const MoneyDistribution& b);

/// Sum of squared coordinate differences. This is the form the concentration
/// set membership test uses; euclidean_distance is its square root.
double squared_distance(const MoneyDistribution& a, const MoneyDistribution& b);

}  // namespace scrip
