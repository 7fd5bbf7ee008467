#include "scrip/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace scrip {

MoneyDistribution::MoneyDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw DomainError("MoneyDistribution: empty probability vector");
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0)) throw DomainError("MoneyDistribution: negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw DomainError("MoneyDistribution: probabilities sum to " + std::to_string(sum));
  double m = 0.0;
  for (std::size_t j = 0; j < probs_.size(); ++j) m += static_cast<double>(j) * probs_[j];
  mean_ = m;
}

double MoneyDistribution::cdf(int j) const {
  if (j < 0) return 0.0;
  if (j >= support()) return 1.0;
  double s = 0.0;
  for (int i = 0; i <= j; ++i) s += probs_[static_cast<std::size_t>(i)];
  return s;
}

double entropy(const MoneyDistribution& d) {
  double h = 0.0;
  for (double p : d.probs())
    if (p > 0.0) h -= p * std::log(p);
  return h;
}

namespace {

// Mean of the geometric-weight family d(j) ~ lambda^j on {0..K}, lambda <= 1.
double family_mean(int K, double lambda) {
  double z = 0.0, s = 0.0, w = 1.0;
  for (int j = 0; j <= K; ++j) {
    z += w;
    s += j * w;
    w *= lambda;
  }
  return s / z;
}

std::vector<double> family_probs(int K, double lambda) {
  std::vector<double> p(static_cast<std::size_t>(K) + 1);
  double z = 0.0, w = 1.0;
  for (int j = 0; j <= K; ++j) {
    p[static_cast<std::size_t>(j)] = w;
    z += w;
    w *= lambda;
  }
  for (double& v : p) v /= z;
  return p;
}

// Bisection for lambda in (0,1] with family mean equal to target (target must
// be <= K/2; larger means are handled by mirroring the distribution).
double solve_lambda(int K, double target, double tol) {
  double lo = 1e-18, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double m = family_mean(K, mid);
    if (std::abs(m - target) < tol) return mid;
    if (m < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

MoneyDistribution max_entropy_distribution(int support, double mean, double tol) {
  if (support < 1) throw DomainError("max_entropy_distribution: support must be >= 1");
  if (!(mean >= 0.0 && mean <= support))
    throw DomainError("max_entropy_distribution: mean " + std::to_string(mean) +
                      " outside [0, " + std::to_string(support) + "]");
  std::vector<double> p(static_cast<std::size_t>(support) + 1, 0.0);
  if (mean == 0.0) {
    p.front() = 1.0;
    return MoneyDistribution(std::move(p));
  }
  if (mean == static_cast<double>(support)) {
    p.back() = 1.0;
    return MoneyDistribution(std::move(p));
  }
  if (mean == 0.5 * support) {
    std::fill(p.begin(), p.end(), 1.0 / (support + 1));
    return MoneyDistribution(std::move(p));
  }
  bool mirrored = mean > 0.5 * support;
  double target = mirrored ? support - mean : mean;
  double lambda = solve_lambda(support, target, tol);
  p = family_probs(support, lambda);
  if (mirrored) std::reverse(p.begin(), p.end());
  return MoneyDistribution(std::move(p));
}

double max_entropy_weight(int support, double mean, double tol) {
  if (support < 1) throw DomainError("max_entropy_weight: support must be >= 1");
  if (!(mean > 0.0 && mean < support))
    throw DomainError("max_entropy_weight: mean must lie strictly inside (0, support)");
  if (mean == 0.5 * support) return 1.0;
  bool mirrored = mean > 0.5 * support;
  double target = mirrored ? support - mean : mean;
  double lambda = solve_lambda(support, target, tol);
  return mirrored ? 1.0 / lambda : lambda;
}

double squared_distance(const MoneyDistribution& a, const MoneyDistribution& b) {
  if (a.support() != b.support())
    throw DomainError("distance: distributions have different supports");
  double s = 0.0;
  for (int j = 0; j <= a.support(); ++j) {
    double d = a(j) - b(j);
    s += d * d;
  }
  return s;
}

double euclidean_distance(const MoneyDistribution& a, const MoneyDistribution& b) {
  return std::sqrt(squared_distance(a, b));
}

}  // namespace scrip
