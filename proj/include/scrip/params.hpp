#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "scrip/errors.hpp"

namespace scrip {

/// The game tuple (n, delta, alpha, beta, M).
struct GameParams {
  int n = 0;              // agent count, >= 2
  double delta = 0.0;     // discount factor per time unit, in (0,1)
  double alpha = 0.0;     // cost of serving, in (0,1)
  double beta = 0.0;      // per-round ability probability, in (0,1]
  std::int64_t money = 0; // total dollars, >= 0

  GameParams() = default;
  GameParams(int n_, double delta_, double alpha_, double beta_, std::int64_t money_)
      : n(n_), delta(delta_), alpha(alpha_), beta(beta_), money(money_) {
    validate();
  }

  void validate() const {
    if (n < 2) throw DomainError("GameParams.n must be >= 2, got " + std::to_string(n));
    if (!(delta > 0.0 && delta < 1.0))
      throw DomainError("GameParams.delta must lie in (0,1), got " + std::to_string(delta));
    if (!(alpha > 0.0 && alpha < 1.0))
      throw DomainError("GameParams.alpha must lie in (0,1), got " + std::to_string(alpha));
    if (!(beta > 0.0 && beta <= 1.0))
      throw DomainError("GameParams.beta must lie in (0,1], got " + std::to_string(beta));
    if (money < 0) throw DomainError("GameParams.money must be >= 0");
  }

  /// Average dollars per agent, M/n.
  double mean() const { return static_cast<double>(money) / n; }
};

/// Per-round discount delta^(1/n): rounds are 1/n time units apart.
inline double effective_discount(double delta, int n) {
  if (!(delta > 0.0 && delta < 1.0))
    throw DomainError("effective_discount: delta must lie in (0,1)");
  if (n < 1) throw DomainError("effective_discount: n must be >= 1");
  return std::pow(delta, 1.0 / n);
}

/// Threshold strategy with real index gamma = k + gamma', meaning: play the
/// integer threshold k with probability 1-gamma' and k+1 with probability
/// gamma'. gamma = 0 never volunteers.
class ThresholdStrategy {
 public:
  ThresholdStrategy() = default;
  explicit ThresholdStrategy(double gamma) : gamma_(gamma) {
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
      throw DomainError("ThresholdStrategy: gamma must be a finite nonnegative real");
  }

  double gamma() const { return gamma_; }
  int k() const { return static_cast<int>(std::floor(gamma_)); }
  double gamma_prime() const { return gamma_ - k(); }

  friend bool operator==(const ThresholdStrategy& a, const ThresholdStrategy& b) {
    return a.gamma_ == b.gamma_;
  }

 private:
  double gamma_ = 0.0;
};

struct Standard {
  ThresholdStrategy strategy;
};

/// Always volunteers when able; serving yields +alphaPrime instead of -alpha.
struct Altruist {
  double alphaPrime = 1.0;
};

using AgentKind = std::variant<Standard, Altruist>;

inline AgentKind make_standard(double gamma) { return Standard{ThresholdStrategy(gamma)}; }

inline AgentKind make_altruist(double alphaPrime) {
  if (!(alphaPrime > 0.0)) throw DomainError("Altruist.alphaPrime must be > 0");
  return Altruist{alphaPrime};
}

inline std::vector<AgentKind> uniform_population(int n, double gamma) {
  return std::vector<AgentKind>(static_cast<std::size_t>(n), make_standard(gamma));
}

}  // namespace scrip
