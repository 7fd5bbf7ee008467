#pragma once

#include <cstdint>
#include <vector>

#include "scrip/distribution.hpp"
#include "scrip/params.hpp"

namespace scrip {

/// Per-round event probabilities one agent sees in steady state when everyone
/// else plays the same threshold strategy with balance distribution dStar.
struct MeanFieldModel {
  int n = 0;
  double payingFraction = 0.0;   // rho: a random other agent holds >= $1
  double willingFraction = 0.0;  // w: a random other agent volunteers for a solvent requester
  double expectedWilling = 0.0;  // Wc = max(1, (n-1) w)
  double satisfyProb = 0.0;      // q = 1 - (1-beta)^((n-1) w)
  double spendProb = 0.0;        // P(own request served this round | balance > 0) = q/n
  double earnProb = 0.0;         // P(earn this round | willing) = ((n-1)/n) rho beta chi
  double roundDiscount = 0.0;    // delta^(1/n)
};

/// Builds the model from the steady-state distribution of the others. gamma=0
/// yields the dead model (all probabilities zero); a positive gamma whose
/// distribution leaves nobody willing is a domain error.
MeanFieldModel mean_field_model(const MoneyDistribution& dStar, const ThresholdStrategy& gamma,
                                const GameParams& params);

struct ValueFunction {
  std::vector<double> value;
  std::vector<std::uint8_t> volunteer;  // greedy action per balance
  std::vector<double> actionGap;        // Q(volunteer) - Q(not)
  std::int64_t iterations = 0;
};

enum class MdpMethod {
  /// Value iteration on the uniformized chain: identical fixed point and
  /// policy, but contraction per sweep is governed by the event rate instead
  /// of the raw per-round discount, so it converges orders of magnitude
  /// faster when rounds are short (large n).
  Uniformized,
  /// Plain per-round value iteration.
  PerRound,
};

/// Optimal saving policy for one agent: each round it may spend (reward +1,
/// balance -1) with spendProb when solvent, and, if volunteering, earn
/// (reward -alpha, balance +1, capped at bMax) with earnProb. Iterates until
/// the sup-norm step is below tol * (1 - effective contraction).
ValueFunction solve_mdp(const MeanFieldModel& model, double alpha, int bMax, double tol = 1e-9,
                        MdpMethod method = MdpMethod::Uniformized,
                        const std::vector<double>* warmStart = nullptr);

/// Best response in threshold form: either a unique integer threshold or an
/// indifference interval [value, value+1] on which every mixture is optimal.
struct BestResponseResult {
  enum class Kind { Unique, Interval };
  Kind kind = Kind::Unique;
  int value = 0;
  bool capSaturated = false;  // policy still volunteered at the balance cap

  double lo() const { return value; }
  double hi() const { return kind == Kind::Interval ? value + 1.0 : value; }
  bool contains(double gamma) const { return lo() <= gamma && gamma <= hi(); }

  friend bool operator==(const BestResponseResult& a, const BestResponseResult& b) {
    return a.kind == b.kind && a.value == b.value && a.capSaturated == b.capSaturated;
  }
};

/// Reads the threshold off the greedy policy: the first balance that stops
/// volunteering. A non-threshold policy is an invariant violation. An action
/// gap within indifferenceTol at the last volunteering balance reports the
/// indifference interval instead.
BestResponseResult extract_threshold(const ValueFunction& vf, double indifferenceTol = 1e-9);

struct BestResponseOptions {
  double tol = 1e-9;
  double indifferenceTol = 1e-9;
  MdpMethod method = MdpMethod::Uniformized;
  int bMaxOverride = 0;                       // 0: max(ceil(gamma)+2, ceil(m)+2)
  const std::vector<double>* warmStart = nullptr;
};

/// Best response to everyone else playing S_gamma in the given game: composes
/// the maximum-entropy steady state on {0..ceil(gamma)}, the mean-field
/// model, the MDP solve and the threshold extraction. Means at or above
/// ceil(gamma) leave nobody willing to work, so the response is 0.
BestResponseResult best_response(const GameParams& params, const ThresholdStrategy& others,
                                 const BestResponseOptions& options = {});

}  // namespace scrip
