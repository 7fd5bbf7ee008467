#include "scrip/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "scrip/errors.hpp"

namespace scrip {

MeanFieldModel mean_field_model(const MoneyDistribution& dStar, const ThresholdStrategy& gamma,
                                const GameParams& params) {
  MeanFieldModel m;
  m.n = params.n;
  m.roundDiscount = effective_discount(params.delta, params.n);
  if (gamma.gamma() == 0.0) return m;  // nobody volunteers, nothing moves

  const int k = gamma.k();
  m.payingFraction = 1.0 - dStar(0);
  double w = dStar.cdf(k - 1);
  if (k <= dStar.support()) w += gamma.gamma_prime() * dStar(k);
  m.willingFraction = w;
  if (w <= 0.0)
    throw DomainError("mean_field_model: gamma > 0 but nobody is ever willing to serve");

  const double others = static_cast<double>(params.n - 1);
  m.expectedWilling = std::max(1.0, others * w);
  m.satisfyProb = 1.0 - std::pow(1.0 - params.beta, others * w);
  const double chi =
      (1.0 - std::pow(1.0 - params.beta, m.expectedWilling)) / (m.expectedWilling * params.beta);
  m.spendProb = m.satisfyProb / params.n;
  m.earnProb = (others / params.n) * m.payingFraction * params.beta * chi;
  return m;
}

namespace {

struct Backup {
  // Precomputed pieces of the Bellman operator for one method.
  double rewardScale;   // multiplies the per-round expected reward
  double discount;      // contraction factor per sweep
  double pSpend;        // transition weight towards balance-1 (solvent states)
  double pEarn;         // transition weight towards balance+1 (if volunteering)
};

}  // namespace

ValueFunction solve_mdp(const MeanFieldModel& model, double alpha, int bMax, double tol,
                        MdpMethod method, const std::vector<double>* warmStart) {
  if (bMax < 1) throw DomainError("solve_mdp: bMax must be >= 1");
  if (!(model.roundDiscount > 0.0 && model.roundDiscount < 1.0))
    throw DomainError("solve_mdp: roundDiscount must lie in (0,1)");
  if (!(tol > 0.0)) throw DomainError("solve_mdp: tol must be positive");

  const double s = model.spendProb;
  const double e = model.earnProb;
  const double gd = model.roundDiscount;
  const std::size_t states = static_cast<std::size_t>(bMax) + 1;

  ValueFunction vf;
  vf.value.assign(states, 0.0);
  vf.volunteer.assign(states, 0);
  vf.actionGap.assign(states, 0.0);
  if (warmStart && warmStart->size() > 1) {
    for (std::size_t b = 0; b < states; ++b)
      vf.value[b] = b < warmStart->size() ? (*warmStart)[b] : warmStart->back();
  }

  Backup bk{};
  if (method == MdpMethod::Uniformized) {
    // Fold the shared self-loop into the reward scaling: with event mass
    // lambda = s + e per round, V is the fixed point of the same operator on
    // the event-jump chain with discount gd*lambda / (1 - gd*(1-lambda)).
    const double lambda = s + e;
    if (lambda <= 0.0) {
      // Degenerate model: nothing ever happens, value zero everywhere.
      return vf;
    }
    const double denom = 1.0 - gd * (1.0 - lambda);
    bk = Backup{1.0 / denom, gd * lambda / denom, s / lambda, e / lambda};
  } else {
    bk = Backup{1.0, gd, s, e};
  }

  const double stop = tol * (1.0 - bk.discount);
  const std::int64_t maxIterations =
      200 + static_cast<std::int64_t>(120.0 / std::max(1e-12, 1.0 - bk.discount));
  std::vector<double> next(states, 0.0);

  for (vf.iterations = 1; vf.iterations <= maxIterations; ++vf.iterations) {
    double diff = 0.0;
    for (std::size_t b = 0; b < states; ++b) {
      const bool solvent = b > 0;
      const double ps = solvent ? bk.pSpend : 0.0;
      const double rs = solvent ? s : 0.0;
      const double down = solvent ? vf.value[b - 1] : vf.value[b];
      const double up = b + 1 < states ? vf.value[b + 1] : vf.value[b];
      const double qNo = bk.rewardScale * rs + bk.discount * (ps * down + (1.0 - ps) * vf.value[b]);
      const double qYes = bk.rewardScale * (rs - e * alpha) +
                          bk.discount * (ps * down + bk.pEarn * up +
                                         (1.0 - ps - bk.pEarn) * vf.value[b]);
      next[b] = std::max(qNo, qYes);
      diff = std::max(diff, std::abs(next[b] - vf.value[b]));
    }
    vf.value.swap(next);
    if (diff < stop) break;
    if (vf.iterations == maxIterations)
      throw InvariantError("solve_mdp: value iteration failed to converge after " +
                           std::to_string(maxIterations) + " sweeps");
  }

  for (std::size_t b = 0; b < states; ++b) {
    const bool solvent = b > 0;
    const double ps = solvent ? bk.pSpend : 0.0;
    const double rs = solvent ? s : 0.0;
    const double down = solvent ? vf.value[b - 1] : vf.value[b];
    const double up = b + 1 < states ? vf.value[b + 1] : vf.value[b];
    const double qNo = bk.rewardScale * rs + bk.discount * (ps * down + (1.0 - ps) * vf.value[b]);
    const double qYes = bk.rewardScale * (rs - e * alpha) +
                        bk.discount * (ps * down + bk.pEarn * up +
                                       (1.0 - ps - bk.pEarn) * vf.value[b]);
    vf.actionGap[b] = qYes - qNo;
    // Ties volunteer (both actions optimal, and the indifference-interval
    // report keys off the gap at the last volunteering balance), except when
    // earning is impossible and the action is vacuous.
    vf.volunteer[b] = e > 0.0 && qYes >= qNo ? 1 : 0;
  }
  return vf;
}

BestResponseResult extract_threshold(const ValueFunction& vf, double indifferenceTol) {
  const int states = static_cast<int>(vf.volunteer.size());
  int stop = states;
  for (int b = 0; b < states; ++b) {
    if (!vf.volunteer[static_cast<std::size_t>(b)]) {
      stop = b;
      break;
    }
  }
  for (int b = stop; b < states; ++b)
    if (vf.volunteer[static_cast<std::size_t>(b)])
      throw InvariantError("extract_threshold: greedy policy is not of threshold form "
                           "(volunteers again at balance " + std::to_string(b) + ")");

  BestResponseResult out;
  if (stop == states) {
    out.kind = BestResponseResult::Kind::Unique;
    out.value = states - 1;  // bMax
    out.capSaturated = true;
    return out;
  }
  out.value = stop;
  if (stop >= 1 &&
      std::abs(vf.actionGap[static_cast<std::size_t>(stop) - 1]) <= indifferenceTol) {
    out.kind = BestResponseResult::Kind::Interval;
    out.value = stop - 1;
  }
  return out;
}

BestResponseResult best_response(const GameParams& params, const ThresholdStrategy& others,
                                 const BestResponseOptions& options) {
  params.validate();
  if (others.gamma() == 0.0) return BestResponseResult{};  // dead system, stay at 0

  const int support = static_cast<int>(std::ceil(others.gamma()));
  const double m = params.mean();
  if (m >= static_cast<double>(support)) return BestResponseResult{};  // everyone stays rich

  MoneyDistribution dStar = max_entropy_distribution(support, m);
  MeanFieldModel model = mean_field_model(dStar, others, params);
  const int bMax = options.bMaxOverride > 0
                       ? options.bMaxOverride
                       : std::max(support + 2, static_cast<int>(std::ceil(m)) + 2);
  ValueFunction vf = solve_mdp(model, params.alpha, bMax, options.tol, options.method,
                               options.warmStart);
  return extract_threshold(vf, options.indifferenceTol);
}

}  // namespace scrip
