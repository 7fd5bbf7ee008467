// Test-only oracles, deliberately independent of the library's solution paths:
// the entropy maximizer works by projected coordinate search on the simplex,
// and the MDP oracle evaluates every policy through dense linear solves.
#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "scrip/mdp.hpp"

namespace oracle {

// --- frozen high-precision constants ---------------------------------------

// exp(ln(0.9999)/1000), 128-bit evaluation
inline constexpr double kEffectiveDiscount_9999_1000 = 0.9999998999950046671415;

// Entropy maximizer on {0..5} with mean 2: weight, probabilities, entropy.
inline constexpr double kMaxEnt52Weight = 0.8397685748659789813701;
inline constexpr std::array<double, 6> kMaxEnt52 = {
    0.24678237923367717598, 0.20724008691110064824, 0.17403371244043661550,
    0.14614804267474105356, 0.12273053351641957349, 0.10306524522362493322};
inline constexpr double kMaxEnt52Entropy = 1.7485062488769672189;

// Exact out-of-set counts for the concentration test at k=2, m=1, eps=0.05,
// from an independent full enumeration.
inline constexpr std::array<std::array<long long, 3>, 3> kConcentrationCounts = {{
    {4, 7, 19},
    {8, 127, 1107},
    {12, 4027, 73789},
}};

// --- entropy maximization by projected coordinate search --------------------

inline double entropy_of(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log(v);
  return h;
}

/// Maximizes entropy over distributions on {0..K} with the given mean using
/// triple moves (take 2s from j, give s to j-1 and j+1) that preserve both
/// the total mass and the mean; the step shrinks from coarse to fine.
inline std::vector<double> max_entropy_search(int K, double mean, double coarse = 1e-3,
                                              double fine = 1e-6) {
  std::vector<double> p(static_cast<std::size_t>(K) + 1, 0.0);
  int j = std::min(static_cast<int>(std::floor(mean)), K - 1);
  if (mean <= 0.0) {
    p[0] = 1.0;
    return p;
  }
  if (mean >= K) {
    p.back() = 1.0;
    return p;
  }
  p[static_cast<std::size_t>(j)] = (j + 1) - mean;
  p[static_cast<std::size_t>(j) + 1] = mean - j;

  double h = entropy_of(p);
  for (double step = coarse; step >= fine; step /= 10.0) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (int c = 1; c < K; ++c) {
        for (int dir : {+1, -1}) {
          // dir = +1 spreads mass away from c, -1 concentrates it there.
          const double d2 = dir * 2.0 * step;
          const double d1 = -dir * step;
          std::size_t uc = static_cast<std::size_t>(c);
          if (p[uc] - d2 < 0.0 || p[uc - 1] - d1 < 0.0 || p[uc + 1] - d1 < 0.0) continue;
          p[uc] -= d2;
          p[uc - 1] -= d1;
          p[uc + 1] -= d1;
          double hNew = entropy_of(p);
          if (hNew > h + 1e-15) {
            h = hNew;
            improved = true;
          } else {
            p[uc] += d2;
            p[uc - 1] += d1;
            p[uc + 1] += d1;
          }
        }
      }
    }
  }
  return p;
}

// --- dense all-policy MDP oracle --------------------------------------------

/// Value of a fixed policy by solving (I - gd P) V = r with Gaussian
/// elimination over the per-round dynamics.
inline std::vector<double> policy_value(const scrip::MeanFieldModel& model, double alpha,
                                        int bMax, const std::vector<bool>& volunteer) {
  const int states = bMax + 1;
  const double s = model.spendProb, e = model.earnProb, gd = model.roundDiscount;
  std::vector<std::vector<double>> a(static_cast<std::size_t>(states),
                                     std::vector<double>(static_cast<std::size_t>(states) + 1,
                                                         0.0));
  for (int b = 0; b < states; ++b) {
    double sb = b > 0 ? s : 0.0;
    double eb = volunteer[static_cast<std::size_t>(b)] ? e : 0.0;
    int up = std::min(b + 1, bMax);
    auto& row = a[static_cast<std::size_t>(b)];
    row[static_cast<std::size_t>(b)] += 1.0;
    if (b > 0) row[static_cast<std::size_t>(b) - 1] -= gd * sb;
    row[static_cast<std::size_t>(up)] -= gd * eb;
    row[static_cast<std::size_t>(b)] -= gd * (1.0 - sb - eb);
    row[static_cast<std::size_t>(states)] = sb * 1.0 - eb * alpha;
  }
  for (int c = 0; c < states; ++c) {  // partial pivoting
    int piv = c;
    for (int rI = c + 1; rI < states; ++rI)
      if (std::abs(a[static_cast<std::size_t>(rI)][static_cast<std::size_t>(c)]) >
          std::abs(a[static_cast<std::size_t>(piv)][static_cast<std::size_t>(c)]))
        piv = rI;
    std::swap(a[static_cast<std::size_t>(c)], a[static_cast<std::size_t>(piv)]);
    for (int rI = 0; rI < states; ++rI) {
      if (rI == c) continue;
      double f = a[static_cast<std::size_t>(rI)][static_cast<std::size_t>(c)] /
                 a[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)];
      for (int cc = c; cc <= states; ++cc)
        a[static_cast<std::size_t>(rI)][static_cast<std::size_t>(cc)] -=
            f * a[static_cast<std::size_t>(c)][static_cast<std::size_t>(cc)];
    }
  }
  std::vector<double> v(static_cast<std::size_t>(states));
  for (int b = 0; b < states; ++b)
    v[static_cast<std::size_t>(b)] = a[static_cast<std::size_t>(b)][static_cast<std::size_t>(
                                         states)] /
                                     a[static_cast<std::size_t>(b)][static_cast<std::size_t>(b)];
  return v;
}

/// Optimal value function as the pointwise maximum over every deterministic
/// policy (2^(bMax+1) of them); feasible for the small oracles.
inline std::vector<double> optimal_value_bruteforce(const scrip::MeanFieldModel& model,
                                                    double alpha, int bMax) {
  const int states = bMax + 1;
  std::vector<double> best(static_cast<std::size_t>(states),
                           -std::numeric_limits<double>::infinity());
  for (unsigned mask = 0; mask < (1u << states); ++mask) {
    std::vector<bool> volunteer(static_cast<std::size_t>(states));
    for (int b = 0; b < states; ++b) volunteer[static_cast<std::size_t>(b)] = mask & (1u << b);
    std::vector<double> v = policy_value(model, alpha, bMax, volunteer);
    for (int b = 0; b < states; ++b)
      best[static_cast<std::size_t>(b)] = std::max(best[static_cast<std::size_t>(b)],
                                                   v[static_cast<std::size_t>(b)]);
  }
  return best;
}

}  // namespace oracle
