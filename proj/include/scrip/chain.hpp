#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "scrip/rational.hpp"

namespace scrip {

/// All balance vectors in {0..k}^n with total money M, in lexicographic
/// order. States are stored flat (row-major, one byte per balance).
class ChainStateSpace {
 public:
  ChainStateSpace(int k, int n, std::int64_t money, std::vector<std::uint8_t> flat);

  int k() const { return k_; }
  int n() const { return n_; }
  std::int64_t money() const { return money_; }
  std::size_t size() const { return count_; }

  std::span<const std::uint8_t> state(std::size_t index) const {
    return {flat_.data() + index * static_cast<std::size_t>(n_), static_cast<std::size_t>(n_)};
  }
  /// Index of a balance vector; throws if it is not in the space.
  std::size_t index_of(std::span<const int> balances) const;
  std::size_t index_of(std::span<const std::uint8_t> balances) const;

 private:
  int k_, n_;
  std::int64_t money_;
  std::size_t count_;
  std::vector<std::uint8_t> flat_;
};

/// Exact number of states without materializing them (saturating).
std::uint64_t count_states(int k, int n, std::int64_t money);

/// Complete duplicate-free enumeration; rejects spaces larger than the budget.
ChainStateSpace enumerate_states(int k, int n, std::int64_t money,
                                 std::uint64_t budget = 1'000'000);

/// Row-stochastic sparse matrix, CSR with explicit diagonal entries.
struct SparseMatrix {
  std::size_t size = 0;
  std::vector<std::size_t> rowPtr;
  std::vector<std::uint32_t> col;
  std::vector<double> val;

  SparseMatrix transpose() const;
};

struct RationalRow {
  std::vector<std::pair<std::uint32_t, Rational>> entries;  // off-diagonal, sorted by column
  Rational selfLoop;
};

/// Exact transition matrix of the all-same-threshold money chain: a move
/// takes one dollar from a solvent requester j to an agent i below the
/// threshold with probability (1/n) * (1-(1-beta)^W) / W, where W counts the
/// other agents below the threshold. Everything else stays put (self-loop).
std::vector<RationalRow> transition_matrix_rational(const ChainStateSpace& space, Rational beta);

/// Same matrix in double precision.
SparseMatrix transition_matrix(const ChainStateSpace& space, double beta);

/// Largest |P_ij - P_ji| over i != j. Exact zero for the rational form.
Rational verify_symmetry(const std::vector<RationalRow>& rows);
double verify_symmetry(const SparseMatrix& matrix);

struct StationaryResult {
  std::vector<double> pi;
  double residual = 0.0;       // max_j |(pi P)_j - pi_j|
  std::int64_t iterations = 0;
};

/// Power iteration to the stationary distribution. Verifies irreducibility by
/// graph reachability first; throws on reducible chains or non-convergence.
/// Row partitioning may run in parallel; results are identical regardless of
/// worker count.
StationaryResult stationary_distribution(const SparseMatrix& matrix, double tol = 1e-12,
                                         std::int64_t maxIterations = 2'000'000);

struct ConcentrationResult {
  std::uint64_t outside = 0;
  std::uint64_t total = 0;
  double fraction = 0.0;
};

/// Exact fraction of states whose empirical distribution has squared distance
/// >= epsilon from the maximum-entropy distribution with the same mean.
ConcentrationResult concentration_fraction(int k, int n, double m, double epsilon,
                                           std::uint64_t budget = 1'000'000);

}  // namespace scrip
