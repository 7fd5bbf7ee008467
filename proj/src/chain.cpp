#include "scrip/chain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "scrip/distribution.hpp"
#include "scrip/errors.hpp"
#include "scrip/parallel.hpp"

namespace scrip {

ChainStateSpace::ChainStateSpace(int k, int n, std::int64_t money,
                                 std::vector<std::uint8_t> flat)
    : k_(k), n_(n), money_(money), count_(flat.size() / static_cast<std::size_t>(n)),
      flat_(std::move(flat)) {}

namespace {

bool lex_less(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

std::size_t ChainStateSpace::index_of(std::span<const std::uint8_t> balances) const {
  std::size_t lo = 0, hi = count_;
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (lex_less(state(mid), balances))
      lo = mid + 1;
    else
      hi = mid;
  }
  if (lo >= count_ || !std::equal(balances.begin(), balances.end(), state(lo).begin()))
    throw DomainError("ChainStateSpace: state not in the space");
  return lo;
}

std::size_t ChainStateSpace::index_of(std::span<const int> balances) const {
  std::vector<std::uint8_t> b;
  b.reserve(balances.size());
  for (int v : balances) {
    if (v < 0 || v > k_) throw DomainError("ChainStateSpace: balance out of range");
    b.push_back(static_cast<std::uint8_t>(v));
  }
  return index_of(std::span<const std::uint8_t>(b));
}

std::uint64_t count_states(int k, int n, std::int64_t money) {
  if (k < 1 || n < 1) throw DomainError("count_states: k and n must be positive");
  if (money < 0 || money > static_cast<std::int64_t>(k) * n)
    throw DomainError("count_states: money outside [0, k*n]");
  // ways[s] = number of lenght-i prefixes with sum s, saturating.
  const std::uint64_t cap = UINT64_MAX / 2;
  std::vector<std::uint64_t> ways(static_cast<std::size_t>(money) + 1, 0);
  ways[0] = 1;
  for (int i = 0; i < n; ++i) {
    std::vector<std::uint64_t> next(ways.size(), 0);
    for (std::size_t s = 0; s < ways.size(); ++s) {
      if (ways[s] == 0) continue;
      for (int v = 0; v <= k && s + static_cast<std::size_t>(v) < next.size() + 0; ++v) {
        std::size_t t = s + static_cast<std::size_t>(v);
        if (t >= next.size()) break;
        std::uint64_t sum = next[t] + ways[s];
        next[t] = sum < next[t] || sum > cap ? cap : sum;
      }
    }
    ways = std::move(next);
  }
  return ways[static_cast<std::size_t>(money)];
}

ChainStateSpace enumerate_states(int k, int n, std::int64_t money, std::uint64_t budget) {
  std::uint64_t expected = count_states(k, n, money);
  if (expected > budget)
    throw BudgetError("enumerate_states: " + std::to_string(expected) +
                      " states exceed budget " + std::to_string(budget));
  std::vector<std::uint8_t> flat;
  flat.reserve(expected * static_cast<std::size_t>(n));
  std::vector<std::uint8_t> current(static_cast<std::size_t>(n), 0);
  // Depth-first in lexicographic order with remaining-sum pruning.
  auto emit = [&](auto&& self, int pos, std::int64_t remaining) -> void {
    if (pos == n) {
      if (remaining == 0) flat.insert(flat.end(), current.begin(), current.end());
      return;
    }
    std::int64_t slotsAfter = static_cast<std::int64_t>(n - pos - 1) * k;
    for (int v = 0; v <= k; ++v) {
      std::int64_t rest = remaining - v;
      if (rest < 0) break;
      if (rest > slotsAfter) continue;
      current[static_cast<std::size_t>(pos)] = static_cast<std::uint8_t>(v);
      self(self, pos + 1, rest);
    }
  };
  emit(emit, 0, money);
  ChainStateSpace space(k, n, money, std::move(flat));
  if (space.size() != expected)
    throw InvariantError("enumerate_states: enumeration disagrees with the combinatorial count");
  return space;
}

// ---------------------------------------------------------------------------
// Transition matrices
// ---------------------------------------------------------------------------

namespace {

int count_below_k(std::span<const std::uint8_t> s, int k) {
  int c = 0;
  for (std::uint8_t v : s) c += (v < k);
  return c;
}

/// Visits every dollar move from state s as (spender j, earner i, W).
template <class Visit>
void for_each_move(const ChainStateSpace& space, std::size_t si, Visit&& visit) {
  auto s = space.state(si);
  const int n = space.n();
  const int k = space.k();
  const int below = count_below_k(s, k);
  std::vector<std::uint8_t> t(s.begin(), s.end());
  for (int j = 0; j < n; ++j) {
    if (s[static_cast<std::size_t>(j)] == 0) continue;  // insolvent requester
    const int W = below - (s[static_cast<std::size_t>(j)] < k ? 1 : 0);
    if (W <= 0) continue;  // nobody else is willing
    for (int i = 0; i < n; ++i) {
      if (i == j || s[static_cast<std::size_t>(i)] >= k) continue;
      t[static_cast<std::size_t>(j)] -= 1;
      t[static_cast<std::size_t>(i)] += 1;
      visit(j, i, W, std::span<const std::uint8_t>(t));
      t[static_cast<std::size_t>(j)] += 1;
      t[static_cast<std::size_t>(i)] -= 1;
    }
  }
}

}  // namespace

std::vector<RationalRow> transition_matrix_rational(const ChainStateSpace& space,
                                                    Rational beta) {
  if (!(Rational(0) < beta) || Rational(1) < beta)
    throw DomainError("transition_matrix_rational: beta must lie in (0,1]");
  const int n = space.n();
  std::vector<RationalRow> rows(space.size());
  const Rational one(1);
  for (std::size_t si = 0; si < space.size(); ++si) {
    RationalRow& row = rows[si];
    Rational total(0);
    for_each_move(space, si, [&](int, int, int W, std::span<const std::uint8_t> t) {
      Rational failAll = (one - beta).pow(W);
      Rational prob = (one - failAll) / Rational(static_cast<std::int64_t>(n) * W);
      row.entries.emplace_back(static_cast<std::uint32_t>(space.index_of(t)), prob);
      total += prob;
    });
    std::sort(row.entries.begin(), row.entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    if (Rational(1) < total)
      throw InvariantError("transition_matrix_rational: moving mass exceeds 1");
    row.selfLoop = one - total;
  }
  return rows;
}

SparseMatrix transition_matrix(const ChainStateSpace& space, double beta) {
  if (!(beta > 0.0 && beta <= 1.0))
    throw DomainError("transition_matrix: beta must lie in (0,1]");
  const int n = space.n();
  SparseMatrix m;
  m.size = space.size();
  m.rowPtr.assign(m.size + 1, 0);
  std::vector<std::vector<std::pair<std::uint32_t, double>>> rows(m.size);
  for (std::size_t si = 0; si < space.size(); ++si) {
    double total = 0.0;
    for_each_move(space, si, [&](int, int, int W, std::span<const std::uint8_t> t) {
      double prob = (1.0 - std::pow(1.0 - beta, W)) / (static_cast<double>(n) * W);
      rows[si].emplace_back(static_cast<std::uint32_t>(space.index_of(t)), prob);
      total += prob;
    });
    rows[si].emplace_back(static_cast<std::uint32_t>(si), 1.0 - total);
    std::sort(rows[si].begin(), rows[si].end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
  }
  for (std::size_t si = 0; si < m.size; ++si) m.rowPtr[si + 1] = m.rowPtr[si] + rows[si].size();
  m.col.reserve(m.rowPtr.back());
  m.val.reserve(m.rowPtr.back());
  for (auto& row : rows)
    for (auto& [c, v] : row) {
      m.col.push_back(c);
      m.val.push_back(v);
    }
  return m;
}

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix t;
  t.size = size;
  t.rowPtr.assign(size + 1, 0);
  for (std::uint32_t c : col) t.rowPtr[c + 1] += 1;
  for (std::size_t i = 0; i < size; ++i) t.rowPtr[i + 1] += t.rowPtr[i];
  t.col.resize(col.size());
  t.val.resize(val.size());
  std::vector<std::size_t> cursor(t.rowPtr.begin(), t.rowPtr.end() - 1);
  for (std::size_t r = 0; r < size; ++r)
    for (std::size_t e = rowPtr[r]; e < rowPtr[r + 1]; ++e) {
      std::size_t slot = cursor[col[e]]++;
      t.col[slot] = static_cast<std::uint32_t>(r);
      t.val[slot] = val[e];
    }
  return t;
}

Rational verify_symmetry(const std::vector<RationalRow>& rows) {
  Rational worst(0);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (const auto& [c, v] : rows[r].entries) {
      const RationalRow& other = rows[c];
      Rational mirror(0);
      auto it = std::lower_bound(other.entries.begin(), other.entries.end(), r,
                                 [](const auto& e, std::size_t key) { return e.first < key; });
      if (it != other.entries.end() && it->first == r) mirror = it->second;
      Rational diff = (v - mirror).abs();
      if (worst < diff) worst = diff;
    }
  }
  return worst;
}

double verify_symmetry(const SparseMatrix& matrix) {
  SparseMatrix t = matrix.transpose();
  double worst = 0.0;
  for (std::size_t r = 0; r < matrix.size; ++r) {
    std::size_t a = matrix.rowPtr[r], aEnd = matrix.rowPtr[r + 1];
    std::size_t b = t.rowPtr[r], bEnd = t.rowPtr[r + 1];
    while (a < aEnd || b < bEnd) {
      std::uint32_t ca = a < aEnd ? matrix.col[a] : UINT32_MAX;
      std::uint32_t cb = b < bEnd ? t.col[b] : UINT32_MAX;
      if (ca == static_cast<std::uint32_t>(r)) { ++a; continue; }
      if (cb == static_cast<std::uint32_t>(r)) { ++b; continue; }
      double va = 0.0, vb = 0.0;
      if (ca <= cb) va = matrix.val[a++];
      if (cb <= ca) vb = t.val[b++];
      worst = std::max(worst, std::abs(va - vb));
    }
  }
  return worst;
}

namespace {

bool fully_reachable(const SparseMatrix& m) {
  if (m.size == 0) return false;
  std::vector<char> seen(m.size, 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t visited = 1;
  while (!stack.empty()) {
    std::size_t r = stack.back();
    stack.pop_back();
    for (std::size_t e = m.rowPtr[r]; e < m.rowPtr[r + 1]; ++e) {
      std::uint32_t c = m.col[e];
      if (c != r && m.val[e] > 0.0 && !seen[c]) {
        seen[c] = 1;
        ++visited;
        stack.push_back(c);
      }
    }
  }
  return visited == m.size;
}

}  // namespace

StationaryResult stationary_distribution(const SparseMatrix& matrix, double tol,
                                         std::int64_t maxIterations) {
  if (matrix.size == 0) throw DomainError("stationary_distribution: empty matrix");
  SparseMatrix pt = matrix.transpose();
  if (!fully_reachable(matrix) || !fully_reachable(pt))
    throw InvariantError("stationary_distribution: chain is reducible");

  const std::size_t size = matrix.size;
  // Start away from the typical answer so convergence is actually exercised.
  std::vector<double> x(size, 0.0);
  x[0] = 1.0;
  std::vector<double> y(size, 0.0);
  StationaryResult out;
  for (out.iterations = 0; out.iterations < maxIterations; ++out.iterations) {
    // y = x P, computed per output entry from the transposed rows so that the
    // accumulation order never depends on the thread count.
    parallel::for_index(static_cast<std::int64_t>(size), [&](std::int64_t j) {
      double acc = 0.0;
      for (std::size_t e = pt.rowPtr[static_cast<std::size_t>(j)];
           e < pt.rowPtr[static_cast<std::size_t>(j) + 1]; ++e)
        acc += pt.val[e] * x[pt.col[e]];
      y[static_cast<std::size_t>(j)] = acc;
    });
    double diff = 0.0;
    for (std::size_t j = 0; j < size; ++j) diff = std::max(diff, std::abs(y[j] - x[j]));
    x.swap(y);
    if (diff < tol) {
      out.residual = diff;
      out.pi = std::move(x);
      return out;
    }
  }
  throw InvariantError("stationary_distribution: no convergence after " +
                       std::to_string(maxIterations) + " iterations");
}

ConcentrationResult concentration_fraction(int k, int n, double m, double epsilon,
                                           std::uint64_t budget) {
  std::int64_t money = std::llround(m * n);
  if (std::abs(m * n - static_cast<double>(money)) > 1e-9)
    throw DomainError("concentration_fraction: m*n must be an integer amount of money");
  ChainStateSpace space = enumerate_states(k, n, money, budget);
  MoneyDistribution target = max_entropy_distribution(k, m);

  std::vector<std::uint8_t> outside(space.size(), 0);
  parallel::for_index(static_cast<std::int64_t>(space.size()), [&](std::int64_t si) {
    auto s = space.state(static_cast<std::size_t>(si));
    double sq = 0.0;
    std::vector<int> counts(static_cast<std::size_t>(k) + 1, 0);
    for (std::uint8_t v : s) counts[v] += 1;
    for (int j = 0; j <= k; ++j) {
      double d = static_cast<double>(counts[static_cast<std::size_t>(j)]) / n - target(j);
      sq += d * d;
    }
    outside[static_cast<std::size_t>(si)] = sq >= epsilon ? 1 : 0;
  });
  ConcentrationResult res;
  res.total = space.size();
  for (std::uint8_t o : outside) res.outside += o;
  res.fraction = static_cast<double>(res.outside) / static_cast<double>(res.total);
  return res;
}

}  // namespace scrip
