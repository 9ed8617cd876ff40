// Exact two-phase simplex over the rationals (Bland's rule).
// Desk-scale problems only; no sparsity, no presolve.
#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "toric/exact_linalg.hpp"

namespace toric {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  RationalVector x;
  Rational value;
};

namespace detail {

class Tableau {
 public:
  // rows 0..m-1 constraints, column `width` is the right-hand side
  Tableau(std::size_t m, std::size_t width) : m_(m), width_(width), t_(m, width + 1), basis_(m) {}

  Rational& at(std::size_t i, std::size_t j) { return t_(i, j); }
  Rational& rhs(std::size_t i) { return t_(i, width_); }
  std::vector<std::size_t>& basis() { return basis_; }
  std::size_t rows() const { return m_; }

  void pivot(std::size_t r, std::size_t c) {
    const Rational inv = 1 / t_(r, c);
    for (std::size_t j = 0; j <= width_; ++j) t_(r, j) *= inv;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r || t_(i, c) == 0) continue;
      const Rational f = t_(i, c);
      for (std::size_t j = 0; j <= width_; ++j)
        if (t_(r, j) != 0) t_(i, j) -= f * t_(r, j);
    }
    basis_[r] = c;
  }

  // Minimizes cost over columns [0, active); returns false if unbounded.
  bool optimize(const RationalVector& cost, std::size_t active) {
    for (;;) {
      std::size_t enter = active;
      for (std::size_t j = 0; j < active; ++j) {
        Rational reduced = cost[j];
        for (std::size_t i = 0; i < m_; ++i)
          if (t_(i, j) != 0) reduced -= cost[basis_[i]] * t_(i, j);
        if (reduced < 0) {
          enter = j;
          break;
        }
      }
      if (enter == active) return true;
      std::size_t leave = m_;
      Rational best;
      for (std::size_t i = 0; i < m_; ++i) {
        if (t_(i, enter) <= 0) continue;
        Rational ratio = t_(i, width_) / t_(i, enter);
        if (leave == m_ || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave == m_) return false;
      pivot(leave, enter);
    }
  }

  void drop_row(std::size_t r) {
    RationalMatrix next(m_ - 1, width_ + 1);
    for (std::size_t i = 0, k = 0; i < m_; ++i) {
      if (i == r) continue;
      for (std::size_t j = 0; j <= width_; ++j) next(k, j) = t_(i, j);
      ++k;
    }
    t_ = std::move(next);
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
    --m_;
  }

 private:
  std::size_t m_, width_;
  RationalMatrix t_;
  std::vector<std::size_t> basis_;
};

}  // namespace detail

/// Minimizes cost·x subject to a·x = b, x >= 0, exactly.
inline LpResult solve_lp(const RationalMatrix& a, const RationalVector& b, const RationalVector& cost) {
  const std::size_t m = a.rows(), n = a.cols();
  if (b.size() != m || cost.size() != n) throw DimensionError("solve_lp: shape mismatch");

  detail::Tableau tab(m, n + m);
  for (std::size_t i = 0; i < m; ++i) {
    const bool flip = b[i] < 0;
    for (std::size_t j = 0; j < n; ++j) tab.at(i, j) = flip ? Rational(-a(i, j)) : a(i, j);
    tab.at(i, n + i) = 1;
    tab.rhs(i) = flip ? Rational(-b[i]) : b[i];
    tab.basis()[i] = n + i;
  }

  RationalVector phase1(n + m);
  for (std::size_t i = 0; i < m; ++i) phase1[n + i] = 1;
  tab.optimize(phase1, n + m);
  Rational infeas = 0;
  for (std::size_t i = 0; i < tab.rows(); ++i)
    if (tab.basis()[i] >= n) infeas += tab.rhs(i);
  if (infeas != 0) return {LpStatus::Infeasible, {}, {}};

  // drive remaining (zero-level) artificials out of the basis
  for (std::size_t i = 0; i < tab.rows();) {
    if (tab.basis()[i] < n) {
      ++i;
      continue;
    }
    std::size_t c = n;
    for (std::size_t j = 0; j < n; ++j)
      if (tab.at(i, j) != 0) {
        c = j;
        break;
      }
    if (c == n) {
      tab.drop_row(i);  // redundant constraint
    } else {
      tab.pivot(i, c);
      ++i;
    }
  }

  RationalVector phase2(n + m);
  for (std::size_t j = 0; j < n; ++j) phase2[j] = cost[j];
  if (!tab.optimize(phase2, n)) return {LpStatus::Unbounded, {}, {}};

  LpResult out{LpStatus::Optimal, RationalVector(n), 0};
  for (std::size_t i = 0; i < tab.rows(); ++i)
    if (tab.basis()[i] < n) out.x[tab.basis()[i]] = tab.rhs(i);
  for (std::size_t j = 0; j < n; ++j) out.value += cost[j] * out.x[j];
  return out;
}

/// A point of {x >= 0 : a·x = b}, if any.
inline std::optional<RationalVector> feasible_point(const RationalMatrix& a, const RationalVector& b) {
  auto r = solve_lp(a, b, RationalVector(a.cols()));
  if (r.status != LpStatus::Optimal) return std::nullopt;
  return r.x;
}

/// Nonnegative combination coefficients with sum_k coeffs_k * gens_k = target,
/// where gens_k are the listed columns of `gens`.
inline std::optional<RationalVector> cone_membership(const IntegerMatrix& gens, const std::vector<std::size_t>& cols,
                                                     const RationalVector& target) {
  if (target.size() != gens.rows()) throw DimensionError("cone_membership: target dimension");
  return feasible_point(to_rational(gens.select_cols(cols)), target);
}

/// Strictly positive coefficients t_k > 0 with sum_k t_k gens_k = target over
/// the listed columns. Solved as max s subject to t_k >= s, s <= 1.
inline std::optional<RationalVector> strictly_positive_combination(const IntegerMatrix& gens,
                                                                   const std::vector<std::size_t>& cols,
                                                                   const RationalVector& target) {
  const std::size_t d = gens.rows(), k = cols.size();
  if (target.size() != d) throw DimensionError("strictly_positive_combination: target dimension");
  if (k == 0) {
    for (const auto& x : target)
      if (x != 0) return std::nullopt;
    return RationalVector{};
  }
  // variables: w_1..w_k (t_k = w_k + s), s, slack for s <= 1
  RationalMatrix a(d + 1, k + 2);
  RationalVector b(d + 1), cost(k + 2);
  for (std::size_t i = 0; i < d; ++i) {
    Rational row_sum = 0;
    for (std::size_t c = 0; c < k; ++c) {
      a(i, c) = Rational(gens(i, cols[c]));
      row_sum += a(i, c);
    }
    a(i, k) = row_sum;
    b[i] = target[i];
  }
  a(d, k) = 1;
  a(d, k + 1) = 1;
  b[d] = 1;
  cost[k] = -1;
  auto r = solve_lp(a, b, cost);
  if (r.status != LpStatus::Optimal || r.x[k] <= 0) return std::nullopt;
  RationalVector t(k);
  for (std::size_t c = 0; c < k; ++c) t[c] = r.x[c] + r.x[k];
  return t;
}

/// A vector h with <h, v_j> >= 1 for every column v_j of `vectors` (h free).
inline std::optional<RationalVector> strictly_positive_functional(const IntegerMatrix& vectors) {
  const std::size_t d = vectors.rows(), m = vectors.cols();
  // h = h+ - h-, surplus e_j: sum_i v_ij (h+_i - h-_i) - e_j = 1
  RationalMatrix a(m, 2 * d + m);
  RationalVector b(m, Rational(1));
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < d; ++i) {
      a(j, i) = Rational(vectors(i, j));
      a(j, d + i) = Rational(-vectors(i, j));
    }
    a(j, 2 * d + j) = -1;
  }
  auto x = feasible_point(a, b);
  if (!x) return std::nullopt;
  RationalVector h(d);
  for (std::size_t i = 0; i < d; ++i) h[i] = (*x)[i] - (*x)[d + i];
  return h;
}

}  // namespace toric
