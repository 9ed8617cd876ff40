// Intersections of Hermitian (or real) quadrics
//   sum_k gamma_jk |z_k|^2 = c_j,   j = 1..k
// built from a polytope by Gale duality, with the exact structural checks
// (boundedness, nondegeneracy, two-quadric normal form).
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "toric/errors.hpp"
#include "toric/exact_linalg.hpp"
#include "toric/exact_lp.hpp"
#include "toric/polytope.hpp"

namespace toric {

enum class Mode { Real, Complex };

class QuadricConfiguration {
 public:
  QuadricConfiguration() = default;

  /// `gamma` is k x m (one quadric per row); `c` has k entries. Rows must be
  /// linearly independent. k == 0 is the unconstrained configuration.
  QuadricConfiguration(IntegerMatrix gamma, RationalVector c, Mode mode = Mode::Complex)
      : gamma_(std::move(gamma)), c_(std::move(c)), mode_(mode) {
    if (c_.size() != gamma_.rows()) throw DimensionError("quadric configuration: c has wrong length");
    if (rank(gamma_) != gamma_.rows())
      throw PreconditionError("quadric configuration: quadric rows are linearly dependent");
  }

  /// Rational coefficients are cleared row by row (row j and c_j scaled by
  /// the lcm of the row's denominators).
  static QuadricConfiguration from_rational(const RationalMatrix& gamma, RationalVector c,
                                            Mode mode = Mode::Complex) {
    if (c.size() != gamma.rows()) throw DimensionError("quadric configuration: c has wrong length");
    IntegerMatrix g(gamma.rows(), gamma.cols());
    for (std::size_t j = 0; j < gamma.rows(); ++j) {
      Integer den = 1;
      for (std::size_t k = 0; k < gamma.cols(); ++k) den = lcm(den, boost::multiprecision::denominator(gamma(j, k)));
      for (std::size_t k = 0; k < gamma.cols(); ++k)
        g(j, k) = boost::multiprecision::numerator(gamma(j, k) * Rational(den));
      c[j] *= Rational(den);
    }
    return {std::move(g), std::move(c), mode};
  }

  const IntegerMatrix& gamma() const { return gamma_; }
  const RationalVector& c() const { return c_; }
  Mode mode() const { return mode_; }
  /// m: number of complex (or real) coordinates.
  std::size_t ambient_dimension() const { return gamma_.cols(); }
  /// m - n: number of quadrics.
  std::size_t quadric_count() const { return gamma_.rows(); }

  QuadricConfiguration with_mode(Mode mode) const {
    QuadricConfiguration out = *this;
    out.mode_ = mode;
    return out;
  }

  Eigen::MatrixXd gamma_numeric() const {
    Eigen::MatrixXd g(gamma_.rows(), gamma_.cols());
    for (std::size_t j = 0; j < gamma_.rows(); ++j)
      for (std::size_t k = 0; k < gamma_.cols(); ++k)
        g(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = gamma_(j, k).convert_to<double>();
    return g;
  }
  Eigen::VectorXd c_numeric() const {
    Eigen::VectorXd v(static_cast<Eigen::Index>(c_.size()));
    for (std::size_t j = 0; j < c_.size(); ++j) v(static_cast<Eigen::Index>(j)) = c_[j].convert_to<double>();
    return v;
  }

  friend bool operator==(const QuadricConfiguration& a, const QuadricConfiguration& b) {
    return a.gamma_ == b.gamma_ && a.c_ == b.c_ && a.mode_ == b.mode_;
  }

 private:
  IntegerMatrix gamma_;
  RationalVector c_;
  Mode mode_ = Mode::Complex;
};

/// Gale dual of the facet normals: rows of gamma span { y : y A^t = 0 },
/// canonicalized; c = gamma * b.
inline QuadricConfiguration gale_dual(const PolytopePresentation& p) {
  const RationalMatrix basis = rational_nullspace(p.matrix_a(), NullSide::Right);
  IntegerMatrix gamma = to_integer(basis);
  RationalVector c = to_rational(gamma) * p.offsets();
  return {std::move(gamma), std::move(c), Mode::Complex};
}

namespace detail {
inline void check_point_dimension(const QuadricConfiguration& q, Eigen::Index size) {
  if (static_cast<std::size_t>(size) != q.ambient_dimension())
    throw DimensionError("point dimension does not match configuration");
}
}  // namespace detail

/// Gamma * (|z_1|^2, ..., |z_m|^2).
inline Eigen::VectorXd moment_map(const QuadricConfiguration& q, const Eigen::VectorXcd& z) {
  detail::check_point_dimension(q, z.size());
  return q.gamma_numeric() * z.cwiseAbs2();
}

/// max_j | sum_k gamma_jk |z_k|^2 - c_j |.
inline double membership_residual(const QuadricConfiguration& q, const Eigen::VectorXcd& z) {
  if (q.quadric_count() == 0) {
    detail::check_point_dimension(q, z.size());
    return 0.0;
  }
  return (moment_map(q, z) - q.c_numeric()).cwiseAbs().maxCoeff();
}

inline double membership_residual(const QuadricConfiguration& q, const Eigen::VectorXd& u) {
  return membership_residual(q, Eigen::VectorXcd(u.cast<std::complex<double>>()));
}

struct BoundednessVerdict {
  bool bounded = false;
  std::optional<RationalVector> functional;  // h with <h, gamma_k> > 0 for all k
};

/// Bounded iff some h has <h, gamma_k> > 0 for every column gamma_k.
inline BoundednessVerdict boundedness_check(const QuadricConfiguration& q) {
  if (q.quadric_count() == 0) return {q.ambient_dimension() == 0, RationalVector{}};
  auto h = strictly_positive_functional(q.gamma());
  return {h.has_value(), std::move(h)};
}

/// a when Z_Gamma is the round sphere sum |z_k|^2 = a (one quadric with
/// equal positive coefficients and c > 0); nullopt otherwise.
inline std::optional<Rational> sphere_radius_squared(const QuadricConfiguration& q) {
  if (q.quadric_count() != 1 || q.ambient_dimension() == 0) return std::nullopt;
  const Integer& g0 = q.gamma()(0, 0);
  if (g0 <= 0 || q.c()[0] <= 0) return std::nullopt;
  for (std::size_t k = 1; k < q.ambient_dimension(); ++k)
    if (q.gamma()(0, k) != g0) return std::nullopt;
  return q.c()[0] / Rational(g0);
}

struct NondegeneracyReport {
  bool cond_a = false;  // c in the nonnegative span of all columns
  bool cond_b = false;  // c in no cone spanned by fewer than k columns
  bool cond_c = false;  // columns generate a lattice of full rank k
  std::optional<RationalVector> a_witness;           // coefficients when (a) holds
  std::optional<std::vector<std::size_t>> b_witness;  // small subset whose cone contains c
  std::size_t lattice_rank = 0;

  bool all() const { return cond_a && cond_b && cond_c; }
};

inline NondegeneracyReport nondegeneracy_check(const QuadricConfiguration& q) {
  NondegeneracyReport r;
  const std::size_t m = q.ambient_dimension(), k = q.quadric_count();
  std::vector<std::size_t> all(m);
  for (std::size_t i = 0; i < m; ++i) all[i] = i;

  r.a_witness = cone_membership(q.gamma(), all, q.c());
  r.cond_a = r.a_witness.has_value();

  r.cond_b = true;
  for (std::size_t size = 0; size < k && r.cond_b; ++size) {
    for_each_subset(m, size, [&](const std::vector<std::size_t>& s) {
      if (!r.cond_b) return;
      if (cone_membership(q.gamma(), s, q.c())) {
        r.cond_b = false;
        r.b_witness = s;
      }
    });
  }

  r.lattice_rank = smith_normal_form(q.gamma()).rank();
  r.cond_c = r.lattice_rank == k;
  return r;
}

/// Two-quadric normal form:
///   row 0: all coefficients > 0, c_0 > 0
///   row 1: first p coefficients > 0, last q < 0, c_1 = 0
/// after an invertible integer row change and a column permutation.
struct TwoQuadricNormalForm {
  std::size_t p = 0, q = 0;
  IntegerMatrix transform;                 // 2x2 integer, nonzero determinant
  Integer transform_determinant;
  std::vector<std::size_t> column_order;  // new column j is old column column_order[j]
  QuadricConfiguration canonical;

  /// Structural splitting of the transformed equations: an ellipsoid
  /// (row 0, c_0 > 0) cut with a cone over a product of two ellipsoids
  /// (row 1, c_1 = 0, p positive then q negative coefficients).
  bool is_split_form() const {
    const auto& g = canonical.gamma();
    if (canonical.quadric_count() != 2 || p == 0 || q == 0 || p + q != g.cols()) return false;
    if (canonical.c()[0] <= 0 || canonical.c()[1] != 0) return false;
    for (std::size_t k = 0; k < g.cols(); ++k) {
      if (g(0, k) <= 0) return false;
      if (k < p ? g(1, k) <= 0 : g(1, k) >= 0) return false;
    }
    return true;
  }
};

class NormalFormError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Searches 2x2 integer row transforms with entries bounded by `entry_bound`,
/// unimodular ones first, then any nonsingular ones.
inline TwoQuadricNormalForm two_quadrics_canonical(const QuadricConfiguration& q, int entry_bound = 8) {
  if (q.quadric_count() != 2) throw PreconditionError("two_quadrics_canonical: need exactly two quadrics");
  const std::size_t m = q.ambient_dimension();
  const auto& g = q.gamma();

  auto apply = [&](const Integer& a, const Integer& b, std::size_t k) { return a * g(0, k) + b * g(1, k); };

  auto try_transform = [&](const Integer& a, const Integer& b, const Integer& e,
                           const Integer& f) -> std::optional<TwoQuadricNormalForm> {
    const Integer det = a * f - b * e;
    if (det == 0) return std::nullopt;
    const Rational c0 = Rational(a) * q.c()[0] + Rational(b) * q.c()[1];
    const Rational c1 = Rational(e) * q.c()[0] + Rational(f) * q.c()[1];
    if (c0 <= 0 || c1 != 0) return std::nullopt;
    std::vector<std::size_t> pos, neg;
    for (std::size_t k = 0; k < m; ++k) {
      if (apply(a, b, k) <= 0) return std::nullopt;
      const Integer s = apply(e, f, k);
      if (s == 0) return std::nullopt;
      (s > 0 ? pos : neg).push_back(k);
    }
    if (pos.empty() || neg.empty()) return std::nullopt;
    TwoQuadricNormalForm out;
    out.p = pos.size();
    out.q = neg.size();
    out.transform = IntegerMatrix{{a, b}, {e, f}};
    out.transform_determinant = det;
    out.column_order = pos;
    out.column_order.insert(out.column_order.end(), neg.begin(), neg.end());
    IntegerMatrix ng(2, m);
    for (std::size_t j = 0; j < m; ++j) {
      ng(0, j) = apply(a, b, out.column_order[j]);
      ng(1, j) = apply(e, f, out.column_order[j]);
    }
    out.canonical = QuadricConfiguration(std::move(ng), {c0, c1}, q.mode());
    return out;
  };

  // second row sign fixed so that the first original column lands in the
  // positive group
  auto orient = [&](std::optional<TwoQuadricNormalForm> r, const Integer& a, const Integer& b, const Integer& e,
                    const Integer& f) {
    if (r && apply(e, f, 0) < 0) {
      if (auto flipped = try_transform(a, b, -e, -f)) return flipped;
    }
    return r;
  };

  if (auto r = orient(try_transform(1, 0, 0, 1), 1, 0, 0, 1)) return *r;
  for (int pass = 0; pass < 2; ++pass) {
    for (int bound = 1; bound <= entry_bound; ++bound) {
      for (int a = -bound; a <= bound; ++a)
        for (int b = -bound; b <= bound; ++b)
          for (int e = -bound; e <= bound; ++e)
            for (int f = -bound; f <= bound; ++f) {
              if (std::max({std::abs(a), std::abs(b), std::abs(e), std::abs(f)}) != bound) continue;
              const int det = a * f - b * e;
              if (det == 0 || (pass == 0) != (std::abs(det) == 1)) continue;
              if (auto r = orient(try_transform(a, b, e, f), a, b, e, f)) return *r;
            }
    }
  }
  throw NormalFormError("two_quadrics_canonical: no normal form within the search bound");
}

}  // namespace toric
