// Exact integer/rational dense linear algebra: nullspaces, ranks,
// determinants, Smith normal form and lattice comparison.
#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "toric/errors.hpp"

namespace toric {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Dense row-major matrix over an exact scalar type.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw DimensionError("ragged matrix initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix from_rows(const std::vector<std::vector<T>>& rows, std::size_t cols = 0) {
    Matrix out(rows.size(), rows.empty() ? cols : rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != out.cols_) throw DimensionError("ragged matrix rows");
      std::copy(rows[i].begin(), rows[i].end(), out.data_.begin() + i * out.cols_);
    }
    return out;
  }

  static Matrix identity(std::size_t n) {
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) out(i, i) = T(1);
    return out;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
  }
  std::vector<T> col(std::size_t j) const {
    std::vector<T> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
  }

  Matrix transpose() const {
    Matrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }

  /// Submatrix made of the listed rows (in the given order).
  Matrix select_rows(const std::vector<std::size_t>& idx) const {
    Matrix out(idx.size(), cols_);
    for (std::size_t r = 0; r < idx.size(); ++r)
      for (std::size_t j = 0; j < cols_; ++j) out(r, j) = (*this)(idx[r], j);
    return out;
  }
  Matrix select_cols(const std::vector<std::size_t>& idx) const {
    Matrix out(rows_, idx.size());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t c = 0; c < idx.size(); ++c) out(i, c) = (*this)(i, idx[c]);
    return out;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const T& x) { return x == 0; });
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw DimensionError("matrix product shape mismatch");
    Matrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

  friend std::vector<T> operator*(const Matrix& a, const std::vector<T>& x) {
    if (a.cols_ != x.size()) throw DimensionError("matrix-vector shape mismatch");
    std::vector<T> out(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j) out[i] += a(i, j) * x[j];
    return out;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntegerMatrix = Matrix<Integer>;
using RationalMatrix = Matrix<Rational>;
using IntegerVector = std::vector<Integer>;
using RationalVector = std::vector<Rational>;

inline RationalMatrix to_rational(const IntegerMatrix& m) {
  RationalMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = Rational(m(i, j));
  return out;
}

inline RationalVector to_rational(const IntegerVector& v) {
  return RationalVector(v.begin(), v.end());
}

inline Integer abs(const Integer& x) { return x < 0 ? Integer(-x) : x; }

inline Integer gcd(Integer a, Integer b) {
  a = abs(a);
  b = abs(b);
  while (b != 0) {
    Integer r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

inline Integer lcm(const Integer& a, const Integer& b) {
  if (a == 0 || b == 0) return 0;
  return abs(a / gcd(a, b) * b);
}

/// Extended gcd: returns (g, x, y) with a*x + b*y = g >= 0.
inline std::tuple<Integer, Integer, Integer> extended_gcd(const Integer& a, const Integer& b) {
  Integer old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    Integer q = old_r / r;
    Integer tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

/// Scales a rational vector to the primitive integer vector on the same ray.
/// The zero vector maps to the zero vector.
inline IntegerVector primitive_integer(const RationalVector& v) {
  Integer den = 1;
  for (const auto& x : v) den = lcm(den, boost::multiprecision::denominator(x));
  IntegerVector out(v.size());
  Integer g = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = boost::multiprecision::numerator(v[i]) * (den / boost::multiprecision::denominator(v[i]));
    g = gcd(g, out[i]);
  }
  if (g > 1)
    for (auto& x : out) x /= g;
  return out;
}

/// Reduced row echelon form in place; returns the pivot column of each
/// nonzero row.
inline std::vector<std::size_t> rref(RationalMatrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t p = row;
    while (p < m.rows() && m(p, col) == 0) ++p;
    if (p == m.rows()) continue;
    m.swap_rows(row, p);
    const Rational inv = 1 / m(row, col);
    for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col) == 0) continue;
      const Rational f = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

inline std::size_t rank(RationalMatrix m) { return rref(m).size(); }
inline std::size_t rank(const IntegerMatrix& m) { return rank(to_rational(m)); }

enum class NullSide {
  Right,  // rows x with M x = 0
  Left,   // rows y with y M = 0
};

/// Basis of the nullspace of `m`, one basis vector per row. Rows are
/// canonicalized: integer entries, gcd 1, first nonzero entry positive.
inline RationalMatrix rational_nullspace(const RationalMatrix& m, NullSide side = NullSide::Right) {
  RationalMatrix work = side == NullSide::Right ? m : m.transpose();
  const std::size_t n = work.cols();
  const auto pivots = rref(work);
  std::vector<bool> is_pivot(n, false);
  for (auto p : pivots) is_pivot[p] = true;

  std::vector<std::vector<Rational>> basis;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    RationalVector x(n);
    x[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = -work(r, free);
    IntegerVector prim = primitive_integer(x);
    auto lead = std::find_if(prim.begin(), prim.end(), [](const Integer& v) { return v != 0; });
    if (lead != prim.end() && *lead < 0)
      for (auto& v : prim) v = -v;
    basis.emplace_back(prim.begin(), prim.end());
  }
  return RationalMatrix::from_rows(basis, n);
}

inline RationalMatrix rational_nullspace(const IntegerMatrix& m, NullSide side = NullSide::Right) {
  return rational_nullspace(to_rational(m), side);
}

/// Converts a rational matrix whose entries are all integral.
inline IntegerMatrix to_integer(const RationalMatrix& m) {
  IntegerMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (boost::multiprecision::denominator(m(i, j)) != 1)
        throw std::domain_error("to_integer: non-integral entry");
      out(i, j) = boost::multiprecision::numerator(m(i, j));
    }
  return out;
}

/// Determinant by fraction-free (Bareiss) elimination.
inline Integer determinant(IntegerMatrix m) {
  if (m.rows() != m.cols()) throw DimensionError("determinant of non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  Integer sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      m.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

inline Rational determinant(const RationalMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("determinant of non-square matrix");
  RationalMatrix w = m;
  Rational det = 1;
  const std::size_t n = w.rows();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && w(p, k) == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      w.swap_rows(k, p);
      det = -det;
    }
    det *= w(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (w(i, k) == 0) continue;
      const Rational f = w(i, k) / w(k, k);
      for (std::size_t j = k; j < n; ++j) w(i, j) -= f * w(k, j);
    }
  }
  return det;
}

/// Exact solution of a square nonsingular system; std::nullopt if singular.
inline std::optional<RationalVector> solve(const RationalMatrix& a, const RationalVector& b) {
  if (a.rows() != a.cols() || a.rows() != b.size()) throw DimensionError("solve: shape mismatch");
  const std::size_t n = a.rows();
  RationalMatrix aug(n, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n) = b[i];
  }
  const auto pivots = rref(aug);
  if (pivots.size() < n || pivots.back() >= n) return std::nullopt;
  RationalVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = aug(i, n);
  return x;
}

inline RationalMatrix inverse(const RationalMatrix& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw DimensionError("inverse of non-square matrix");
  RationalMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = 1;
  }
  const auto pivots = rref(aug);
  if (pivots.size() < n || pivots[n - 1] >= n) throw std::domain_error("inverse of singular matrix");
  RationalMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = aug(i, n + j);
  return out;
}

struct SmithForm {
  IntegerMatrix U;  // rows x rows, unimodular
  IntegerMatrix D;  // rows x cols, diagonal with d_1 | d_2 | ...
  IntegerMatrix V;  // cols x cols, unimodular

  std::size_t rank() const {
    std::size_t r = 0;
    while (r < std::min(D.rows(), D.cols()) && D(r, r) != 0) ++r;
    return r;
  }
  /// Product of the nonzero invariant factors.
  Integer torsion_product() const {
    Integer p = 1;
    for (std::size_t i = 0; i < rank(); ++i) p *= D(i, i);
    return p;
  }
};

namespace detail {

// Row operation on rows (a, b) of `m` and `u` by [[x, y], [-b/g, a/g]].
inline void combine_rows(IntegerMatrix& m, std::size_t a, std::size_t b, const Integer& x, const Integer& y,
                         const Integer& s, const Integer& t) {
  for (std::size_t j = 0; j < m.cols(); ++j) {
    Integer ra = x * m(a, j) + y * m(b, j);
    Integer rb = s * m(a, j) + t * m(b, j);
    m(a, j) = std::move(ra);
    m(b, j) = std::move(rb);
  }
}

inline void combine_cols(IntegerMatrix& m, std::size_t a, std::size_t b, const Integer& x, const Integer& y,
                         const Integer& s, const Integer& t) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Integer ca = x * m(i, a) + y * m(i, b);
    Integer cb = s * m(i, a) + t * m(i, b);
    m(i, a) = std::move(ca);
    m(i, b) = std::move(cb);
  }
}

// Bezout coefficients for clearing b against pivot a. When a divides b the
// plain elimination (1, 0) is used: extended_gcd may return (0, +-1) there,
// which swaps instead of clearing and lets the row and column passes cycle.
inline std::tuple<Integer, Integer, Integer> elimination_step(const Integer& a, const Integer& b) {
  if (b % a == 0) return {a, Integer(1), Integer(0)};
  return extended_gcd(a, b);
}

}  // namespace detail

/// Smith normal form with transforms: U * M * V == D.
inline SmithForm smith_normal_form(const IntegerMatrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  IntegerMatrix d = m;
  IntegerMatrix u = IntegerMatrix::identity(rows);
  IntegerMatrix v = IntegerMatrix::identity(cols);
  const std::size_t diag = std::min(rows, cols);

  for (std::size_t k = 0; k < diag; ++k) {
    // pick the smallest nonzero entry in the trailing block as pivot
    std::size_t pi = rows, pj = cols;
    for (std::size_t i = k; i < rows; ++i)
      for (std::size_t j = k; j < cols; ++j)
        if (d(i, j) != 0 && (pi == rows || abs(d(i, j)) < abs(d(pi, pj)))) {
          pi = i;
          pj = j;
        }
    if (pi == rows) break;
    d.swap_rows(k, pi);
    u.swap_rows(k, pi);
    d.swap_cols(k, pj);
    v.swap_cols(k, pj);

    bool clean = false;
    while (!clean) {
      clean = true;
      for (std::size_t i = k + 1; i < rows; ++i) {
        if (d(i, k) == 0) continue;
        auto [g, x, y] = detail::elimination_step(d(k, k), d(i, k));
        const Integer s = -d(i, k) / g, t = d(k, k) / g;
        detail::combine_rows(d, k, i, x, y, s, t);
        detail::combine_rows(u, k, i, x, y, s, t);
      }
      for (std::size_t j = k + 1; j < cols; ++j) {
        if (d(k, j) == 0) continue;
        auto [g, x, y] = detail::elimination_step(d(k, k), d(k, j));
        const Integer s = -d(k, j) / g, t = d(k, k) / g;
        detail::combine_cols(d, k, j, x, y, s, t);
        detail::combine_cols(v, k, j, x, y, s, t);
        clean = false;
      }
      if (!clean) continue;
      // divisibility: pivot must divide every remaining entry
      for (std::size_t i = k + 1; i < rows && clean; ++i)
        for (std::size_t j = k + 1; j < cols; ++j)
          if (d(i, j) % d(k, k) != 0) {
            for (std::size_t c = 0; c < cols; ++c) d(k, c) += d(i, c);
            for (std::size_t c = 0; c < rows; ++c) u(k, c) += u(i, c);
            clean = false;
            break;
          }
    }
    if (d(k, k) < 0) {
      for (std::size_t c = 0; c < cols; ++c) d(k, c) = -d(k, c);
      for (std::size_t c = 0; c < rows; ++c) u(k, c) = -u(k, c);
    }
  }
  return {std::move(u), std::move(d), std::move(v)};
}

/// Stacks the rows of `a` above the rows of `b`.
template <typename T>
Matrix<T> vstack(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() && b.rows() && a.cols() != b.cols()) throw DimensionError("vstack: column mismatch");
  const std::size_t cols = a.rows() ? a.cols() : b.cols();
  Matrix<T> out(a.rows() + b.rows(), cols);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < cols; ++j) out(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < cols; ++j) out(a.rows() + i, j) = b(i, j);
  return out;
}

/// True iff the rows of `subset` and the rows of `full` generate the same
/// lattice in Z^d. Two lattices with a common saturation agree iff their
/// invariant-factor products agree with that of their sum.
inline bool sublattice_equals_lattice(const IntegerMatrix& subset, const IntegerMatrix& full) {
  if (subset.rows() && full.rows() && subset.cols() != full.cols())
    throw DimensionError("sublattice_equals_lattice: ambient dimension mismatch");
  const auto s = smith_normal_form(subset);
  const auto f = smith_normal_form(full);
  const auto joint = smith_normal_form(vstack(subset, full));
  if (s.rank() != joint.rank() || f.rank() != joint.rank()) return false;
  return s.torsion_product() == joint.torsion_product() && f.torsion_product() == joint.torsion_product();
}

inline std::string to_string(const Rational& q) {
  if (boost::multiprecision::denominator(q) == 1) return boost::multiprecision::numerator(q).str();
  return boost::multiprecision::numerator(q).str() + "/" + boost::multiprecision::denominator(q).str();
}
inline std::string to_string(const Integer& z) { return z.str(); }

template <typename T>
std::string to_string(const std::vector<T>& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += to_string(v[i]);
  }
  return out + ")";
}

}  // namespace toric
