// Convex polytopes P(A, b) = { x : <a_i, x> + b_i >= 0 } with integer facet
// normals: vertex enumeration, simplicity and the Delzant condition.
#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "toric/errors.hpp"
#include "toric/exact_linalg.hpp"
#include "toric/exact_lp.hpp"

namespace toric {

class PolytopeError : public PreconditionError {
 public:
  enum class Kind { Invalid, Empty, Unbounded, NotSimple };
  PolytopeError(Kind kind, const std::string& what) : PreconditionError(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Calls f(subset) for every k-subset of {0..n-1} in lexicographic order.
template <typename F>
void for_each_subset(std::size_t n, std::size_t k, F&& f) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    f(static_cast<const std::vector<std::size_t>&>(idx));
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

class PolytopePresentation {
 public:
  /// `normals` holds one facet normal a_i per row (m x n). Each normal is
  /// rescaled to be primitive and its offset divided by the same factor.
  PolytopePresentation(IntegerMatrix normals, RationalVector offsets)
      : normals_(std::move(normals)), offsets_(std::move(offsets)) {
    const std::size_t m = normals_.rows(), n = normals_.cols();
    if (offsets_.size() != m) throw DimensionError("polytope: offsets/normals count mismatch");
    if (m < n) throw PolytopeError(PolytopeError::Kind::Invalid, "polytope: fewer facets than dimension");
    for (std::size_t i = 0; i < m; ++i) {
      Integer g = 0;
      for (std::size_t j = 0; j < n; ++j) g = gcd(g, normals_(i, j));
      if (g == 0) throw PolytopeError(PolytopeError::Kind::Invalid, "polytope: zero facet normal");
      if (g != 1) {
        for (std::size_t j = 0; j < n; ++j) normals_(i, j) /= g;
        offsets_[i] /= Rational(g);
      }
    }
    if (rank(normals_) != n) throw PolytopeError(PolytopeError::Kind::Invalid, "polytope: normals do not span");
    if (!feasible()) throw PolytopeError(PolytopeError::Kind::Empty, "polytope: empty feasible region");
  }

  /// From the n x m matrix A whose columns are the facet normals.
  static PolytopePresentation from_columns(const IntegerMatrix& a, RationalVector offsets) {
    return PolytopePresentation(a.transpose(), std::move(offsets));
  }

  std::size_t dimension() const { return normals_.cols(); }
  std::size_t facet_count() const { return normals_.rows(); }
  const IntegerMatrix& normals() const { return normals_; }
  const RationalVector& offsets() const { return offsets_; }
  /// n x m matrix with the normals as columns.
  IntegerMatrix matrix_a() const { return normals_.transpose(); }

  /// True iff the recession cone { x : <a_i, x> >= 0 } is {0}; equivalently
  /// some strictly positive relation sum y_i a_i = 0 exists.
  bool bounded() const {
    const std::size_t m = facet_count(), n = dimension();
    if (n == 0) return true;
    // y = 1 + w, w >= 0: A w = -A 1
    RationalMatrix a(n, m);
    RationalVector rhs(n);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < m; ++i) {
        a(j, i) = Rational(normals_(i, j));
        rhs[j] -= a(j, i);
      }
    return feasible_point(a, rhs).has_value();
  }

 private:
  bool feasible() const {
    const std::size_t m = facet_count(), n = dimension();
    // x = x+ - x-, surplus s: <a_i, x+ - x-> - s_i = -b_i
    RationalMatrix a(m, 2 * n + m);
    RationalVector rhs(m);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) = Rational(normals_(i, j));
        a(i, n + j) = Rational(-normals_(i, j));
      }
      a(i, 2 * n + i) = -1;
      rhs[i] = -offsets_[i];
    }
    return feasible_point(a, rhs).has_value();
  }

  IntegerMatrix normals_;
  RationalVector offsets_;
};

struct Vertex {
  RationalVector point;
  std::vector<std::size_t> active;  // facet indices with <a_i, x> + b_i == 0
};

using VertexSet = std::vector<Vertex>;

inline RationalVector embed_point(const PolytopePresentation& p, const RationalVector& x) {
  if (x.size() != p.dimension()) throw DimensionError("embed_point: point dimension");
  RationalVector y(p.facet_count());
  for (std::size_t i = 0; i < p.facet_count(); ++i) {
    y[i] = p.offsets()[i];
    for (std::size_t j = 0; j < p.dimension(); ++j) y[i] += Rational(p.normals()(i, j)) * x[j];
  }
  return y;
}

/// All vertices, by solving every n-subset of facet equalities exactly.
inline VertexSet enumerate_vertices(const PolytopePresentation& p) {
  if (!p.bounded()) throw PolytopeError(PolytopeError::Kind::Unbounded, "polytope is unbounded");
  const std::size_t m = p.facet_count(), n = p.dimension();
  const RationalMatrix normals = to_rational(p.normals());

  std::map<RationalVector, Vertex> found;
  for_each_subset(m, n, [&](const std::vector<std::size_t>& rows) {
    RationalVector rhs(n);
    for (std::size_t r = 0; r < n; ++r) rhs[r] = -p.offsets()[rows[r]];
    auto x = solve(normals.select_rows(rows), rhs);
    if (!x || found.count(*x)) return;
    const RationalVector y = embed_point(p, *x);
    Vertex v{*x, {}};
    for (std::size_t i = 0; i < m; ++i) {
      if (y[i] < 0) return;
      if (y[i] == 0) v.active.push_back(i);
    }
    found.emplace(*x, std::move(v));
  });
  if (found.empty()) throw PolytopeError(PolytopeError::Kind::Empty, "polytope has no vertices");
  VertexSet out;
  out.reserve(found.size());
  for (auto& [key, v] : found) out.push_back(std::move(v));
  return out;
}

struct SimplicityVerdict {
  bool simple = true;
  std::optional<Vertex> witness;  // vertex with more than n active facets
};

inline SimplicityVerdict is_simple(const PolytopePresentation& p) {
  for (auto& v : enumerate_vertices(p))
    if (v.active.size() != p.dimension()) return {false, std::move(v)};
  return {};
}

struct DelzantVerdict {
  bool delzant = true;
  std::optional<Vertex> witness;
  Integer determinant = 1;  // of the active normals at the witness
};

/// Delzant iff at every vertex the n active normals form a basis of Z^n.
inline DelzantVerdict is_delzant(const PolytopePresentation& p) {
  const auto simplicity = is_simple(p);
  if (!simplicity.simple) throw PolytopeError(PolytopeError::Kind::NotSimple, "is_delzant: polytope is not simple");
  for (auto& v : enumerate_vertices(p)) {
    Integer det = determinant(p.normals().select_rows(v.active));
    if (abs(det) != 1) return {false, std::move(v), det};
  }
  return {};
}

}  // namespace toric
