// The subtorus T_Gamma = R^k / L* of T^m acting by
//   z -> (e^{2 pi i <gamma_1, phi>} z_1, ..., e^{2 pi i <gamma_m, phi>} z_m),
// its 2-torsion subgroup D_Gamma, freeness, orbit generators and volumes.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <vector>

#include "toric/errors.hpp"
#include "toric/exact_linalg.hpp"
#include "toric/exact_lp.hpp"
#include "toric/quadric_config.hpp"

namespace toric {

class TorusSubgroup {
 public:
  explicit TorusSubgroup(const QuadricConfiguration& q) : gamma_(q.gamma()) {
    const std::size_t k = q.quadric_count();
    const auto snf = smith_normal_form(gamma_);
    if (snf.rank() != k) throw PreconditionError("torus subgroup: column lattice is not of full rank");
    // Gamma Z^m = U^{-1} D Z^m, so U^{-1} diag(d) is a lattice basis.
    const IntegerMatrix u_inv = to_integer(inverse(to_rational(snf.U)));
    basis_ = IntegerMatrix(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) basis_(i, j) = u_inv(i, j) * snf.D(j, j);
    dual_basis_ = inverse(to_rational(basis_)).transpose();
    covolume_ = 1 / abs(determinant(basis_)).convert_to<double>();
  }

  std::size_t dimension() const { return basis_.rows(); }
  /// Columns form a basis of L = Z<gamma_1, ..., gamma_m>.
  const IntegerMatrix& lattice_basis() const { return basis_; }
  /// Columns form the dual basis of L*.
  const RationalMatrix& dual_basis() const { return dual_basis_; }
  /// Volume of a fundamental domain of L* in R^k.
  double dual_covolume() const { return covolume_; }

  Eigen::MatrixXd dual_basis_numeric() const {
    Eigen::MatrixXd b(dual_basis_.rows(), dual_basis_.cols());
    for (std::size_t i = 0; i < dual_basis_.rows(); ++i)
      for (std::size_t j = 0; j < dual_basis_.cols(); ++j)
        b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = dual_basis_(i, j).convert_to<double>();
    return b;
  }

  /// Elements of D_Gamma = (1/2)L*/L* as points of T^m; every coordinate is
  /// exactly +1 or -1. Element e corresponds to phi = (1/2) sum_j eps_j b*_j
  /// with eps the binary digits of e.
  std::vector<std::vector<int>> two_torsion_points() const {
    const std::size_t k = dimension(), m = gamma_.cols();
    std::vector<std::vector<int>> out;
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
      std::vector<int> signs(m);
      for (std::size_t col = 0; col < m; ++col) {
        Rational pairing = 0;
        for (std::size_t j = 0; j < k; ++j) {
          if (!((mask >> j) & 1U)) continue;
          for (std::size_t i = 0; i < k; ++i) pairing += Rational(gamma_(i, col)) * dual_basis_(i, j);
        }
        if (boost::multiprecision::denominator(pairing) != 1)
          throw std::logic_error("dual lattice pairing is not integral");
        signs[col] = boost::multiprecision::numerator(pairing) % 2 == 0 ? 1 : -1;
      }
      out.push_back(std::move(signs));
    }
    return out;
  }

 private:
  IntegerMatrix gamma_;
  IntegerMatrix basis_;
  RationalMatrix dual_basis_;
  double covolume_ = 1.0;
};

/// Coordinatewise phases e^{2 pi i <gamma_k, phi>}.
inline Eigen::VectorXcd torus_element(const Eigen::MatrixXd& gamma, const Eigen::VectorXd& phi) {
  const Eigen::VectorXd angle = 2.0 * std::numbers::pi * (gamma.transpose() * phi);
  Eigen::VectorXcd out(angle.size());
  for (Eigen::Index k = 0; k < angle.size(); ++k) out(k) = std::polar(1.0, angle(k));
  return out;
}

inline Eigen::VectorXcd act(const QuadricConfiguration& q, const Eigen::VectorXd& phi, const Eigen::VectorXcd& z) {
  return torus_element(q.gamma_numeric(), phi).cwiseProduct(z);
}

struct FreenessVerdict {
  bool free = true;
  std::optional<std::vector<std::size_t>> witness;  // realizable support with a smaller lattice
  std::size_t supports_checked = 0;
};

/// T_Gamma acts freely on Z_Gamma iff for every realizable support S
/// (points of Z_Gamma whose nonzero coordinates are exactly S) the columns
/// gamma_S generate all of L.
inline FreenessVerdict freeness_check(const QuadricConfiguration& q) {
  const std::size_t m = q.ambient_dimension();
  if (smith_normal_form(q.gamma()).rank() != q.quadric_count())
    throw PreconditionError("freeness_check: columns do not generate a full-rank lattice");
  if (m >= 8 * sizeof(std::size_t)) throw PreconditionError("freeness_check: too many coordinates");
  const IntegerMatrix all_rows = q.gamma().transpose();
  FreenessVerdict verdict;
  for (std::size_t mask = 1; mask < (std::size_t{1} << m); ++mask) {
    std::vector<std::size_t> support;
    for (std::size_t i = 0; i < m; ++i)
      if ((mask >> i) & 1U) support.push_back(i);
    if (!strictly_positive_combination(q.gamma(), support, q.c())) continue;
    ++verdict.supports_checked;
    if (!sublattice_equals_lattice(all_rows.select_rows(support), all_rows)) {
      verdict.free = false;
      verdict.witness = std::move(support);
      return verdict;
    }
  }
  return verdict;
}

/// Fundamental vector fields X_j(z) = 2 pi i (gamma_j1 z_1, ..., gamma_jm z_m).
inline std::vector<Eigen::VectorXcd> orbit_generators(const QuadricConfiguration& q, const Eigen::VectorXcd& z) {
  detail::check_point_dimension(q, z.size());
  const Eigen::MatrixXd g = q.gamma_numeric();
  const std::complex<double> two_pi_i(0.0, 2.0 * std::numbers::pi);
  std::vector<Eigen::VectorXcd> out;
  for (Eigen::Index j = 0; j < g.rows(); ++j)
    out.emplace_back(two_pi_i * g.row(j).transpose().cast<std::complex<double>>().cwiseProduct(z));
  return out;
}

/// Real Gram matrix Re<u_i, u_j> of vectors in C^m viewed as R^{2m}.
inline Eigen::MatrixXd real_gram(const std::vector<Eigen::VectorXcd>& vs) {
  const auto n = static_cast<Eigen::Index>(vs.size());
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) g(i, j) = g(j, i) = vs[i].dot(vs[j]).real();
  return g;
}

struct OrbitData {
  Eigen::VectorXcd point;
  std::vector<Eigen::VectorXcd> generators;
  Eigen::MatrixXd gram;
};

inline OrbitData orbit_data(const QuadricConfiguration& q, const Eigen::VectorXcd& z) {
  auto gens = orbit_generators(q, z);
  Eigen::MatrixXd gram = real_gram(gens);
  return {z, std::move(gens), std::move(gram)};
}

/// Riemannian volume of the orbit through z: sqrt(det Gram) times the
/// covolume of L*. Throws at points with a nontrivial identity component of
/// the stabilizer.
inline double orbit_volume(const QuadricConfiguration& q, const TorusSubgroup& torus, const Eigen::VectorXcd& z) {
  const OrbitData data = orbit_data(q, z);
  const double det = data.gram.determinant();
  const double scale = data.gram.diagonal().prod();
  if (!(scale > 0.0) || det <= 1e-12 * scale) throw PreconditionError("orbit_volume: singular orbit Gram matrix");
  return std::sqrt(det) * torus.dual_covolume();
}

inline double orbit_volume(const QuadricConfiguration& q, const Eigen::VectorXcd& z) {
  return orbit_volume(q, TorusSubgroup(q), z);
}

inline Eigen::VectorXcd conjugate(const Eigen::VectorXcd& z) { return z.conjugate(); }

}  // namespace toric
