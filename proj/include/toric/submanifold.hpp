// Numerical differential geometry of the submanifolds
//   N = R_Gamma x_{D_Gamma} T_Gamma  inside  Z_Gamma  inside  C^m
// through explicit charts: Newton projection onto the quadrics, tangent
// frames, the Lagrangian test, mean curvature, minimality inside Z, the
// codifferential of i_H omega, first variations of patch volume, Noether
// drift and the orbit-volume co-area identity.
//
// All derivatives beyond the chart Jacobian are central differences with a
// configurable step (MetricSpec::step).
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include "toric/errors.hpp"
#include "toric/quadrature.hpp"
#include "toric/quadric_config.hpp"
#include "toric/symplectic.hpp"
#include "toric/torus_actions.hpp"

namespace toric {

struct Tolerances {
  double membership = 1e-10;
  double frame = 1e-10;
  double curvature = 1e-6;
  double variation = 1e-3;
};

struct MetricSpec {
  double omega_scale = kMomentMapOmegaScale;
  /// n in the conformal factor Vo^{2/n}; 0 means "use the base dimension".
  std::size_t base_dimension = 0;
  double step = 1e-4;
  Tolerances tol;
  int newton_iterations = 60;
};

using Jacobian = Eigen::MatrixXcd;  // ambient_dimension x chart dimension

/// A smooth map from an open set of R^d into C^m with its Jacobian.
template <typename C>
concept Parametrization = requires(const C& c, const Eigen::VectorXd& s) {
  { c.dimension() } -> std::convertible_to<std::size_t>;
  { c.point(s) } -> std::convertible_to<Eigen::VectorXcd>;
  { c.jacobian(s) } -> std::convertible_to<Jacobian>;
};

/// Chart given by closures; the Jacobian falls back to central differences.
class ExplicitChart {
 public:
  using PointFn = std::function<Eigen::VectorXcd(const Eigen::VectorXd&)>;
  using JacobianFn = std::function<Jacobian(const Eigen::VectorXd&)>;

  ExplicitChart(std::size_t dim, PointFn point, JacobianFn jacobian = {})
      : dim_(dim), point_(std::move(point)), jacobian_(std::move(jacobian)) {}

  std::size_t dimension() const { return dim_; }
  Eigen::VectorXcd point(const Eigen::VectorXd& s) const { return point_(s); }
  Jacobian jacobian(const Eigen::VectorXd& s) const {
    if (jacobian_) return jacobian_(s);
    const double h = 1e-6;
    const Eigen::VectorXcd x0 = point_(s);
    Jacobian j(x0.size(), static_cast<Eigen::Index>(dim_));
    for (Eigen::Index a = 0; a < static_cast<Eigen::Index>(dim_); ++a) {
      Eigen::VectorXd sp = s, sm = s;
      sp(a) += h;
      sm(a) -= h;
      j.col(a) = (point_(sp) - point_(sm)) / (2 * h);
    }
    return j;
  }

 private:
  std::size_t dim_;
  PointFn point_;
  JacobianFn jacobian_;
};

// ---------------------------------------------------------------------------
// real/complex helpers

inline Eigen::VectorXd to_real(const Eigen::VectorXcd& z) {
  Eigen::VectorXd out(2 * z.size());
  out << z.real(), z.imag();
  return out;
}

inline Eigen::VectorXcd from_real(const Eigen::VectorXd& x) {
  const Eigen::Index m = x.size() / 2;
  Eigen::VectorXcd z(m);
  for (Eigen::Index k = 0; k < m; ++k) z(k) = {x(k), x(m + k)};
  return z;
}

inline Eigen::MatrixXd to_real(const Jacobian& j) {
  Eigen::MatrixXd out(2 * j.rows(), j.cols());
  out << j.real(), j.imag();
  return out;
}

/// Induced metric Re(J^H J).
inline Eigen::MatrixXd induced_metric(const Jacobian& j) { return (j.adjoint() * j).real(); }

/// Orthogonal projection of v onto the real span of the columns of j.
inline Eigen::VectorXcd project_onto_span(const Jacobian& j, const Eigen::VectorXcd& v) {
  if (j.cols() == 0) return Eigen::VectorXcd::Zero(v.size());
  const Eigen::MatrixXd g = induced_metric(j);
  const Eigen::VectorXd coeff = g.ldlt().solve((j.adjoint() * v).real());
  return j * coeff.cast<std::complex<double>>();
}

inline Jacobian columns(const std::vector<Eigen::VectorXcd>& vs, Eigen::Index rows) {
  Jacobian j(rows, static_cast<Eigen::Index>(vs.size()));
  for (std::size_t i = 0; i < vs.size(); ++i) j.col(static_cast<Eigen::Index>(i)) = vs[i];
  return j;
}

/// Five-point central difference of g(e) at e = 0.
template <typename G>
auto central_difference(G&& g, double h) {
  using R = decltype(g(0.0));
  return R((8.0 * (g(h) - g(-h)) - (g(2 * h) - g(-2 * h))) / (12.0 * h));
}

// ---------------------------------------------------------------------------
// Newton projection

/// Gradients of the quadric constraints at z in the packed convention:
/// d(sum_k gamma_jk |z_k|^2)(v) = Re <2 gamma_j * z, v>.
inline Jacobian constraint_normals(const Eigen::MatrixXd& gamma, const Eigen::VectorXcd& z) {
  Jacobian n(z.size(), gamma.rows());
  for (Eigen::Index j = 0; j < gamma.rows(); ++j)
    n.col(j) = 2.0 * gamma.row(j).transpose().cast<std::complex<double>>().cwiseProduct(z);
  return n;
}

/// Least-norm Newton retraction onto Z_Gamma (complex mode) or R_Gamma
/// (real mode: the input and all iterates stay real).
inline Eigen::VectorXcd project_to_quadrics(const QuadricConfiguration& q, Eigen::VectorXcd z,
                                            const MetricSpec& spec = {}) {
  detail::check_point_dimension(q, z.size());
  if (q.quadric_count() == 0) return z;
  const Eigen::MatrixXd g = q.gamma_numeric();
  const Eigen::VectorXd c = q.c_numeric();
  const double scale = std::max(1.0, c.cwiseAbs().maxCoeff());
  for (int it = 0; it < spec.newton_iterations; ++it) {
    const Eigen::VectorXd f = g * z.cwiseAbs2() - c;
    if (f.cwiseAbs().maxCoeff() <= 1e-15 * scale && it > 0) return z;
    const Jacobian n = constraint_normals(g, z);
    const Eigen::MatrixXd gram = induced_metric(n);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
    if (lu.rank() < gram.rows()) throw ConvergenceError("project_to_quadrics: singular constraint Jacobian");
    const Eigen::VectorXd alpha = lu.solve(-f);
    z += n * alpha.cast<std::complex<double>>();
  }
  if (membership_residual(q, z) > spec.tol.membership)
    throw ConvergenceError("project_to_quadrics: Newton did not converge");
  return z;
}

inline Eigen::VectorXd project_to_quadrics(const QuadricConfiguration& q, const Eigen::VectorXd& u,
                                           const MetricSpec& spec = {}) {
  return project_to_quadrics(q, Eigen::VectorXcd(u.cast<std::complex<double>>()), spec).real();
}

// ---------------------------------------------------------------------------
// charts

/// Graph chart of the real quadric intersection R around a base point u0:
/// u(v) = u0 + E v + N lambda(v) with E, N orthonormal bases of the tangent
/// and normal spaces at u0, and lambda fixed by Newton.
class RealGraphChart {
 public:
  RealGraphChart(const QuadricConfiguration& q, Eigen::VectorXd u0, MetricSpec spec = {})
      : gamma_(q.gamma_numeric()), c_(q.c_numeric()), u0_(std::move(u0)), spec_(spec) {
    detail::check_point_dimension(q, u0_.size());
    const Eigen::Index m = u0_.size(), k = gamma_.rows();
    if (membership_residual(q, u0_) > spec_.tol.membership)
      throw PreconditionError("real chart: base point is not on the quadrics");
    const Eigen::MatrixXd normals = k ? constraint_normals(gamma_, u0_.cast<std::complex<double>>()).real()
                                      : Eigen::MatrixXd(m, 0);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(normals.transpose(), Eigen::ComputeFullV);
    const Eigen::Index r = k ? (svd.singularValues().array() > 1e-10 * svd.singularValues()(0)).count() : 0;
    if (r < k) throw PreconditionError("real chart: quadrics are not transversal at the base point");
    normal_ = svd.matrixV().leftCols(k);
    tangent_ = svd.matrixV().rightCols(m - k);
  }

  std::size_t dimension() const { return static_cast<std::size_t>(tangent_.cols()); }
  const Eigen::VectorXd& base() const { return u0_; }
  const Eigen::MatrixXd& tangent_basis() const { return tangent_; }

  Eigen::VectorXd point(const Eigen::VectorXd& v) const { return solve(v); }

  Eigen::MatrixXd jacobian(const Eigen::VectorXd& v) const {
    const Eigen::VectorXd u = solve(v);
    if (gamma_.rows() == 0) return tangent_;
    const Eigen::MatrixXd jf = 2.0 * gamma_ * u.asDiagonal();  // k x m
    const Eigen::MatrixXd dlambda = -(jf * normal_).lu().solve(jf * tangent_);
    return tangent_ + normal_ * dlambda;
  }

 private:
  Eigen::VectorXd solve(const Eigen::VectorXd& v) const {
    if (v.size() != tangent_.cols()) throw DimensionError("real chart: parameter dimension");
    const Eigen::VectorXd w = u0_ + tangent_ * v;
    if (gamma_.rows() == 0) return w;
    Eigen::VectorXd lambda = Eigen::VectorXd::Zero(gamma_.rows());
    const double scale = std::max(1.0, c_.cwiseAbs().maxCoeff());
    Eigen::VectorXd u = w;
    for (int it = 0; it < spec_.newton_iterations; ++it) {
      u = w + normal_ * lambda;
      const Eigen::VectorXd f = gamma_ * u.cwiseAbs2() - c_;
      const Eigen::MatrixXd jf = 2.0 * gamma_ * u.asDiagonal();
      const Eigen::VectorXd step = (jf * normal_).lu().solve(-f);
      lambda += step;
      if (step.norm() <= 1e-15 * (1.0 + lambda.norm()) || f.cwiseAbs().maxCoeff() <= 1e-16 * scale) {
        return w + normal_ * lambda;
      }
    }
    u = w + normal_ * lambda;
    if ((gamma_ * u.cwiseAbs2() - c_).cwiseAbs().maxCoeff() > spec_.tol.membership)
      throw ConvergenceError("real chart: projection failed (parameter outside chart radius?)");
    return u;
  }

  Eigen::MatrixXd gamma_;
  Eigen::VectorXd c_;
  Eigen::VectorXd u0_;
  MetricSpec spec_;
  Eigen::MatrixXd normal_;
  Eigen::MatrixXd tangent_;
};

/// Real parametrization of the round sphere S^{m-1} of the given radius by
/// hyperspherical angles (theta_1, ..., theta_{m-1}).
class SphereChart {
 public:
  SphereChart(std::size_t m, double radius) : m_(m), radius_(radius) {}
  std::size_t dimension() const { return m_ - 1; }

  Eigen::VectorXd point(const Eigen::VectorXd& t) const {
    Eigen::VectorXd u(static_cast<Eigen::Index>(m_));
    double prefix = radius_;
    for (std::size_t i = 0; i + 1 < m_; ++i) {
      u(static_cast<Eigen::Index>(i)) = prefix * std::cos(t(static_cast<Eigen::Index>(i)));
      prefix *= std::sin(t(static_cast<Eigen::Index>(i)));
    }
    u(static_cast<Eigen::Index>(m_ - 1)) = prefix;
    return u;
  }

  Eigen::MatrixXd jacobian(const Eigen::VectorXd& t) const {
    const auto m = static_cast<Eigen::Index>(m_);
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(m, m - 1);
    for (Eigen::Index a = 0; a < m - 1; ++a) {
      // u_i = r * prod_{b<i} sin(t_b) * cos(t_i), last coordinate without the cosine
      for (Eigen::Index i = a; i < m; ++i) {
        double d = radius_;
        for (Eigen::Index b = 0; b < std::min(i, m - 1); ++b) d *= (b == a) ? std::cos(t(b)) : std::sin(t(b));
        if (i < m - 1) d *= (i == a) ? -std::sin(t(i)) : std::cos(t(i));
        j(i, a) = d;
      }
    }
    return j;
  }

 private:
  std::size_t m_;
  double radius_;
};

/// Base parametrizations of a real quadric intersection.
template <typename B>
concept RealParametrization = requires(const B& b, const Eigen::VectorXd& v) {
  { b.dimension() } -> std::convertible_to<std::size_t>;
  { b.point(v) } -> std::convertible_to<Eigen::VectorXd>;
  { b.jacobian(v) } -> std::convertible_to<Eigen::MatrixXd>;
};

/// Spreads a real base parametrization by a torus of phases:
///   z(v, phi) = exp(2 pi i phase^T phi) .* u(v).
/// Parameters are s = (v, phi).
template <RealParametrization Base>
class OrbitChart {
 public:
  OrbitChart(Base base, Eigen::MatrixXd phase) : base_(std::move(base)), phase_(std::move(phase)) {}

  std::size_t dimension() const { return base_.dimension() + static_cast<std::size_t>(phase_.rows()); }
  std::size_t base_dimension() const { return base_.dimension(); }
  std::size_t torus_dimension() const { return static_cast<std::size_t>(phase_.rows()); }
  const Base& base() const { return base_; }
  const Eigen::MatrixXd& phase_matrix() const { return phase_; }

  Eigen::VectorXcd point(const Eigen::VectorXd& s) const {
    const auto [v, phi] = split(s);
    return torus_element(phase_, phi).cwiseProduct(base_.point(v).template cast<std::complex<double>>());
  }

  Jacobian jacobian(const Eigen::VectorXd& s) const {
    const auto [v, phi] = split(s);
    const Eigen::VectorXcd t = torus_element(phase_, phi);
    const Eigen::VectorXcd z = t.cwiseProduct(base_.point(v).template cast<std::complex<double>>());
    const auto db = static_cast<Eigen::Index>(base_.dimension());
    Jacobian j(z.size(), static_cast<Eigen::Index>(dimension()));
    if (db > 0) j.leftCols(db) = t.asDiagonal() * base_.jacobian(v).template cast<std::complex<double>>();
    const std::complex<double> two_pi_i(0.0, 2.0 * std::numbers::pi);
    for (Eigen::Index r = 0; r < phase_.rows(); ++r)
      j.col(db + r) = two_pi_i * phase_.row(r).transpose().cast<std::complex<double>>().cwiseProduct(z);
    return j;
  }

 private:
  std::pair<Eigen::VectorXd, Eigen::VectorXd> split(const Eigen::VectorXd& s) const {
    if (static_cast<std::size_t>(s.size()) != dimension()) throw DimensionError("orbit chart: parameter dimension");
    const auto db = static_cast<Eigen::Index>(base_.dimension());
    return {s.head(db), s.tail(phase_.rows())};
  }

  Base base_;
  Eigen::MatrixXd phase_;
};

using NChart = OrbitChart<RealGraphChart>;

/// A point of N with its chart coordinates: z = exp(2 pi i Gamma^T phi) .* u(v)
/// where u(v) is the graph chart of R_Gamma around u0.
struct ChartPoint {
  Eigen::VectorXcd z;
  Eigen::VectorXd v;
  Eigen::VectorXd phi;
  Eigen::VectorXd u0;

  Eigen::VectorXd params() const {
    Eigen::VectorXd s(v.size() + phi.size());
    s << v, phi;
    return s;
  }
};

inline NChart make_n_chart(const QuadricConfiguration& q, const Eigen::VectorXd& u0, const MetricSpec& spec = {}) {
  return NChart(RealGraphChart(q, u0, spec), q.gamma_numeric());
}

inline ChartPoint chart_N(const QuadricConfiguration& q, const Eigen::VectorXd& u0, const Eigen::VectorXd& v,
                          const Eigen::VectorXd& phi, const MetricSpec& spec = {}) {
  const NChart chart = make_n_chart(q, u0, spec);
  ChartPoint p{Eigen::VectorXcd(), v, phi, u0};
  p.z = chart.point(p.params());
  return p;
}

/// The involution sigma (complex conjugation) on chart points.
inline ChartPoint conjugate(const ChartPoint& p) { return {p.z.conjugate(), p.v, -p.phi, p.u0}; }

/// Random points of N: a Gaussian start projected onto R_Gamma, and uniform
/// phases in [0, 1)^k. Deterministic in `seed`.
inline std::vector<ChartPoint> sample_chart_points(const QuadricConfiguration& q, std::size_t count,
                                                   std::uint64_t seed, const MetricSpec& spec = {}) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto m = static_cast<Eigen::Index>(q.ambient_dimension());
  const auto k = static_cast<Eigen::Index>(q.quadric_count());
  const QuadricConfiguration real = q.with_mode(Mode::Real);
  const double radius = std::sqrt(std::max(1.0, q.c_numeric().cwiseAbs().sum()));
  std::vector<ChartPoint> out;
  int failures = 0;
  while (out.size() < count) {
    Eigen::VectorXd u(m);
    for (Eigen::Index i = 0; i < m; ++i) u(i) = radius * gauss(rng);
    Eigen::VectorXd phi(k);
    for (Eigen::Index i = 0; i < k; ++i) phi(i) = unit(rng);
    try {
      const Eigen::VectorXd u0 = project_to_quadrics(real, u, spec);
      out.push_back(chart_N(q, u0, Eigen::VectorXd::Zero(m - k), phi, spec));
    } catch (const ConvergenceError&) {
      if (++failures > 1000) throw;
    } catch (const PreconditionError&) {
      if (++failures > 1000) throw;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// frames and the Lagrangian test

struct TangentFrame {
  std::vector<Eigen::VectorXcd> vectors;  // orthonormal in R^{2m}
  Jacobian jacobian;                      // chart Jacobian the frame spans
};

/// Orthonormal basis of the real span of the columns (Householder QR).
inline std::vector<Eigen::VectorXcd> orthonormalize(const Jacobian& j, double rank_tol = 1e-10) {
  const Eigen::MatrixXd real = to_real(j);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(real);
  const Eigen::MatrixXd r = qr.matrixQR().topRows(real.cols()).triangularView<Eigen::Upper>();
  const double scale = real.colwise().norm().maxCoeff();
  for (Eigen::Index i = 0; i < real.cols(); ++i)
    if (std::abs(r(i, i)) <= rank_tol * scale) throw PreconditionError("tangent frame: chart is rank deficient");
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(real.rows(), real.cols());
  std::vector<Eigen::VectorXcd> out;
  for (Eigen::Index i = 0; i < q.cols(); ++i) out.push_back(from_real(q.col(i)));
  return out;
}

template <Parametrization C>
TangentFrame tangent_frame(const C& chart, const Eigen::VectorXd& s) {
  Jacobian j = chart.jacobian(s);
  auto vs = orthonormalize(j);
  return {std::move(vs), std::move(j)};
}

inline TangentFrame tangent_frame_N(const QuadricConfiguration& q, const ChartPoint& p, const MetricSpec& spec = {}) {
  return tangent_frame(make_n_chart(q, p.u0, spec), p.params());
}

/// Orthonormal basis of T_z Z_Gamma (real codimension k in C^m).
inline TangentFrame tangent_frame_Z(const QuadricConfiguration& q, const Eigen::VectorXcd& z) {
  const Eigen::Index m = z.size(), k = static_cast<Eigen::Index>(q.quadric_count());
  const Eigen::MatrixXd normals = to_real(constraint_normals(q.gamma_numeric(), z));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(normals.transpose(), Eigen::ComputeFullV);
  const Eigen::MatrixXd tangent = svd.matrixV().rightCols(2 * m - k);
  TangentFrame f;
  f.jacobian = Jacobian(m, 2 * m - k);
  for (Eigen::Index i = 0; i < tangent.cols(); ++i) {
    f.vectors.push_back(from_real(tangent.col(i)));
    f.jacobian.col(i) = f.vectors.back();
  }
  return f;
}

/// max |omega(e_i, e_j)| over pairs of frame vectors.
inline double lagrangian_residual(const std::vector<Eigen::VectorXcd>& frame, double omega_scale = kMomentMapOmegaScale) {
  double worst = 0;
  for (std::size_t i = 0; i < frame.size(); ++i)
    for (std::size_t j = i + 1; j < frame.size(); ++j)
      worst = std::max(worst, std::abs(omega(frame[i], frame[j], omega_scale)));
  return worst;
}

inline double lagrangian_residual(const QuadricConfiguration& q, const ChartPoint& p, const MetricSpec& spec = {}) {
  return lagrangian_residual(tangent_frame_N(q, p, spec).vectors, spec.omega_scale);
}

/// Orthonormality and constraint-annihilation defect of a frame.
inline double frame_defect(const QuadricConfiguration& q, const Eigen::VectorXcd& z, const TangentFrame& f) {
  double worst = 0;
  for (std::size_t i = 0; i < f.vectors.size(); ++i)
    for (std::size_t j = 0; j < f.vectors.size(); ++j)
      worst = std::max(worst, std::abs(real_dot(f.vectors[i], f.vectors[j]) - (i == j ? 1.0 : 0.0)));
  const Jacobian n = constraint_normals(q.gamma_numeric(), z);
  for (const auto& e : f.vectors)
    for (Eigen::Index j = 0; j < n.cols(); ++j) worst = std::max(worst, std::abs(real_dot(n.col(j), e)));
  return worst;
}

// ---------------------------------------------------------------------------
// mean curvature

/// Mean curvature vector (unnormalized trace of the second fundamental form)
/// of the parametrized submanifold in flat C^m:
///   H = ( g^{ab} d_a d_b x )^perp,
/// second derivatives by central differences of the Jacobian.
template <Parametrization C>
Eigen::VectorXcd mean_curvature(const C& chart, const Eigen::VectorXd& s, double h) {
  if (!(h > 0) || h < 1e-12) throw PreconditionError("mean_curvature: finite-difference step underflow");
  const Jacobian j = chart.jacobian(s);
  const auto d = j.cols();
  const Eigen::MatrixXd ginv = induced_metric(j).inverse();
  std::vector<Jacobian> dj(static_cast<std::size_t>(d));
  for (Eigen::Index b = 0; b < d; ++b) {
    Eigen::VectorXd sp = s, sm = s;
    sp(b) += h;
    sm(b) -= h;
    dj[static_cast<std::size_t>(b)] = (chart.jacobian(sp) - chart.jacobian(sm)) / (2 * h);
  }
  Eigen::VectorXcd trace = Eigen::VectorXcd::Zero(j.rows());
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < d; ++b) {
      const Eigen::VectorXcd xab =
          0.5 * (dj[static_cast<std::size_t>(b)].col(a) + dj[static_cast<std::size_t>(a)].col(b));
      trace += ginv(a, b) * xab;
    }
  return trace - project_onto_span(j, trace);
}

inline Eigen::VectorXcd mean_curvature_ambient(const QuadricConfiguration& q, const ChartPoint& p,
                                               const MetricSpec& spec = {}) {
  return mean_curvature(make_n_chart(q, p.u0, spec), p.params(), spec.step);
}

/// Component of H tangent to Z_Gamma: H minus its projection on the span of
/// the constraint normals at z.
inline Eigen::VectorXcd tangential_to_Z(const QuadricConfiguration& q, const Eigen::VectorXcd& z,
                                        const Eigen::VectorXcd& h) {
  if (q.quadric_count() == 0) return h;
  return h - project_onto_span(constraint_normals(q.gamma_numeric(), z), h);
}

template <Parametrization C>
double minimality_residual_in_Z(const QuadricConfiguration& q, const C& chart, const Eigen::VectorXd& s,
                                double h) {
  return tangential_to_Z(q, chart.point(s), mean_curvature(chart, s, h)).norm();
}

inline double minimality_residual_in_Z(const QuadricConfiguration& q, const ChartPoint& p,
                                       const MetricSpec& spec = {}) {
  return minimality_residual_in_Z(q, make_n_chart(q, p.u0, spec), p.params(), spec.step);
}

// ---------------------------------------------------------------------------
// H-minimality: delta(i_H omega) = -div((i_H omega)^sharp)

/// |delta alpha| at s, alpha = i_H omega pulled back to the chart.
template <Parametrization C>
double hminimality_residual(const C& chart, const Eigen::VectorXd& s, double h,
                            double omega_scale = kMomentMapOmegaScale) {
  const auto d = static_cast<Eigen::Index>(chart.dimension());
  // sqrt(det g) g^{ab} alpha_b at a parameter point
  auto density = [&](const Eigen::VectorXd& t) {
    const Jacobian j = chart.jacobian(t);
    const Eigen::MatrixXd g = induced_metric(j);
    const Eigen::VectorXcd hv = mean_curvature(chart, t, h);
    Eigen::VectorXd alpha(d);
    for (Eigen::Index b = 0; b < d; ++b) alpha(b) = omega(hv, j.col(b), omega_scale);
    return Eigen::VectorXd(std::sqrt(g.determinant()) * g.ldlt().solve(alpha));
  };
  double div = 0;
  for (Eigen::Index a = 0; a < d; ++a) {
    Eigen::VectorXd sp = s, sm = s;
    sp(a) += h;
    sm(a) -= h;
    div += (density(sp)(a) - density(sm)(a)) / (2 * h);
  }
  const double sqrt_g = std::sqrt(induced_metric(chart.jacobian(s)).determinant());
  return std::abs(div / sqrt_g);
}

inline double hminimality_residual(const QuadricConfiguration& q, const ChartPoint& p, const MetricSpec& spec = {}) {
  return hminimality_residual(make_n_chart(q, p.u0, spec), p.params(), spec.step, spec.omega_scale);
}

// ---------------------------------------------------------------------------
// first variation of volume

/// Variation field evaluated at chart parameter s and ambient point x.
using VariationField = std::function<Eigen::VectorXcd(const Eigen::VectorXd& s, const Eigen::VectorXcd& x)>;

struct VolumeVariation {
  double dvol_dt = 0;         // central difference of the patch volume in t
  double minus_int_HX = 0;    // -int <H, X> dvol
  double abs_density = 0;     // int |d/dt sqrt(det g_t)| ds (scale of the integrand)
  double volume = 0;          // patch volume at t = 0
};

/// Patch volume V(t) of s -> x(s) + t X(s, x(s)) over the quadrature, its
/// t-derivative at 0 by central differences, and the first-variation
/// companion -int <H, X>.
template <Parametrization C>
VolumeVariation patch_volume_derivative(const C& chart, const Quadrature& quad, const VariationField& field,
                                        double t_step = 1e-4, double h = 1e-4, bool with_curvature = true) {
  const auto d = static_cast<Eigen::Index>(chart.dimension());
  VolumeVariation out;
  for (std::size_t n = 0; n < quad.size(); ++n) {
    const Eigen::VectorXd& s = quad.nodes[n];
    const double w = quad.weights[n];
    const Eigen::VectorXcd x = chart.point(s);
    const Jacobian j = chart.jacobian(s);
    Jacobian dx(j.rows(), d);
    for (Eigen::Index a = 0; a < d; ++a) {
      dx.col(a) = central_difference(
          [&](double e) {
            Eigen::VectorXd se = s;
            se(a) += e;
            return Eigen::VectorXcd(field(se, chart.point(se)));
          },
          h);
    }
    auto density = [&](double t) { return std::sqrt(std::max(0.0, induced_metric(j + t * dx).determinant())); };
    const double v0 = density(0.0);
    const double dd = central_difference(density, t_step);
    out.dvol_dt += w * dd;
    out.abs_density += w * std::abs(dd);
    out.volume += w * v0;
    if (with_curvature) out.minus_int_HX -= w * real_dot(mean_curvature(chart, s, h), field(s, x)) * v0;
  }
  return out;
}

/// Product of 1-D polynomial bumps (1 - x^2)^order, supported in the open
/// box (lo, hi).
inline double box_bump(const Eigen::VectorXd& s, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                       int order = 8) {
  double b = 1;
  for (Eigen::Index a = 0; a < s.size(); ++a) {
    const double mid = 0.5 * (lo(a) + hi(a)), half = 0.5 * (hi(a) - lo(a));
    if (half <= 0) continue;
    const double x = (s(a) - mid) / half;
    b *= std::abs(x) >= 1.0 ? 0.0 : std::pow(1.0 - x * x, order);
  }
  return b;
}

/// Parameter box around s0 whose image under `point` carries the support of
/// `bump` (a bump of the given ambient radius centred at point(s0)). Sized
/// from the Jacobian at s0, then grown until the bump vanishes on the faces.
template <typename P>
std::pair<Eigen::VectorXd, Eigen::VectorXd> bump_patch_box(P&& point, const SmoothFunction& bump,
                                                           const Eigen::VectorXd& s0, double radius, double step,
                                                           double box_scale = 1.5) {
  const Eigen::Index dim = s0.size();
  const Eigen::VectorXcd base = point(s0);
  Eigen::VectorXd half(dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    Eigen::VectorXd sp = s0;
    sp(c) += step;
    half(c) = box_scale * radius * step / (Eigen::VectorXcd(point(sp)) - base).norm();
  }
  auto leaks = [&](const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
    const Quadrature face = Quadrature::box(lo, hi, 41);
    for (Eigen::Index axis = 0; axis < dim; ++axis)
      for (const double side : {lo(axis), hi(axis)})
        for (const auto& node : face.nodes) {
          Eigen::VectorXd s = node;
          s(axis) = side;
          if (bump(point(s)) != 0.0) return true;
        }
    return false;
  };
  for (int grow = 0; leaks(s0 - half, s0 + half); ++grow) {
    if (grow == 8) throw PreconditionError("bump support does not fit a chart patch");
    half *= 1.25;
  }
  return {s0 - half, s0 + half};
}

struct HamiltonianVariation {
  std::vector<double> hamiltonian_dvol;  // one per random Hamiltonian
  double baseline_dvol = 0;              // random normal bump field
  double max_ratio = 0;                  // max |hamiltonian| / |baseline|
};

/// Stationarity of the volume of a bump-localised patch of N around p under
/// the Hamiltonian fields of psi * f for random polynomials f, against a
/// random normal variation with the same bump.
inline HamiltonianVariation hamiltonian_variation_check(const QuadricConfiguration& q, const ChartPoint& p,
                                                        int hamiltonians, std::uint64_t seed,
                                                        const MetricSpec& spec = {}, std::size_t nodes = 0,
                                                        double radius_fraction = 0.3) {
  const NChart chart = make_n_chart(q, p.u0, spec);
  const Eigen::VectorXd s0 = p.params();
  const Eigen::VectorXcd z0 = chart.point(s0);
  const double radius = radius_fraction * z0.norm();
  const SmoothFunction psi = polynomial_bump(z0, radius);
  const auto [lo, hi] = bump_patch_box([&](const Eigen::VectorXd& s) { return chart.point(s); }, psi, s0, radius,
                                       spec.step);
  if (nodes == 0) nodes = s0.size() <= 2 ? 48 : 24;
  const Quadrature quad = Quadrature::trapezoid_box(lo, hi, nodes);
  const auto m = static_cast<std::size_t>(z0.size());

  std::mt19937_64 rng(seed);
  HamiltonianVariation out;
  for (int i = 0; i < hamiltonians; ++i) {
    const SmoothFunction f = psi * RealPolynomial::random(m, 3, 6, rng).as_function();
    const VariationField x = [&](const Eigen::VectorXd&, const Eigen::VectorXcd& z) {
      return hamiltonian_field(f, z, spec.omega_scale);
    };
    out.hamiltonian_dvol.push_back(patch_volume_derivative(chart, quad, x, spec.step, spec.step, false).dvol_dt);
  }
  std::vector<RealPolynomial> re, im;
  for (std::size_t k = 0; k < m; ++k) {
    re.push_back(RealPolynomial::random(m, 2, 4, rng));
    im.push_back(RealPolynomial::random(m, 2, 4, rng));
  }
  const VariationField normal = [&](const Eigen::VectorXd& s, const Eigen::VectorXcd& z) {
    Eigen::VectorXcd v = z;
    for (std::size_t k = 0; k < m; ++k) v(static_cast<Eigen::Index>(k)) += 0.3 * std::complex<double>(re[k](z), im[k](z));
    v -= project_onto_span(chart.jacobian(s), v);
    return Eigen::VectorXcd(psi(z) * v);
  };
  out.baseline_dvol = patch_volume_derivative(chart, quad, normal, spec.step, spec.step, false).dvol_dt;
  for (const double d : out.hamiltonian_dvol)
    out.max_ratio = std::max(out.max_ratio, std::abs(d) / std::abs(out.baseline_dvol));
  return out;
}

// ---------------------------------------------------------------------------
// Noether drift

/// Max over j of |d/de mu_j(z + e X_f)| at e = 0, X_f the Hamiltonian field
/// of f. f must be invariant under T_Gamma; this is spot-checked at random
/// torus elements and a violation throws.
inline double noether_drift(const QuadricConfiguration& q, const SmoothFunction& f, const Eigen::VectorXcd& z,
                            const MetricSpec& spec = {}, std::uint64_t seed = 7) {
  detail::check_point_dimension(q, z.size());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double f0 = f(z);
  for (int trial = 0; trial < 8; ++trial) {
    Eigen::VectorXd phi(static_cast<Eigen::Index>(q.quadric_count()));
    for (Eigen::Index i = 0; i < phi.size(); ++i) phi(i) = unit(rng);
    if (std::abs(f(act(q, phi, z)) - f0) > 1e-9 * (1.0 + std::abs(f0)))
      throw PreconditionError("noether_drift: function is not invariant under the torus action");
  }
  const Eigen::VectorXcd x = hamiltonian_field(f, z, spec.omega_scale);
  const double e = spec.step;
  const Eigen::VectorXd drift = (moment_map(q, z + e * x) - moment_map(q, z - e * x)) / (2 * e);
  return drift.size() ? drift.cwiseAbs().maxCoeff() : 0.0;
}

// ---------------------------------------------------------------------------
// co-area identity Vol(N, g) = Vol(U, Vo^{2/n} g)

struct CoareaResult {
  double upstairs_volume = 0;
  double fiber_integral = 0;
};

/// Volume of the N-patch T_Gamma . u(box) computed from the full chart over a
/// fundamental domain of L*, against the integral over the base patch of
/// the conformally rescaled volume element sqrt(det(Vo^{2/n} g_U)).
/// The base patch must map injectively to the quotient U.
template <RealParametrization Base>
CoareaResult coarea_orbit_volume_check(const QuadricConfiguration& q, const Base& base, const Quadrature& base_quad,
                                       std::size_t torus_nodes = 16, const MetricSpec& spec = {}) {
  if (q.quadric_count() != 1) throw PreconditionError("coarea_orbit_volume_check: supports one quadric only");
  const TorusSubgroup torus(q);
  const Eigen::MatrixXd dual = torus.dual_basis_numeric();
  const Eigen::MatrixXd gamma = q.gamma_numeric();
  const std::size_t n = spec.base_dimension ? spec.base_dimension : base.dimension();
  const Eigen::MatrixXd phase = dual.transpose() * gamma;  // phi = dual * t
  const OrbitChart<Base> up(base, phase);
  const auto db = static_cast<Eigen::Index>(base.dimension());

  std::vector<Rule1D> torus_axes(torus.dimension(), Rule1D::periodic(torus_nodes, 0.0, 1.0));
  const Quadrature fiber = Quadrature::tensor(torus_axes);

  CoareaResult out;
  for (std::size_t i = 0; i < base_quad.size(); ++i) {
    const Eigen::VectorXd& v = base_quad.nodes[i];
    for (std::size_t f = 0; f < fiber.size(); ++f) {
      Eigen::VectorXd s(db + fiber.nodes[f].size());
      s << v, fiber.nodes[f];
      out.upstairs_volume +=
          base_quad.weights[i] * fiber.weights[f] * std::sqrt(induced_metric(up.jacobian(s)).determinant());
    }
    const Eigen::MatrixXd jb = base.jacobian(v);
    const Eigen::VectorXcd u = base.point(v).template cast<std::complex<double>>();
    const double vo = orbit_volume(q, torus, u);
    const Eigen::MatrixXd g_tilde = std::pow(vo, 2.0 / static_cast<double>(n)) * (jb.transpose() * jb);
    out.fiber_integral += base_quad.weights[i] * std::sqrt(g_tilde.determinant());
  }
  return out;
}

}  // namespace toric
