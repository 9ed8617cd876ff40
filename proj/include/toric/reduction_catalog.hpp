// Worked families and the double-configuration construction:
//   * topology of N for one and two quadrics,
//   * stacked configurations (Gamma over Delta) and the lift of
//     N~ = (U_Gamma cap R_Delta) x_{D_Delta} T_Delta into Z_Gamma,
//   * the affine-chart pipeline for V_Gamma = CP^{m-1}, with the quotient
//     metric and reduced symplectic form obtained from horizontal lifts.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "toric/errors.hpp"
#include "toric/exact_linalg.hpp"
#include "toric/quadrature.hpp"
#include "toric/quadric_config.hpp"
#include "toric/report.hpp"
#include "toric/submanifold.hpp"
#include "toric/symplectic.hpp"
#include "toric/torus_actions.hpp"

namespace toric {

// ---------------------------------------------------------------------------
// topology table

struct TopologyDescriptor {
  std::string name;
  std::vector<int> parameters;  // (m) or (p, q, l)
  std::vector<std::string> facts;
  std::optional<bool> trivial;  // triviality of the bundle over N(p), when known
};

namespace detail {
inline std::string n_of(int m) {
  if (m % 2 == 1) return "K^" + std::to_string(m);
  return "S^" + std::to_string(m - 1) + " x S^1";
}
// N(2) = S^1 x S^1 written as a torus inside bundle statements.
inline std::string n_of_short(int m) { return m == 2 ? "T^2" : n_of(m); }
inline std::string sphere_product(int p, int q) {
  return "S^" + std::to_string(p - 1) + " x S^" + std::to_string(q - 1);
}
}  // namespace detail

/// Topological type of N for m - n in {1, 2}. For two quadrics the integer
/// l (0 <= l <= p) is an input: it is not determined here from Gamma.
inline TopologyDescriptor classify_N(const QuadricConfiguration& q, std::optional<int> l = std::nullopt) {
  const int m = static_cast<int>(q.ambient_dimension());
  if (q.quadric_count() == 1) {
    if (!boundedness_check(q).bounded) throw PreconditionError("classify_N: the quadric is not an ellipsoid");
    if (!freeness_check(q).free) throw PreconditionError("classify_N: torus action is not free");
    TopologyDescriptor t;
    t.name = detail::n_of(m);
    t.parameters = {m};
    t.facts.push_back("R_Gamma = S^" + std::to_string(m - 1) + " spread by the circle T_Gamma");
    if (m % 2 == 0) {
      t.facts.push_back("N(" + std::to_string(m) + ") = S^" + std::to_string(m - 1) + " x S^1");
    } else {
      t.facts.push_back("N(" + std::to_string(m) + ") = K^" + std::to_string(m) + ", an " + std::to_string(m) +
                        "-dimensional Klein bottle");
    }
    t.facts.push_back("minimal in S^" + std::to_string(2 * m - 1) + ", H-minimal Lagrangian in C^" +
                      std::to_string(m));
    return t;
  }
  if (q.quadric_count() == 2) {
    if (!l) throw PreconditionError("classify_N: two quadrics need the parameter l");
    const TwoQuadricNormalForm nf = two_quadrics_canonical(q);
    const int p = static_cast<int>(nf.p), qq = static_cast<int>(nf.q);
    if (*l < 0 || *l > p) throw PreconditionError("classify_N: l must satisfy 0 <= l <= p");
    TopologyDescriptor t;
    t.parameters = {p, qq, *l};
    const bool all_even = p % 2 == 0 && qq % 2 == 0 && *l % 2 == 0;
    const bool nontrivial = p % 2 == 0 && qq % 2 == 0 && *l % 2 == 1;
    const std::string label = "N_" + std::to_string(*l) + "(" + std::to_string(p) + "," + std::to_string(qq) + ")";
    t.name = (all_even && p == 2 && qq == 2) ? "T^4" : label;
    const std::string fiber = detail::n_of_short(qq), base = detail::n_of_short(p);
    if (all_even) {
      t.trivial = true;
      t.facts.push_back(label + " -> " + base + " is a trivial bundle with fiber " + fiber);
      if (p == 2 && qq == 2) t.facts.push_back("T^4 = T^2 x T^2 = " + label);
    } else if (nontrivial) {
      t.trivial = false;
      t.facts.push_back(label + " -> " + base + " is a nontrivial bundle with fiber " + fiber);
    } else {
      t.facts.push_back(label + " -> " + base + " is a bundle with fiber " + fiber);
    }
    t.facts.push_back("N -> T^2 is a bundle with fiber R_Gamma = " + detail::sphere_product(p, qq));
    t.facts.push_back("N -> U_Gamma is a bundle with fiber T^2");
    t.facts.push_back("minimal in Z_Gamma = S^" + std::to_string(2 * p - 1) + " x S^" + std::to_string(2 * qq - 1));
    return t;
  }
  throw PreconditionError("classify_N: supported only for one or two quadrics");
}

// ---------------------------------------------------------------------------
// double configurations

struct DoubleVerdict {
  bool stacked_full_rank = false;
  NondegeneracyReport gamma_nondeg, delta_nondeg, stacked_nondeg;
  bool gamma_bounded = false, delta_bounded = false, stacked_bounded = false;
  FreenessVerdict gamma_free, delta_free, stacked_free;
  bool delta_empty = false;
  std::string failure;                         // first failing check, empty if valid
  std::optional<std::vector<std::size_t>> witness;  // its witness, if it has one

  /// Checks on the stacked system alone (invariant under swapping Gamma and Delta).
  bool stacked_valid() const {
    return stacked_full_rank && stacked_nondeg.all() && stacked_bounded && stacked_free.free;
  }
  bool valid() const { return failure.empty(); }
};

class DoubleConfigurationError : public PreconditionError {
 public:
  DoubleConfigurationError(const std::string& what, DoubleVerdict v) : PreconditionError(what), verdict(std::move(v)) {}
  DoubleVerdict verdict;
};

inline DoubleVerdict evaluate_double(const QuadricConfiguration& gamma, const QuadricConfiguration& delta) {
  if (gamma.ambient_dimension() != delta.ambient_dimension())
    throw DimensionError("stack_double: Gamma and Delta have different m");
  DoubleVerdict v;
  v.delta_empty = delta.quadric_count() == 0;
  auto fail = [&](const std::string& what, std::optional<std::vector<std::size_t>> w = std::nullopt) {
    if (v.failure.empty()) {
      v.failure = what;
      v.witness = std::move(w);
    }
  };

  v.gamma_nondeg = nondegeneracy_check(gamma);
  v.gamma_bounded = boundedness_check(gamma).bounded;
  v.gamma_free = freeness_check(gamma);

  const IntegerMatrix rows = vstack(gamma.gamma(), delta.gamma());
  v.stacked_full_rank = rank(rows) == rows.rows();
  if (!v.stacked_full_rank) {
    // witness: a Delta row dependent on the rows above it
    std::vector<std::size_t> dependent;
    for (std::size_t r = 1; r <= rows.rows(); ++r) {
      std::vector<std::size_t> prefix(r);
      for (std::size_t i = 0; i < r; ++i) prefix[i] = i;
      if (rank(rows.select_rows(prefix)) < r) {
        dependent.push_back(r - 1);
        break;
      }
    }
    fail("stacked rank deficient", dependent);
  }

  if (!v.gamma_nondeg.all()) fail("Gamma nondegeneracy", v.gamma_nondeg.b_witness);
  if (!v.gamma_bounded) fail("Gamma boundedness");
  if (!v.gamma_free.free) fail("Gamma freeness", v.gamma_free.witness);

  if (!v.delta_empty) {
    v.delta_nondeg = nondegeneracy_check(delta);
    v.delta_bounded = boundedness_check(delta).bounded;
    v.delta_free = freeness_check(delta);
    if (!v.delta_nondeg.all()) fail("Delta nondegeneracy", v.delta_nondeg.b_witness);
  } else {
    v.delta_nondeg.cond_a = v.delta_nondeg.cond_b = v.delta_nondeg.cond_c = true;
    v.delta_bounded = true;
  }

  if (v.stacked_full_rank) {
    RationalVector cd = gamma.c();
    cd.insert(cd.end(), delta.c().begin(), delta.c().end());
    const QuadricConfiguration stacked(rows, cd, gamma.mode());
    v.stacked_nondeg = nondegeneracy_check(stacked);
    v.stacked_bounded = boundedness_check(stacked).bounded;
    v.stacked_free = freeness_check(stacked);
    if (!v.stacked_nondeg.all()) fail("stacked nondegeneracy", v.stacked_nondeg.b_witness);
    if (!v.stacked_bounded) fail("stacked boundedness");
    if (!v.stacked_free.free) fail("stacked freeness", v.stacked_free.witness);
  }
  return v;
}

/// Gamma over Delta with all structural checks passed. Delta may have zero
/// rows (no second set of quadrics).
class DoubleConfiguration {
 public:
  DoubleConfiguration(QuadricConfiguration gamma, QuadricConfiguration delta)
      : gamma_(std::move(gamma)), delta_(std::move(delta)), verdict_(evaluate_double(gamma_, delta_)) {
    if (!verdict_.valid()) throw DoubleConfigurationError("double configuration: " + verdict_.failure, verdict_);
    RationalVector cd = gamma_.c();
    cd.insert(cd.end(), delta_.c().begin(), delta_.c().end());
    stacked_ = QuadricConfiguration(vstack(gamma_.gamma(), delta_.gamma()), std::move(cd), gamma_.mode());
  }

  const QuadricConfiguration& gamma_cfg() const { return gamma_; }
  const QuadricConfiguration& delta_cfg() const { return delta_; }
  const QuadricConfiguration& stacked() const { return stacked_; }
  const DoubleVerdict& verdict() const { return verdict_; }

 private:
  QuadricConfiguration gamma_, delta_, stacked_;
  DoubleVerdict verdict_;
};

struct StackResult {
  DoubleVerdict verdict;
  std::optional<DoubleConfiguration> config;  // present iff verdict.valid()
};

inline StackResult stack_double(const QuadricConfiguration& gamma, const QuadricConfiguration& delta) {
  StackResult r{evaluate_double(gamma, delta), std::nullopt};
  if (r.verdict.valid()) r.config.emplace(gamma, delta);
  return r;
}

// ---------------------------------------------------------------------------
// the lift of N~ into Z_Gamma cap Z_Delta

using NTildeChart = OrbitChart<RealGraphChart>;

/// z = exp(2 pi i Delta^T phi_Delta) .* u(v), u(v) in R_Gamma cap R_Delta.
inline NTildeChart make_ntilde_chart(const DoubleConfiguration& d, const Eigen::VectorXd& u0,
                                     const MetricSpec& spec = {}) {
  const Eigen::MatrixXd phase = d.delta_cfg().quadric_count()
                                    ? d.delta_cfg().gamma_numeric()
                                    : Eigen::MatrixXd(0, static_cast<Eigen::Index>(d.stacked().ambient_dimension()));
  return NTildeChart(RealGraphChart(d.stacked().with_mode(Mode::Real), u0, spec), phase);
}

inline ChartPoint ntilde_chart(const DoubleConfiguration& d, const Eigen::VectorXd& u0, const Eigen::VectorXd& v,
                               const Eigen::VectorXd& phi_delta, const MetricSpec& spec = {}) {
  const NTildeChart chart = make_ntilde_chart(d, u0, spec);
  ChartPoint p{Eigen::VectorXcd(), v, phi_delta, u0};
  p.z = chart.point(p.params());
  if (membership_residual(d.stacked(), p.z) > spec.tol.membership)
    throw ConvergenceError("ntilde_chart: lifted point is off Z_Gamma cap Z_Delta");
  return p;
}

inline std::vector<ChartPoint> sample_ntilde_points(const DoubleConfiguration& d, std::size_t count,
                                                    std::uint64_t seed, const MetricSpec& spec = {}) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const QuadricConfiguration real = d.stacked().with_mode(Mode::Real);
  const auto m = static_cast<Eigen::Index>(real.ambient_dimension());
  const auto kd = static_cast<Eigen::Index>(d.delta_cfg().quadric_count());
  const auto dim_base = m - static_cast<Eigen::Index>(real.quadric_count());
  const double radius = std::sqrt(std::max(1.0, real.c_numeric().cwiseAbs().sum()));
  std::vector<ChartPoint> out;
  int failures = 0;
  while (out.size() < count) {
    Eigen::VectorXd u(m);
    for (Eigen::Index i = 0; i < m; ++i) u(i) = radius * gauss(rng);
    Eigen::VectorXd phi(kd);
    for (Eigen::Index i = 0; i < kd; ++i) phi(i) = unit(rng);
    try {
      const Eigen::VectorXd u0 = project_to_quadrics(real, u, spec);
      out.push_back(ntilde_chart(d, u0, Eigen::VectorXd::Zero(dim_base), phi, spec));
    } catch (const std::exception&) {
      if (++failures > 1000) throw;
    }
  }
  return out;
}

/// Orthonormal basis of the part of span(j) orthogonal to the T_Gamma orbit at z.
inline std::vector<Eigen::VectorXcd> horizontal_frame(const QuadricConfiguration& gamma, const Eigen::VectorXcd& z,
                                                      const Jacobian& j) {
  const Jacobian gens = columns(orbit_generators(gamma, z), z.size());
  Jacobian h = j;
  if (gens.cols() > 0)
    for (Eigen::Index c = 0; c < h.cols(); ++c) h.col(c) -= project_onto_span(gens, h.col(c));
  // drop directions that were entirely vertical
  const Eigen::MatrixXd real = to_real(h);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(real, Eigen::ComputeThinU);
  const double top = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  std::vector<Eigen::VectorXcd> out;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 1e-9 * top) out.push_back(from_real(svd.matrixU().col(i)));
  return out;
}

/// max |omega(h_i, h_j)| over a horizontal frame of the lift of N~ at p. An
/// optional T_Gamma phase moves the sample point (and its chart) by that
/// torus element first.
inline double ntilde_lagrangian_residual(const DoubleConfiguration& d, const ChartPoint& p,
                                         const Eigen::VectorXd& gamma_phase = {}, const MetricSpec& spec = {}) {
  const NTildeChart chart = make_ntilde_chart(d, p.u0, spec);
  Eigen::VectorXcd z = chart.point(p.params());
  Jacobian j = chart.jacobian(p.params());
  if (gamma_phase.size()) {
    const Eigen::VectorXcd g = torus_element(d.gamma_cfg().gamma_numeric(), gamma_phase);
    z = g.cwiseProduct(z);
    j = g.asDiagonal() * j;
  }
  return lagrangian_residual(horizontal_frame(d.gamma_cfg(), z, j), spec.omega_scale);
}

/// Negative control: the same test on the horizontal part of the whole
/// tangent space of Z_Gamma cap Z_Delta.
inline double ntilde_control_residual(const DoubleConfiguration& d, const Eigen::VectorXcd& z,
                                      const MetricSpec& spec = {}) {
  const TangentFrame f = tangent_frame_Z(d.stacked(), z);
  return lagrangian_residual(horizontal_frame(d.gamma_cfg(), z, f.jacobian), spec.omega_scale);
}

// ---------------------------------------------------------------------------
// CP^{m-1} pipeline

/// Affine chart of CP^{m-1} = S^{2m-1}(sqrt a) / S^1: w_j = z_j / z_k for j != k.
class ProjectiveChart {
 public:
  ProjectiveChart(std::size_t m, std::size_t k, double a) : m_(m), k_(k), a_(a) {}

  /// Chart selected at z: the largest-modulus coordinate, lowest index on ties.
  static ProjectiveChart at(const Eigen::VectorXcd& z, double a) {
    std::size_t k = 0;
    for (Eigen::Index i = 1; i < z.size(); ++i)
      if (std::abs(z(i)) > std::abs(z(static_cast<Eigen::Index>(k)))) k = static_cast<std::size_t>(i);
    if (std::abs(z(static_cast<Eigen::Index>(k))) == 0.0) throw PreconditionError("projective chart: zero point");
    return {static_cast<std::size_t>(z.size()), k, a};
  }

  std::size_t index() const { return k_; }

  Eigen::VectorXcd coordinates(const Eigen::VectorXcd& z) const {
    const std::complex<double> zk = z(static_cast<Eigen::Index>(k_));
    if (std::abs(zk) < 1e-300) throw PreconditionError("projective chart: chosen coordinate vanishes");
    Eigen::VectorXcd w(static_cast<Eigen::Index>(m_ - 1));
    for (std::size_t j = 0, r = 0; j < m_; ++j)
      if (j != k_) w(static_cast<Eigen::Index>(r++)) = z(static_cast<Eigen::Index>(j)) / zk;
    return w;
  }

  /// dw(xi) at z (complex linear in xi).
  Eigen::VectorXcd differential(const Eigen::VectorXcd& z, const Eigen::VectorXcd& xi) const {
    const auto k = static_cast<Eigen::Index>(k_);
    Eigen::VectorXcd dw(static_cast<Eigen::Index>(m_ - 1));
    for (std::size_t j = 0, r = 0; j < m_; ++j) {
      if (j == k_) continue;
      const auto jj = static_cast<Eigen::Index>(j);
      dw(static_cast<Eigen::Index>(r++)) = xi(jj) / z(k) - z(jj) * xi(k) / (z(k) * z(k));
    }
    return dw;
  }

  /// Point of the sphere |z|^2 = a over w.
  Eigen::VectorXcd lift(const Eigen::VectorXcd& w) const {
    Eigen::VectorXcd z(static_cast<Eigen::Index>(m_));
    for (std::size_t j = 0, r = 0; j < m_; ++j)
      z(static_cast<Eigen::Index>(j)) = j == k_ ? std::complex<double>(1.0) : w(static_cast<Eigen::Index>(r++));
    return std::sqrt(a_) * z / z.norm();
  }

  struct Reduced {
    Eigen::MatrixXd metric;  // G on real chart coordinates (Re w, Im w)
    Eigen::MatrixXd omega;   // reduced symplectic form in the same coordinates
  };

  /// Quotient metric and reduced form at w through horizontal lifts: if
  /// M = dw restricted to the horizontal space (orthonormal basis H), then
  /// G = M^{-T} M^{-1} and Omega = M^{-T} omega(H, H) M^{-1}.
  Reduced reduced(const Eigen::VectorXcd& w, double omega_scale = kMomentMapOmegaScale) const {
    const Eigen::VectorXcd z = lift(w);
    const auto m = static_cast<Eigen::Index>(m_);
    // complex orthonormal basis of the complement of z
    Eigen::MatrixXcd full = Eigen::HouseholderQR<Eigen::MatrixXcd>(z).householderQ() * Eigen::MatrixXcd::Identity(m, m);
    std::vector<Eigen::VectorXcd> h;
    for (Eigen::Index c = 1; c < m; ++c) h.push_back(full.col(c));
    for (Eigen::Index c = 1; c < m; ++c) h.push_back(std::complex<double>(0, 1) * full.col(c));
    const auto n = static_cast<Eigen::Index>(h.size());
    Eigen::MatrixXd mm(n, n), oh(n, n);
    for (Eigen::Index c = 0; c < n; ++c) mm.col(c) = to_real(differential(z, h[static_cast<std::size_t>(c)]));
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = 0; b < n; ++b)
        oh(a, b) = omega(h[static_cast<std::size_t>(a)], h[static_cast<std::size_t>(b)], omega_scale);
    const Eigen::MatrixXd minv = mm.inverse();
    return {minv.transpose() * minv, minv.transpose() * oh * minv};
  }

 private:
  std::size_t m_, k_;
  double a_;
};

namespace detail {
inline double sphere_radius_squared(const DoubleConfiguration& d) {
  const auto a = toric::sphere_radius_squared(d.gamma_cfg());
  if (!a) throw PreconditionError("cp_chart_verify: Gamma must be one quadric (g, ..., g) with c > 0");
  return a->convert_to<double>();
}
}  // namespace detail

/// Lagrangian residual of N~ in CP^{m-1} at p, measured in a frame that is
/// orthonormal for the quotient metric.
inline double cp_lagrangian_residual(const DoubleConfiguration& d, const ChartPoint& p, const MetricSpec& spec = {}) {
  const double a = detail::sphere_radius_squared(d);
  const NTildeChart chart = make_ntilde_chart(d, p.u0, spec);
  const Eigen::VectorXcd z = chart.point(p.params());
  const ProjectiveChart pc = ProjectiveChart::at(z, a);
  const Jacobian j = chart.jacobian(p.params());
  Eigen::MatrixXd t(2 * (z.size() - 1), j.cols());
  for (Eigen::Index c = 0; c < j.cols(); ++c) t.col(c) = to_real(pc.differential(z, j.col(c)));
  const auto red = pc.reduced(pc.coordinates(z), spec.omega_scale);
  const Eigen::MatrixXd gram = t.transpose() * red.metric * t;
  const Eigen::MatrixXd l = gram.llt().matrixL();
  const Eigen::MatrixXd e = t * l.transpose().inverse();
  return (e.transpose() * red.omega * e).cwiseAbs().maxCoeff();
}

struct CpVariation {
  double dvol_dt = 0;
  double abs_density = 0;
  double ratio = 0;
};

/// First variation of the volume of a chart patch of N~ in CP^{m-1} along the
/// reduced Hamiltonian field of f = bump(w) * poly(w).
inline CpVariation cp_hamiltonian_variation(const DoubleConfiguration& d, const ChartPoint& p, std::uint64_t seed,
                                            const MetricSpec& spec = {}, std::size_t nodes = 24,
                                            double bump_radius = 0.3, double box_scale = 1.5) {
  const double a = detail::sphere_radius_squared(d);
  const NTildeChart chart = make_ntilde_chart(d, p.u0, spec);
  const Eigen::VectorXd s0 = p.params();
  const Eigen::VectorXcd z0 = chart.point(s0);
  const ProjectiveChart pc = ProjectiveChart::at(z0, a);
  const Eigen::VectorXcd w0 = pc.coordinates(z0);
  const auto mw = static_cast<std::size_t>(w0.size());

  std::mt19937_64 rng(seed);
  const RealPolynomial poly = RealPolynomial::random(mw, 3, 6, rng);
  const SmoothFunction f = polynomial_bump(w0, bump_radius) * poly.as_function();

  // Hamiltonian field of f for the reduced form, in real chart coordinates
  auto field = [&](const Eigen::VectorXcd& w) -> Eigen::VectorXd {
    const auto red = pc.reduced(w, spec.omega_scale);
    return red.omega.transpose().fullPivLu().solve(to_real(f.grad(w)));
  };
  auto chart_w = [&](const Eigen::VectorXd& s) { return to_real(pc.coordinates(chart.point(s))); };

  const auto dim = static_cast<Eigen::Index>(chart.dimension());
  const auto [lo, hi] = bump_patch_box([&](const Eigen::VectorXd& s) { return pc.coordinates(chart.point(s)); }, f,
                                       s0, bump_radius, spec.step, box_scale);
  const Quadrature quad = Quadrature::trapezoid_box(lo, hi, nodes);
  const double h = spec.step, tau = spec.step;
  CpVariation out;
  for (std::size_t n = 0; n < quad.size(); ++n) {
    const Eigen::VectorXd& s = quad.nodes[n];
    const Eigen::VectorXd w = chart_w(s);
    Eigen::MatrixXd t(w.size(), dim), dx(w.size(), dim);
    for (Eigen::Index c = 0; c < dim; ++c) {
      auto shifted = [&](double e) {
        Eigen::VectorXd se = s;
        se(c) += e;
        return chart_w(se);
      };
      t.col(c) = central_difference(shifted, h);
      dx.col(c) = central_difference([&](double e) { return field(from_real(shifted(e))); }, h);
    }
    const Eigen::VectorXd x = field(from_real(w));
    auto density = [&](double eps) {
      const Eigen::MatrixXd g = pc.reduced(from_real(w + eps * x), spec.omega_scale).metric;
      const Eigen::MatrixXd te = t + eps * dx;
      return std::sqrt(std::max(0.0, (te.transpose() * g * te).determinant()));
    };
    const double dd = central_difference(density, tau);
    out.dvol_dt += quad.weights[n] * dd;
    out.abs_density += quad.weights[n] * std::abs(dd);
  }
  out.ratio = out.abs_density > 0 ? std::abs(out.dvol_dt) / out.abs_density : 0.0;
  return out;
}

/// Lagrangian and Hamiltonian-stationarity checks of N~ in CP^{m-1} at p.
inline VerificationReport cp_chart_verify(const DoubleConfiguration& d, const ChartPoint& p, std::uint64_t seed = 1,
                                          const MetricSpec& spec = {}, int hamiltonians = 3) {
  VerificationReport r;
  r.add("cp-lagrangian", cp_lagrangian_residual(d, p, spec), 1e-8, 1, seed);
  double worst = 0;
  for (int i = 0; i < hamiltonians; ++i)
    worst = std::max(worst, cp_hamiltonian_variation(d, p, seed + static_cast<std::uint64_t>(i), spec).ratio);
  r.add("cp-hamiltonian-stationarity", worst, 1e-3, static_cast<std::size_t>(hamiltonians), seed);
  return r;
}

}  // namespace toric
