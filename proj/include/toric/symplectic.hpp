// Symplectic form on C^m, Hamiltonian vector fields and the smooth function
// handles used to build them.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace toric {

/// omega(u, v) = scale * sum_k (x_k(u) y_k(v) - y_k(u) x_k(v)). With
/// scale = -1/pi the orbit generators 2 pi i gamma_j z of the torus action
/// satisfy i_X omega = d(|z|^2 pairing) exactly, i.e. (|z_k|^2) is the
/// moment map.
inline constexpr double kMomentMapOmegaScale = -1.0 / std::numbers::pi;

inline double omega(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v, double scale = kMomentMapOmegaScale) {
  return scale * u.dot(v).imag();
}

/// Real inner product of C^m = R^{2m}.
inline double real_dot(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) { return u.dot(v).real(); }

/// A real function on C^m. Gradients use the packed convention
/// grad_k = df/dx_k + i df/dy_k, so df(v) = Re <grad, v>.
struct SmoothFunction {
  std::function<double(const Eigen::VectorXcd&)> value;
  std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)> gradient;  // optional

  double operator()(const Eigen::VectorXcd& z) const { return value(z); }

  Eigen::VectorXcd grad(const Eigen::VectorXcd& z, double h = 1e-6) const {
    if (gradient) return gradient(z);
    Eigen::VectorXcd g(z.size());
    for (Eigen::Index k = 0; k < z.size(); ++k) {
      Eigen::VectorXcd zp = z, zm = z;
      zp(k) += h;
      zm(k) -= h;
      const double dx = (value(zp) - value(zm)) / (2 * h);
      zp(k) = z(k) + std::complex<double>(0, h);
      zm(k) = z(k) - std::complex<double>(0, h);
      const double dy = (value(zp) - value(zm)) / (2 * h);
      g(k) = {dx, dy};
    }
    return g;
  }

  double differential(const Eigen::VectorXcd& z, const Eigen::VectorXcd& v) const { return real_dot(grad(z), v); }

  static SmoothFunction constant(double c) {
    return {[c](const Eigen::VectorXcd&) { return c; },
            [](const Eigen::VectorXcd& z) { return Eigen::VectorXcd::Zero(z.size()).eval(); }};
  }

  friend SmoothFunction operator*(SmoothFunction a, SmoothFunction b) {
    return {[a, b](const Eigen::VectorXcd& z) { return a(z) * b(z); },
            [a, b](const Eigen::VectorXcd& z) { return (a(z) * b.grad(z) + b(z) * a.grad(z)).eval(); }};
  }
};

/// Solves i_X omega = df: X = -i grad f / scale.
inline Eigen::VectorXcd hamiltonian_field(const SmoothFunction& f, const Eigen::VectorXcd& z,
                                          double scale = kMomentMapOmegaScale) {
  return (std::complex<double>(0, -1.0 / scale) * f.grad(z)).eval();
}

/// Polynomial in the 2m real coordinates (x_1, y_1, ..., x_m, y_m).
class RealPolynomial {
 public:
  struct Term {
    double coefficient;
    std::vector<int> exponents;  // length 2m
  };

  explicit RealPolynomial(std::size_t m) : m_(m) {}

  RealPolynomial& add(double coefficient, std::vector<int> exponents) {
    exponents.resize(2 * m_, 0);
    terms_.push_back({coefficient, std::move(exponents)});
    return *this;
  }

  std::size_t variables() const { return m_; }
  const std::vector<Term>& terms() const { return terms_; }

  double operator()(const Eigen::VectorXcd& z) const {
    double s = 0;
    for (const auto& t : terms_) s += t.coefficient * monomial(t.exponents, z, -1);
    return s;
  }

  Eigen::VectorXcd gradient(const Eigen::VectorXcd& z) const {
    Eigen::VectorXcd g = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(m_));
    for (const auto& t : terms_)
      for (std::size_t v = 0; v < 2 * m_; ++v) {
        if (t.exponents[v] == 0) continue;
        const double d = t.coefficient * t.exponents[v] * monomial(t.exponents, z, static_cast<int>(v));
        if (v % 2 == 0)
          g(static_cast<Eigen::Index>(v / 2)) += d;
        else
          g(static_cast<Eigen::Index>(v / 2)) += std::complex<double>(0, d);
      }
    return g;
  }

  SmoothFunction as_function() const {
    RealPolynomial self = *this;
    return {[self](const Eigen::VectorXcd& z) { return self(z); },
            [self](const Eigen::VectorXcd& z) { return self.gradient(z); }};
  }

  /// Random polynomial with `terms` monomials of total degree 1..max_degree
  /// and standard normal coefficients.
  template <typename Rng>
  static RealPolynomial random(std::size_t m, int max_degree, int terms, Rng& rng) {
    RealPolynomial p(m);
    std::uniform_int_distribution<int> degree(1, max_degree);
    std::uniform_int_distribution<std::size_t> var(0, 2 * m - 1);
    std::normal_distribution<double> coef(0.0, 1.0);
    for (int t = 0; t < terms; ++t) {
      std::vector<int> e(2 * m, 0);
      const int d = degree(rng);
      for (int i = 0; i < d; ++i) ++e[var(rng)];
      p.add(coef(rng), std::move(e));
    }
    return p;
  }

 private:
  // Product of coordinates^exponents; if `lower` >= 0 that exponent is
  // reduced by one (derivative without the factor).
  double monomial(const std::vector<int>& e, const Eigen::VectorXcd& z, int lower) const {
    double s = 1;
    for (std::size_t v = 0; v < 2 * m_; ++v) {
      const int p = e[v] - (static_cast<int>(v) == lower ? 1 : 0);
      if (p <= 0) continue;
      const auto& c = z(static_cast<Eigen::Index>(v / 2));
      s *= std::pow(v % 2 == 0 ? c.real() : c.imag(), p);
    }
    return s;
  }

  std::size_t m_;
  std::vector<Term> terms_;
};

/// Smooth compactly supported bump on [-1, 1]: exp(1 - 1/(1 - t^2)).
inline double bump1d(double t) {
  if (std::abs(t) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

inline double bump1d_derivative(double t) {
  if (std::abs(t) >= 1.0) return 0.0;
  const double w = 1.0 - t * t;
  return bump1d(t) * (-2.0 * t / (w * w));
}

/// Ambient bump exp(1 - 1/(1 - |z - c|^2 / r^2)) supported in the ball B(c, r).
inline SmoothFunction ambient_bump(const Eigen::VectorXcd& center, double radius) {
  return {[center, radius](const Eigen::VectorXcd& z) {
            const double t = (z - center).squaredNorm() / (radius * radius);
            return t >= 1.0 ? 0.0 : std::exp(1.0 - 1.0 / (1.0 - t));
          },
          [center, radius](const Eigen::VectorXcd& z) {
            const double t = (z - center).squaredNorm() / (radius * radius);
            if (t >= 1.0) return Eigen::VectorXcd::Zero(z.size()).eval();
            const double w = 1.0 - t;
            const double dt = -std::exp(1.0 - 1.0 / w) / (w * w);
            return (dt * 2.0 / (radius * radius) * (z - center)).eval();
          }};
}

/// Polynomial bump (1 - |z - c|^2 / r^2)^order on B(c, r), zero outside.
/// C^{order-1}, with derivatives of moderate size; preferred over the
/// exponential bump wherever finite differences act on the field.
inline SmoothFunction polynomial_bump(const Eigen::VectorXcd& center, double radius, int order = 8) {
  return {[center, radius, order](const Eigen::VectorXcd& z) {
            const double t = (z - center).squaredNorm() / (radius * radius);
            return t >= 1.0 ? 0.0 : std::pow(1.0 - t, order);
          },
          [center, radius, order](const Eigen::VectorXcd& z) {
            const double t = (z - center).squaredNorm() / (radius * radius);
            if (t >= 1.0) return Eigen::VectorXcd::Zero(z.size()).eval();
            const double dt = -order * std::pow(1.0 - t, order - 1);
            return (dt * 2.0 / (radius * radius) * (z - center)).eval();
          }};
}

}  // namespace toric
