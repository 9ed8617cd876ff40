// Quadrature on chart boxes: tensor Gauss-Legendre / periodic trapezoid
// rules, with a seeded Monte Carlo rule for dimension > 4.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

namespace toric {

struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;

  /// n-point Gauss-Legendre on [a, b].
  static Rule1D gauss_legendre(std::size_t n, double a, double b) {
    Rule1D r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
      double dp = 0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1, p1 = x;
        for (std::size_t k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
          p0 = p1;
          p1 = p2;
        }
        if (n == 1) p0 = 1;
        dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      r.nodes[i] = 0.5 * (b - a) * x + 0.5 * (a + b);
      r.weights[i] = (b - a) / ((1 - x * x) * dp * dp);
    }
    return r;
  }

  /// n-point trapezoid rule for a periodic integrand on [a, a + period).
  static Rule1D periodic(std::size_t n, double a, double period) {
    Rule1D r;
    for (std::size_t i = 0; i < n; ++i) {
      r.nodes.push_back(a + period * static_cast<double>(i) / static_cast<double>(n));
      r.weights.push_back(period / static_cast<double>(n));
    }
    return r;
  }
};

/// Weighted node list over a parameter box.
struct Quadrature {
  std::vector<Eigen::VectorXd> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
  std::size_t dimension() const { return nodes.empty() ? 0 : static_cast<std::size_t>(nodes.front().size()); }

  static Quadrature tensor(const std::vector<Rule1D>& axes) {
    Quadrature q;
    std::vector<std::size_t> idx(axes.size(), 0);
    for (const auto& a : axes)
      if (a.nodes.empty()) return q;
    const auto d = static_cast<Eigen::Index>(axes.size());
    for (;;) {
      Eigen::VectorXd s(d);
      double w = 1;
      for (Eigen::Index k = 0; k < d; ++k) {
        s(k) = axes[static_cast<std::size_t>(k)].nodes[idx[static_cast<std::size_t>(k)]];
        w *= axes[static_cast<std::size_t>(k)].weights[idx[static_cast<std::size_t>(k)]];
      }
      q.nodes.push_back(std::move(s));
      q.weights.push_back(w);
      std::size_t k = 0;
      while (k < axes.size() && ++idx[k] == axes[k].nodes.size()) idx[k++] = 0;
      if (k == axes.size()) break;
    }
    return q;
  }

  static Quadrature monte_carlo(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, std::size_t samples,
                                std::uint64_t seed) {
    Quadrature q;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double volume = (hi - lo).prod();
    for (std::size_t i = 0; i < samples; ++i) {
      Eigen::VectorXd s(lo.size());
      for (Eigen::Index k = 0; k < lo.size(); ++k) s(k) = lo(k) + (hi(k) - lo(k)) * u(rng);
      q.nodes.push_back(std::move(s));
      q.weights.push_back(volume / static_cast<double>(samples));
    }
    return q;
  }

  /// Tensor trapezoid rule on [lo, hi]; spectrally accurate for integrands
  /// that vanish to all orders on the boundary (bump-weighted patches).
  static Quadrature trapezoid_box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, std::size_t n) {
    if (lo.size() != hi.size()) throw std::invalid_argument("quadrature box: bound dimensions differ");
    std::vector<Rule1D> axes;
    for (Eigen::Index k = 0; k < lo.size(); ++k) axes.push_back(Rule1D::periodic(n, lo(k), hi(k) - lo(k)));
    return tensor(axes);
  }

  /// Gauss-Legendre tensor rule on [lo, hi] with n points per axis; falls
  /// back to Monte Carlo above dimension 4.
  static Quadrature box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, std::size_t n,
                        std::uint64_t seed = 1) {
    if (lo.size() != hi.size()) throw std::invalid_argument("quadrature box: bound dimensions differ");
    if (lo.size() > 4) {
      std::size_t samples = 1;
      for (int i = 0; i < 4; ++i) samples *= n;
      return monte_carlo(lo, hi, samples, seed);
    }
    std::vector<Rule1D> axes;
    for (Eigen::Index k = 0; k < lo.size(); ++k) axes.push_back(Rule1D::gauss_legendre(n, lo(k), hi(k)));
    return tensor(axes);
  }
};

}  // namespace toric
