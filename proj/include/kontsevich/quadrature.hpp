#pragma once

// Gauss-Legendre rules and the one-dimensional reduced integral for the
// Upsilon family over C_{1,1}.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "kontsevich/propagator.hpp"

namespace kontsevich::numeric {

struct QuadratureRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// Nodes are roots of P_n found by Newton iteration from the Chebyshev-like
/// initial guess cos(pi (i + 3/4) / (n + 1/2)).
inline QuadratureRule gauss_legendre(unsigned n) {
  if (n == 0) throw std::invalid_argument("gauss_legendre needs n >= 1");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const unsigned half = (n + 1) / 2;
  for (unsigned i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (unsigned k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute the derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (unsigned k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

/// Integrand of the reduced Upsilon_n weight at x = e^{i theta}, q = 0:
/// wedge_factor_boundary(x, 0)^n * dphi(x,0)/dtheta / (2 pi).
inline double upsilon_reduced_integrand(unsigned n, double theta) {
  const geom::HPoint x{std::cos(theta), std::sin(theta)};
  const geom::HPoint q{0.0, 0.0};
  const auto g = geom::angle_gradient(x, q);
  const double dphi = -std::sin(theta) * g.du_re + std::cos(theta) * g.du_im;
  return std::pow(geom::wedge_factor_boundary(x, 0.0), static_cast<double>(n)) * dphi / geom::kTwoPi;
}

/// theta runs over (0, pi), split at pi/2 where (x;q) and the branch of
/// phi(q,x) jump; `points` Gauss-Legendre nodes on each half.
inline double reduced_upsilon_quad(unsigned n, unsigned points) {
  if (points < 2) throw std::invalid_argument("reduced_upsilon_quad needs points >= 2");
  const QuadratureRule rule = gauss_legendre(points);
  const double pi = std::numbers::pi;
  double total = 0.0;
  for (auto [a, b] : {std::pair{0.0, pi / 2}, std::pair{pi / 2, pi}}) {
    const double mid = 0.5 * (a + b), rad = 0.5 * (b - a);
    double part = 0.0;
    for (unsigned i = 0; i < points; ++i) part += rule.weights[i] * upsilon_reduced_integrand(n, mid + rad * rule.nodes[i]);
    total += rad * part;
  }
  return total;
}

}  // namespace kontsevich::numeric
