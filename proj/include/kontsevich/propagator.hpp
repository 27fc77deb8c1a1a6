#pragma once

// Harmonic angle function on the closed upper half plane, the sign factors
// that appear after the wedge vertices are integrated out, and gauge-fixed
// charts of the open configuration spaces of the three graph families.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "kontsevich/error.hpp"
#include "kontsevich/exact_weights.hpp"

namespace kontsevich::geom {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct HPoint {
  double re = 0.0;
  double im = 0.0;

  Complex z() const { return {re, im}; }
  bool on_boundary() const { return im == 0.0; }
  static HPoint from(Complex c) { return {c.real(), c.imag()}; }
};

namespace detail {

inline void require_distinct(const HPoint& u, const HPoint& v) {
  if (u.re == v.re && u.im == v.im) throw Error(ErrorCode::CoincidentPoints, "angle between a point and itself");
}

}  // namespace detail

/// phi(u, v) = arg((v-u)/(v-conj u)) in [0, 2pi). For u on the real line the
/// function of v is locally constant: 0 to the left of u, 2pi to the right.
inline double angle(const HPoint& u, const HPoint& v) {
  detail::require_distinct(u, v);
  if (u.on_boundary()) {
    if (v.re == u.re) throw Error(ErrorCode::EqualRealParts, "target directly above a boundary source");
    return v.re < u.re ? 0.0 : kTwoPi;
  }
  const Complex zu = u.z(), zv = v.z();
  double a = std::arg((zv - zu) / (zv - std::conj(zu)));
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a -= kTwoPi;
  return a;
}

/// Partials of phi(u, v) in the order d/dRe u, d/dIm u, d/dRe v, d/dIm v.
struct AngleGradient {
  double du_re = 0.0, du_im = 0.0, dv_re = 0.0, dv_im = 0.0;
};

inline AngleGradient angle_gradient(const HPoint& u, const HPoint& v) {
  detail::require_distinct(u, v);
  if (u.on_boundary()) return {};
  const Complex zu = u.z(), zv = v.z();
  const Complex A = 1.0 / (zv - zu);
  const Complex B = 1.0 / (zv - std::conj(zu));
  return {-A.imag() + B.imag(), -A.real() - B.real(), A.imag() - B.imag(), A.real() - B.real()};
}

/// [x;y] = +1 if Re x > Re y, -1 if Re x < Re y.
inline int sign_bulk(const HPoint& x, const HPoint& y) {
  if (x.re == y.re) throw Error(ErrorCode::EqualRealParts, "[x;y] undefined for Re x = Re y");
  return x.re > y.re ? 1 : -1;
}

/// (x;q) = 1 if Re x > q, else 0.
inline int indicator_boundary(const HPoint& x, double q) {
  if (x.re == q) throw Error(ErrorCode::EqualRealParts, "(x;q) undefined for Re x = q");
  return x.re > q ? 1 : 0;
}

/// Integral over z of dphi(z,x) dphi(z,y), divided by (2pi)^2.
inline double wedge_factor_bulk(const HPoint& x, const HPoint& y) {
  return (angle(x, y) - angle(y, x)) / kTwoPi + 0.5 * sign_bulk(x, y);
}

/// Same with y collapsed onto the boundary point q.
inline double wedge_factor_boundary(const HPoint& x, double q) {
  const HPoint qp{q, 0.0};
  const int s = 2 * indicator_boundary(x, q) - 1;
  return (angle(x, qp) - angle(qp, x)) / kTwoPi + 0.5 * s;
}

// ---------------------------------------------------------------------------
// Gauge-fixed charts

/// Directed edge (source, target) between vertex ids.
using Edge = std::pair<int, int>;
using EdgeList = std::vector<Edge>;

// Vertex ids: Gamma  0 = x, 1 = y, 2+k = z_k
//             Upsilon 0 = x, 1 = q, 2+k = z_k
//             Lambda  0 = p, 1 = q, 2+k = z_k
inline EdgeList family_edges(Family family, unsigned n) {
  EdgeList edges;
  switch (family) {
    case Family::Gamma:
      edges = {{0, 1}, {1, 0}};
      for (unsigned k = 0; k < n; ++k) {
        edges.emplace_back(2 + k, 0);
        edges.emplace_back(2 + k, 1);
      }
      break;
    case Family::Upsilon:
      edges = {{0, 1}};
      for (unsigned k = 0; k < n; ++k) {
        edges.emplace_back(2 + k, 0);
        edges.emplace_back(2 + k, 1);
      }
      break;
    case Family::Lambda:
      for (unsigned k = 0; k < n; ++k) {
        edges.emplace_back(2 + k, 0);
        edges.emplace_back(2 + k, 1);
      }
      break;
  }
  return edges;
}

inline unsigned family_dimension(Family family, unsigned n) {
  switch (family) {
    case Family::Gamma: return 2 * n + 2;
    case Family::Upsilon: return 2 * n + 1;
    case Family::Lambda: return 2 * n;
  }
  return 0;
}

/// Position of one vertex together with its derivative with respect to the
/// chart coordinates. A vertex moves with at most two coordinates.
struct VertexChart {
  HPoint point;
  std::array<int, 2> coord{-1, -1};
  // jac[r][c] = d(Re, Im)[r] / d coord[c]
  std::array<std::array<double, 2>, 2> jac{};
};

/// A point of the open configuration space modulo real translations and
/// dilations, written in the family's chart:
///   Gamma   x = i fixed;            coords (Re y, Im y, Re z_1, Im z_1, ...)
///   Upsilon q = 0, x = e^{i theta}; coords (theta, Re z_1, Im z_1, ...)
///   Lambda  p = 0, q = 1 fixed;     coords (Re z_1, Im z_1, ...)
struct GaugeFixedConfig {
  Family family = Family::Gamma;
  unsigned n = 0;
  std::vector<double> coords;

  GaugeFixedConfig(Family f, unsigned wedges, std::vector<double> c)
      : family(f), n(wedges), coords(std::move(c)) {
    if (coords.size() != family_dimension(family, n))
      throw Error(ErrorCode::DimensionOverflow, "chart has " + std::to_string(coords.size()) +
                                                    " coordinates, form degree is " +
                                                    std::to_string(family_dimension(family, n)));
  }

  std::vector<VertexChart> vertices() const {
    std::vector<VertexChart> v(n + 2);
    auto free_point = [&](VertexChart& vc, int first) {
      vc.point = {coords[first], coords[first + 1]};
      vc.coord = {first, first + 1};
      vc.jac = {{{1.0, 0.0}, {0.0, 1.0}}};
    };
    unsigned offset = 0;
    switch (family) {
      case Family::Gamma:
        v[0].point = {0.0, 1.0};
        free_point(v[1], 0);
        offset = 2;
        break;
      case Family::Upsilon: {
        const double th = coords[0];
        v[0].point = {std::cos(th), std::sin(th)};
        v[0].coord = {0, -1};
        v[0].jac = {{{-std::sin(th), 0.0}, {std::cos(th), 0.0}}};
        v[1].point = {0.0, 0.0};
        offset = 1;
        break;
      }
      case Family::Lambda:
        v[0].point = {0.0, 0.0};
        v[1].point = {1.0, 0.0};
        break;
    }
    for (unsigned k = 0; k < n; ++k) free_point(v[2 + k], static_cast<int>(offset + 2 * k));
    return v;
  }
};

}  // namespace kontsevich::geom
