#pragma once

// Formal exponential maps phi_x(y) given by their jets, the connection
// one-form R = -(d phi/dy)^{-1} d phi/dx, Taylor pullbacks of functions and
// bivectors, and the classical Grothendieck connection D_G = d_x + L_R.

#include <string>
#include <vector>

#include "kontsevich/jet.hpp"

namespace kontsevich::series {

using JetMatrix = std::vector<std::vector<JetPolynomial>>;

/// phi^i(dx, y) for i = 1..d around the chart point x0.
struct ExpMapJets {
  std::vector<BigRational> x0;
  std::vector<JetPolynomial> phi;

  unsigned dim() const { return static_cast<unsigned>(phi.size()); }

  Caps caps() const {
    Caps c;
    for (const auto& p : phi) c = min_caps(c, p.caps());
    return c;
  }

  /// Checks phi(dx, 0) = x0 + dx and that the fiber-linear part is y.
  void validate() const {
    const unsigned d = dim();
    if (d == 0 || d > kMaxDim) throw Error(ErrorCode::InvalidJet, "dimension must be 1.." + std::to_string(kMaxDim));
    if (x0.size() != d) throw Error(ErrorCode::DimensionMismatch, "base point has wrong dimension");
    for (unsigned i = 0; i < d; ++i) {
      const auto& p = phi[i];
      if (p.dim() != d) throw Error(ErrorCode::DimensionMismatch, "component of wrong dimension");
      if (p.caps().base < 1 || p.caps().fiber < 1)
        throw Error(ErrorCode::InvalidJet, "caps must allow base and fiber degree 1");
      const std::string comp = "phi^" + std::to_string(i + 1);
      for (const auto& [k, c] : p.terms()) {
        const int fd = mono::fiber_degree(k);
        if (fd == 0) {
          const bool ok = (k == 0 && c == x0[i]) || (k == mono::base_unit(i) && c == 1);
          if (!ok) throw Error(ErrorCode::InvalidJet, comp + ": base part must be x0 + dx (phi(0) = x)");
        } else if (fd == 1) {
          if (!(k == mono::fiber_unit(i) && c == 1))
            throw Error(ErrorCode::InvalidJet, comp + ": fiber-linear part must be y (d phi(0) = id)");
        }
      }
      if (p.coeff(mono::base_unit(i)) != 1)
        throw Error(ErrorCode::InvalidJet, comp + ": base part must be x0 + dx (phi(0) = x)");
      if (p.coeff(0) != x0[i]) throw Error(ErrorCode::InvalidJet, comp + ": base part must be x0 + dx (phi(0) = x)");
      if (p.coeff(mono::fiber_unit(i)) != 1)
        throw Error(ErrorCode::InvalidJet, comp + ": fiber-linear part must be y (d phi(0) = id)");
    }
  }

  /// phi^i = x0^i + dx^i + y^i.
  static ExpMapJets affine(std::vector<BigRational> x0, Caps caps) {
    ExpMapJets e;
    const unsigned d = static_cast<unsigned>(x0.size());
    e.x0 = std::move(x0);
    for (unsigned i = 0; i < d; ++i) {
      JetPolynomial p(d, caps);
      p.add_term(0, e.x0[i]);
      p.add_term(mono::base_unit(i), 1);
      p.add_term(mono::fiber_unit(i), 1);
      e.phi.push_back(std::move(p));
    }
    return e;
  }
};

/// R[j][l] = R^j_l.
struct RJets {
  JetMatrix r;
  unsigned dim() const { return static_cast<unsigned>(r.size()); }
};

/// pi[a][b] = (T phi^* pi)^{ab}.
struct BivectorJets {
  JetMatrix pi;
  unsigned dim() const { return static_cast<unsigned>(pi.size()); }

  static BivectorJets constant(const std::vector<std::vector<BigRational>>& m) {
    BivectorJets b;
    const unsigned d = static_cast<unsigned>(m.size());
    b.pi.assign(d, std::vector<JetPolynomial>(d, JetPolynomial(d, {})));
    for (unsigned i = 0; i < d; ++i)
      for (unsigned j = 0; j < d; ++j) b.pi[i][j] = JetPolynomial::constant(d, m[i][j]);
    return b;
  }

  bool antisymmetric() const {
    for (unsigned i = 0; i < dim(); ++i)
      for (unsigned j = 0; j < dim(); ++j)
        if (!(pi[i][j] == -pi[j][i])) return false;
    return true;
  }
};

/// Antisymmetric matrix of base polynomials.
using BaseBivector = std::vector<std::vector<BasePolynomial>>;

/// Forms with hbar-series coefficients. Components: one for degree 0, d for
/// degree 1 (index i), d(d-1)/2 for degree 2 (pairs i<j in lexicographic
/// order).
struct HbarForm {
  int degree = 0;
  unsigned dim = 0;
  std::vector<HbarSeries> components;

  static std::size_t pair_index(unsigned i, unsigned j, unsigned d) {
    // position of (i, j), i < j, in the list (0,1), (0,2), ..., (d-2, d-1)
    return static_cast<std::size_t>(i) * d - static_cast<std::size_t>(i) * (i + 1) / 2 + (j - i - 1);
  }

  static HbarForm zero(int degree, unsigned d, unsigned orders, Caps caps = {}) {
    HbarForm f;
    f.degree = degree;
    f.dim = d;
    const std::size_t n = degree == 0 ? 1 : degree == 1 ? d : d * (d - 1) / 2;
    f.components.assign(n, HbarSeries(orders + 1, JetPolynomial(d, caps)));
    return f;
  }

  unsigned max_order() const { return components.empty() ? 0 : static_cast<unsigned>(components[0].size()) - 1; }

  bool order_is_zero(unsigned n) const {
    for (const auto& c : components)
      if (n < c.size() && !c[n].is_zero()) return false;
    return true;
  }

  bool is_zero() const {
    for (unsigned n = 0; n <= max_order(); ++n)
      if (!order_is_zero(n)) return false;
    return true;
  }
};

namespace detail {

using RationalMatrix = std::vector<std::vector<BigRational>>;

inline RationalMatrix invert(RationalMatrix a) {
  const std::size_t n = a.size();
  RationalMatrix inv(n, std::vector<BigRational>(n, BigRational(0)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) throw Error(ErrorCode::SingularLeadingTerm, "constant term of the matrix is singular");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    const BigRational p = a[col][col];
    for (std::size_t j = 0; j < n; ++j) {
      a[col][j] /= p;
      inv[col][j] /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const BigRational f = a[r][col];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

inline JetMatrix multiply(const JetMatrix& a, const JetMatrix& b) {
  const std::size_t n = a.size(), m = b[0].size(), inner = b.size();
  JetMatrix r(n, std::vector<JetPolynomial>(m));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      JetPolynomial acc = a[i][0] * b[0][j];
      for (std::size_t k = 1; k < inner; ++k) acc += a[i][k] * b[k][j];
      r[i][j] = std::move(acc);
    }
  return r;
}

}  // namespace detail

/// Inverse of a square jet matrix up to its caps, by the fixed-point
/// iteration X = M0^{-1} (I - N X) with M = M0 + N, M0 the constant part.
inline JetMatrix series_matrix_inverse(const JetMatrix& M) {
  const std::size_t n = M.size();
  if (n == 0) return {};
  const unsigned d = M[0][0].dim();
  Caps caps;
  detail::RationalMatrix m0(n, std::vector<BigRational>(n));
  bool base_dependence = false, fiber_dependence = false;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      caps = min_caps(caps, M[i][j].caps());
      m0[i][j] = M[i][j].coeff(0);
      for (const auto& [k, c] : M[i][j].terms()) {
        base_dependence |= mono::base_degree(k) > 0;
        fiber_dependence |= mono::fiber_degree(k) > 0;
      }
    }
  const int base_span = base_dependence ? caps.base : 0;
  const int fiber_span = fiber_dependence ? caps.fiber : 0;
  if (base_span >= kUnbounded || fiber_span >= kUnbounded)
    throw Error(ErrorCode::CapExceeded, "series inverse of a non-constant matrix needs finite caps");
  const auto m0inv = detail::invert(m0);

  JetMatrix Minv(n, std::vector<JetPolynomial>(n)), N(n, std::vector<JetPolynomial>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Minv[i][j] = JetPolynomial::constant(d, m0inv[i][j], caps);
      N[i][j] = M[i][j].truncated(caps);
      N[i][j].add_term(0, -m0[i][j]);
    }
  JetMatrix X = Minv;
  // each pass fixes one more total degree
  for (int pass = 0; pass < base_span + fiber_span; ++pass) {
    JetMatrix NX = detail::multiply(N, X);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) NX[i][j] = -NX[i][j];
    JetMatrix next = detail::multiply(Minv, NX);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) next[i][j] += Minv[i][j];
    bool same = true;
    for (std::size_t i = 0; i < n && same; ++i)
      for (std::size_t j = 0; j < n && same; ++j) same = next[i][j].terms() == X[i][j].terms();
    X = std::move(next);
    if (same) break;
  }
  return X;
}

inline JetMatrix fiber_jacobian(const ExpMapJets& phi) {
  const unsigned d = phi.dim();
  JetMatrix J(d, std::vector<JetPolynomial>(d));
  for (unsigned k = 0; k < d; ++k)
    for (unsigned j = 0; j < d; ++j) J[k][j] = phi.phi[k].diff_fiber(j);
  return J;
}

inline JetMatrix base_jacobian(const ExpMapJets& phi) {
  const unsigned d = phi.dim();
  JetMatrix J(d, std::vector<JetPolynomial>(d));
  for (unsigned k = 0; k < d; ++k)
    for (unsigned l = 0; l < d; ++l) J[k][l] = phi.phi[k].diff_base(l);
  return J;
}

/// R^j_l = -((d phi/dy)^{-1})^j_k d phi^k / dx^l.
inline RJets compute_R(const ExpMapJets& phi) {
  const JetMatrix inv = series_matrix_inverse(fiber_jacobian(phi));
  JetMatrix r = detail::multiply(inv, base_jacobian(phi));
  for (auto& row : r)
    for (auto& e : row) e = -e;
  return {std::move(r)};
}

/// Taylor expansion of f o phi in (dx, y).
inline JetPolynomial pullback_function(const ExpMapJets& phi, const BasePolynomial& f) {
  const unsigned d = phi.dim();
  if (f.dim != d) throw Error(ErrorCode::DimensionMismatch, "function and jets have different dimensions");
  const Caps caps = phi.caps();
  if (static_cast<long>(f.degree()) > static_cast<long>(caps.base) + caps.fiber)
    throw Error(ErrorCode::CapExceeded, "function degree " + std::to_string(f.degree()) + " exceeds caps " +
                                            std::to_string(caps.base) + "+" + std::to_string(caps.fiber));
  // powers[i][e] = (phi^i)^e
  std::vector<std::vector<JetPolynomial>> powers(d);
  JetPolynomial out(d, caps);
  for (const auto& [k, c] : f.terms) {
    JetPolynomial term = JetPolynomial::constant(d, c, caps);
    for (unsigned i = 0; i < d; ++i) {
      const unsigned e = mono::base_exp(k, i);
      auto& pw = powers[i];
      if (pw.empty()) pw.push_back(JetPolynomial::constant(d, 1, caps));
      while (pw.size() <= e) pw.push_back(pw.back() * phi.phi[i]);
      if (e > 0) term = term * pw[e];
    }
    out += term;
  }
  return out;
}

/// (T phi^* pi)^{ab} = (J^{-1})^a_i (J^{-1})^b_j pi^{ij}(phi), J = d phi/dy.
inline BivectorJets pullback_bivector(const ExpMapJets& phi, const BaseBivector& pi) {
  const unsigned d = phi.dim();
  if (pi.size() != d) throw Error(ErrorCode::DimensionMismatch, "bivector and jets have different dimensions");
  for (unsigned i = 0; i < d; ++i)
    for (unsigned j = 0; j < d; ++j) {
      BasePolynomial sum = pi[i][j];
      for (const auto& [k, c] : pi[j][i].terms) sum.add_term(k, c);
      if (!sum.terms.empty()) throw std::invalid_argument("bivector is not antisymmetric");
    }
  const JetMatrix inv = series_matrix_inverse(fiber_jacobian(phi));
  JetMatrix composed(d, std::vector<JetPolynomial>(d));
  for (unsigned i = 0; i < d; ++i)
    for (unsigned j = 0; j < d; ++j) composed[i][j] = pullback_function(phi, pi[i][j]);
  JetMatrix left = detail::multiply(inv, composed);  // (J^{-1})^a_i pi^{ij}
  JetMatrix out(d, std::vector<JetPolynomial>(d));
  for (unsigned a = 0; a < d; ++a)
    for (unsigned b = 0; b < d; ++b) {
      JetPolynomial acc = left[a][0] * inv[b][0];
      for (unsigned j = 1; j < d; ++j) acc += left[a][j] * inv[b][j];
      out[a][b] = std::move(acc);
    }
  return {std::move(out)};
}

/// D_G sigma with component l = d sigma/dx^l + R^j_l d sigma/dy^j.
inline HbarForm apply_classical_DG(const RJets& R, const JetPolynomial& sigma) {
  const unsigned d = R.dim();
  HbarForm out = HbarForm::zero(1, d, 0);
  for (unsigned l = 0; l < d; ++l) {
    JetPolynomial c = sigma.diff_base(l);
    for (unsigned j = 0; j < d; ++j) c += R.r[j][l] * sigma.diff_fiber(j);
    out.components[l][0] = std::move(c);
  }
  return out;
}

inline HbarForm apply_classical_DG(const ExpMapJets& phi, const JetPolynomial& sigma) {
  return apply_classical_DG(compute_R(phi), sigma);
}

/// Entry [pair(l<m)][j]: d_l R^j_m - d_m R^j_l + R^k_l d_k R^j_m - R^k_m d_k R^j_l.
inline std::vector<std::vector<JetPolynomial>> flatness_residual(const RJets& R) {
  const unsigned d = R.dim();
  std::vector<std::vector<JetPolynomial>> out;
  for (unsigned l = 0; l < d; ++l)
    for (unsigned m = l + 1; m < d; ++m) {
      std::vector<JetPolynomial> comp;
      for (unsigned j = 0; j < d; ++j) {
        JetPolynomial v = R.r[j][m].diff_base(l) - R.r[j][l].diff_base(m);
        for (unsigned k = 0; k < d; ++k) {
          v += R.r[k][l] * R.r[j][m].diff_fiber(k);
          v -= R.r[k][m] * R.r[j][l].diff_fiber(k);
        }
        comp.push_back(std::move(v));
      }
      out.push_back(std::move(comp));
    }
  return out;
}

}  // namespace kontsevich::series
