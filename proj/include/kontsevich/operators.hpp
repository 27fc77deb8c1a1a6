#pragma once

// The hbar-series operators built from the three weight families:
//   star product P          weights 1/2^{2n} n!
//   connection A            weights w_Upsilon_n / 2^n n!
//   curvature F             weights w_Gamma_n / 2^n n!
// plus the residual of F + D_G gamma + gamma * gamma, the bullet product
// and the cotangent-lift form of the curvature.
//
// All sums over ordered index strings (i_1 j_1 ... i_n j_n) are taken over
// multisets P of pairs instead: a multiset with multiplicities p_ij occurs
// n!/prod p_ij! times, so the n! of the prefactors cancels against it.

#include <array>
#include <functional>
#include <map>
#include <vector>

#include "kontsevich/exact_weights.hpp"
#include "kontsevich/formal_geometry.hpp"

namespace kontsevich::series {

using MultiIndex = std::array<unsigned, kMaxDim>;

namespace detail {

/// Memoised fiber derivatives d^alpha of one jet.
class DerivativeCache {
 public:
  explicit DerivativeCache(const JetPolynomial& f) : f_(f) {}

  const JetPolynomial& get(const MultiIndex& alpha) {
    MonoKey key = mono::make(MultiIndex{}, alpha);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    // differentiate the cached entry one step below
    for (unsigned i = 0; i < kMaxDim; ++i) {
      if (alpha[i] == 0) continue;
      MultiIndex lower = alpha;
      --lower[i];
      JetPolynomial d = get(lower).diff_fiber(i);
      return cache_.emplace(key, std::move(d)).first->second;
    }
    return cache_.emplace(key, f_).first->second;
  }

 private:
  const JetPolynomial& f_;
  std::map<MonoKey, JetPolynomial> cache_;
};

struct Contraction {
  MultiIndex alpha{};  // derivatives landing on the first argument
  MultiIndex beta{};   // derivatives landing on the second argument
  BigRational weight;  // 1 / prod p_ij!
  JetPolynomial pi_product;
};

/// Calls f for every multiset of n index pairs (i,j) with pi^{ij} != 0.
inline void for_each_contraction(const BivectorJets& pi, unsigned n, const std::function<void(const Contraction&)>& f) {
  const unsigned d = pi.dim();
  std::vector<std::pair<unsigned, unsigned>> pairs;
  for (unsigned i = 0; i < d; ++i)
    for (unsigned j = 0; j < d; ++j)
      if (!pi.pi[i][j].is_zero()) pairs.emplace_back(i, j);
  Contraction cur;
  cur.weight = 1;
  cur.pi_product = JetPolynomial::constant(d, 1);
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t idx, unsigned left) {
    if (left == 0) {
      f(cur);
      return;
    }
    if (idx == pairs.size()) return;
    rec(idx + 1, left);  // p = 0 for this pair
    const auto [i, j] = pairs[idx];
    const Contraction saved = cur;
    for (unsigned p = 1; p <= left; ++p) {
      ++cur.alpha[i];
      ++cur.beta[j];
      cur.weight /= p;
      cur.pi_product = cur.pi_product * pi.pi[i][j];
      rec(idx + 1, left - p);
    }
    cur = saved;
  };
  rec(0, n);
}

inline MultiIndex plus_unit(MultiIndex a, unsigned k) {
  ++a[k];
  return a;
}

inline HbarSeries zero_series(unsigned d, unsigned K) { return HbarSeries(K + 1, JetPolynomial(d, {})); }

}  // namespace detail

/// n-th bidifferential term (1/2^{2n}) sum_P pi^P d^alpha s d^beta t.
inline JetPolynomial star_term(const BivectorJets& pi, const JetPolynomial& s, const JetPolynomial& t, unsigned n) {
  const unsigned d = pi.dim();
  if (n == 0) return s * t;
  detail::DerivativeCache ds(s), dt(t);
  JetPolynomial acc(d, {});
  detail::for_each_contraction(pi, n, [&](const detail::Contraction& c) {
    acc += c.weight * (c.pi_product * (ds.get(c.alpha) * dt.get(c.beta)));
  });
  return acc * make_rational(BigInt(1), pow2(2 * n));
}

/// Star product of hbar-series S * T through hbar^K.
inline HbarSeries star_series(const BivectorJets& pi, const HbarSeries& S, const HbarSeries& T, unsigned K) {
  const unsigned d = pi.dim();
  HbarSeries out = detail::zero_series(d, K);
  for (unsigned a = 0; a < S.size() && a <= K; ++a)
    for (unsigned b = 0; b < T.size() && a + b <= K; ++b) {
      if (S[a].is_zero() || T[b].is_zero()) continue;
      for (unsigned n = 0; a + b + n <= K; ++n) out[a + b + n] += star_term(pi, S[a], T[b], n);
    }
  return out;
}

inline HbarForm star_product(const BivectorJets& pi, const JetPolynomial& sigma, const JetPolynomial& tau, unsigned K) {
  HbarForm f;
  f.degree = 0;
  f.dim = pi.dim();
  f.components = {star_series(pi, {sigma}, {tau}, K)};
  return f;
}

inline HbarForm star_commutator(const BivectorJets& pi, const JetPolynomial& a, const JetPolynomial& b, unsigned K) {
  HbarForm ab = star_product(pi, a, b, K);
  const HbarForm ba = star_product(pi, b, a, K);
  for (unsigned n = 0; n <= K; ++n) ab.components[0][n] -= ba.components[0][n];
  return ab;
}

/// hbar^n term of the deformed connection in direction i applied to s:
/// (w_Upsilon_n / 2^n) sum_P pi^P sum_k d^alpha R^k_i d^beta d_k s.
inline JetPolynomial connection_term(const RJets& R, const BivectorJets& pi, const JetPolynomial& s, unsigned i,
                                     unsigned n) {
  const unsigned d = pi.dim();
  JetPolynomial acc(d, {});
  const BigRational w = exact::weight_upsilon(n) / BigRational(pow2(n));
  if (w == 0) return acc;  // odd n: the weight vanishes
  detail::DerivativeCache ds(s);
  std::vector<detail::DerivativeCache> dR;
  dR.reserve(d);
  for (unsigned k = 0; k < d; ++k) dR.emplace_back(R.r[k][i]);
  detail::for_each_contraction(pi, n, [&](const detail::Contraction& c) {
    JetPolynomial inner(d, {});
    for (unsigned k = 0; k < d; ++k) inner += dR[k].get(c.alpha) * ds.get(detail::plus_unit(c.beta, k));
    acc += c.weight * (c.pi_product * inner);
  });
  return acc * w;
}

/// A applied to an hbar-series, component i, through hbar^K.
inline HbarSeries connection_series(const RJets& R, const BivectorJets& pi, const HbarSeries& S, unsigned i,
                                    unsigned K) {
  HbarSeries out = detail::zero_series(pi.dim(), K);
  for (unsigned a = 0; a < S.size() && a <= K; ++a) {
    if (S[a].is_zero()) continue;
    for (unsigned n = 0; a + n <= K; ++n) out[a + n] += connection_term(R, pi, S[a], i, n);
  }
  return out;
}

inline HbarForm connection_A(const RJets& R, const BivectorJets& pi, const JetPolynomial& sigma, unsigned K) {
  const unsigned d = pi.dim();
  if (R.dim() != d) throw Error(ErrorCode::DimensionMismatch, "R and bivector have different dimensions");
  HbarForm f = HbarForm::zero(1, d, K);
  for (unsigned i = 0; i < d; ++i) f.components[i] = connection_series(R, pi, {sigma}, i, K);
  return f;
}

/// sum_P pi^P sum_{k,l} d^alpha d_l R^k_i  d^beta d_k R^l_j (no weight).
inline JetPolynomial curvature_contraction(const BivectorJets& pi, unsigned i, unsigned j, unsigned n,
                                           std::vector<detail::DerivativeCache>& dR) {
  const unsigned d = pi.dim();
  JetPolynomial acc(d, {});
  detail::for_each_contraction(pi, n, [&](const detail::Contraction& c) {
    JetPolynomial inner(d, {});
    for (unsigned k = 0; k < d; ++k)
      for (unsigned l = 0; l < d; ++l)
        inner += dR[k * d + i].get(detail::plus_unit(c.alpha, l)) * dR[l * d + j].get(detail::plus_unit(c.beta, k));
    acc += c.weight * (c.pi_product * inner);
  });
  return acc;
}

/// Curvature 2-form; component (i<j) of hbar^n is
/// (w_Gamma_n / 2^n)(G_ij - G_ji) with G the contraction above.
inline HbarForm curvature_F(const RJets& R, const BivectorJets& pi, unsigned K) {
  const unsigned d = pi.dim();
  if (R.dim() != d) throw Error(ErrorCode::DimensionMismatch, "R and bivector have different dimensions");
  HbarForm f = HbarForm::zero(2, d, K);
  std::vector<detail::DerivativeCache> dR;
  dR.reserve(d * d);
  for (unsigned k = 0; k < d; ++k)
    for (unsigned i = 0; i < d; ++i) dR.emplace_back(R.r[k][i]);  // index k*d + i
  for (unsigned n = 0; n <= K; ++n) {
    const BigRational w = exact::weight_gamma(n) / BigRational(pow2(n));
    if (w == 0) continue;  // even n: the weight vanishes
    for (unsigned i = 0; i < d; ++i)
      for (unsigned j = i + 1; j < d; ++j) {
        JetPolynomial g = curvature_contraction(pi, i, j, n, dR) - curvature_contraction(pi, j, i, n, dR);
        f.components[HbarForm::pair_index(i, j, d)][n] = g * w;
      }
  }
  return f;
}

/// F + D_G gamma + gamma * gamma for a 1-form gamma, with
///   (D_G gamma)_{ij} = d_i gamma_j - d_j gamma_i + A_i(gamma_j) - A_j(gamma_i),
///   (gamma * gamma)_{ij} = gamma_i * gamma_j - gamma_j * gamma_i.
inline HbarForm gamma_equation_residual(const RJets& R, const BivectorJets& pi, const HbarForm& gamma, unsigned K) {
  const unsigned d = pi.dim();
  if (gamma.degree != 1 || gamma.dim != d) throw Error(ErrorCode::DimensionMismatch, "gamma must be a 1-form");
  HbarForm res = curvature_F(R, pi, K);
  std::vector<std::vector<HbarSeries>> A(d, std::vector<HbarSeries>(d));  // A[i][j] = A_i(gamma_j)
  for (unsigned i = 0; i < d; ++i)
    for (unsigned j = 0; j < d; ++j) A[i][j] = connection_series(R, pi, gamma.components[j], i, K);
  for (unsigned i = 0; i < d; ++i)
    for (unsigned j = i + 1; j < d; ++j) {
      HbarSeries& out = res.components[HbarForm::pair_index(i, j, d)];
      const HbarSeries& gi = gamma.components[i];
      const HbarSeries& gj = gamma.components[j];
      const HbarSeries ij = star_series(pi, gi, gj, K);
      const HbarSeries ji = star_series(pi, gj, gi, K);
      for (unsigned n = 0; n <= K; ++n) {
        if (n < gj.size()) out[n] += gj[n].diff_base(i);
        if (n < gi.size()) out[n] -= gi[n].diff_base(j);
        out[n] += A[i][j][n] - A[j][i][n] + ij[n] - ji[n];
      }
    }
  return res;
}

inline HbarForm gamma_equation_residual(const ExpMapJets& phi, const BivectorJets& pi, const HbarForm& gamma,
                                        unsigned K) {
  return gamma_equation_residual(compute_R(phi), pi, gamma, K);
}

/// (f . g) = (T phi^* f) * (T phi^* g) at y = 0 with the pulled-back bivector;
/// coefficients are polynomials in dx.
inline HbarSeries bullet_product(const ExpMapJets& phi, const BaseBivector& pi, const BasePolynomial& f,
                                 const BasePolynomial& g, unsigned K) {
  const BivectorJets pih = pullback_bivector(phi, pi);
  HbarSeries s = star_series(pih, {pullback_function(phi, f)}, {pullback_function(phi, g)}, K);
  for (auto& c : s) c = c.at_fiber_zero();
  return s;
}

/// Rewrites a y-independent jet in dx as a polynomial in x = x0 + dx.
inline BasePolynomial to_base_polynomial(const JetPolynomial& j, const std::vector<BigRational>& x0) {
  const unsigned d = j.dim();
  BasePolynomial out{d, {}};
  for (const auto& [k, c] : j.terms()) {
    if (mono::fiber_degree(k) != 0) throw std::invalid_argument("jet depends on y");
    // prod_i (x^i - x0^i)^{a_i}
    std::map<MonoKey, BigRational> term{{0, c}};
    for (unsigned i = 0; i < d; ++i) {
      for (unsigned e = 0; e < mono::base_exp(k, i); ++e) {
        std::map<MonoKey, BigRational> next;
        for (const auto& [tk, tc] : term) {
          next[tk + mono::base_unit(i)] += tc;
          if (x0[i] != 0) next[tk] -= tc * x0[i];
        }
        term = std::move(next);
      }
    }
    for (const auto& [tk, tc] : term) out.add_term(tk, tc);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cotangent lift

/// Fiber coordinates (qbar^1..qbar^m, pbar_1..pbar_m), d = 2m.
struct CotangentSplit {
  unsigned m = 1;

  unsigned dim() const { return 2 * m; }
  bool is_pbar(unsigned idx) const { return idx >= m; }

  int pbar_degree(MonoKey k) const {
    int s = 0;
    for (unsigned i = m; i < 2 * m; ++i) s += static_cast<int>(mono::fiber_exp(k, i));
    return s;
  }
};

inline RJets enforce_cotangent_filter(const RJets& R, const CotangentSplit& split) {
  RJets out = R;
  for (auto& row : out.r)
    for (auto& e : row) {
      JetPolynomial kept(e.dim(), e.caps());
      for (const auto& [k, c] : e.terms())
        if (split.pbar_degree(k) <= 1) kept.add_term(k, c);
      e = std::move(kept);
    }
  return out;
}

inline void check_cotangent_filter(const RJets& R, const CotangentSplit& split) {
  for (unsigned k = 0; k < R.dim(); ++k)
    for (unsigned i = 0; i < R.dim(); ++i)
      for (const auto& [key, c] : R.r[k][i].terms())
        if (split.pbar_degree(key) >= 2)
          throw Error(ErrorCode::FilterViolation, "R^" + std::to_string(k + 1) + "_" + std::to_string(i + 1) +
                                                      " has a monomial of pbar-degree " +
                                                      std::to_string(split.pbar_degree(key)));
}

/// (hbar/48) pi^{rs} R^k_{i,lr} R^l_{j,ks} dx^i dx^j as a 2-form through
/// hbar^K. The full curvature series on the same input is computed as well
/// and must agree with it exactly and vanish from hbar^2 on.
inline HbarForm cotangent_curvature(const RJets& R, const BivectorJets& pi, const CotangentSplit& split,
                                    unsigned K = 4) {
  const unsigned d = split.dim();
  if (R.dim() != d || pi.dim() != d) throw Error(ErrorCode::DimensionMismatch, "cotangent split needs d = 2m");
  check_cotangent_filter(R, split);
  for (unsigned a = 0; a < d; ++a)
    for (unsigned b = 0; b < d; ++b)
      if (split.is_pbar(a) == split.is_pbar(b) && !pi.pi[a][b].is_zero())
        throw Error(ErrorCode::NonDarbouxBivector, "pi^{" + std::to_string(a + 1) + std::to_string(b + 1) +
                                                       "} pairs two coordinates of the same type");
  HbarForm out = HbarForm::zero(2, d, std::max(K, 1u));
  auto contraction = [&](unsigned i, unsigned j) {
    JetPolynomial acc(d, {});
    for (unsigned r = 0; r < d; ++r)
      for (unsigned s = 0; s < d; ++s) {
        if (pi.pi[r][s].is_zero()) continue;
        for (unsigned k = 0; k < d; ++k)
          for (unsigned l = 0; l < d; ++l)
            acc += pi.pi[r][s] * (R.r[k][i].diff_fiber(l).diff_fiber(r) * R.r[l][j].diff_fiber(k).diff_fiber(s));
      }
    return acc;
  };
  for (unsigned i = 0; i < d; ++i)
    for (unsigned j = i + 1; j < d; ++j)
      out.components[HbarForm::pair_index(i, j, d)][1] = (contraction(i, j) - contraction(j, i)) * BigRational(1, 48);

  const HbarForm full = curvature_F(R, pi, std::max(K, 1u));
  for (std::size_t c = 0; c < full.components.size(); ++c)
    for (unsigned n = 0; n <= full.max_order(); ++n)
      if (!(full.components[c][n] == out.components[c][n]))
        throw std::logic_error("cotangent curvature differs from the full series at hbar^" + std::to_string(n));
  return out;
}

/// hbar orders at which every component vanishes.
inline std::vector<unsigned> vanishing_orders(const HbarForm& f) {
  std::vector<unsigned> out;
  for (unsigned n = 0; n <= f.max_order(); ++n)
    if (f.order_is_zero(n)) out.push_back(n);
  return out;
}

}  // namespace kontsevich::series
