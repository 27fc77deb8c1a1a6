#pragma once

// Seeded random exact inputs for the series operators: sparse exponential
// maps, polynomials, bivectors and filtered cotangent R-jets.

#include <cstdint>
#include <random>
#include <vector>

#include "kontsevich/formal_geometry.hpp"
#include "kontsevich/operators.hpp"

namespace kontsevich::series {

class FixtureRng {
 public:
  explicit FixtureRng(std::uint64_t seed) : rng_(seed) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  /// Nonzero p/q with |p| <= 5, 1 <= q <= 4.
  BigRational rational() {
    int p = 0;
    while (p == 0) p = uniform(-5, 5);
    return make_rational(p, uniform(1, 4));
  }

  MultiIndex multi_index(unsigned d, int degree) {
    MultiIndex a{};
    for (int e = 0; e < degree; ++e) ++a[static_cast<unsigned>(uniform(0, static_cast<int>(d) - 1))];
    return a;
  }

 private:
  std::mt19937_64 rng_;
};

/// phi^i = x0^i + dx^i + y^i + `extra` random terms of fiber degree >= 2.
inline ExpMapJets random_exp_map(FixtureRng& rng, unsigned d, Caps caps, int extra = 3) {
  std::vector<BigRational> x0(d);
  for (auto& v : x0) v = make_rational(rng.uniform(-3, 3), rng.uniform(1, 3));
  ExpMapJets phi = ExpMapJets::affine(x0, caps);
  for (unsigned i = 0; i < d; ++i)
    for (int t = 0; t < extra; ++t) {
      const int fd = rng.uniform(2, caps.fiber);
      const int bd = rng.uniform(0, caps.base);
      phi.phi[i].add_term(mono::make(rng.multi_index(d, bd), rng.multi_index(d, fd)), rng.rational());
    }
  return phi;
}

inline BasePolynomial random_base_polynomial(FixtureRng& rng, unsigned d, int max_degree, int terms) {
  BasePolynomial f{d, {}};
  for (int t = 0; t < terms; ++t)
    f.add_term(mono::make(rng.multi_index(d, rng.uniform(0, max_degree)), MultiIndex{}), rng.rational());
  return f;
}

/// Random jet with `terms` monomials of fiber degree <= max_fiber and base
/// degree <= max_base.
inline JetPolynomial random_jet(FixtureRng& rng, unsigned d, Caps caps, int max_base, int max_fiber, int terms) {
  JetPolynomial j(d, caps);
  for (int t = 0; t < terms; ++t)
    j.add_term(mono::make(rng.multi_index(d, rng.uniform(0, max_base)), rng.multi_index(d, rng.uniform(0, max_fiber))),
               rng.rational());
  return j;
}

/// Antisymmetric bivector with entries of degree <= max_degree.
inline BaseBivector random_base_bivector(FixtureRng& rng, unsigned d, int max_degree, int terms) {
  BaseBivector pi(d, std::vector<BasePolynomial>(d, BasePolynomial{d, {}}));
  for (unsigned i = 0; i < d; ++i)
    for (unsigned j = i + 1; j < d; ++j) {
      pi[i][j] = random_base_polynomial(rng, d, max_degree, terms);
      pi[i][j].add_term(0, rng.rational());
      for (const auto& [k, c] : pi[i][j].terms) pi[j][i].add_term(k, -c);
    }
  return pi;
}

inline BivectorJets random_constant_bivector(FixtureRng& rng, unsigned d) {
  std::vector<std::vector<BigRational>> m(d, std::vector<BigRational>(d, BigRational(0)));
  for (unsigned i = 0; i < d; ++i)
    for (unsigned j = i + 1; j < d; ++j) {
      m[i][j] = rng.rational();
      m[j][i] = -m[i][j];
    }
  return BivectorJets::constant(m);
}

/// Standard constant bivector pi^{i, i+m} = 1 in the split (qbar, pbar).
inline BivectorJets darboux_bivector(const CotangentSplit& split) {
  const unsigned d = split.dim();
  std::vector<std::vector<BigRational>> m(d, std::vector<BigRational>(d, BigRational(0)));
  for (unsigned a = 0; a < split.m; ++a) {
    m[a][a + split.m] = 1;
    m[a + split.m][a] = -1;
  }
  return BivectorJets::constant(m);
}

/// Darboux-type bivector whose qbar-pbar entries are random jets.
inline BivectorJets random_darboux_bivector(FixtureRng& rng, const CotangentSplit& split, Caps caps) {
  const unsigned d = split.dim();
  BivectorJets b;
  b.pi.assign(d, std::vector<JetPolynomial>(d, JetPolynomial(d, caps)));
  for (unsigned a = 0; a < split.m; ++a)
    for (unsigned c = split.m; c < d; ++c) {
      JetPolynomial e = random_jet(rng, d, caps, 0, 2, 2);
      if (a + split.m == c) e.add_term(0, 1);
      b.pi[a][c] = e;
      b.pi[c][a] = -e;
    }
  return b;
}

/// R = -id + random terms of fiber degree 1..max_fiber and pbar-degree <= 1.
inline RJets random_filtered_R(FixtureRng& rng, const CotangentSplit& split, Caps caps, int max_fiber, int terms) {
  const unsigned d = split.dim();
  RJets R;
  R.r.assign(d, std::vector<JetPolynomial>(d, JetPolynomial(d, caps)));
  for (unsigned k = 0; k < d; ++k)
    for (unsigned i = 0; i < d; ++i) {
      if (k == i) R.r[k][i].add_term(0, -1);
      for (int t = 0; t < terms; ++t) {
        MultiIndex beta{};
        const int q_deg = rng.uniform(0, max_fiber - 1);
        for (int e = 0; e < q_deg; ++e) ++beta[static_cast<unsigned>(rng.uniform(0, static_cast<int>(split.m) - 1))];
        if (rng.uniform(0, 1) == 1 || q_deg == 0)
          ++beta[split.m + static_cast<unsigned>(rng.uniform(0, static_cast<int>(split.m) - 1))];
        R.r[k][i].add_term(mono::make(rng.multi_index(d, rng.uniform(0, caps.base)), beta), rng.rational());
      }
    }
  return R;
}

enum class ParityOperator { ConnectionA, CurvatureF };

/// Builds a random (phi, pi, sigma) from `seed`, evaluates the operator
/// through hbar^K and lists the orders whose coefficients all vanish.
inline std::vector<unsigned> parity_report(ParityOperator op, std::uint64_t seed, unsigned d = 2,
                                           Caps caps = {2, 6}, unsigned K = 4) {
  FixtureRng rng(seed);
  ExpMapJets phi = random_exp_map(rng, d, caps, 8);
  // a top fiber degree term in every component keeps the high orders populated
  for (unsigned i = 0; i < d; ++i)
    phi.phi[i].add_term(mono::make(MultiIndex{}, rng.multi_index(d, caps.fiber)), rng.rational());
  const BaseBivector pi = random_base_bivector(rng, d, 1, 2);
  const RJets R = compute_R(phi);
  const BivectorJets pih = pullback_bivector(phi, pi);
  if (op == ParityOperator::ConnectionA) {
    JetPolynomial sigma = random_jet(rng, d, caps, 1, caps.fiber, 12);
    sigma.add_term(mono::make(MultiIndex{}, rng.multi_index(d, caps.fiber)), rng.rational());
    return vanishing_orders(connection_A(R, pih, sigma, K));
  }
  return vanishing_orders(curvature_F(R, pih, K));
}

}  // namespace kontsevich::series
