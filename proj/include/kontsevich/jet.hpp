#pragma once

// Truncated polynomials in base offsets dx^1..dx^d and fiber variables
// y^1..y^d with exact coefficients.
//
// A jet remembers how far it is known: every coefficient with base degree
// <= caps.base and fiber degree <= caps.fiber is exact, everything above is
// unknown and not stored. Sums and products are known up to the smaller of
// the two caps, a y-derivative loses one fiber degree, a dx-derivative one
// base degree. Comparisons are made on the common known range.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "kontsevich/error.hpp"
#include "kontsevich/rational.hpp"

namespace kontsevich::series {

inline constexpr unsigned kMaxDim = 4;
inline constexpr int kUnbounded = 1 << 20;

struct Caps {
  int base = kUnbounded;
  int fiber = kUnbounded;

  friend bool operator==(const Caps&, const Caps&) = default;
};

inline Caps min_caps(const Caps& a, const Caps& b) { return {std::min(a.base, b.base), std::min(a.fiber, b.fiber)}; }

/// Exponents packed into one word: byte i is the exponent of dx^{i+1},
/// byte 4+i that of y^{i+1}. Exponents stay below 128 so that adding two
/// keys never carries between bytes.
using MonoKey = std::uint64_t;

namespace mono {

inline constexpr MonoKey kHighBits = 0x8080808080808080ULL;

inline unsigned base_exp(MonoKey k, unsigned i) { return static_cast<unsigned>((k >> (8 * i)) & 0xFF); }
inline unsigned fiber_exp(MonoKey k, unsigned i) { return static_cast<unsigned>((k >> (8 * (4 + i))) & 0xFF); }
inline MonoKey base_unit(unsigned i) { return MonoKey{1} << (8 * i); }
inline MonoKey fiber_unit(unsigned i) { return MonoKey{1} << (8 * (4 + i)); }

inline int base_degree(MonoKey k) {
  return static_cast<int>((((k & 0xFFFFFFFFULL) * 0x01010101ULL) >> 24) & 0xFF);
}
inline int fiber_degree(MonoKey k) {
  return static_cast<int>(((((k >> 32) & 0xFFFFFFFFULL) * 0x01010101ULL) >> 24) & 0xFF);
}

inline MonoKey multiply(MonoKey a, MonoKey b) {
  if ((a | b) & kHighBits) throw Error(ErrorCode::CapExceeded, "monomial exponent above 127");
  const MonoKey s = a + b;
  if (s & kHighBits) throw Error(ErrorCode::CapExceeded, "monomial exponent above 127");
  return s;
}

inline MonoKey make(const std::array<unsigned, kMaxDim>& alpha, const std::array<unsigned, kMaxDim>& beta) {
  MonoKey k = 0;
  for (unsigned i = 0; i < kMaxDim; ++i) {
    if (alpha[i] > 127 || beta[i] > 127) throw Error(ErrorCode::CapExceeded, "monomial exponent above 127");
    k |= MonoKey{alpha[i]} << (8 * i);
    k |= MonoKey{beta[i]} << (8 * (4 + i));
  }
  return k;
}

}  // namespace mono

class JetPolynomial {
 public:
  using Terms = std::map<MonoKey, BigRational>;

  JetPolynomial() = default;
  JetPolynomial(unsigned dim, Caps caps) : dim_(dim), caps_(caps) {
    if (dim > kMaxDim) throw Error(ErrorCode::DimensionMismatch, "dimension above " + std::to_string(kMaxDim));
  }

  static JetPolynomial constant(unsigned dim, const BigRational& c, Caps caps = {}) {
    JetPolynomial p(dim, caps);
    p.add_term(0, c);
    return p;
  }
  static JetPolynomial base_var(unsigned dim, unsigned i, Caps caps = {}) {
    JetPolynomial p(dim, caps);
    p.add_term(mono::base_unit(i), 1);
    return p;
  }
  static JetPolynomial fiber_var(unsigned dim, unsigned i, Caps caps = {}) {
    JetPolynomial p(dim, caps);
    p.add_term(mono::fiber_unit(i), 1);
    return p;
  }

  unsigned dim() const { return dim_; }
  const Caps& caps() const { return caps_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  bool within_caps(MonoKey k) const {
    return mono::base_degree(k) <= caps_.base && mono::fiber_degree(k) <= caps_.fiber;
  }

  /// Adds c * monomial; terms beyond the caps are dropped.
  void add_term(MonoKey k, const BigRational& c) {
    if (c == 0 || !within_caps(k)) return;
    auto [it, inserted] = terms_.try_emplace(k, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  BigRational coeff(MonoKey k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? BigRational(0) : it->second;
  }

  JetPolynomial truncated(Caps caps) const {
    JetPolynomial r(dim_, min_caps(caps_, caps));
    for (const auto& [k, c] : terms_)
      if (r.within_caps(k)) r.terms_.emplace_hint(r.terms_.end(), k, c);
    return r;
  }

  JetPolynomial& operator+=(const JetPolynomial& o) {
    check_dim(o);
    Caps c = min_caps(caps_, o.caps_);
    if (!(c == caps_)) *this = truncated(c);
    for (const auto& [k, v] : o.terms_) add_term(k, v);
    return *this;
  }
  JetPolynomial& operator-=(const JetPolynomial& o) {
    check_dim(o);
    Caps c = min_caps(caps_, o.caps_);
    if (!(c == caps_)) *this = truncated(c);
    for (const auto& [k, v] : o.terms_) add_term(k, -v);
    return *this;
  }
  JetPolynomial& operator*=(const BigRational& s) {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [k, v] : terms_) v *= s;
    return *this;
  }

  friend JetPolynomial operator+(JetPolynomial a, const JetPolynomial& b) { return a += b; }
  friend JetPolynomial operator-(JetPolynomial a, const JetPolynomial& b) { return a -= b; }
  friend JetPolynomial operator-(JetPolynomial a) { return a *= BigRational(-1); }
  friend JetPolynomial operator*(JetPolynomial a, const BigRational& s) { return a *= s; }
  friend JetPolynomial operator*(const BigRational& s, JetPolynomial a) { return a *= s; }

  friend JetPolynomial operator*(const JetPolynomial& a, const JetPolynomial& b) {
    a.check_dim(b);
    JetPolynomial r(a.dim_, min_caps(a.caps_, b.caps_));
    if (a.terms_.empty() || b.terms_.empty()) return r;
    std::unordered_map<MonoKey, BigRational> acc;
    BigRational t;
    for (const auto& [ka, ca] : a.terms_) {
      const int ba = mono::base_degree(ka), fa = mono::fiber_degree(ka);
      if (ba > r.caps_.base || fa > r.caps_.fiber) continue;
      for (const auto& [kb, cb] : b.terms_) {
        if (ba + mono::base_degree(kb) > r.caps_.base || fa + mono::fiber_degree(kb) > r.caps_.fiber) continue;
        t = ca * cb;
        auto [it, inserted] = acc.try_emplace(mono::multiply(ka, kb), t);
        if (!inserted) it->second += t;
      }
    }
    for (auto& [k, v] : acc)
      if (v != 0) r.terms_.emplace(k, std::move(v));
    return r;
  }

  JetPolynomial& operator*=(const JetPolynomial& o) { return *this = *this * o; }

  /// d/dy^{i+1}
  JetPolynomial diff_fiber(unsigned i) const {
    JetPolynomial r(dim_, {caps_.base, caps_.fiber - 1});
    for (const auto& [k, c] : terms_) {
      const unsigned e = mono::fiber_exp(k, i);
      if (e == 0) continue;
      r.add_term(k - mono::fiber_unit(i), c * e);
    }
    return r;
  }

  /// d/d(dx^{i+1})
  JetPolynomial diff_base(unsigned i) const {
    JetPolynomial r(dim_, {caps_.base - 1, caps_.fiber});
    for (const auto& [k, c] : terms_) {
      const unsigned e = mono::base_exp(k, i);
      if (e == 0) continue;
      r.add_term(k - mono::base_unit(i), c * e);
    }
    return r;
  }

  /// Fiber multi-derivative d^beta / dy^beta.
  JetPolynomial diff_fiber_multi(const std::array<unsigned, kMaxDim>& beta) const {
    JetPolynomial r = *this;
    for (unsigned i = 0; i < dim_; ++i)
      for (unsigned e = 0; e < beta[i]; ++e) r = r.diff_fiber(i);
    return r;
  }

  /// Restriction to y = 0; the result is exact in the fiber direction.
  JetPolynomial at_fiber_zero() const {
    JetPolynomial r(dim_, {caps_.base, kUnbounded});
    for (const auto& [k, c] : terms_)
      if (mono::fiber_degree(k) == 0) r.terms_.emplace_hint(r.terms_.end(), k, c);
    return r;
  }

  /// Equality on the range where both sides are known.
  friend bool operator==(const JetPolynomial& a, const JetPolynomial& b) { return (a - b).is_zero(); }

  int max_fiber_degree() const {
    int m = -1;
    for (const auto& [k, c] : terms_) m = std::max(m, mono::fiber_degree(k));
    return m;
  }

 private:
  void check_dim(const JetPolynomial& o) const {
    if (o.dim_ != dim_)
      throw Error(ErrorCode::DimensionMismatch,
                  "jets of dimension " + std::to_string(dim_) + " and " + std::to_string(o.dim_));
  }

  unsigned dim_ = 0;
  Caps caps_{};
  Terms terms_;
};

/// Truncated series in hbar; entry n is the coefficient of hbar^n.
using HbarSeries = std::vector<JetPolynomial>;

/// Exact polynomial in the absolute base coordinates x^1..x^d (stored with
/// the base bytes of MonoKey only).
struct BasePolynomial {
  unsigned dim = 0;
  std::map<MonoKey, BigRational> terms;

  void add_term(MonoKey k, const BigRational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms.try_emplace(k, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms.erase(it);
    }
  }

  int degree() const {
    int d = 0;
    for (const auto& [k, c] : terms) d = std::max(d, mono::base_degree(k));
    return d;
  }

  friend bool operator==(const BasePolynomial& a, const BasePolynomial& b) {
    return a.dim == b.dim && a.terms == b.terms;
  }
};

}  // namespace kontsevich::series
