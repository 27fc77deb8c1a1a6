#pragma once

// Closed-form weights of the three graph families (wheel with wedges,
// single boundary edge with wedges, two boundary points with wedges),
// together with the Stokes moment integrals they are assembled from and the
// auxiliary binomial sums. Everything here is exact; powers of pi are kept
// symbolic in PiMonomial so their cancellation is checked structurally.

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kontsevich/error.hpp"
#include "kontsevich/rational.hpp"

namespace kontsevich {

enum class Family { Gamma, Upsilon, Lambda };

constexpr std::string_view family_name(Family f) {
  switch (f) {
    case Family::Gamma: return "gamma";
    case Family::Upsilon: return "upsilon";
    case Family::Lambda: return "lambda";
  }
  return "?";
}

inline std::optional<Family> parse_family(std::string_view name) {
  if (name == "gamma") return Family::Gamma;
  if (name == "upsilon") return Family::Upsilon;
  if (name == "lambda") return Family::Lambda;
  return std::nullopt;
}

struct WeightQuery {
  Family family = Family::Gamma;
  unsigned n = 0;  // number of wedges

  friend bool operator==(const WeightQuery&, const WeightQuery&) = default;
};

namespace exact {

enum class WeightMethod { ClosedForm, BruteForceSum };

struct WeightResult {
  WeightQuery query;
  BigRational value;
  WeightMethod method = WeightMethod::ClosedForm;
};

/// Rising factorial (a)_k.
inline BigRational pochhammer(const BigRational& a, unsigned k) {
  BigRational r = 1;
  for (unsigned i = 0; i < k; ++i) r *= a + i;
  return r;
}

/// Terminating 2F1(a, b; c; z) for integer parameters. The series is cut at
/// K = min of {-a, -b} over the non-positive ones.
inline BigRational hyp2f1_terminating(long a, long b, long c, const BigRational& z) {
  if (a > 0 && b > 0)
    throw Error(ErrorCode::NonTerminating,
                "2F1 needs a non-positive numerator parameter (a=" + std::to_string(a) +
                    ", b=" + std::to_string(b) + ")");
  long K = -1;
  if (a <= 0) K = -a;
  if (b <= 0) K = (K < 0) ? -b : std::min(K, -b);
  if (c <= 0 && K > -c)
    throw Error(ErrorCode::PoleInC, "(c)_k vanishes at k=" + std::to_string(1 - c) +
                                        " before the series terminates at K=" + std::to_string(K));

  // term_{k+1} = term_k * (a+k)(b+k) z / ((c+k)(k+1))
  BigRational term = 1;
  BigRational sum = 1;
  for (long k = 0; k < K; ++k) {
    term *= BigRational(BigInt(a + k) * BigInt(b + k));
    term *= z;
    term /= BigRational(BigInt(c + k) * BigInt(k + 1));
    sum += term;
  }
  return sum;
}

/// Integral over y of [x;y]^s d(phi(x,y)^m) d(phi(y,x)^n), s = with_sign,
/// via the Stokes binomial sums. Result is coeff * pi^(m+n).
inline PiMonomial eval_wheel_moment(unsigned m, unsigned n, bool with_sign) {
  if (m == 0 || n == 0) throw std::invalid_argument("eval_wheel_moment needs m, n >= 1");
  BigRational first = 0;  // sum_k C(m,k) n/(m+n-k)
  for (unsigned k = 0; k <= m; ++k) first += make_rational(binomial(m, k) * n, BigInt(m + n - k));
  BigRational second = 0;  // sum_l C(n-1,l) n/(m+n-l)
  for (unsigned l = 0; l < n; ++l) second += make_rational(binomial(n - 1, l) * n, BigInt(m + n - l));
  BigRational top = BigRational(pow2(m));
  BigRational coeff = with_sign ? BigRational(-top + first - second) : BigRational(top - first - second);
  return {coeff, m + n};
}

/// Same moment through the terminating hypergeometric rewrite.
inline PiMonomial eval_wheel_moment_hypergeometric(unsigned m, unsigned n, bool with_sign) {
  if (m == 0 || n == 0) throw std::invalid_argument("eval_wheel_moment needs m, n >= 1");
  const long M = m, N = n;
  const BigRational minus_one = -1;
  BigRational fa = hyp2f1_terminating(-M, -M - N, 1 - M - N, minus_one);
  BigRational fb = hyp2f1_terminating(1 - N, -M - N, 1 - M - N, minus_one);
  BigRational ratio = make_rational(N, M + N);
  BigRational top = BigRational(pow2(m));
  BigRational coeff = with_sign ? BigRational(-top + ratio * (fa - fb)) : BigRational(top - ratio * (fa + fb));
  return {coeff, m + n};
}

/// Integral over C_{1,1} of (x;q)^s phi(q,x)^m d(phi(x,q)^n).
inline PiMonomial eval_boundary_moment(unsigned m, unsigned n, bool with_sign) {
  if (n == 0) throw std::invalid_argument("eval_boundary_moment needs n >= 1");
  if (!with_sign && m == 0) return {BigRational(pow2(n)), n};
  return {BigRational(pow2(m)), m + n};
}

/// Weight of Gamma_n through the closed hypergeometric expression, evaluated
/// as printed: both 2F1 terms, parity of k selecting the signs.
inline BigRational weight_gamma(unsigned n) {
  const long N = n;
  const BigRational minus_one = -1;
  BigRational sum = 0;
  for (long k = 0; k <= N; ++k) {
    const long sk = (k % 2 == 0) ? 1 : -1;
    for (long l = 0; l <= N - k; ++l) {
      BigRational prefactor = make_rational(binomial(n, k) * binomial(n - k, l) * sign_power(l),
                                            BigInt((N - k - l + 1) * (l + 1)));
      BigRational f_first = hyp2f1_terminating(-l, -N + k - 2, -N + k - 1, minus_one);
      BigRational f_second = hyp2f1_terminating(-N + k + l - 1, -N + k - 2, -N + k - 1, minus_one);
      BigRational inner = BigRational(pow2(n - k - l + 1) * sk) -
                          make_rational(l + 1, N - k + 2) * (f_first + BigRational(sk) * f_second);
      sum += prefactor * inner;
    }
  }
  return sum / BigRational(pow2(n + 2));
}

/// Weight of Gamma_n assembled from the double binomial expansion of the
/// integrated wedges and eval_wheel_moment, bypassing the 2F1 rewrite.
inline BigRational weight_gamma_bruteforce(unsigned n) {
  BigRational sum = 0;
  for (unsigned k = 0; k <= n; ++k) {
    for (unsigned l = 0; l <= n - k; ++l) {
      const unsigned m_exp = n - k - l + 1;
      PiMonomial moment = eval_wheel_moment(m_exp, l + 1, k % 2 == 1);
      // pi^(n-k+2) from the moment cancels the 1/pi^(n-k+2) prefactor
      if (moment.pi_power != n - k + 2) throw std::logic_error("pi powers do not cancel");
      sum += make_rational(binomial(n, k) * binomial(n - k, l) * sign_power(l),
                           BigInt(m_exp) * (l + 1)) *
             moment.coeff;
    }
  }
  return sum / BigRational(pow2(n + 2));
}

inline BigRational weight_upsilon(unsigned n) {
  if (n % 2 == 1) return 0;
  return make_rational(BigInt(2), pow2(n + 1) * (n + 1));
}

inline BigRational weight_lambda(unsigned n) { return make_rational(BigInt(1), pow2(n)); }

enum class BinomialSum { A, B, C };
enum class SumMethod { BruteForce, ClosedForm };

namespace detail {

// Triple sum A(n). The innermost sum over s depends on (k, l) only through
// m = n-k-l, so it is summed once per m; every term is still evaluated
// literally. All terms are accumulated over the common denominator
// 2^(n+1) * lcm(1..n+1).
inline BigRational binomial_sum_a_terms(unsigned n) {
  BigInt lcm = 1;
  for (unsigned j = 1; j <= n + 1; ++j) mpz_lcm_ui(lcm.get_mpz_t(), lcm.get_mpz_t(), j);

  // Pascal rows 0..n
  std::vector<std::vector<BigInt>> pascal(n + 1);
  for (unsigned r = 0; r <= n; ++r) {
    pascal[r].resize(r + 1);
    pascal[r][0] = pascal[r][r] = 1;
    for (unsigned c = 1; c < r; ++c) pascal[r][c] = pascal[r - 1][c - 1] + pascal[r - 1][c];
  }

  // inner[m] = lcm * sum_s C(m,s) (-2)^s / (m-s+1)
  std::vector<BigInt> inner(n + 1);
  BigInt term;
  for (unsigned m = 0; m <= n; ++m) {
    BigInt acc = 0;
    for (unsigned s = 0; s <= m; ++s) {
      term = pascal[m][s] * (lcm / (m - s + 1));
      term <<= s;
      if (s % 2 == 1) acc -= term; else acc += term;
    }
    inner[m] = acc;
  }

  // A(n) * 2^(n+1) * lcm = sum_{k,l} C(n,k) C(n-k,l) (-1)^l 2^k inner[n-k-l]
  BigInt total = 0;
  for (unsigned k = 0; k <= n; ++k) {
    for (unsigned l = 0; l <= n - k; ++l) {
      term = pascal[n][k] * pascal[n - k][l];
      term *= inner[n - k - l];
      term <<= k;
      if (l % 2 == 1) total -= term; else total += term;
    }
  }
  return make_rational(total, pow2(n + 1) * lcm);
}

}  // namespace detail

inline BigRational binomial_sum(BinomialSum which, unsigned n, SumMethod method) {
  if (method == SumMethod::ClosedForm) {
    const BigInt den = pow2(n + 1) * (n + 1);
    switch (which) {
      case BinomialSum::A:
      case BinomialSum::B: return make_rational(BigInt(sign_power(n)), den);
      case BinomialSum::C: return make_rational(BigInt(1 + sign_power(n)), den);
    }
  }
  switch (which) {
    case BinomialSum::A: return detail::binomial_sum_a_terms(n);
    case BinomialSum::B: {
      BigRational sum = 0;
      for (unsigned l = 0; l <= n; ++l)
        sum += make_rational(binomial(n, l) * sign_power(l), pow2(n + 1) * (n - l + 1));
      return sum;
    }
    case BinomialSum::C: {
      BigRational sum = 0;
      for (unsigned l = 0; l <= n; ++l)
        sum += make_rational(binomial(n, l) * sign_power(l), pow2(l) * (n - l + 1));
      return sum;
    }
  }
  throw std::logic_error("unreachable");
}

/// Weight of Upsilon_n as A(n) - B(n) + C(n), each summed term by term.
inline BigRational weight_upsilon_bruteforce(unsigned n) {
  return binomial_sum(BinomialSum::A, n, SumMethod::BruteForce) -
         binomial_sum(BinomialSum::B, n, SumMethod::BruteForce) +
         binomial_sum(BinomialSum::C, n, SumMethod::BruteForce);
}

inline WeightResult evaluate_weight(const WeightQuery& query, WeightMethod method = WeightMethod::ClosedForm) {
  BigRational value;
  switch (query.family) {
    case Family::Gamma:
      value = method == WeightMethod::ClosedForm ? weight_gamma(query.n) : weight_gamma_bruteforce(query.n);
      break;
    case Family::Upsilon:
      value = method == WeightMethod::ClosedForm ? weight_upsilon(query.n) : weight_upsilon_bruteforce(query.n);
      break;
    case Family::Lambda:
      // the brute-force product of n independent wedges, each worth 1/2
      if (method == WeightMethod::ClosedForm) {
        value = weight_lambda(query.n);
      } else {
        value = 1;
        for (unsigned i = 0; i < query.n; ++i) value *= BigRational(1, 2);
      }
      break;
  }
  return {query, value, method};
}

}  // namespace exact
}  // namespace kontsevich
