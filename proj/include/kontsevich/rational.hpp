#pragma once

// Exact rational arithmetic on top of GMP, plus the rendering rules used by
// every printed value: "p/q" with q > 0, and 12-significant-digit decimals
// rounded half-to-even.

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <string>
#include <string_view>

#include "kontsevich/error.hpp"

namespace kontsevich {

using BigInt = mpz_class;
using BigRational = mpq_class;  // gmpxx keeps results canonical

inline BigRational make_rational(const BigInt& num, const BigInt& den) {
  BigRational r(num, den);
  r.canonicalize();
  return r;
}

inline BigRational make_rational(long num, long den = 1) {
  return make_rational(BigInt(num), BigInt(den));
}

inline BigInt binomial(unsigned long n, unsigned long k) {
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

inline BigInt pow2(unsigned long e) {
  BigInt r = 1;
  r <<= e;
  return r;
}

inline BigInt ipow(const BigInt& base, unsigned long e) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline BigRational pow(const BigRational& base, unsigned long e) {
  BigInt num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), e);
  return make_rational(num, den);
}

inline int sign_power(unsigned long e) { return (e % 2 == 0) ? 1 : -1; }

inline std::string to_string(const BigRational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline double to_double(const BigRational& r) { return r.get_d(); }

/// Parses "p", "-p", "+p" or "p/q". Decimal points and exponents are rejected
/// so that fixtures stay exact.
inline BigRational parse_rational(std::string_view text) {
  auto fail = [&](const char* why) {
    throw Error(ErrorCode::ParseError, std::string(why) + " in rational '" + std::string(text) + "'");
  };
  if (text.empty()) fail("empty text");
  auto valid_int = [](std::string_view s, bool allow_sign) {
    std::size_t i = 0;
    if (allow_sign && !s.empty() && (s[0] == '-' || s[0] == '+')) i = 1;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
  };
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (text.find_first_of(".eE") != std::string_view::npos) fail("floating-point literal");
  if (!valid_int(num, true) || !valid_int(den, false)) fail("malformed integer");
  std::string num_s(num);
  if (num_s[0] == '+') num_s.erase(0, 1);
  BigInt n(num_s), d{std::string(den)};
  if (d == 0) fail("zero denominator");
  return make_rational(n, d);
}

/// Decimal rendering with `digits` significant digits, round-half-even,
/// trailing zeros stripped; scientific notation outside [1e-5, 1e12).
inline std::string to_decimal(const BigRational& value, int digits = 12) {
  if (value == 0) return "0";
  BigRational mag = abs(value);
  // 10^e <= mag < 10^(e+1)
  long e = static_cast<long>(std::floor(std::log10(mag.get_d())));
  auto pow10 = [](long k) {
    if (k >= 0) return BigRational(ipow(BigInt(10), static_cast<unsigned long>(k)));
    return make_rational(BigInt(1), ipow(BigInt(10), static_cast<unsigned long>(-k)));
  };
  while (mag < pow10(e)) --e;
  while (mag >= pow10(e + 1)) ++e;

  BigRational scaled = mag * pow10(digits - 1 - e);
  BigInt whole = scaled.get_num() / scaled.get_den();
  BigRational rem = scaled - BigRational(whole);
  BigRational half(1, 2);
  if (rem > half || (rem == half && mpz_odd_p(whole.get_mpz_t()))) whole += 1;
  if (whole == ipow(BigInt(10), static_cast<unsigned long>(digits))) {
    whole /= 10;
    ++e;
  }
  std::string mant = whole.get_str();  // exactly `digits` characters

  std::string out = value < 0 ? "-" : "";
  if (e < -5 || e >= 12) {
    std::string frac = mant.substr(1);
    while (!frac.empty() && frac.back() == '0') frac.pop_back();
    out += mant.substr(0, 1);
    if (!frac.empty()) out += "." + frac;
    char buf[32];
    std::snprintf(buf, sizeof buf, "e%c%02ld", e < 0 ? '-' : '+', e < 0 ? -e : e);
    out += buf;
    return out;
  }
  std::string int_part, frac_part;
  if (e >= 0) {
    int_part = mant.substr(0, static_cast<std::size_t>(e + 1));
    frac_part = mant.substr(static_cast<std::size_t>(e + 1));
  } else {
    int_part = "0";
    frac_part = std::string(static_cast<std::size_t>(-e - 1), '0') + mant;
  }
  while (!frac_part.empty() && frac_part.back() == '0') frac_part.pop_back();
  out += int_part;
  if (!frac_part.empty()) out += "." + frac_part;
  return out;
}

/// coeff * pi^pi_power, with pi carried symbolically.
struct PiMonomial {
  BigRational coeff;
  unsigned pi_power = 0;

  friend bool operator==(const PiMonomial& a, const PiMonomial& b) {
    return a.coeff == b.coeff && a.pi_power == b.pi_power;
  }

  friend PiMonomial operator+(const PiMonomial& a, const PiMonomial& b) {
    if (a.pi_power != b.pi_power)
      throw std::invalid_argument("PiMonomial addition requires equal powers of pi");
    return {a.coeff + b.coeff, a.pi_power};
  }

  friend PiMonomial operator-(const PiMonomial& a, const PiMonomial& b) {
    if (a.pi_power != b.pi_power)
      throw std::invalid_argument("PiMonomial subtraction requires equal powers of pi");
    return {a.coeff - b.coeff, a.pi_power};
  }

  friend PiMonomial operator*(const PiMonomial& a, const PiMonomial& b) {
    return {a.coeff * b.coeff, a.pi_power + b.pi_power};
  }

  double to_double() const { return coeff.get_d() * std::pow(M_PI, static_cast<double>(pi_power)); }
};

inline std::string to_string(const PiMonomial& m) {
  std::string s = to_string(m.coeff);
  if (m.pi_power == 0) return s;
  s += "*pi";
  if (m.pi_power > 1) s += "^" + std::to_string(m.pi_power);
  return s;
}

}  // namespace kontsevich
