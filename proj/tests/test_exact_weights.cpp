#include <gtest/gtest.h>

#include <vector>

#include "kontsevich/exact_weights.hpp"

using namespace kontsevich;
using namespace kontsevich::exact;

namespace {

BigRational q(long p, long d = 1) { return make_rational(p, d); }

// Independent oracle: plain loops over the defining series, no shared helpers.
BigRational hyp2f1_loop(long a, long b, long c, long z, long terms) {
  BigRational sum = 0;
  for (long k = 0; k <= terms; ++k) {
    BigRational num = 1, den = 1;
    for (long i = 0; i < k; ++i) {
      num *= BigRational((a + i) * (b + i) * z);
      den *= BigRational((c + i) * (i + 1));
    }
    sum += num / den;
  }
  return sum;
}

// Moment coefficient from the two substitution integrals summed directly.
BigRational wheel_moment_loop(long m, long n, bool with_sign) {
  BigRational s1 = 0, s2 = 0;
  for (long k = 0; k <= m; ++k) s1 += BigRational(binomial(m, k)) / BigRational(m + n - k);
  for (long l = 0; l <= n - 1; ++l) s2 += BigRational(binomial(n - 1, l)) / BigRational(m + n - l);
  BigRational two_m = BigRational(pow2(m));
  if (with_sign) return -two_m + n * s1 - n * s2;
  return two_m - n * s1 - n * s2;
}

BigRational triple_sum_a_loop(long n) {
  BigRational sum = 0;
  for (long k = 0; k <= n; ++k)
    for (long l = 0; l <= n - k; ++l)
      for (long s = 0; s <= n - k - l; ++s) {
        BigRational t = BigRational(binomial(n, k) * binomial(n - k, l) * binomial(n - k - l, s));
        if ((l + s) % 2) t = -t;
        t /= BigRational(pow2(n - k - s + 1) * (n - k - l - s + 1));
        sum += t;
      }
  return sum;
}

}  // namespace

TEST(Pochhammer, Examples) {
  EXPECT_EQ(pochhammer(q(5, 2), 0), q(1));
  EXPECT_EQ(pochhammer(q(2), 3), q(24));
  EXPECT_EQ(pochhammer(q(-3), 5), q(0));
  EXPECT_EQ(pochhammer(q(1, 2), 2), q(3, 4));
}

TEST(Hypergeometric, Examples) {
  EXPECT_EQ(hyp2f1_terminating(0, 7, 3, q(-1)), q(1));
  EXPECT_EQ(hyp2f1_terminating(-1, 5, 2, q(-1)), q(7, 2));
  EXPECT_EQ(hyp2f1_terminating(-2, -4, -3, q(-1)), hyp2f1_loop(-2, -4, -3, -1, 2));
  EXPECT_EQ(hyp2f1_loop(-2, -4, -3, -1, 2), q(17, 3));
}

TEST(Hypergeometric, Errors) {
  try {
    hyp2f1_terminating(1, 2, 3, q(1, 2));
    FAIL() << "expected NonTerminating";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonTerminating);
  }
  try {
    hyp2f1_terminating(-5, 2, -2, q(1));
    FAIL() << "expected PoleInC";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PoleInC);
  }
}

TEST(Hypergeometric, BinomialSumRewrite) {
  // sum_k C(m,k)/(m+n-k) = 2F1(-m,-m-n;1-m-n;-1)/(m+n)
  for (long m = 1; m <= 8; ++m)
    for (long n = 1; n <= 8; ++n) {
      BigRational direct = 0;
      for (long k = 0; k <= m; ++k) direct += BigRational(binomial(m, k)) / BigRational(m + n - k);
      EXPECT_EQ(direct, hyp2f1_terminating(-m, -m - n, 1 - m - n, q(-1)) / BigRational(m + n));
    }
}

TEST(WheelMoment, Examples) {
  PiMonomial m31 = eval_wheel_moment(3, 1, false);
  EXPECT_EQ(m31.coeff, q(4));
  EXPECT_EQ(m31.pi_power, 4u);
  EXPECT_EQ(m31.coeff, BigRational(8) * (q(1) - q(2, 4)));

  EXPECT_EQ(eval_wheel_moment(2, 2, false).coeff, q(0));
  EXPECT_EQ(eval_wheel_moment(2, 2, true).coeff, wheel_moment_loop(2, 2, true));
  EXPECT_EQ(wheel_moment_loop(2, 2, true), q(-7, 3));
}

TEST(WheelMoment, NEqualsOneClosedForm) {
  // n = 1 reduces to 2^m (1 - 2/(m+1))
  for (unsigned m = 1; m <= 20; ++m)
    EXPECT_EQ(eval_wheel_moment(m, 1, false).coeff, BigRational(pow2(m)) * (q(1) - q(2, m + 1)));
}

TEST(WheelMoment, DiagonalVanishes) {
  for (unsigned m = 1; m <= 40; ++m) EXPECT_EQ(eval_wheel_moment(m, m, false).coeff, q(0)) << m;
}

TEST(WheelMoment, HypergeometricPathAgrees) {
  for (unsigned m = 1; m <= 25; ++m)
    for (unsigned n = 1; n <= 25; ++n)
      for (bool s : {false, true}) {
        EXPECT_EQ(eval_wheel_moment(m, n, s), eval_wheel_moment_hypergeometric(m, n, s));
        EXPECT_EQ(eval_wheel_moment(m, n, s).coeff, wheel_moment_loop(m, n, s));
      }
}

TEST(BoundaryMoment, Examples) {
  EXPECT_EQ(eval_boundary_moment(0, 3, false), (PiMonomial{q(8), 3}));
  EXPECT_EQ(eval_boundary_moment(2, 1, false), (PiMonomial{q(4), 3}));
  EXPECT_EQ(eval_boundary_moment(0, 1, true), (PiMonomial{q(1), 1}));
}

TEST(BoundaryMoment, FourPointStokesOracle) {
  // Angles at the four boundary points of C_{1,1} in units of pi:
  //   s:   phi(q,s)=0, phi(s,q)=2      y+: phi(q,y+)=0, phi(y+,q)=1
  //   y-:  phi(q,y-)=2, phi(y-,q)=1    t:  phi(q,t)=2,  phi(t,q)=0
  auto p = [](long base, unsigned e) { return e == 0 ? BigRational(1) : BigRational(ipow(BigInt(base), e)); };
  for (unsigned m = 0; m <= 6; ++m)
    for (unsigned n = 1; n <= 6; ++n) {
      BigRational unsigned_sum = p(0, m) * p(2, n) - p(0, m) * p(1, n) + p(2, m) * p(1, n) - p(2, m) * p(0, n);
      BigRational signed_sum = p(2, m) * p(1, n) - p(2, m) * p(0, n);
      EXPECT_EQ(eval_boundary_moment(m, n, false), (PiMonomial{unsigned_sum, m + n}));
      EXPECT_EQ(eval_boundary_moment(m, n, true), (PiMonomial{signed_sum, m + n}));
    }
}

TEST(WeightGamma, TableOne) {
  const std::vector<BigRational> table = {q(0), q(1, 24), q(0), q(1, 320), q(0),
                                          q(1, 2688), q(0), q(1, 18432), q(0), q(1, 112640)};
  for (unsigned n = 0; n < table.size(); ++n) {
    EXPECT_EQ(weight_gamma(n), table[n]) << n;
    EXPECT_EQ(weight_gamma_bruteforce(n), table[n]) << n;
  }
}

TEST(WeightGamma, BothPathsAgreeAndEvenVanishes) {
  for (unsigned n = 0; n <= 60; ++n) {
    BigRational closed = weight_gamma(n);
    EXPECT_EQ(closed, weight_gamma_bruteforce(n)) << n;
    if (n % 2 == 0) {
      EXPECT_EQ(closed, q(0)) << n;
    }
  }
}

TEST(WeightUpsilon, TableTwo) {
  const std::vector<BigRational> table = {q(1), q(0), q(1, 12), q(0), q(1, 80),
                                          q(0), q(1, 448), q(0), q(1, 2304), q(0)};
  for (unsigned n = 0; n < table.size(); ++n) {
    EXPECT_EQ(weight_upsilon(n), table[n]) << n;
    EXPECT_EQ(weight_upsilon_bruteforce(n), table[n]) << n;
  }
  for (unsigned n = 1; n <= 61; n += 2) EXPECT_EQ(weight_upsilon(n), q(0));
}

TEST(WeightLambda, Examples) {
  EXPECT_EQ(weight_lambda(0), q(1));
  EXPECT_EQ(weight_lambda(1), q(1, 2));
  EXPECT_EQ(weight_lambda(3), q(1, 8));
  for (unsigned n = 0; n <= 64; ++n) EXPECT_EQ(weight_lambda(n) * BigRational(pow2(n)), q(1));
}

TEST(BinomialSums, Examples) {
  EXPECT_EQ(binomial_sum(BinomialSum::B, 0, SumMethod::ClosedForm), q(1, 2));
  EXPECT_EQ(binomial_sum(BinomialSum::C, 2, SumMethod::ClosedForm), q(1, 12));
  EXPECT_EQ(binomial_sum(BinomialSum::C, 2, SumMethod::ClosedForm), weight_upsilon(2));
  EXPECT_EQ(binomial_sum(BinomialSum::A, 4, SumMethod::BruteForce), triple_sum_a_loop(4));
  EXPECT_EQ(triple_sum_a_loop(4), q(1, 160));
}

TEST(BinomialSums, FactoredTripleSumMatchesPlainLoop) {
  for (unsigned n = 0; n <= 25; ++n)
    EXPECT_EQ(binomial_sum(BinomialSum::A, n, SumMethod::BruteForce), triple_sum_a_loop(n)) << n;
}

TEST(BinomialSums, BruteForceMatchesClosedForm) {
  for (unsigned n = 0; n <= 120; ++n) {
    for (auto which : {BinomialSum::A, BinomialSum::B, BinomialSum::C})
      EXPECT_EQ(binomial_sum(which, n, SumMethod::BruteForce), binomial_sum(which, n, SumMethod::ClosedForm));
    EXPECT_EQ(binomial_sum(BinomialSum::A, n, SumMethod::ClosedForm),
              binomial_sum(BinomialSum::B, n, SumMethod::ClosedForm));
    EXPECT_EQ(weight_upsilon(n), binomial_sum(BinomialSum::C, n, SumMethod::ClosedForm));
  }
}

TEST(EvaluateWeight, MethodsAgree) {
  for (auto fam : {Family::Gamma, Family::Upsilon, Family::Lambda})
    for (unsigned n = 0; n <= 9; ++n) {
      WeightQuery wq{fam, n};
      auto a = evaluate_weight(wq, WeightMethod::ClosedForm);
      auto b = evaluate_weight(wq, WeightMethod::BruteForceSum);
      EXPECT_EQ(a.value, b.value);
      EXPECT_EQ(a.query, wq);
    }
}
