#include <gtest/gtest.h>

#include <random>

#include "oppenheim/arith.hpp"

using namespace oppenheim;

namespace {

Rational r(long a, long b = 1) { return make_rational(a, b); }

Rational as_rational(const PlaceScalar& x) { return std::get<Rational>(x); }
Real as_real(const PlaceScalar& x) { return std::get<Real>(x); }

}  // namespace

TEST(Valuation, Examples) {
  EXPECT_EQ(valuation(r(12), 3), 1);
  EXPECT_EQ(valuation(r(9, 2), 3), 2);
  EXPECT_EQ(valuation(r(0), 3), kInfiniteValuation);
  EXPECT_EQ(valuation(r(1, 27), 3), -3);
}

TEST(Valuation, Multiplicative) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> d(-500, 500);
  for (int i = 0; i < 200; ++i) {
    long a = d(rng), b = d(rng), c = d(rng), e = d(rng);
    if (a == 0 || b == 0 || c == 0 || e == 0) continue;
    const Rational x = r(a, std::labs(b)), y = r(c, std::labs(e));
    for (std::uint32_t p : {3u, 5u, 7u}) EXPECT_EQ(valuation(Rational(x * y), p), valuation(x, p) + valuation(y, p));
  }
}

TEST(Norms, Examples) {
  EXPECT_EQ(as_rational(p_norm(r(12), Place::finite(3))), r(1, 3));
  EXPECT_EQ(as_rational(p_norm(r(1, 5), Place::finite(5))), r(5));
  EXPECT_EQ(as_real(p_norm(r(-7), Place::infinite())), 7.0L);

  const std::vector<Rational> a{r(1, 3), r(2), r(9)};
  const std::vector<Rational> b{r(6), r(3)};
  const std::vector<Rational> c{r(3), r(4)};
  EXPECT_EQ(as_rational(sup_norm(a, Place::finite(3))), r(3));
  EXPECT_EQ(as_rational(sup_norm(b, Place::finite(3))), r(1, 3));
  EXPECT_NEAR(static_cast<double>(as_real(sup_norm(c, Place::infinite()))), 5.0, 1e-15);
}

TEST(Norms, UltrametricInequality) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> d(-2000, 2000);
  for (int i = 0; i < 300; ++i) {
    const Rational x = r(d(rng), 1 + std::labs(d(rng)));
    const Rational y = r(d(rng), 1 + std::labs(d(rng)));
    for (std::uint32_t p : {3u, 5u, 11u}) {
      EXPECT_LE(padic_norm(Rational(x + y), p), std::max(padic_norm(x, p), padic_norm(y, p)));
    }
  }
}

TEST(Norms, ProductFormula) {
  // |x|_inf * prod_p |x|_p = 1 for x supported on {3, 5, 7}.
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> e(-4, 4);
  for (int i = 0; i < 100; ++i) {
    Rational x = i % 2 ? -1 : 1;
    for (std::uint32_t p : {3u, 5u, 7u}) x *= prime_power(p, e(rng));
    Rational prod = abs(x);
    for (std::uint32_t p : {3u, 5u, 7u}) prod *= padic_norm(x, p);
    EXPECT_EQ(prod, 1);
  }
}

TEST(Normalize, Examples) {
  const std::vector<Rational> a{r(6), r(3)};
  const std::vector<Rational> b{r(1, 3), r(1)};
  const std::vector<Rational> c{r(3), r(4)};
  EXPECT_EQ(unit_normalize_padic(a, 3), (std::vector<Rational>{r(2), r(1)}));
  EXPECT_EQ(unit_normalize_padic(b, 3), (std::vector<Rational>{r(1), r(3)}));
  const auto u = unit_normalize_real(c);
  EXPECT_NEAR(static_cast<double>(u[0]), 0.6, 1e-15);
  EXPECT_NEAR(static_cast<double>(u[1]), 0.8, 1e-15);
  const auto v = std::get<std::vector<Rational>>(unit_normalize(a, Place::finite(3)));
  EXPECT_EQ(min_valuation(v, 3), 0);
}

TEST(PAdicInterval, Membership) {
  EXPECT_TRUE(in_p_interval(r(7), PAdicInterval{3, r(1), 1}));
  EXPECT_FALSE(in_p_interval(r(5), PAdicInterval{3, r(1), 2}));
  EXPECT_TRUE(in_p_interval(r(22, 7), PAdicInterval{5, r(22, 7), 6}));
}

TEST(PAdicInterval, Parse) {
  const auto a = parse_padic_interval("1+3^2");
  EXPECT_EQ(a.p, 3u);
  EXPECT_EQ(a.center, 1);
  EXPECT_EQ(a.exponent, 2);
  EXPECT_THROW(parse_padic_interval("1+2^2"), ConfigurationError);
}

TEST(SInterval, Measure) {
  EXPECT_NEAR(static_cast<double>(s_interval_measure({RealInterval(0, 1), {}})), 1.0, 1e-15);
  EXPECT_NEAR(static_cast<double>(s_interval_measure({RealInterval(0, 1), {PAdicInterval{3, r(0), 1}}})), 1.0 / 3,
              1e-15);
  EXPECT_NEAR(static_cast<double>(s_interval_measure({RealInterval(0, 2), {PAdicInterval{5, r(1), 2}}})), 2.0 / 25,
              1e-15);
  EXPECT_THROW(RealInterval(1, 1), ConfigurationError);
}

TEST(Place, OddPrimesOnly) {
  EXPECT_THROW(Place::finite(2), ConfigurationError);
  EXPECT_THROW(Place::finite(9), ConfigurationError);
  EXPECT_NO_THROW(Place::finite(3));
  EXPECT_THROW(SSet({3, 3}), ConfigurationError);
}

TEST(Rational, ExactConversion) {
  for (Real x : {0.1L, -3.75L, 1e-30L, 12345.678L}) EXPECT_EQ(to_real(exact_rational(x)), x);
  EXPECT_EQ(parse_rational("6/4"), r(3, 2));
  EXPECT_NEAR(static_cast<double>(parse_real("0.25")), 0.25, 0);
}
