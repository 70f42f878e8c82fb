#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace oppenheim {

using Integer = mpz_class;
using Rational = mpq_class;
// Real-place scalar. On x86-64 this is the 80-bit extended format (64-bit mantissa).
using Real = long double;

// Raised when an input violates a precondition that is checked at configuration time.
class ConfigurationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using Valuation = long;
inline constexpr Valuation kInfiniteValuation = std::numeric_limits<Valuation>::max();

bool is_prime(std::uint64_t n);

class Place {
 public:
  static Place infinite() { return Place(0); }
  // Throws ConfigurationError unless p is an odd prime.
  static Place finite(std::uint32_t p);

  bool is_infinite() const { return p_ == 0; }
  std::uint32_t prime() const;
  std::string name() const;

  friend bool operator==(const Place&, const Place&) = default;

 private:
  explicit Place(std::uint32_t p) : p_(p) {}
  std::uint32_t p_;
};

// S = {inf} u S_f. The infinite place is implicit and always first.
class SSet {
 public:
  SSet() = default;
  explicit SSet(std::vector<std::uint32_t> primes);

  const std::vector<std::uint32_t>& primes() const { return primes_; }
  std::size_t finite_count() const { return primes_.size(); }
  std::vector<Place> places() const;
  // Position of p among the finite primes; throws if p is not in S.
  std::size_t index_of(std::uint32_t p) const;
  bool contains(std::uint32_t p) const;
  std::string to_string() const;

  friend bool operator==(const SSet&, const SSet&) = default;

 private:
  std::vector<std::uint32_t> primes_;
};

Rational make_rational(const Integer& num, const Integer& den);
// "num/den" or an integer; result in lowest terms.
Rational parse_rational(std::string_view text);
// Rational syntax or a decimal literal.
Real parse_real(std::string_view text);
Real to_real(const Rational& r);
// Exact conversion; every finite long double is a dyadic rational.
Rational exact_rational(Real x);
std::string to_string(const Rational& r);

// p^e for any integer e.
Rational prime_power(std::uint32_t p, long e);

Valuation valuation(const Integer& z, std::uint32_t p);
Valuation valuation(const Rational& r, std::uint32_t p);

Rational padic_norm(const Rational& r, std::uint32_t p);
Rational padic_sup_norm(std::span<const Rational> v, std::uint32_t p);
// Minimum coordinate valuation; kInfiniteValuation for the zero vector.
Valuation min_valuation(std::span<const Rational> v, std::uint32_t p);
Real euclidean_norm(std::span<const Rational> v);

using PlaceScalar = std::variant<Rational, Real>;
PlaceScalar p_norm(const Rational& r, Place place);
PlaceScalar sup_norm(std::span<const Rational> v, Place place);

using UnitVector = std::variant<std::vector<Rational>, std::vector<Real>>;
// v / ||v||_p^sigma. Finite places scale by ||v||_p (exact); the real place
// divides by the Euclidean length.
UnitVector unit_normalize(std::span<const Rational> v, Place place);
std::vector<Rational> unit_normalize_padic(std::span<const Rational> v, std::uint32_t p);
std::vector<Real> unit_normalize_real(std::span<const Rational> v);

// a + p^b Z_p
struct PAdicInterval {
  std::uint32_t p = 3;
  Rational center;
  long exponent = 0;

  bool contains(const Rational& r) const;
  // Haar measure with mu_p(Z_p) = 1.
  Rational measure() const { return prime_power(p, -exponent); }
  std::string to_string() const;
};

// Parses "a+p^b", e.g. "1+3^2" is 1 + 9 Z_3.
PAdicInterval parse_padic_interval(std::string_view text);
bool in_p_interval(const Rational& r, const PAdicInterval& interval);

// Open interval (lo, hi) with lo < hi.
class RealInterval {
 public:
  RealInterval(Real lo, Real hi);
  Real lo() const { return lo_; }
  Real hi() const { return hi_; }
  Real length() const { return hi_ - lo_; }
  bool contains(Real x) const { return lo_ < x && x < hi_; }

 private:
  Real lo_;
  Real hi_;
};

struct SInterval {
  RealInterval real;
  // One entry per prime of the governing SSet, same order.
  std::vector<PAdicInterval> finite;

  void validate(const SSet& s) const;
  Rational finite_measure() const;
};

Real s_interval_measure(const SInterval& interval);

// T = (T_inf, p^{t_p}). A disengaged t_p stands for T_p = 0 (the empty finite ball).
struct Radii {
  Real T_inf = 1;
  std::vector<std::optional<int>> t;

  void validate(const SSet& s) const;
  bool has_zero_ball() const;
  // |T| = T_inf * prod T_p.
  Real abs_T(const SSet& s) const;
};

}  // namespace oppenheim
