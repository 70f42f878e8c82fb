#include "oppenheim/arith.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace oppenheim {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_integer_literal(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

Integer parse_integer(std::string_view s) {
  s = trim(s);
  if (!is_integer_literal(s)) {
    throw ConfigurationError("malformed integer '" + std::string(s) + "'");
  }
  if (s.front() == '+') s.remove_prefix(1);
  return Integer(std::string(s));
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

Place Place::finite(std::uint32_t p) {
  if (p == 2) throw ConfigurationError("p=2 not supported (odd primes only)");
  if (!is_prime(p)) throw ConfigurationError(std::to_string(p) + " is not a prime");
  return Place(p);
}

std::uint32_t Place::prime() const {
  if (is_infinite()) throw std::logic_error("the infinite place has no prime");
  return p_;
}

std::string Place::name() const { return is_infinite() ? "inf" : std::to_string(p_); }

SSet::SSet(std::vector<std::uint32_t> primes) : primes_(std::move(primes)) {
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    Place::finite(primes_[i]);
    if (i > 0 && primes_[i] <= primes_[i - 1]) {
      throw ConfigurationError("finite primes must be distinct and listed in increasing order");
    }
  }
}

std::vector<Place> SSet::places() const {
  std::vector<Place> out{Place::infinite()};
  for (auto p : primes_) out.push_back(Place::finite(p));
  return out;
}

std::size_t SSet::index_of(std::uint32_t p) const {
  auto it = std::find(primes_.begin(), primes_.end(), p);
  if (it == primes_.end()) throw std::out_of_range("prime " + std::to_string(p) + " is not in S");
  return static_cast<std::size_t>(it - primes_.begin());
}

bool SSet::contains(std::uint32_t p) const {
  return std::find(primes_.begin(), primes_.end(), p) != primes_.end();
}

std::string SSet::to_string() const {
  std::string out = "{inf";
  for (auto p : primes_) out += "," + std::to_string(p);
  return out + "}";
}

Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw ConfigurationError("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational parse_rational(std::string_view text) {
  text = trim(text);
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text));
  return make_rational(parse_integer(text.substr(0, slash)), parse_integer(text.substr(slash + 1)));
}

Real parse_real(std::string_view text) {
  text = trim(text);
  if (text.find('/') != std::string_view::npos || is_integer_literal(text)) {
    return to_real(parse_rational(text));
  }
  std::string s(text);
  char* end = nullptr;
  Real value = std::strtold(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0' || !std::isfinite(value)) {
    throw ConfigurationError("malformed real number '" + s + "'");
  }
  return value;
}

namespace {

Real integer_to_real(const Integer& z) {
  // Exact up to 64 significant bits, truncated beyond that.
  if (z == 0) return 0.0L;
  std::size_t bits = mpz_sizeinbase(z.get_mpz_t(), 2);
  if (bits <= 64) {
    Integer a = abs(z);
    std::uint64_t lo = 0;
    mpz_export(&lo, nullptr, -1, sizeof lo, 0, 0, a.get_mpz_t());
    Real v = static_cast<Real>(lo);
    return z < 0 ? -v : v;
  }
  Integer shifted = z >> static_cast<mp_bitcnt_t>(bits - 64);
  return std::ldexp(integer_to_real(shifted), static_cast<int>(bits - 64));
}

}  // namespace

Real to_real(const Rational& r) {
  const Integer& num = r.get_num();
  const Integer& den = r.get_den();
  if (mpz_popcount(den.get_mpz_t()) == 1) {
    auto shift = static_cast<int>(mpz_scan1(den.get_mpz_t(), 0));
    return std::ldexp(integer_to_real(num), -shift);
  }
  return integer_to_real(num) / integer_to_real(den);
}

Rational exact_rational(Real x) {
  if (!std::isfinite(x)) throw std::domain_error("non-finite real has no rational value");
  if (x == 0) return Rational(0);
  int e = 0;
  Real m = std::frexp(x, &e);  // |m| in [0.5, 1)
  auto mant = static_cast<std::uint64_t>(std::ldexp(std::fabs(m), 64));
  Integer z;
  mpz_import(z.get_mpz_t(), 1, -1, sizeof mant, 0, 0, &mant);
  if (x < 0) z = -z;
  long shift = static_cast<long>(e) - 64;
  Rational r(z);
  if (shift >= 0) {
    mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(shift));
  } else {
    mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(-shift));
  }
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) { return r.get_str(); }

Rational prime_power(std::uint32_t p, long e) {
  Integer z;
  mpz_ui_pow_ui(z.get_mpz_t(), p, static_cast<unsigned long>(e < 0 ? -e : e));
  if (e >= 0) return Rational(z);
  return make_rational(1, z);
}

Valuation valuation(const Integer& z, std::uint32_t p) {
  if (z == 0) return kInfiniteValuation;
  Integer rest;
  Integer prime(p);
  return static_cast<Valuation>(mpz_remove(rest.get_mpz_t(), z.get_mpz_t(), prime.get_mpz_t()));
}

Valuation valuation(const Rational& r, std::uint32_t p) {
  if (r == 0) return kInfiniteValuation;
  return valuation(r.get_num(), p) - valuation(r.get_den(), p);
}

Rational padic_norm(const Rational& r, std::uint32_t p) {
  if (r == 0) return Rational(0);
  return prime_power(p, -valuation(r, p));
}

Valuation min_valuation(std::span<const Rational> v, std::uint32_t p) {
  Valuation best = kInfiniteValuation;
  for (const auto& x : v) best = std::min(best, valuation(x, p));
  return best;
}

Rational padic_sup_norm(std::span<const Rational> v, std::uint32_t p) {
  Valuation m = min_valuation(v, p);
  if (m == kInfiniteValuation) return Rational(0);
  return prime_power(p, -m);
}

Real euclidean_norm(std::span<const Rational> v) {
  Rational sq = 0;
  for (const auto& x : v) sq += x * x;
  return std::sqrt(to_real(sq));
}

PlaceScalar p_norm(const Rational& r, Place place) {
  if (place.is_infinite()) return std::fabs(to_real(r));
  return padic_norm(r, place.prime());
}

PlaceScalar sup_norm(std::span<const Rational> v, Place place) {
  if (place.is_infinite()) return euclidean_norm(v);
  return padic_sup_norm(v, place.prime());
}

std::vector<Rational> unit_normalize_padic(std::span<const Rational> v, std::uint32_t p) {
  Rational norm = padic_sup_norm(v, p);
  if (norm == 0) throw std::domain_error("cannot normalize zero");
  std::vector<Rational> out(v.begin(), v.end());
  for (auto& x : out) x *= norm;
  return out;
}

std::vector<Real> unit_normalize_real(std::span<const Rational> v) {
  Real norm = euclidean_norm(v);
  if (norm == 0) throw std::domain_error("cannot normalize zero");
  std::vector<Real> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(to_real(x) / norm);
  return out;
}

UnitVector unit_normalize(std::span<const Rational> v, Place place) {
  if (place.is_infinite()) return unit_normalize_real(v);
  return unit_normalize_padic(v, place.prime());
}

bool PAdicInterval::contains(const Rational& r) const {
  Valuation v = valuation(r - center, p);
  return v == kInfiniteValuation || v >= exponent;
}

std::string PAdicInterval::to_string() const {
  return oppenheim::to_string(center) + "+" + std::to_string(p) + "^" + std::to_string(exponent);
}

bool in_p_interval(const Rational& r, const PAdicInterval& interval) { return interval.contains(r); }

PAdicInterval parse_padic_interval(std::string_view text) {
  text = trim(text);
  auto plus = text.rfind('+');
  auto caret = text.find('^');
  if (plus == std::string_view::npos || plus == 0 || caret == std::string_view::npos || caret < plus) {
    throw ConfigurationError("malformed p-adic interval '" + std::string(text) + "', expected a+p^b");
  }
  PAdicInterval out;
  out.center = parse_rational(text.substr(0, plus));
  Integer p = parse_integer(text.substr(plus + 1, caret - plus - 1));
  if (p <= 0 || !p.fits_uint_p()) throw ConfigurationError("malformed prime in '" + std::string(text) + "'");
  out.p = static_cast<std::uint32_t>(p.get_ui());
  Place::finite(out.p);
  Integer b = parse_integer(text.substr(caret + 1));
  if (!b.fits_slong_p()) throw ConfigurationError("exponent out of range in '" + std::string(text) + "'");
  out.exponent = b.get_si();
  return out;
}

RealInterval::RealInterval(Real lo, Real hi) : lo_(lo), hi_(hi) {
  if (!(lo < hi)) throw ConfigurationError("degenerate real interval: need lo < hi");
}

void SInterval::validate(const SSet& s) const {
  if (finite.size() != s.finite_count()) {
    throw ConfigurationError("S-interval needs exactly one p-adic interval per finite place");
  }
  for (std::size_t i = 0; i < finite.size(); ++i) {
    if (finite[i].p != s.primes()[i]) {
      throw ConfigurationError("p-adic interval prime " + std::to_string(finite[i].p) +
                               " does not match place " + std::to_string(s.primes()[i]));
    }
  }
}

Rational SInterval::finite_measure() const {
  Rational m = 1;
  for (const auto& iv : finite) m *= iv.measure();
  return m;
}

Real s_interval_measure(const SInterval& interval) {
  return interval.real.length() * to_real(interval.finite_measure());
}

void Radii::validate(const SSet& s) const {
  if (!(T_inf >= 0) || !std::isfinite(T_inf)) throw ConfigurationError("T_inf must be a finite nonnegative real");
  if (t.size() != s.finite_count()) throw ConfigurationError("need one radius exponent per finite place");
  for (const auto& tp : t) {
    if (tp && *tp < 0) throw ConfigurationError("radius exponents t_p must be nonnegative");
  }
}

bool Radii::has_zero_ball() const {
  return std::any_of(t.begin(), t.end(), [](const auto& tp) { return !tp.has_value(); });
}

Real Radii::abs_T(const SSet& s) const {
  Real out = T_inf;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!t[i]) return 0;
    out *= std::pow(static_cast<Real>(s.primes()[i]), static_cast<Real>(*t[i]));
  }
  return out;
}

}  // namespace oppenheim
