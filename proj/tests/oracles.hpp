#pragma once

// Brute-force reference computations used only by the tests. Written
// directly from the definitions and deliberately share no code paths with
// the library kernels (no sieve, no pruning, no slabs).

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "oppenheim/arith.hpp"
#include "oppenheim/forms.hpp"

namespace oracle {

using oppenheim::Integer;
using oppenheim::Rational;
using oppenheim::Real;

inline Rational exact_q(const oppenheim::RealMatrix& g, const std::vector<Rational>& v) {
  Rational acc = 0;
  for (int i = 0; i < g.size(); ++i)
    for (int j = 0; j < g.size(); ++j) acc += oppenheim::exact_rational(g(i, j)) * v[i] * v[j];
  return acc;
}

inline Rational exact_q(const oppenheim::RationalMatrix& g, const std::vector<Rational>& v) {
  Rational acc = 0;
  for (int i = 0; i < g.size(); ++i)
    for (int j = 0; j < g.size(); ++j) acc += g(i, j) * v[i] * v[j];
  return acc;
}

inline long ipow(long p, long e) {
  long out = 1;
  while (e-- > 0) out *= p;
  return out;
}

// Full scan of w in [-B, B]^n with v = w / D, unit balls, Body region, closed
// ball at infinity. Everything exact.
struct ScanSpec {
  oppenheim::SSet s;
  int n = 3;
  Real T_inf = 1;
  std::vector<long> t;  // per prime
  bool include_origin = true;
};

template <class Pred>
std::uint64_t scan(const ScanSpec& spec, Pred&& pred) {
  long D = 1;
  for (std::size_t i = 0; i < spec.t.size(); ++i) D *= ipow(spec.s.primes()[i], spec.t[i]);
  const Rational R = oppenheim::exact_rational(spec.T_inf);
  const long B = static_cast<long>(std::floor(static_cast<double>(spec.T_inf) * D)) + 1;
  std::vector<long> w(static_cast<std::size_t>(spec.n), -B);
  std::uint64_t count = 0;
  while (true) {
    std::vector<Rational> v;
    Rational sq = 0;
    bool zero = true;
    for (long x : w) {
      v.push_back(Rational(x) / D);
      sq += v.back() * v.back();
      zero = zero && x == 0;
    }
    bool inside = sq <= R * R;
    for (std::size_t i = 0; i < spec.t.size() && inside && !zero; ++i) {
      inside = oppenheim::min_valuation(v, spec.s.primes()[i]) >= -spec.t[i];
    }
    if (zero) inside = spec.include_origin;
    if (inside && pred(v)) ++count;
    int k = spec.n - 1;
    while (k >= 0 && w[k] == B) w[k--] = -B;
    if (k < 0) break;
    ++w[k];
  }
  return count;
}

// N(T) straight from the definition.
inline std::uint64_t count(const oppenheim::SQuadraticForm& q, const oppenheim::SInterval& I, const ScanSpec& spec) {
  const Rational lo = oppenheim::exact_rational(I.real.lo());
  const Rational hi = oppenheim::exact_rational(I.real.hi());
  return scan(spec, [&](const std::vector<Rational>& v) {
    const Rational x = exact_q(q.real().real_gram(), v);
    if (!(lo < x && x < hi)) return false;
    for (std::size_t i = 0; i < q.finite().size(); ++i) {
      const Rational y = exact_q(q.finite()[i].exact_gram(), v) - I.finite[i].center;
      if (y != 0 && oppenheim::valuation(y, I.finite[i].p) < I.finite[i].exponent) return false;
    }
    return true;
  });
}

// #{(x, y, z) mod m : 2xz + a y^2 == c mod m}
inline long residues_rank3(long a, long c, long m) {
  long out = 0;
  for (long x = 0; x < m; ++x)
    for (long y = 0; y < m; ++y)
      for (long z = 0; z < m; ++z) {
        long val = ((2 * x * z + a * y * y - c) % m + m) % m;
        if (val == 0) ++out;
      }
  return out;
}

// d(g i, i) with g = a_t k a_t^{-1} in SL2(R), Moebius action on complex numbers.
inline Real displacement_by_moebius(Real t, Real theta) {
  using C = std::complex<Real>;
  const Real c = std::cos(theta / 2), s = std::sin(theta / 2);
  const Real e = std::exp(t);
  // a_t k a_t^{-1} = [[c, -s e^{2t}], [s e^{-2t}, c]]
  const Real a = c, b = -s * e * e, cc = s / (e * e), d = c;
  const C z(0, 1);
  const C w = (a * z + b) / (cc * z + d);
  const Real num = std::norm(w - z);
  return std::acosh(1 + num / (2 * w.imag() * z.imag()));
}

}  // namespace oracle
