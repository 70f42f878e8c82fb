#include "oppenheim/sieve.hpp"

#include <algorithm>

namespace oppenheim {

namespace {

std::int64_t ipow(std::int64_t p, int e) {
  std::int64_t out = 1;
  for (int i = 0; i < e; ++i) out *= p;
  return out;
}

std::int64_t mod(std::int64_t x, std::int64_t m) {
  std::int64_t r = x % m;
  return r < 0 ? r + m : r;
}

// A p-integral rational reduced mod M = p^k.
std::int64_t reduce(const Rational& x, std::int64_t M) {
  const Integer Mz(static_cast<long>(M));
  Integer num = x.get_num() % Mz;
  Integer inv;
  if (mpz_invert(inv.get_mpz_t(), Integer(x.get_den() % Mz).get_mpz_t(), Mz.get_mpz_t()) == 0) {
    if (M == 1) return 0;
    throw std::logic_error("denominator not invertible");
  }
  Integer r = (num * inv) % Mz;
  if (r < 0) r += Mz;
  return r.get_si();
}

// Decodes a table index into residues mod M.
void decode(std::size_t idx, std::int64_t M, std::vector<std::int64_t>& w) {
  for (auto& x : w) {
    x = static_cast<std::int64_t>(idx % static_cast<std::size_t>(M));
    idx /= static_cast<std::size_t>(M);
  }
}

struct Condition {
  int n;
  int k;            // condition modulus exponent
  std::int64_t K;   // p^k
  std::vector<std::int64_t> coeff;  // C_ij for i <= j, row-major upper triangle
  std::int64_t A;

  bool holds(std::span<const std::int64_t> w) const {
    std::int64_t acc = 0;
    std::size_t c = 0;
    for (int i = 0; i < n; ++i) {
      const std::int64_t wi = mod(w[i], K);
      for (int j = i; j < n; ++j, ++c) {
        if (coeff[c] == 0) continue;
        const std::int64_t prod = (wi * mod(w[j], K)) % K;
        acc = (acc + prod * coeff[c]) % K;
      }
    }
    return mod(acc - A, K) == 0;
  }
};

ResidueSet table_at(const Condition& cond, std::uint32_t p, int m) {
  ResidueSet r;
  r.p = p;
  r.n = cond.n;
  r.m = m;
  r.modulus = ipow(p, m);
  std::size_t size = 1;
  for (int i = 0; i < cond.n; ++i) size *= static_cast<std::size_t>(r.modulus);
  r.admissible.assign(size, false);
  std::vector<std::int64_t> w(static_cast<std::size_t>(cond.n));
  for (std::size_t idx = 0; idx < size; ++idx) {
    decode(idx, r.modulus, w);
    if (cond.holds(w)) {
      r.admissible[idx] = true;
      ++r.admitted;
    }
  }
  return r;
}

ResidueSet constant_set(std::uint32_t p, int n, bool all) {
  ResidueSet r;
  r.p = p;
  r.n = n;
  r.admissible.assign(1, all);
  r.admitted = all ? 1 : 0;
  r.certified = true;
  return r;
}

}  // namespace

std::size_t ResidueSet::index(std::span<const std::int64_t> w) const {
  std::size_t idx = 0;
  for (int i = n - 1; i >= 0; --i) {
    idx = idx * static_cast<std::size_t>(modulus) + static_cast<std::size_t>(mod(w[i], modulus));
  }
  return idx;
}

ResidueSet lift(const ResidueSet& r, int m) {
  if (m < r.m) throw std::invalid_argument("lift target below the current modulus");
  ResidueSet out;
  out.p = r.p;
  out.n = r.n;
  out.m = m;
  out.modulus = ipow(r.p, m);
  out.certified = r.certified;
  std::size_t size = 1;
  for (int i = 0; i < r.n; ++i) size *= static_cast<std::size_t>(out.modulus);
  out.admissible.assign(size, false);
  std::vector<std::int64_t> w(static_cast<std::size_t>(r.n));
  for (std::size_t idx = 0; idx < size; ++idx) {
    decode(idx, out.modulus, w);
    if (r.contains(w)) {
      out.admissible[idx] = true;
      ++out.admitted;
    }
  }
  return out;
}

std::optional<ResidueSet> residue_plan(const RationalMatrix& gram, std::uint32_t p, const Rational& s,
                                       const PAdicInterval& interval) {
  const int n = gram.size();
  if (interval.p != p) throw std::invalid_argument("interval prime does not match the place");
  if (s == 0) throw std::invalid_argument("zero scale");
  // Polynomial coefficients g_ii and 2 g_ij; c clears their p-denominators.
  std::vector<Rational> poly;
  Valuation low = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      poly.push_back(i == j ? gram(i, i) : 2 * gram(i, j));
      if (poly.back() != 0) low = std::min(low, valuation(poly.back(), p));
    }
  }
  const long c = -low;
  const long sigma = valuation(s, p);
  const long k = interval.exponent - 2 * sigma + c;
  const Rational A = prime_power(p, c) * interval.center / (s * s);
  const Valuation vA = valuation(A, p);
  if (k <= 0) return constant_set(p, n, vA >= k);
  if (vA < 0) return constant_set(p, n, false);

  // Table at p^k, then at p^{m+1} for the stabilization check.
  std::uint64_t size = 1;
  for (int i = 0; i < n; ++i) {
    size *= static_cast<std::uint64_t>(ipow(p, static_cast<int>(std::min<long>(k, 40))));
    if (size > kMaxResidueTable) return std::nullopt;
  }
  Condition cond{n, static_cast<int>(k), ipow(p, static_cast<int>(k)), {}, 0};
  for (const auto& x : poly) cond.coeff.push_back(reduce(prime_power(p, c) * x, cond.K));
  cond.A = reduce(A, cond.K);

  const ResidueSet full = table_at(cond, p, cond.k);
  // Smallest m at which membership depends only on w mod p^m.
  int m = 0;
  std::vector<std::int64_t> w(static_cast<std::size_t>(n));
  for (; m < cond.k; ++m) {
    const std::int64_t Mm = ipow(p, m);
    bool saturated = true;
    for (std::size_t idx = 0; idx < full.size() && saturated; ++idx) {
      decode(idx, cond.K, w);
      const bool here = full.admissible[idx];
      for (auto& x : w) x %= Mm;
      saturated = full.contains(w) == here;
    }
    if (saturated) break;
  }
  ResidueSet out = table_at(cond, p, m);
  if (out.size() * static_cast<std::uint64_t>(ipow(p, n)) <= kMaxResidueTable) {
    out.certified = table_at(cond, p, m + 1).admissible == lift(out, m + 1).admissible;
  }
  return out;
}

bool SievePlan::admits(std::span<const std::int64_t> w) const {
  for (const auto& place : places) {
    if (place && !place->contains(w)) return false;
  }
  return true;
}

SievePlan sieve_plan(const SQuadraticForm& q, const SInterval& I, std::int64_t step, std::int64_t denom) {
  I.validate(q.s());
  const Rational s = make_rational(step, denom);
  SievePlan plan;
  for (std::size_t i = 0; i < q.finite().size(); ++i) {
    plan.places.push_back(residue_plan(q.finite()[i].exact_gram(), q.s().primes()[i], s, I.finite[i]));
  }
  return plan;
}

SievePlan sieve_plan(const SQuadraticForm& q, const SInterval& I, const Radii& T, const StarBody& omega) {
  const Box box = make_box(q.rank(), q.s(), omega.inf, Dilation::of(omega, T), Region::Body);
  return sieve_plan(q, I, box.step, box.denom);
}

}  // namespace oppenheim
