#include "oppenheim/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "oppenheim/kernels.hpp"

namespace oppenheim {

namespace {

// All increasing index tuples of size j from [0, n).
void combinations(int n, int j, std::vector<std::vector<int>>& out) {
  std::vector<int> idx(static_cast<std::size_t>(j));
  std::iota(idx.begin(), idx.end(), 0);
  if (j > n) return;
  while (true) {
    out.push_back(idx);
    int k = j - 1;
    while (k >= 0 && idx[k] == n - j + k) --k;
    if (k < 0) return;
    ++idx[k];
    for (int i = k + 1; i < j; ++i) idx[i] = idx[i - 1] + 1;
  }
}

std::vector<Rational> minors(const std::vector<std::vector<Rational>>& rows) {
  const int j = static_cast<int>(rows.size());
  const int n = static_cast<int>(rows.front().size());
  std::vector<std::vector<int>> cols;
  combinations(n, j, cols);
  std::vector<Rational> out;
  for (const auto& c : cols) {
    SquareMatrix<Rational> m(j);
    for (int a = 0; a < j; ++a)
      for (int b = 0; b < j; ++b) m(a, b) = rows[a][c[b]];
    out.push_back(determinant(m));
  }
  return out;
}

}  // namespace

SLattice SLattice::standard(int n, const SSet& s) { return {s, SquareMatrix<Rational>::identity(n)}; }

void SLattice::validate() const {
  if (basis.size() < 1) throw ConfigurationError("lattice basis is empty");
  if (determinant(basis) == 0) throw ConfigurationError("lattice basis is singular");
}

std::vector<Rational> SLattice::point(std::span<const Rational> c) const {
  const int n = dim();
  std::vector<Rational> v(static_cast<std::size_t>(n), Rational(0));
  for (int i = 0; i < n; ++i) {
    if (c[i] == 0) continue;
    for (int j = 0; j < n; ++j) v[j] += c[i] * basis(i, j);
  }
  return v;
}

SquareMatrix<Rational> inverse(const SquareMatrix<Rational>& m) {
  const int n = m.size();
  SquareMatrix<Rational> a = m;
  SquareMatrix<Rational> inv = SquareMatrix<Rational>::identity(n);
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    while (pivot < n && a(pivot, col) == 0) ++pivot;
    if (pivot == n) throw std::domain_error("singular matrix");
    for (int j = 0; j < n; ++j) {
      std::swap(a(pivot, j), a(col, j));
      std::swap(inv(pivot, j), inv(col, j));
    }
    const Rational d = a(col, col);
    for (int j = 0; j < n; ++j) {
      a(col, j) /= d;
      inv(col, j) /= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col || a(r, col) == 0) continue;
      const Rational f = a(r, col);
      for (int j = 0; j < n; ++j) {
        a(r, j) -= f * a(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

Real wedge_covolume(const std::vector<std::vector<Rational>>& vectors, const SSet& s) {
  if (vectors.empty()) throw std::invalid_argument("wedge_covolume needs at least one vector");
  const auto m = minors(vectors);
  if (std::all_of(m.begin(), m.end(), [](const Rational& x) { return x == 0; })) {
    throw std::domain_error("degenerate subspace");
  }
  Real out = euclidean_norm(m);
  for (auto p : s.primes()) out *= to_real(padic_sup_norm(m, p));
  return out;
}

AlphaResult alpha_lower(const SLattice& lattice, int height, Execution exec) {
  if (height < 1) throw ConfigurationError("search height must be at least 1");
  lattice.validate();
  const int n = lattice.dim();
  const SSet& s = lattice.s;

  // Primitive coefficient vectors, first nonzero entry positive.
  std::vector<std::vector<long>> cand;
  std::vector<long> c(static_cast<std::size_t>(n), -height);
  while (true) {
    auto first = std::find_if(c.begin(), c.end(), [](long x) { return x != 0; });
    if (first != c.end() && *first > 0) {
      long g = 0;
      for (long x : c) g = std::gcd(g, x);
      if (g == 1) cand.push_back(c);
    }
    int k = n - 1;
    while (k >= 0 && c[k] == height) c[k--] = -height;
    if (k < 0) break;
    ++c[k];
  }
  std::stable_sort(cand.begin(), cand.end(), [](const auto& a, const auto& b) {
    long la = 0, lb = 0;
    for (long x : a) la += std::labs(x);
    for (long x : b) lb += std::labs(x);
    if (la != lb) return la < lb;
    return a > b;
  });

  std::vector<std::vector<int>> subsets;
  for (int j = 1; j < n; ++j) combinations(static_cast<int>(cand.size()), j, subsets);

  auto coverage = [&](const std::vector<std::vector<long>>& coeffs) -> Real {
    std::vector<std::vector<Rational>> rows;
    std::vector<std::vector<Rational>> crow;
    for (const auto& cv : coeffs) {
      std::vector<Rational> cr;
      for (long x : cv) cr.emplace_back(x);
      rows.push_back(lattice.point(cr));
      crow.push_back(std::move(cr));
    }
    const auto cm = minors(crow);
    Integer g = 0;
    for (const auto& x : cm) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_num_mpz_t());
    if (g == 0) return -1;
    for (auto p : s.primes()) {
      Integer prime(p);
      mpz_remove(g.get_mpz_t(), g.get_mpz_t(), prime.get_mpz_t());
    }
    return wedge_covolume(rows, s) / to_real(Rational(g));
  };

  auto values = kernels::run_indexed<Real>(static_cast<std::int64_t>(subsets.size()), exec,
                                           [&](std::int64_t i, Real& out) {
    std::vector<std::vector<long>> coeffs;
    for (int idx : subsets[static_cast<std::size_t>(i)]) coeffs.push_back(cand[static_cast<std::size_t>(idx)]);
    out = coverage(coeffs);
  });

  AlphaResult best;
  best.subspaces = subsets.size() + 1;
  auto consider = [&](Real d, const std::vector<std::vector<long>>& coeffs) {
    if (d <= 0) return;
    const Real a = 1 / d;
    if (best.witness_coeffs.empty() || a > best.alpha * (1 + 1e-12L)) {
      best.alpha = a;
      best.covolume = d;
      best.witness_coeffs = coeffs;
    }
  };
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    std::vector<std::vector<long>> coeffs;
    for (int idx : subsets[i]) coeffs.push_back(cand[static_cast<std::size_t>(idx)]);
    consider(values[i], coeffs);
  }
  std::vector<std::vector<long>> full;
  for (int i = 0; i < n; ++i) {
    std::vector<long> e(static_cast<std::size_t>(n), 0);
    e[i] = 1;
    full.push_back(e);
  }
  consider(coverage(full), full);

  best.dimension = static_cast<int>(best.witness_coeffs.size());
  for (const auto& cv : best.witness_coeffs) {
    std::vector<Rational> cr;
    for (long x : cv) cr.emplace_back(x);
    best.witness.push_back(lattice.point(cr));
  }
  return best;
}

SiegelResult siegel_transform(const SupportSpec& f, const SLattice& lattice, std::uint64_t safety_cap,
                              Execution exec) {
  lattice.validate();
  const SSet& s = lattice.s;
  const int n = lattice.dim();
  if (f.finite_exp.size() != s.finite_count()) throw ConfigurationError("support needs one exponent per prime");
  if (!(f.radius >= 0)) throw ConfigurationError("support radius must be nonnegative");
  SiegelResult out;
  if (f.height == 0) return out;

  // Coefficient region: ||c||_inf <= R ||B^-1||_F, ||c||_p <= p^{k_p} ||B^-1||_p.
  const auto inv = inverse(lattice.basis);
  Rational frob = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) frob += inv(i, j) * inv(i, j);
  Dilation d;
  d.T_inf = f.radius * std::sqrt(to_real(frob)) * (1 + 1e-12L);
  for (std::size_t i = 0; i < s.finite_count(); ++i) {
    std::vector<Rational> entries;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) entries.push_back(inv(a, b));
    d.e.emplace_back(f.finite_exp[i] - min_valuation(entries, s.primes()[i]));
  }
  EnumerationOptions opts;
  opts.safety_cap = safety_cap;
  opts.execution = exec;
  const auto coeffs = enumerate_ZS(n, s, RealRadius::constant(1), d, opts);

  const Rational R = exact_rational(f.radius);
  const Rational R2 = R * R;
  for (const auto& c : coeffs) {
    const auto v = lattice.point(c.value());
    Rational sq = 0;
    for (const auto& x : v) sq += x * x;
    if (sq > R2) continue;
    bool inside = true;
    for (std::size_t i = 0; i < s.finite_count() && inside; ++i) {
      const Valuation mv = min_valuation(v, s.primes()[i]);
      inside = mv == kInfiniteValuation || mv >= -f.finite_exp[i];
    }
    if (inside) ++out.points;
  }
  out.value = f.height * static_cast<Real>(out.points);
  return out;
}

Real siegel_count_bound(const SupportSpec& f, int n) {
  return std::pow(2.0L, static_cast<Real>(n - 1)) * std::pow(2 * f.radius + 1, static_cast<Real>(n));
}

SLattice random_lattice(std::uint64_t seed, int n, const SSet& s) {
  if (n < 2) throw ConfigurationError("random lattices need n >= 2");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> small(1, 3);
  std::uniform_int_distribution<long> num(-3, 3);
  std::uniform_int_distribution<int> row(0, n - 1);
  std::uniform_int_distribution<int> other(0, n - 2);
  SquareMatrix<Rational> b = SquareMatrix<Rational>::identity(n);
  const Rational q = make_rational(small(rng), small(rng));
  b(0, 0) = q;
  b(1, 1) = 1 / q;
  const int steps = 2 * n;
  for (int k = 0; k < steps; ++k) {
    int i = row(rng);
    int j = other(rng);
    if (j >= i) ++j;
    const Rational amount = make_rational(num(rng), small(rng));
    // Row operation: row_i += amount * row_j keeps the determinant.
    for (int c = 0; c < n; ++c) b(i, c) += amount * b(j, c);
  }
  return {s, b};
}

std::string format_vector(std::span<const Rational> v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += " ";
    out += to_string(v[i]);
  }
  return out + ")";
}

}  // namespace oppenheim
