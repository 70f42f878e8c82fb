#include "oppenheim/geometry.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "oppenheim/counting.hpp"

namespace oppenheim {

namespace {

constexpr Real kPi = std::numbers::pi_v<Real>;

using Mat2 = std::array<Real, 4>;  // a b; c d

Mat2 mul(const Mat2& x, const Mat2& y) {
  return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
          x[2] * y[1] + x[3] * y[3]};
}

std::string fmt(Real x) { return format_real(x); }

}  // namespace

HypPoint HypPoint::h2(Real x, Real t) {
  if (!(t > 0)) throw std::invalid_argument("hyperbolic points need t > 0");
  return {Model::H2, {x, 0}, t};
}

HypPoint HypPoint::h3(std::complex<Real> z, Real t) {
  if (!(t > 0)) throw std::invalid_argument("hyperbolic points need t > 0");
  return {Model::H3, z, t};
}

Real hyp_distance(const HypPoint& x, const HypPoint& y) {
  if (x.model != y.model) throw std::invalid_argument("points from different models");
  const Real dz = std::abs(x.z - y.z);
  const Real dt = x.t - y.t;
  const Real chord = std::sqrt(dz * dz + dt * dt);
  return 2 * std::asinh(chord / (2 * std::sqrt(x.t * y.t)));
}

Real conj_displacement(Real t, Real theta) {
  if (!(t > 0)) throw std::invalid_argument("conj_displacement needs t > 0");
  return 2 * std::asinh(std::sinh(2 * t) * std::fabs(std::sin(theta / 2)));
}

Real conj_displacement_matrix(Real t, Real theta) {
  const Mat2 a{std::exp(t), 0, 0, std::exp(-t)};
  const Mat2 a_inv{std::exp(-t), 0, 0, std::exp(t)};
  const Real c = std::cos(theta / 2);
  const Real s = std::sin(theta / 2);
  const Mat2 k{c, -s, s, c};
  const Mat2 g = mul(mul(a, k), a_inv);
  // g . i = (a i + b) / (c i + d)
  const std::complex<Real> i(0, 1);
  const std::complex<Real> w = (g[0] * i + g[1]) / (g[2] * i + g[3]);
  return hyp_distance(HypPoint::h2(0, 1), HypPoint::h2(w.real(), w.imag()));
}

Real displacement_measure(Real t, Real r) {
  if (!(t > 0)) throw std::invalid_argument("displacement_measure needs t > 0");
  if (r <= 0) return 0;
  const Real x = std::sinh(r / 2) / std::sinh(2 * t);
  if (x >= 1) return 1;
  return 2 * std::asin(x) / kPi;
}

Real corner_measure_real(Real t, Real r) {
  if (!(t > 0)) throw std::invalid_argument("corner_measure_real needs t > 0");
  if (!(r > 0 && r < 2 * t)) throw std::invalid_argument("corner_measure_real needs 0 < r < 2t");
  return displacement_measure(t, r);
}

Integer tree_sphere_size(std::uint32_t p, long m) {
  if (m < 0) throw std::invalid_argument("tree sphere radius must be nonnegative");
  Place::finite(p);
  if (m == 0) return 1;
  Integer out;
  mpz_ui_pow_ui(out.get_mpz_t(), p, static_cast<unsigned long>(m - 1));
  return out * (p + 1);
}

Rational tree_conj_measure(std::uint32_t p, long t, long r) {
  if (t <= 0) throw std::invalid_argument("tree_conj_measure needs t > 0");
  if (r < 0) throw std::invalid_argument("tree_conj_measure needs r >= 0");
  if (r >= 4 * t) return 1;
  return make_rational(1, tree_sphere_size(p, 2 * t - r / 2));
}

Rational tree_conj_bound(std::uint32_t p, long t, long r) {
  return make_rational(p, p + 1) * prime_power(p, -(2 * t - r));
}

CombinedBound combined_measure_bound(Real t_inf, const std::vector<std::uint32_t>& primes,
                                     const std::vector<long>& t, long r, Real C_inf) {
  if (primes.size() != t.size()) throw std::invalid_argument("need one t per prime");
  if (r <= 0) throw std::invalid_argument("combined bound needs r > 0");
  CombinedBound out;
  std::vector<long> k(primes.size(), 0);
  std::function<void(std::size_t, long, Real)> walk = [&](std::size_t i, long used, Real prod) {
    if (i == primes.size()) {
      out.lhs += displacement_measure(t_inf, static_cast<Real>(r - used)) * prod;
      return;
    }
    for (long ki = 0; used + ki <= r; ++ki) {
      walk(i + 1, used + ki, prod * to_real(tree_conj_measure(primes[i], t[i], ki)));
    }
  };
  walk(0, 0, 1);
  Real C = C_inf;
  Real sum_t = t_inf;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    C *= static_cast<Real>(primes[i]) / (primes[i] + 1);
    sum_t += static_cast<Real>(t[i]);
  }
  out.rhs = C * std::pow(static_cast<Real>(r), static_cast<Real>(primes.size())) * std::exp(r - sum_t);
  return out;
}

Real calibrated_corner_constant() { return corner_measure_real(1, 0.5L) / std::exp(-2 + 0.5L); }

std::vector<LemmaRow> lemma_grid(std::uint64_t seed) {
  std::vector<LemmaRow> rows;
  auto add = [&](std::string lemma, std::string params, Real lhs, Real rhs, bool pass) {
    rows.push_back({std::move(lemma), std::move(params), lhs, rhs, pass});
  };

  for (Real t : {0.5L, 1.0L, 2.0L, 4.0L}) {
    const Real err = std::fabs(conj_displacement(t, kPi) - 4 * t);
    add("displacement_at_pi", "t=" + fmt(t), err, 1e-9L, err <= 1e-9L);
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> t_dist(0.05, 3.0);
  std::uniform_real_distribution<double> theta_dist(0.0, 2 * std::numbers::pi);
  for (int i = 0; i < 100; ++i) {
    const Real t = t_dist(rng);
    const Real theta = theta_dist(rng);
    const Real err = std::fabs(conj_displacement(t, theta) - conj_displacement_matrix(t, theta));
    add("displacement_matrix", "t=" + fmt(t) + ";theta=" + fmt(theta), err, 1e-9L, err <= 1e-9L);
  }

  const Real C = calibrated_corner_constant();
  for (int t = 1; t <= 5; ++t) {
    for (Real r = 0.5L; r < 2 * t; r += 0.5L) {
      const Real lhs = corner_measure_real(t, r);
      const Real rhs = C * std::exp(-2 * t + r);
      add("corner_measure_real", "t=" + std::to_string(t) + ";r=" + fmt(r) + ";C=" + fmt(C), lhs, rhs, lhs <= rhs);
    }
  }

  for (std::uint32_t p : {3U, 5U, 7U}) {
    for (long t = 1; t <= 3; ++t) {
      for (long r : {0L, 2L, 4L}) {
        if (r >= 4 * t) continue;
        const Rational m = tree_conj_measure(p, t, r);
        const Rational b = tree_conj_bound(p, t, r);
        const bool exact = m * Rational(tree_sphere_size(p, 2 * t - r / 2)) == 1;
        add("tree_conj_measure", "p=" + std::to_string(p) + ";t=" + std::to_string(t) + ";r=" + std::to_string(r),
            to_real(m), to_real(b), exact && m <= b);
      }
    }
  }

  const std::vector<std::vector<std::uint32_t>> prime_sets{{}, {3}, {3, 5}};
  for (const auto& primes : prime_sets) {
    for (int t_inf = 1; t_inf <= 3; ++t_inf) {
      for (long tp = 1; tp <= 2; ++tp) {
        for (long r = 1; r <= 3; ++r) {
          const std::vector<long> t(primes.size(), tp);
          const auto b = combined_measure_bound(t_inf, primes, t, r, C);
          std::string params = "t_inf=" + std::to_string(t_inf);
          for (auto p : primes) params += ";t_" + std::to_string(p) + "=" + std::to_string(tp);
          params += ";r=" + std::to_string(r);
          add("combined_measure_bound", params, b.lhs, b.rhs, b.holds());
        }
        if (primes.empty()) break;
      }
    }
  }
  return rows;
}

std::string lemma_csv(const std::vector<LemmaRow>& rows) {
  std::ostringstream os;
  os << "lemma,params,lhs,rhs,pass\n";
  for (const auto& row : rows) {
    os << row.lemma << ',' << row.params << ',' << format_real(row.lhs) << ',' << format_real(row.rhs) << ','
       << (row.pass ? "true" : "false") << '\n';
  }
  return os.str();
}

}  // namespace oppenheim
