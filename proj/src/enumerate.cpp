#include "oppenheim/enumerate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "oppenheim/kernels.hpp"

namespace oppenheim {

namespace {

constexpr std::int64_t kMaxScale = std::int64_t{1} << 62;

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  if (a != 0 && b > kMaxScale / a) throw ConfigurationError("radius exponents too large for 64-bit box coordinates");
  return a * b;
}

std::int64_t ipow(std::int64_t p, long e) {
  std::int64_t out = 1;
  for (long i = 0; i < e; ++i) out = checked_mul(out, p);
  return out;
}

// Hyperspherical angles of a unit vector.
std::vector<Real> angles_of(std::span<const Real> u) {
  const auto n = u.size();
  std::vector<Real> out;
  for (std::size_t k = 0; k + 2 < n; ++k) {
    Real tail = 0;
    for (std::size_t j = k + 1; j < n; ++j) tail += u[j] * u[j];
    out.push_back(std::atan2(std::sqrt(tail), u[k]));
  }
  Real last = std::atan2(u[n - 1], u[n - 2]);
  if (last < 0) last += 2 * std::numbers::pi_v<Real>;
  out.push_back(last);
  return out;
}

std::int64_t clamp_floor(const Rational& x) {
  if (x < 0) return -1;
  Integer f;
  mpz_fdiv_q(f.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  const Integer cap(static_cast<long>(kMaxScale));
  if (f > cap) return kMaxScale;
  return f.get_si();
}

}  // namespace

SphereTable::SphereTable(int n, std::vector<int> dims, std::vector<Real> values)
    : n_(n), dims_(std::move(dims)), values_(std::move(values)) {
  if (n_ < 2) throw ConfigurationError("sphere tables need dimension at least 2");
  if (static_cast<int>(dims_.size()) != n_ - 1) throw ConfigurationError("sphere table needs n-1 grid sizes");
  std::size_t total = 1;
  for (int d : dims_) {
    if (d < 2) throw ConfigurationError("sphere table grid sizes must be at least 2");
    total *= static_cast<std::size_t>(d);
  }
  if (values_.size() != total) throw ConfigurationError("sphere table value count does not match its grid");
  for (Real v : values_) {
    if (!(v > 0) || !std::isfinite(v)) throw ConfigurationError("sphere table radii must be positive");
    max_ = std::max(max_, v);
  }
}

SphereTable SphereTable::parse(const std::string& text) {
  std::istringstream in(text);
  int n = 0;
  if (!(in >> n) || n < 2) throw ConfigurationError("sphere table: bad dimension header");
  std::vector<int> dims(static_cast<std::size_t>(n - 1));
  for (auto& d : dims) {
    if (!(in >> d)) throw ConfigurationError("sphere table: bad grid header");
  }
  std::vector<Real> values;
  for (std::string tok; in >> tok;) values.push_back(parse_real(tok));
  return SphereTable(n, std::move(dims), std::move(values));
}

Real SphereTable::at(std::span<const Real> unit) const {
  if (static_cast<int>(unit.size()) != n_) throw std::invalid_argument("sphere table dimension mismatch");
  const auto ang = angles_of(unit);
  const int k_dims = n_ - 1;
  std::vector<int> lo(k_dims), hi(k_dims);
  std::vector<Real> frac(k_dims);
  for (int k = 0; k < k_dims; ++k) {
    const int d = dims_[k];
    const bool periodic = k == k_dims - 1;
    const Real span = periodic ? 2 * std::numbers::pi_v<Real> / d : std::numbers::pi_v<Real> / (d - 1);
    Real x = ang[k] / span;
    auto i = static_cast<int>(std::floor(x));
    if (periodic) {
      i = ((i % d) + d) % d;
      lo[k] = i;
      hi[k] = (i + 1) % d;
    } else {
      i = std::clamp(i, 0, d - 2);
      lo[k] = i;
      hi[k] = i + 1;
    }
    frac[k] = std::clamp<Real>(x - std::floor(x), 0, 1);
    if (!periodic && x >= d - 1) frac[k] = 1;
  }
  Real out = 0;
  for (int corner = 0; corner < (1 << k_dims); ++corner) {
    Real weight = 1;
    std::size_t idx = 0;
    for (int k = 0; k < k_dims; ++k) {
      const bool up = (corner >> k) & 1;
      weight *= up ? frac[k] : 1 - frac[k];
      idx = idx * static_cast<std::size_t>(dims_[k]) + static_cast<std::size_t>(up ? hi[k] : lo[k]);
    }
    if (weight != 0) out += weight * values_[idx];
  }
  return out;
}

RealRadius RealRadius::constant(Real c) {
  if (!(c > 0) || !std::isfinite(c)) throw ConfigurationError("rho_inf must be positive");
  RealRadius r;
  r.c_ = c;
  return r;
}

RealRadius RealRadius::table(SphereTable t) {
  RealRadius r;
  r.c_ = t.max();
  r.table_ = std::move(t);
  return r;
}

Real RealRadius::at(std::span<const Real> unit) const { return table_ ? table_->at(unit) : c_; }

Real RealRadius::max() const { return table_ ? table_->max() : c_; }

StarBody StarBody::unit(const SSet& s) {
  StarBody b;
  b.finite_exp.assign(s.finite_count(), 0);
  return b;
}

void StarBody::validate(const SSet& s, int n) const {
  if (finite_exp.size() != s.finite_count()) throw ConfigurationError("need one rho exponent per finite place");
  if (inf.sphere_table() && inf.sphere_table()->dim() != n) {
    throw ConfigurationError("rho_inf table dimension does not match the rank");
  }
}

std::string to_string(Region r) { return r == Region::Body ? "body" : "shell"; }

Dilation Dilation::of(const StarBody& omega, const Radii& T) {
  if (omega.finite_exp.size() != T.t.size()) throw ConfigurationError("radius and body disagree on S");
  Dilation d;
  d.T_inf = T.T_inf;
  for (std::size_t i = 0; i < T.t.size(); ++i) {
    if (T.t[i]) {
      d.e.emplace_back(static_cast<long>(*T.t[i]) + omega.finite_exp[i]);
    } else {
      d.e.emplace_back(std::nullopt);
    }
  }
  return d;
}

std::int64_t denominator_of(const SSet& s, const Radii& T) {
  if (T.t.size() != s.finite_count()) throw ConfigurationError("need one radius exponent per finite place");
  std::int64_t D = 1;
  for (std::size_t i = 0; i < T.t.size(); ++i) {
    if (T.t[i]) D = checked_mul(D, ipow(s.primes()[i], *T.t[i]));
  }
  return D;
}

namespace {

bool real_part_member(std::span<const Rational> v, const RealRadius& rho, Real T_inf, Region region) {
  Rational sq = 0;
  for (const auto& x : v) sq += x * x;
  if (sq == 0) return region == Region::Body;
  if (rho.is_constant()) {
    const Rational R = exact_rational(T_inf * rho.constant_value());
    const Rational R2 = R * R;
    if (sq > R2) return false;
    return region == Region::Body || 4 * sq > R2;
  }
  const auto u = unit_normalize_real(v);
  const Real R = T_inf * rho.at(u);
  const Real s = to_real(sq);
  if (s > R * R) return false;
  return region == Region::Body || 4 * s > R * R;
}

}  // namespace

bool omega_membership(const SVector& v, const RealRadius& rho, const Dilation& d, Region region, const SSet& s) {
  if (d.e.size() != s.finite_count()) throw std::invalid_argument("dilation does not match S");
  const auto x = v.value();
  if (!real_part_member(x, rho, d.T_inf, region)) return false;
  const bool zero = v.is_zero();
  for (std::size_t i = 0; i < d.e.size(); ++i) {
    if (!d.e[i]) {
      if (!zero || region == Region::Shell) return false;
      continue;
    }
    const Valuation mv = min_valuation(x, s.primes()[i]);
    if (zero) continue;
    if (region == Region::Body ? mv < -*d.e[i] : mv != -*d.e[i]) return false;
  }
  return true;
}

bool omega_membership(const SVector& v, const StarBody& omega, const Radii& T, Region region, const SSet& s) {
  return omega_membership(v, omega.inf, Dilation::of(omega, T), region, s);
}

SafetyCapExceeded::SafetyCapExceeded(long double box_points, long double cap)
    : std::runtime_error([&] {
        std::ostringstream os;
        // About 2e8 box points per second per core for the pruned scan.
        os << "enumeration box has " << static_cast<double>(box_points) << " points, above the safety cap of "
           << static_cast<double>(cap) << "; estimated cost " << static_cast<double>(box_points / 2e8L)
           << " core-seconds";
        return os.str();
      }()),
      box_points_(box_points) {}

long double Box::points() const {
  if (zero_only) return 1;
  return std::pow(2.0L * static_cast<long double>(bound) + 1.0L, static_cast<long double>(n));
}

Box make_box(int n, const SSet& s, const RealRadius& rho, const Dilation& d, Region region) {
  if (n < 1) throw ConfigurationError("dimension must be at least 1");
  if (d.e.size() != s.finite_count()) throw ConfigurationError("dilation does not match S");
  if (!(d.T_inf >= 0) || !std::isfinite(d.T_inf)) throw ConfigurationError("T_inf must be a finite nonnegative real");
  Box box;
  box.n = n;
  for (std::size_t i = 0; i < d.e.size(); ++i) {
    if (!d.e[i]) {
      box.zero_only = true;
      continue;
    }
    const long e = *d.e[i];
    if (e > 0) box.denom = checked_mul(box.denom, ipow(s.primes()[i], e));
    if (e < 0) box.step = checked_mul(box.step, ipow(s.primes()[i], -e));
  }
  const Real R = d.T_inf * rho.max();
  if (R == 0) box.zero_only = true;
  if (box.zero_only) return box;
  box.scale = make_rational(box.denom, box.step);
  const Rational Rq = exact_rational(R) * box.scale;
  const Rational X = Rq * Rq;
  box.body_limit = clamp_floor(X);
  box.shell_floor = region == Region::Shell ? clamp_floor(X / 4) : -1;
  box.bound = kernels::isqrt(box.body_limit);
  return box;
}

RegionTest::RegionTest(const Box& box, const RealRadius& rho, const Dilation& d, Region region, const SSet& s)
    : box_(&box), rho_(&rho), T_inf_(d.T_inf), region_(region) {
  if (region == Region::Shell) {
    for (auto p : s.primes()) shell_primes_.push_back(p);
  }
}

bool RegionTest::operator()(std::span<const std::int64_t> w, std::int64_t sum_sq) const {
  if (sum_sq == 0) return false;
  if (rho_->is_constant()) {
    if (sum_sq > box_->body_limit) return false;
    if (region_ == Region::Shell && sum_sq <= box_->shell_floor) return false;
  } else {
    std::vector<Real> u(w.size());
    const Real len = std::sqrt(static_cast<Real>(sum_sq));
    for (std::size_t i = 0; i < w.size(); ++i) u[i] = static_cast<Real>(w[i]) / len;
    const Real R = T_inf_ * rho_->at(u) * to_real(box_->scale);
    const auto s = static_cast<Real>(sum_sq);
    if (s > R * R) return false;
    if (region_ == Region::Shell && 4 * s <= R * R) return false;
  }
  for (auto p : shell_primes_) {
    if (std::all_of(w.begin(), w.end(), [p](std::int64_t x) { return x % p == 0; })) return false;
  }
  return true;
}

std::vector<SVector> enumerate_ZS(int n, const SSet& s, const RealRadius& rho, const Dilation& d,
                                  const EnumerationOptions& opts) {
  const Box box = make_box(n, s, rho, d, opts.region);
  const bool want_origin = opts.include_origin && opts.region == Region::Body;
  if (box.zero_only) {
    if (want_origin) return {SVector{std::vector<std::int64_t>(static_cast<std::size_t>(n), 0), 1}};
    return {};
  }
  if (box.points() > static_cast<long double>(opts.safety_cap)) {
    throw SafetyCapExceeded(box.points(), static_cast<long double>(opts.safety_cap));
  }
  const RegionTest test(box, rho, d, opts.region, s);
  auto slabs = kernels::run_slabs<std::vector<SVector>>(box.bound, opts.execution,
                                                        [&](std::int64_t x1, std::vector<SVector>& out) {
    kernels::visit_ball_slab(n, x1, box.body_limit, box.bound,
                             [&](std::span<const std::int64_t> w, std::int64_t sum_sq) {
      if (sum_sq == 0 ? want_origin : test(w, sum_sq)) {
        std::vector<std::int64_t> scaled(w.begin(), w.end());
        for (auto& x : scaled) x *= box.step;
        out.push_back(SVector::canonical(std::move(scaled), box.denom, s));
      }
    });
  });
  std::vector<SVector> out;
  for (auto& slab : slabs) {
    for (auto& v : slab) out.push_back(std::move(v));
  }
  return out;
}

std::vector<SVector> enumerate_ZS(int n, const SSet& s, const Radii& T, const StarBody& omega,
                                  const EnumerationOptions& opts) {
  T.validate(s);
  omega.validate(s, n);
  return enumerate_ZS(n, s, omega.inf, Dilation::of(omega, T), opts);
}

}  // namespace oppenheim
