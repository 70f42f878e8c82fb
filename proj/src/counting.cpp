#include "oppenheim/counting.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>

#include "oppenheim/kernels.hpp"

namespace oppenheim {

namespace {

// Upper-triangular polynomial coefficients g_ii, 2 g_ij.
std::vector<Real> real_poly(const RealMatrix& g) {
  std::vector<Real> out;
  for (int i = 0; i < g.size(); ++i)
    for (int j = i; j < g.size(); ++j) out.push_back(i == j ? g(i, i) : 2 * g(i, j));
  return out;
}

template <class T, class W>
Real eval_poly(const std::vector<Real>& c, const W& w, int n) {
  Real acc = 0;
  std::size_t k = 0;
  for (int i = 0; i < n; ++i) {
    const auto wi = static_cast<Real>(static_cast<T>(w[i]));
    for (int j = i; j < n; ++j, ++k) acc += c[k] * wi * static_cast<Real>(static_cast<T>(w[j]));
  }
  return acc;
}

struct SlabCount {
  std::uint64_t count = 0;
  std::uint64_t candidates = 0;
  std::uint64_t admitted = 0;
  std::vector<SVector> vectors;
};

}  // namespace

CountResult count_N(const SQuadraticForm& q, const RealRadius& rho, const Dilation& d, const SInterval& I,
                    const CountOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  const SSet& s = q.s();
  const int n = q.rank();
  I.validate(s);
  const Box box = make_box(n, s, rho, d, opts.region);
  if (!box.zero_only && box.points() > static_cast<long double>(opts.safety_cap)) {
    throw SafetyCapExceeded(box.points(), static_cast<long double>(opts.safety_cap));
  }
  SievePlan plan;
  if (opts.use_sieve && !box.zero_only) plan = sieve_plan(q, I, box.step, box.denom);
  const bool want_origin = opts.include_origin && opts.region == Region::Body;
  const auto poly = real_poly(q.real().real_gram());
  const Real scale2 = box.zero_only ? Real(0) : to_real(make_rational(box.step * box.step, 1) /
                                                        (Rational(box.denom) * Rational(box.denom)));
  const Rational step_over_denom = make_rational(box.step, box.denom);

  auto accept = [&](std::span<const std::int64_t> w, SlabCount& out) {
    ++out.candidates;
    if (!plan.admits(w)) return;
    ++out.admitted;
    const Real value = eval_poly<std::int64_t>(poly, w, n) * scale2;
    if (!I.real.contains(value)) return;
    std::vector<Rational> v;
    v.reserve(w.size());
    for (auto x : w) v.push_back(Rational(static_cast<long>(x)) * step_over_denom);
    for (std::size_t i = 0; i < q.finite().size(); ++i) {
      if (!I.finite[i].contains(q.finite()[i].evaluate_exact(v))) return;
    }
    ++out.count;
    if (opts.keep_vectors) {
      std::vector<std::int64_t> scaled(w.begin(), w.end());
      for (auto& x : scaled) x *= box.step;
      out.vectors.push_back(SVector::canonical(std::move(scaled), box.denom, s));
    }
  };

  std::vector<SlabCount> slabs;
  if (box.zero_only) {
    slabs.resize(1);
    if (want_origin) {
      std::vector<std::int64_t> zero(static_cast<std::size_t>(n), 0);
      accept(zero, slabs[0]);
    }
  } else {
    const RegionTest test(box, rho, d, opts.region, s);
    slabs = kernels::run_slabs<SlabCount>(box.bound, opts.execution, [&](std::int64_t x1, SlabCount& out) {
      kernels::visit_ball_slab(n, x1, box.body_limit, box.bound,
                               [&](std::span<const std::int64_t> w, std::int64_t sum_sq) {
        if (sum_sq == 0 ? want_origin : test(w, sum_sq)) accept(w, out);
      });
    });
  }

  CountResult out;
  for (auto& slab : slabs) {
    out.count += slab.count;
    out.candidates += slab.candidates;
    out.sieve_admitted += slab.admitted;
    for (auto& v : slab.vectors) out.vectors.push_back(std::move(v));
  }
  for (const auto& place : plan.places) {
    if (place && !place->certified) out.sieve_certified = false;
  }
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

CountResult count_N(const SQuadraticForm& q, const StarBody& omega, const SInterval& I, const Radii& T,
                    const CountOptions& opts) {
  T.validate(q.s());
  omega.validate(q.s(), q.rank());
  CountResult out = count_N(q, omega.inf, Dilation::of(omega, T), I, opts);
  out.T = T;
  return out;
}

FiniteVolume finite_place_volume(const PlaceForm& f, long rho_exp, const PAdicInterval& I, std::optional<long> t_p,
                                 Region region) {
  if (f.place().is_infinite()) throw std::invalid_argument("finite_place_volume needs a finite-place form");
  const std::uint32_t p = f.place().prime();
  const int n = f.rank();
  FiniteVolume out;
  if (!t_p) {
    out.value = 0;
    out.certified = true;
    return out;
  }
  const long e = *t_p + rho_exp;
  auto plan = residue_plan(f.exact_gram(), p, prime_power(p, -e), I);
  if (!plan) throw std::runtime_error("residue table for p=" + std::to_string(p) + " exceeds the size limit");
  ResidueSet set = std::move(*plan);
  std::uint64_t admitted = set.admitted;
  if (region == Region::Shell) {
    if (set.m == 0) set = lift(set, 1);
    admitted = 0;
    std::vector<std::int64_t> w(static_cast<std::size_t>(n));
    for (std::size_t idx = 0; idx < set.size(); ++idx) {
      if (!set.admissible[idx]) continue;
      std::size_t rest = idx;
      bool all_divisible = true;
      for (auto& x : w) {
        x = static_cast<std::int64_t>(rest % static_cast<std::size_t>(set.modulus));
        rest /= static_cast<std::size_t>(set.modulus);
        if (x % p != 0) all_divisible = false;
      }
      if (!all_divisible) ++admitted;
    }
  }
  out.modulus_exp = set.m;
  out.certified = set.certified;
  out.value = prime_power(p, static_cast<long>(n) * e) * Rational(Integer(static_cast<unsigned long>(admitted))) *
              prime_power(p, -static_cast<long>(n) * set.m);
  return out;
}

RealVolume real_place_volume(const PlaceForm& f, const RealRadius& rho, const RealInterval& I, Real T_inf,
                             Region region, const McOptions& mc) {
  if (!f.place().is_infinite()) throw std::invalid_argument("real_place_volume needs the real-place form");
  if (mc.samples < 10'000) throw ConfigurationError("mc_samples must be at least 10000");
  if (!(T_inf >= 0)) throw ConfigurationError("T_inf must be nonnegative");
  const int n = f.rank();
  const Real R = T_inf * rho.max();
  if (R == 0) return {};
  const auto poly = real_poly(f.real_gram());
  const Real Rc2 = rho.is_constant() ? (T_inf * rho.constant_value()) * (T_inf * rho.constant_value()) : 0;

  auto hits = kernels::run_indexed<std::uint64_t>(kernels::kStrata, mc.execution,
                                                  [&](std::int64_t k, std::uint64_t& out) {
    std::mt19937_64 rng(kernels::stratum_seed(mc.seed, static_cast<std::uint64_t>(k)));
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<Real> x(static_cast<std::size_t>(n));
    const std::uint64_t count = kernels::stratum_samples(mc.samples, static_cast<int>(k));
    for (std::uint64_t i = 0; i < count; ++i) {
      Real ss = 0;
      for (auto& xi : x) {
        xi = R * static_cast<Real>(uni(rng));
        ss += xi * xi;
      }
      Real lim2 = Rc2;
      if (!rho.is_constant()) {
        if (ss == 0) continue;
        std::vector<Real> u(x);
        const Real len = std::sqrt(ss);
        for (auto& ui : u) ui /= len;
        const Real r = T_inf * rho.at(u);
        lim2 = r * r;
      }
      if (ss > lim2) continue;
      if (region == Region::Shell && 4 * ss <= lim2) continue;
      if (I.contains(eval_poly<Real>(poly, x, n))) ++out;
    }
  });
  std::uint64_t total = 0;
  for (auto h : hits) total += h;
  const Real box = std::pow(2 * R, static_cast<Real>(n));
  const Real N = static_cast<Real>(mc.samples);
  const Real phat = static_cast<Real>(total) / N;
  return {box * phat, box * std::sqrt(phat * (1 - phat) / N)};
}

SlabIndicator SlabIndicator::box(std::vector<Real> half_widths) {
  SlabIndicator f;
  f.kind = Kind::Box;
  f.half_widths = std::move(half_widths);
  return f;
}

SlabIndicator SlabIndicator::ball(Real radius) {
  SlabIndicator f;
  f.kind = Kind::Ball;
  f.radius = radius;
  return f;
}

SlabIndicator SlabIndicator::zero() {
  SlabIndicator f;
  f.kind = Kind::Zero;
  return f;
}

bool SlabIndicator::contains(std::span<const Real> x) const {
  switch (kind) {
    case Kind::Zero:
      return false;
    case Kind::Ball: {
      Real ss = 0;
      for (Real xi : x) ss += xi * xi;
      return ss <= radius * radius;
    }
    case Kind::Box:
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (std::fabs(x[i]) > half_widths[i]) return false;
      }
      return true;
  }
  return false;
}

Real jf_real(int n, Real a1, Real a2, const SlabIndicator& f, Real r, Real zeta, const JfOptions& opts) {
  if (n != 3 && n != 4) throw ConfigurationError("rank must be 3 or 4");
  if (!(r > 0)) throw std::invalid_argument("jf_real needs r > 0");
  if (f.kind == SlabIndicator::Kind::Zero) return 0;
  if (f.kind == SlabIndicator::Kind::Box && static_cast<int>(f.half_widths.size()) != n) {
    throw std::invalid_argument("box indicator needs n half widths");
  }
  const int dims = n - 2;
  std::vector<Real> h(static_cast<std::size_t>(dims));
  for (int k = 0; k < dims; ++k) {
    h[k] = f.kind == SlabIndicator::Kind::Ball ? f.radius : f.half_widths[k + 1];
    if (!std::isfinite(h[k])) throw std::invalid_argument("integration range for x_2..x_{n-1} must be finite");
  }
  std::vector<Real> x(static_cast<std::size_t>(n));
  x[0] = r;
  auto level_sum = [&](int level) {
    const long cells = 1L << level;
    Real total = 0;
    if (dims == 1) {
      const Real dx = 2 * h[0] / cells;
      for (long i = 0; i < cells; ++i) {
        x[1] = -h[0] + (i + 0.5L) * dx;
        x[2] = (zeta - a1 * x[1] * x[1]) / (2 * r);
        if (f.contains(x)) total += dx;
      }
    } else {
      const Real dx = 2 * h[0] / cells;
      const Real dy = 2 * h[1] / cells;
      for (long i = 0; i < cells; ++i) {
        x[1] = -h[0] + (i + 0.5L) * dx;
        for (long j = 0; j < cells; ++j) {
          x[2] = -h[1] + (j + 0.5L) * dy;
          x[3] = (zeta - a1 * x[1] * x[1] - a2 * x[2] * x[2]) / (2 * r);
          if (f.contains(x)) total += dx * dy;
        }
      }
    }
    return total;
  };
  const int max_level = dims == 2 ? std::min(opts.max_level, 11) : opts.max_level;
  Real prev = level_sum(opts.min_level);
  for (int level = opts.min_level + 1; level <= max_level; ++level) {
    const Real cur = level_sum(level);
    if (std::fabs(cur - prev) <= opts.tol * std::max<Real>(1, std::fabs(cur))) {
      prev = cur;
      break;
    }
    prev = cur;
  }
  return prev / std::pow(r, static_cast<Real>(dims));
}

Real volume_via_jf(int n, Real a1, Real a2, const SlabIndicator& f, const RealInterval& I, Real r_max, int grid,
                   const JfOptions& opts) {
  if (grid < 1) throw std::invalid_argument("grid must be positive");
  const Real dz = I.length() / grid;
  const Real dr = r_max / grid;
  Real total = 0;
  for (int i = 0; i < grid; ++i) {
    const Real zeta = I.lo() + (i + 0.5L) * dz;
    for (int j = 0; j < grid; ++j) {
      const Real r = (j + 0.5L) * dr;
      total += std::pow(r, static_cast<Real>(n - 3)) * jf_real(n, a1, a2, f, r, zeta, opts) * dz * dr;
    }
  }
  return total;
}

VolumeResult total_volume(const SQuadraticForm& q, const StarBody& omega, const SInterval& I, const Radii& T,
                          Region region, const McOptions& mc) {
  const SSet& s = q.s();
  I.validate(s);
  T.validate(s);
  omega.validate(s, q.rank());
  VolumeResult out;
  const RealVolume rv = real_place_volume(q.real(), omega.inf, I.real, T.T_inf, region, mc);
  out.real = rv.value;
  out.real_error = rv.std_error;
  Rational finite = 1;
  for (std::size_t i = 0; i < s.finite_count(); ++i) {
    std::optional<long> t;
    if (T.t[i]) t = *T.t[i];
    out.finite.push_back(finite_place_volume(q.finite()[i], omega.finite_exp[i], I.finite[i], t, region));
    finite *= out.finite.back().value;
  }
  out.total = out.real * to_real(finite);
  out.total_error = out.real_error * to_real(finite);
  return out;
}

Real lambda_of(const VolumeResult& v, const SInterval& I, const Radii& T, const SSet& s, int n) {
  const Real absT = T.abs_T(s);
  const Real denom = s_interval_measure(I) * std::pow(absT, static_cast<Real>(n - 2));
  if (denom == 0) return std::numeric_limits<Real>::quiet_NaN();
  return v.total / denom;
}

void validate_schedule(const std::vector<Radii>& schedule, const SSet& s) {
  for (const auto& T : schedule) T.validate(s);
  for (std::size_t k = 1; k < schedule.size(); ++k) {
    const auto& a = schedule[k - 1];
    const auto& b = schedule[k];
    bool ok = b.T_inf >= a.T_inf && b.abs_T(s) > a.abs_T(s);
    for (std::size_t i = 0; i < a.t.size(); ++i) {
      const long ta = a.t[i] ? *a.t[i] : -1;
      const long tb = b.t[i] ? *b.t[i] : -1;
      if (tb < ta) ok = false;
    }
    if (!ok) {
      throw ConfigurationError("T schedule must be nondecreasing in every coordinate with |T| increasing (row " +
                               std::to_string(k + 1) + ")");
    }
  }
}

LambdaEstimate lambda_estimate(const SQuadraticForm& q, const StarBody& omega, const SInterval& I,
                               const std::vector<Radii>& schedule, Region region, const McOptions& mc) {
  if (schedule.size() < 3) throw ConfigurationError("lambda estimation needs at least 3 radii");
  validate_schedule(schedule, q.s());
  LambdaEstimate out;
  for (const auto& T : schedule) {
    out.per_T.push_back(lambda_of(total_volume(q, omega, I, T, region, mc), I, T, q.s(), q.rank()));
  }
  out.lambda_hat = out.per_T.back();
  return out;
}

ExperimentReport ratio_experiment(const SQuadraticForm& q, const StarBody& omega, const SInterval& I,
                                  const std::vector<Radii>& schedule, const McOptions& mc,
                                  const CountOptions& opts) {
  validate_schedule(schedule, q.s());
  ExperimentReport report;
  for (const auto& T : schedule) {
    ExperimentRow row;
    row.T = T;
    row.abs_T = T.abs_T(q.s());
    row.count = count_N(q, omega, I, T, opts);
    row.volume = total_volume(q, omega, I, T, opts.region, mc);
    row.ratio = row.volume.total == 0 ? std::numeric_limits<Real>::quiet_NaN()
                                      : static_cast<Real>(row.count.count) / row.volume.total;
    row.lambda_hat = lambda_of(row.volume, I, T, q.s(), q.rank());
    report.rows.push_back(std::move(row));
  }
  report.notes.push_back("rationality: " + rationality_witness(q).describe());
  if (q.rank() == 4) report.notes.push_back("rank 4: split forms are not detected");
  if (std::any_of(schedule.begin(), schedule.end(), [](const Radii& T) { return T.has_zero_ball(); })) {
    report.notes.push_back("T_p = 0 used: the finite ball is {0}");
  }
  report.notes.push_back("region: " + to_string(opts.region) + " (counts and volumes)");
  report.notes.push_back(std::string("include_origin: ") + (opts.include_origin ? "true" : "false"));
  return report;
}

std::string format_real(Real x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12Lg", x);
  return buf;
}

std::string format_t(const std::optional<int>& t) { return t ? std::to_string(*t) : "-inf"; }

std::string report_csv(const ExperimentReport& report, const SSet& s, const std::string& config_hash) {
  std::ostringstream os;
  os << "# config_hash=" << config_hash << '\n';
  for (const auto& note : report.notes) os << "# " << note << '\n';
  os << "Tinf";
  for (auto p : s.primes()) os << ",t_" << p;
  os << ",absT,N,V,V_err,ratio,lambda_hat\n";
  for (const auto& row : report.rows) {
    os << format_real(row.T.T_inf);
    for (const auto& t : row.T.t) os << ',' << format_t(t);
    os << ',' << format_real(row.abs_T) << ',' << row.count.count << ',' << format_real(row.volume.total) << ','
       << format_real(row.volume.total_error) << ',' << format_real(row.ratio) << ','
       << format_real(row.lambda_hat) << '\n';
  }
  return os.str();
}

}  // namespace oppenheim
