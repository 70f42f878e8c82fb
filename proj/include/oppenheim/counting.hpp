#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oppenheim/arith.hpp"
#include "oppenheim/enumerate.hpp"
#include "oppenheim/forms.hpp"
#include "oppenheim/sieve.hpp"

namespace oppenheim {

struct CountOptions {
  Region region = Region::Body;
  bool include_origin = true;
  bool use_sieve = true;
  bool keep_vectors = false;
  std::uint64_t safety_cap = kDefaultSafetyCap;
  Execution execution = Execution::Parallel;
};

struct CountResult {
  Radii T;
  std::uint64_t count = 0;
  // Points of T*Omega examined, and those that passed the congruence sieve.
  std::uint64_t candidates = 0;
  std::uint64_t sieve_admitted = 0;
  bool sieve_certified = true;
  double wall_seconds = 0;
  std::vector<SVector> vectors;
};

CountResult count_N(const SQuadraticForm& q, const StarBody& omega, const SInterval& I, const Radii& T,
                    const CountOptions& opts = {});
// Same, for an explicit dilation (finite exponents may be negative).
CountResult count_N(const SQuadraticForm& q, const RealRadius& rho, const Dilation& d, const SInterval& I,
                    const CountOptions& opts = {});

struct FiniteVolume {
  Rational value;
  int modulus_exp = 0;
  bool certified = false;
};

// Haar measure of {v : ||v||_p <= p^{t_p + rho_exp} (= for shells), q_p(v) in I}.
// A disengaged t_p is the zero ball (measure 0).
FiniteVolume finite_place_volume(const PlaceForm& f, long rho_exp, const PAdicInterval& I, std::optional<long> t_p,
                                 Region region = Region::Body);

struct McOptions {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 1;
  Execution execution = Execution::Parallel;
};

struct RealVolume {
  Real value = 0;
  Real std_error = 0;
};

RealVolume real_place_volume(const PlaceForm& f, const RealRadius& rho, const RealInterval& I, Real T_inf,
                             Region region, const McOptions& mc);

// Indicator f_inf for the reduced-dimension integral: a box |x_i| <= h_i
// (infinite widths allowed) or a Euclidean ball.
struct SlabIndicator {
  enum class Kind { Box, Ball, Zero } kind = Kind::Box;
  std::vector<Real> half_widths;
  Real radius = 0;

  static SlabIndicator box(std::vector<Real> half_widths);
  static SlabIndicator ball(Real radius);
  static SlabIndicator zero();
  bool contains(std::span<const Real> x) const;
};

struct JfOptions {
  Real tol = 1e-7L;
  int min_level = 3;
  int max_level = 14;
};

// J(r, zeta) = r^{-(n-2)} * integral of f(r, x_2, ..., x_{n-1}, x_n) over
// x_2..x_{n-1}, with x_n solved from q0(x) = zeta for the standard form
// 2 x_1 x_n + a1 x_2^2 (+ a2 x_3^2). Midpoint rule, doubling until two
// successive levels agree within tol.
Real jf_real(int n, Real a1, Real a2, const SlabIndicator& f, Real r, Real zeta, const JfOptions& opts = {});

// vol{x : f(x) = 1, q0(x) in I} through the (zeta, x_1) fibration, for
// symmetric f: integral over I of integral over r > 0 of r^{n-3} J(r, zeta).
Real volume_via_jf(int n, Real a1, Real a2, const SlabIndicator& f, const RealInterval& I, Real r_max,
                   int grid, const JfOptions& opts = {});

struct VolumeResult {
  Real real = 0;
  Real real_error = 0;
  std::vector<FiniteVolume> finite;
  Real total = 0;
  Real total_error = 0;
};

VolumeResult total_volume(const SQuadraticForm& q, const StarBody& omega, const SInterval& I, const Radii& T,
                          Region region, const McOptions& mc);

// V / (mu(I_S) |T|^{n-2})
Real lambda_of(const VolumeResult& v, const SInterval& I, const Radii& T, const SSet& s, int n);

struct LambdaEstimate {
  Real lambda_hat = 0;
  std::vector<Real> per_T;
};

// A schedule must have every coordinate nondecreasing and |T| increasing.
void validate_schedule(const std::vector<Radii>& schedule, const SSet& s);

LambdaEstimate lambda_estimate(const SQuadraticForm& q, const StarBody& omega, const SInterval& I,
                               const std::vector<Radii>& schedule, Region region, const McOptions& mc);

struct ExperimentRow {
  Radii T;
  Real abs_T = 0;
  CountResult count;
  VolumeResult volume;
  Real ratio = 0;  // NaN when V = 0
  Real lambda_hat = 0;
};

struct ExperimentReport {
  std::vector<ExperimentRow> rows;
  std::vector<std::string> notes;
};

ExperimentReport ratio_experiment(const SQuadraticForm& q, const StarBody& omega, const SInterval& I,
                                  const std::vector<Radii>& schedule, const McOptions& mc,
                                  const CountOptions& opts);

// Header Tinf,t_<p>...,absT,N,V,V_err,ratio,lambda_hat; 12 significant digits.
std::string report_csv(const ExperimentReport& report, const SSet& s, const std::string& config_hash);

std::string format_real(Real x);
std::string format_t(const std::optional<int>& t);

}  // namespace oppenheim
