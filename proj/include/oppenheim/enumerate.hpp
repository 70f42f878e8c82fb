#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "oppenheim/arith.hpp"
#include "oppenheim/svector.hpp"

namespace oppenheim {

enum class Execution { Serial, Parallel };

// Radius table on the unit sphere of R^n, n >= 2, over hyperspherical angles
// phi_1..phi_{n-2} in [0, pi] and phi_{n-1} in [0, 2 pi) (periodic). Values
// are interpolated multilinearly between grid nodes.
class SphereTable {
 public:
  // dims[k] nodes along angle k; values row-major with the last angle fastest.
  SphereTable(int n, std::vector<int> dims, std::vector<Real> values);
  // Text: first line "n d_1 ... d_{n-1}", then the values (any whitespace).
  static SphereTable parse(const std::string& text);

  int dim() const { return n_; }
  Real at(std::span<const Real> unit) const;
  Real max() const { return max_; }

 private:
  int n_;
  std::vector<int> dims_;
  std::vector<Real> values_;
  Real max_ = 0;
};

// rho_inf: a constant or a sphere table.
class RealRadius {
 public:
  static RealRadius constant(Real c);
  static RealRadius table(SphereTable t);

  bool is_constant() const { return !table_; }
  Real constant_value() const { return c_; }
  Real at(std::span<const Real> unit) const;
  Real max() const;
  const std::optional<SphereTable>& sphere_table() const { return table_; }

 private:
  Real c_ = 1;
  std::optional<SphereTable> table_;
};

// rho_inf at infinity; rho_p = p^{k_p} at the finite places (constant radius).
struct StarBody {
  RealRadius inf = RealRadius::constant(1);
  std::vector<long> finite_exp;

  static StarBody unit(const SSet& s);
  void validate(const SSet& s, int n) const;
};

enum class Region { Body, Shell };
std::string to_string(Region r);

// Per-place dilation of the star body: real radius T_inf and finite ball
// exponents e_p (the ball ||v||_p <= p^{e_p}). e_p may be negative; a
// disengaged e_p is the zero ball.
struct Dilation {
  Real T_inf = 1;
  std::vector<std::optional<long>> e;

  static Dilation of(const StarBody& omega, const Radii& T);
};

// D = prod p^{t_p} over the finite places (T_p = 0 contributes nothing).
std::int64_t denominator_of(const SSet& s, const Radii& T);

bool omega_membership(const SVector& v, const StarBody& omega, const Radii& T, Region region, const SSet& s);
bool omega_membership(const SVector& v, const RealRadius& rho, const Dilation& d, Region region, const SSet& s);

class SafetyCapExceeded : public std::runtime_error {
 public:
  SafetyCapExceeded(long double box_points, long double cap);
  long double box_points() const { return box_points_; }

 private:
  long double box_points_;
};

inline constexpr std::uint64_t kDefaultSafetyCap = 2'000'000'000ULL;

// The integer box behind one enumeration: v = (step / denom) * w with w in Z^n,
// |w_i| <= bound.
struct Box {
  int n = 0;
  std::int64_t denom = 1;
  std::int64_t step = 1;
  std::int64_t bound = 0;
  bool zero_only = false;
  // ||v||_inf-ball test in w coordinates: sum w_i^2 <= body_limit, and for
  // shells additionally sum w_i^2 > shell_floor. Exact for constant rho.
  std::int64_t body_limit = 0;
  std::int64_t shell_floor = 0;
  // (step/denom) * rho(u) * T_inf scale, used by sphere tables.
  Rational scale;

  long double points() const;
};

Box make_box(int n, const SSet& s, const RealRadius& rho, const Dilation& d, Region region);

// Exact point test at infinity and at the finite places for w in a box.
class RegionTest {
 public:
  RegionTest(const Box& box, const RealRadius& rho, const Dilation& d, Region region, const SSet& s);
  bool operator()(std::span<const std::int64_t> w, std::int64_t sum_sq) const;

 private:
  const Box* box_;
  const RealRadius* rho_;
  Real T_inf_;
  Region region_;
  std::vector<std::int64_t> shell_primes_;
};

struct EnumerationOptions {
  Region region = Region::Body;
  bool include_origin = true;
  std::uint64_t safety_cap = kDefaultSafetyCap;
  Execution execution = Execution::Parallel;
};

// Every v in Z_S^n with v in T*Omega (per region), once each, in
// lexicographic order of the box coordinates.
std::vector<SVector> enumerate_ZS(int n, const SSet& s, const Radii& T, const StarBody& omega,
                                  const EnumerationOptions& opts = {});
std::vector<SVector> enumerate_ZS(int n, const SSet& s, const RealRadius& rho, const Dilation& d,
                                  const EnumerationOptions& opts = {});

}  // namespace oppenheim
