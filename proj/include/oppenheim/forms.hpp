#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "oppenheim/arith.hpp"
#include "oppenheim/matrix.hpp"
#include "oppenheim/svector.hpp"

namespace oppenheim {

using RealMatrix = SquareMatrix<Real>;
using RationalMatrix = SquareMatrix<Rational>;

// q(v) = v^T gram v at one place. Real gram at infinity, exact rational gram at p.
class PlaceForm {
 public:
  static PlaceForm real(RealMatrix gram);
  static PlaceForm padic(std::uint32_t p, RationalMatrix gram);

  Place place() const { return place_; }
  int rank() const { return rank_; }
  const RealMatrix& real_gram() const;
  const RationalMatrix& exact_gram() const;

  Real evaluate_real(std::span<const Real> v) const;
  Rational evaluate_exact(std::span<const Rational> v) const;

 private:
  PlaceForm(Place place, int rank) : place_(place), rank_(rank) {}

  Place place_;
  int rank_;
  RealMatrix real_;
  RationalMatrix exact_;
};

PlaceScalar evaluate_place(const PlaceForm& f, std::span<const Rational> v);

class SQuadraticForm {
 public:
  SQuadraticForm(SSet s, PlaceForm real, std::vector<PlaceForm> finite);

  const SSet& s() const { return s_; }
  int rank() const { return real_.rank(); }
  const PlaceForm& real() const { return real_; }
  const std::vector<PlaceForm>& finite() const { return finite_; }
  const PlaceForm& at_prime(std::uint32_t p) const { return finite_[s_.index_of(p)]; }

 private:
  SSet s_;
  PlaceForm real_;
  std::vector<PlaceForm> finite_;
};

// One value per place, infinity first.
std::vector<PlaceScalar> evaluate_S(const SQuadraticForm& q, const SVector& v, const SSet& s);

struct STransform {
  RealMatrix real;
  std::vector<RationalMatrix> finite;

  static STransform identity(int n, const SSet& s);
  friend STransform operator*(const STransform& g, const STransform& h);
};

// The form v -> q(g v); gram_p becomes g_p^T gram_p g_p.
SQuadraticForm apply_transform(const SQuadraticForm& q, const STransform& g);

// Diagonal coefficients (a1[, a2]) of a standard form at one place.
struct StandardCoefficients {
  Rational a1 = 1;
  Rational a2 = 1;
};

struct StandardFormSpec {
  StandardCoefficients real;
  // Keyed by prime; primes of S not listed use a1 = a2 = 1.
  std::map<std::uint32_t, StandardCoefficients> finite;
  // u0 per prime; default is the smallest quadratic nonresidue mod p.
  std::map<std::uint32_t, Rational> u0;
};

std::uint32_t smallest_nonresidue(std::uint32_t p);
// The admissible coefficient menu {+-1, +-u0, +-p, +-p u0} at a finite place.
std::vector<Rational> coefficient_menu(std::uint32_t p, const Rational& u0);

// rank 3: 2 x1 x3 + a1 x2^2;  rank 4: 2 x1 x4 + a1 x2^2 + a2 x3^2.
SQuadraticForm standard_form(int n, const SSet& s, const StandardFormSpec& spec = {});

struct GenericFormSample {
  SQuadraticForm form;
  STransform transform;
};

// Standard form moved by a product of `steps` random elementary shears.
// Deterministic in the seed.
GenericFormSample random_generic_form(std::uint64_t seed, int n, const SSet& s, int steps,
                                      const StandardFormSpec& base = {});

struct RationalityVerdict {
  bool rational = false;
  // When rational: gram_p = lambda_p * common, with common normalized to have
  // a 1 at the pivot entry.
  RationalMatrix common;
  Real lambda_inf = 0;
  std::vector<Rational> lambda_finite;
  // When irrational: the place and the two upper-triangular entries whose
  // ratio fails the test.
  std::string evidence_place;
  std::pair<int, int> pivot{-1, -1};
  std::pair<int, int> witness{-1, -1};
  Real tolerance = 0;

  std::string describe() const;
};

RationalityVerdict rationality_witness(const SQuadraticForm& q, Real tol = 1e-12L);

// One line per place: "inf: g11 g12 ... gnn" (upper triangle, row-major, exact rationals).
std::string serialize(const SQuadraticForm& q);
SQuadraticForm parse_form(const std::string& text, const SSet& s);

}  // namespace oppenheim
