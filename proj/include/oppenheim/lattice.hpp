#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oppenheim/arith.hpp"
#include "oppenheim/enumerate.hpp"
#include "oppenheim/matrix.hpp"

namespace oppenheim {

// Delta = { c * basis : c in Z_S^n } with the rows of `basis` as generators,
// embedded diagonally in every place of S.
struct SLattice {
  SSet s;
  SquareMatrix<Rational> basis;

  static SLattice standard(int n, const SSet& s);
  int dim() const { return basis.size(); }
  void validate() const;
  std::vector<Rational> point(std::span<const Rational> c) const;
};

SquareMatrix<Rational> inverse(const SquareMatrix<Rational>& m);

// prod over places of ||v_1 ^ ... ^ v_j||_p (Euclidean at infinity, sup-norm
// of the j x j minors at finite places).
Real wedge_covolume(const std::vector<std::vector<Rational>>& vectors, const SSet& s);

struct AlphaResult {
  Real alpha = 0;
  Real covolume = 0;
  // Integer coefficient vectors c_i with witness vectors c_i * basis.
  std::vector<std::vector<long>> witness_coeffs;
  std::vector<std::vector<Rational>> witness;
  int dimension = 0;
  std::uint64_t subspaces = 0;
};

// Certified lower bound for alpha_S: the largest 1/d(L) over subspaces
// spanned by up to n-1 lattice vectors with coefficients |c_i| <= height, and
// the full space. Ties keep the earlier witness (smaller dimension, then
// candidate order: smaller l1 norm, then lexicographically larger).
AlphaResult alpha_lower(const SLattice& lattice, int height, Execution exec = Execution::Parallel);

// f = height * indicator{ ||v||_inf <= radius, ||v||_p <= p^{finite_exp_p} }.
struct SupportSpec {
  Real radius = 1;
  std::vector<long> finite_exp;
  Real height = 1;
};

struct SiegelResult {
  Real value = 0;
  std::uint64_t points = 0;
};

// Sum of f over every point of Delta, the origin included.
SiegelResult siegel_transform(const SupportSpec& f, const SLattice& lattice,
                              std::uint64_t safety_cap = kDefaultSafetyCap, Execution exec = Execution::Parallel);

// 2^{n-1} (2R + 1)^n: with alpha >= 1 / (lambda_1 ... lambda_j) this bounds
// the number of points of a unimodular lattice in the ball of radius R divided
// by alpha.
Real siegel_count_bound(const SupportSpec& f, int n);

// Unit-determinant rational lattice: a diagonal (q, 1/q, 1, ...) followed by
// random rational shears. Deterministic in the seed.
SLattice random_lattice(std::uint64_t seed, int n, const SSet& s);

std::string format_vector(std::span<const Rational> v);

}  // namespace oppenheim
