#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "oppenheim/arith.hpp"

namespace oppenheim {

// Upper half-plane (H2, z real) or upper half-space (H3, z complex) point z + t j.
struct HypPoint {
  enum class Model { H2, H3 } model = Model::H2;
  std::complex<Real> z;
  Real t = 1;

  static HypPoint h2(Real x, Real t);
  static HypPoint h3(std::complex<Real> z, Real t);
};

// cosh d = 1 + |x - y|^2 / (2 t_x t_y), evaluated as
// d = 2 asinh(|x - y| / (2 sqrt(t_x t_y))) for accuracy near 0.
Real hyp_distance(const HypPoint& x, const HypPoint& y);

// Displacement of i under a_t k_theta a_t^{-1}:
// cosh d = 1 + 2 sinh^2(2t) sin^2(theta/2).
Real conj_displacement(Real t, Real theta);

// The same displacement computed from matrices acting on the upper half-plane
// by Moebius transformations, with a_t = diag(e^t, e^-t) and k_theta the
// rotation by theta/2. Independent of the closed form above.
Real conj_displacement_matrix(Real t, Real theta);

// Normalized measure of {theta : conj_displacement(t, theta) <= r}, 0 < r < 2t.
Real corner_measure_real(Real t, Real r);
// Same set, any r >= 0 (0 at r = 0, 1 once r >= 4t).
Real displacement_measure(Real t, Real r);

// Vertices at distance m from a vertex of the (p+1)-regular tree.
Integer tree_sphere_size(std::uint32_t p, long m);
// 1 / tree_sphere_size(2t - floor(r/2)), or 1 when r >= 4t.
Rational tree_conj_measure(std::uint32_t p, long t, long r);
// (p/(p+1)) p^{-(2t-r)}
Rational tree_conj_bound(std::uint32_t p, long t, long r);

struct CombinedBound {
  Real lhs = 0;
  Real rhs = 0;
  bool holds() const { return lhs <= rhs; }
};

// LHS: sum over k in Z_{>=0}^{|S_f|}, sum k <= r, of
//   displacement_measure(t_inf, r - sum k) * prod_i tree_conj_measure(p_i, t_i, k_i).
// RHS: C_inf prod p/(p+1) r^{|S_f|} exp(r - t_inf - sum t_i).
CombinedBound combined_measure_bound(Real t_inf, const std::vector<std::uint32_t>& primes,
                                     const std::vector<long>& t, long r, Real C_inf);

// corner_measure_real(1, 0.5) / e^{-2 + 0.5}
Real calibrated_corner_constant();

struct LemmaRow {
  std::string lemma;
  std::string params;
  Real lhs = 0;
  Real rhs = 0;
  bool pass = false;
};

// The default validation grid over every lemma; deterministic.
std::vector<LemmaRow> lemma_grid(std::uint64_t seed = 1);
std::string lemma_csv(const std::vector<LemmaRow>& rows);

}  // namespace oppenheim
