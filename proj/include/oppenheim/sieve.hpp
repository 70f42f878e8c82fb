#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "oppenheim/arith.hpp"
#include "oppenheim/enumerate.hpp"
#include "oppenheim/forms.hpp"

namespace oppenheim {

// Residues w mod p^m (vectors) for which p^{-2 scale} q(w) lies in a + p^b Z_p,
// where v = p^{-scale} u w with u a p-adic unit.
struct ResidueSet {
  std::uint32_t p = 3;
  int n = 0;
  int m = 0;                  // modulus exponent, M = p^m
  std::int64_t modulus = 1;   // p^m
  std::vector<bool> admissible;  // index sum_i (w_i mod M) M^i
  std::uint64_t admitted = 0;
  // True when the stabilization check at p^{m+1} (or p^{k+1}) succeeded.
  bool certified = false;

  std::size_t index(std::span<const std::int64_t> w) const;
  bool contains(std::span<const std::int64_t> w) const { return admissible[index(w)]; }
  std::uint64_t size() const { return admissible.size(); }
};

// Largest residue table a plan may build (entries), including the check level.
inline constexpr std::uint64_t kMaxResidueTable = 1ULL << 24;

// The interval condition at one finite place, for v = s * w with s rational.
// Returns nullopt when the table would exceed kMaxResidueTable.
std::optional<ResidueSet> residue_plan(const RationalMatrix& gram, std::uint32_t p, const Rational& s,
                                       const PAdicInterval& interval);

// Lifts a residue set to modulus p^{m'} with m' >= m.
ResidueSet lift(const ResidueSet& r, int m);

struct SievePlan {
  // One entry per finite place; nullopt disables sieving there.
  std::vector<std::optional<ResidueSet>> places;

  bool admits(std::span<const std::int64_t> w) const;
};

// Sieve for points v = (step/denom) w.
SievePlan sieve_plan(const SQuadraticForm& q, const SInterval& I, std::int64_t step, std::int64_t denom);
// Sieve for the box that enumerates Z_S^n within T * Omega.
SievePlan sieve_plan(const SQuadraticForm& q, const SInterval& I, const Radii& T, const StarBody& omega);

}  // namespace oppenheim
