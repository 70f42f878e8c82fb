#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oppenheim/arith.hpp"

namespace oppenheim {

// An element of Z_S^n written as w / denom with denom a product of powers of
// the finite primes of S.
struct SVector {
  std::vector<std::int64_t> w;
  std::int64_t denom = 1;

  // Cancels every prime power shared by denom and all coordinates of w.
  static SVector canonical(std::vector<std::int64_t> w, std::int64_t denom, const SSet& s);

  int dim() const { return static_cast<int>(w.size()); }
  bool is_zero() const;
  std::vector<Rational> value() const;

  friend bool operator==(const SVector&, const SVector&) = default;
  friend auto operator<=>(const SVector&, const SVector&) = default;
};

}  // namespace oppenheim
