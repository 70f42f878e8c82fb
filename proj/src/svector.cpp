#include "oppenheim/svector.hpp"

#include <algorithm>
#include <stdexcept>

namespace oppenheim {

SVector SVector::canonical(std::vector<std::int64_t> w, std::int64_t denom, const SSet& s) {
  if (denom <= 0) throw std::invalid_argument("SVector denominator must be positive");
  for (auto p64 : s.primes()) {
    const auto p = static_cast<std::int64_t>(p64);
    while (denom % p == 0 && std::all_of(w.begin(), w.end(), [p](std::int64_t x) { return x % p == 0; })) {
      denom /= p;
      for (auto& x : w) x /= p;
    }
  }
  return SVector{std::move(w), denom};
}

bool SVector::is_zero() const {
  return std::all_of(w.begin(), w.end(), [](std::int64_t x) { return x == 0; });
}

std::vector<Rational> SVector::value() const {
  std::vector<Rational> out;
  out.reserve(w.size());
  for (auto x : w) out.push_back(make_rational(Integer(static_cast<long>(x)), Integer(static_cast<long>(denom))));
  return out;
}

}  // namespace oppenheim
