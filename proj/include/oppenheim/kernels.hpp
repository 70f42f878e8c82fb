#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "oppenheim/enumerate.hpp"

namespace oppenheim::kernels {

inline std::int64_t isqrt(std::int64_t x) {
  if (x < 0) return -1;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(x)));
  while (r > 0 && r * r > x) --r;
  while ((r + 1) * (r + 1) <= x) ++r;
  return r;
}

namespace detail {

template <class Visit>
void ball_rec(std::vector<std::int64_t>& w, std::size_t k, std::int64_t partial, std::int64_t limit,
              std::int64_t bound, Visit& visit) {
  if (k == w.size()) {
    visit(std::span<const std::int64_t>(w), partial);
    return;
  }
  const std::int64_t h = std::min(bound, isqrt(limit - partial));
  for (std::int64_t x = -h; x <= h; ++x) {
    w[k] = x;
    ball_rec(w, k + 1, partial + x * x, limit, bound, visit);
  }
}

}  // namespace detail

// Visits, in lexicographic order, every w in Z^n with w_0 = x1, |w_i| <= bound
// and sum w_i^2 <= limit. visit(w, sum_sq).
template <class Visit>
void visit_ball_slab(int n, std::int64_t x1, std::int64_t limit, std::int64_t bound, Visit&& visit) {
  if (x1 * x1 > limit) return;
  std::vector<std::int64_t> w(static_cast<std::size_t>(n), 0);
  w[0] = x1;
  detail::ball_rec(w, 1, x1 * x1, limit, bound, visit);
}

// fn(i, result) for i in [0, count); results in index order. The parallel
// path only changes who computes an entry, never how entries merge.
template <class R, class Fn>
std::vector<R> run_indexed(std::int64_t count, Execution exec, Fn&& fn) {
  std::vector<R> out(static_cast<std::size_t>(count));
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < count; ++i) fn(i, out[static_cast<std::size_t>(i)]);
  } else {
    for (std::int64_t i = 0; i < count; ++i) fn(i, out[static_cast<std::size_t>(i)]);
  }
  return out;
}

// fn(x1, result) for each slab x1 in [-bound, bound], in slab order.
template <class R, class Fn>
std::vector<R> run_slabs(std::int64_t bound, Execution exec, Fn&& fn) {
  return run_indexed<R>(2 * bound + 1, exec, [&](std::int64_t i, R& out) { fn(i - bound, out); });
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed of substream k derived from a master seed.
inline std::uint64_t stratum_seed(std::uint64_t master, std::uint64_t k) {
  return splitmix64(splitmix64(master) ^ splitmix64(k + 0x632be59bd9b4e019ULL));
}

inline constexpr int kStrata = 256;

// Sample budget of stratum k when `total` samples are split over kStrata.
inline std::uint64_t stratum_samples(std::uint64_t total, int k) {
  return total / kStrata + (static_cast<std::uint64_t>(k) < total % kStrata ? 1 : 0);
}

}  // namespace oppenheim::kernels
